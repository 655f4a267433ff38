use std::fmt;
use std::path::PathBuf;

use janowski_core::conditions::Lemma;
use janowski_core::lab::R_CHECK;
use janowski_core::oracle::OracleGrid;
use janowski_core::{validate_params, Parameters, RawParameters};
use serde::{Deserialize, Serialize};

use crate::InputError;

/// Upper bound on the number of points any range or product of ranges may expand to.
pub const MAX_POINTS: usize = 1_000_000;

/// A scalar or an inclusive arithmetic progression `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRange {
    Scalar(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl ValueRange {
    pub fn parse(flag: &str, text: &str) -> Result<Self, InputError> {
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| InputError(format!("--{flag}: '{s}' is not a finite number")))
        };
        let parts: Vec<&str> = text.split(':').collect();
        let range = match parts.as_slice() {
            [v] => ValueRange::Scalar(num(v)?),
            [a, b, c] => ValueRange::Range { start: num(a)?, stop: num(b)?, step: num(c)? },
            _ => return Err(InputError(format!("--{flag}: expected a number or start:stop:step, got '{text}'"))),
        };
        range.values(flag)?;
        Ok(range)
    }

    /// Expanded values; ranges include `stop` when it lies on the progression.
    pub fn values(&self, flag: &str) -> Result<Vec<f64>, InputError> {
        match *self {
            ValueRange::Scalar(v) if v.is_finite() => Ok(vec![v]),
            ValueRange::Scalar(_) => Err(InputError(format!("--{flag}: value must be finite"))),
            ValueRange::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
                    return Err(InputError(format!(
                        "--{flag}: range needs finite start <= stop and step > 0 (got {start}:{stop}:{step})"
                    )));
                }
                let span = (stop - start) / step;
                if span >= MAX_POINTS as f64 {
                    return Err(InputError(format!("--{flag}: range has more than {MAX_POINTS} points")));
                }
                let count = (span + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|k| start + step * k as f64).collect())
            }
        }
    }

    pub fn integers(&self, flag: &str) -> Result<Vec<u32>, InputError> {
        self.values(flag)?
            .into_iter()
            .map(|v| {
                let r = v.round();
                if (v - r).abs() > 1e-9 || r < 1.0 || r > u32::MAX as f64 {
                    Err(InputError(format!("--{flag}: {v} is not a positive integer")))
                } else {
                    Ok(r as u32)
                }
            })
            .collect()
    }
}

impl fmt::Display for ValueRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueRange::Scalar(v) => write!(f, "{v}"),
            ValueRange::Range { start, stop, step } => write!(f, "{start}:{stop}:{step}"),
        }
    }
}

/// Parameter ranges; the run covers their Cartesian product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    #[serde(rename = "A")]
    pub a: ValueRange,
    #[serde(rename = "B")]
    pub b: ValueRange,
    #[serde(rename = "D")]
    pub d: ValueRange,
    #[serde(rename = "E")]
    pub e: ValueRange,
    pub alpha: ValueRange,
    pub lambda: ValueRange,
    pub n: ValueRange,
    pub mu: ValueRange,
}

/// Valid tuples plus the reasons the remaining combinations were rejected.
#[derive(Debug, Default)]
pub struct Expansion {
    pub tuples: Vec<Parameters>,
    pub rejected: Vec<String>,
}

impl ParamGrid {
    pub fn expand(&self) -> Result<Expansion, InputError> {
        let axes = [
            self.a.values("A")?,
            self.b.values("B")?,
            self.d.values("D")?,
            self.e.values("E")?,
            self.alpha.values("alpha")?,
            self.lambda.values("lambda")?,
        ];
        let ns = self.n.integers("n")?;
        let mus = self.mu.values("mu")?;
        let total = axes
            .iter()
            .map(Vec::len)
            .chain([ns.len(), mus.len()])
            .try_fold(1usize, |acc, len| acc.checked_mul(len).filter(|&t| t <= MAX_POINTS));
        if total.is_none() {
            return Err(InputError(format!("parameter ranges expand to more than {MAX_POINTS} tuples")));
        }
        let mut out = Expansion::default();
        for &a in &axes[0] {
            for &b in &axes[1] {
                for &d in &axes[2] {
                    for &e in &axes[3] {
                        for &alpha in &axes[4] {
                            for &lambda in &axes[5] {
                                for &n in &ns {
                                    for &mu in &mus {
                                        let raw = RawParameters { a, b, d, e, alpha, lambda, n, mu };
                                        match validate_params(raw) {
                                            Ok(p) => out.tuples.push(p),
                                            Err(err) => out.rejected.push(format!("{raw:?}: {err}")),
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        if out.tuples.is_empty() {
            let why = out.rejected.first().cloned().unwrap_or_default();
            return Err(InputError(format!("no valid parameter tuple ({why})")));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a run depends on; embedded verbatim in its report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    Check {
        lemmas: Vec<Lemma>,
        params: ParamGrid,
    },
    Oracle {
        lemmas: Vec<Lemma>,
        params: ParamGrid,
        grid: OracleGrid,
    },
    ImplicationSweep {
        lemmas: Vec<Lemma>,
        params: ParamGrid,
        trials: usize,
        seed: u64,
        radius: f64,
    },
    Bounds {
        lambda: ValueRange,
        n: ValueRange,
        mu_prime: ValueRange,
    },
    Membership {
        coeffs_file: PathBuf,
        /// Coefficients as [re, im] pairs, c₀ first.
        coefficients: Vec<[f64; 2]>,
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
        radius: f64,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Check { .. } => "check",
            Job::Oracle { .. } => "oracle",
            Job::ImplicationSweep { .. } => "implication-sweep",
            Job::Bounds { .. } => "bounds",
            Job::Membership { .. } => "membership",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub job: Job,
    pub output_format: Format,
}

pub fn default_radius() -> f64 {
    R_CHECK
}
