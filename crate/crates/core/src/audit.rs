//! Random tuple sampling and the closed-form versus oracle audit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{check_lemma, half_line_quad_max, reduced_quadratic, system_recipe, ConditionReport, Lemma, SystemRecipe};
use crate::error::{LabError, Result};
use crate::operators::coeff_system;
use crate::oracle::{quartic_negativity, verify_admissibility, OracleGrid, OracleReport};
use crate::params::{validate_params, Parameters, RawParameters};
use crate::seeding::derive_seed;

/// Ranges for random parameter tuples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TupleRanges {
    /// α and λ are drawn from [−scale_max, scale_max].
    pub scale_max: f64,
    pub n_max: u32,
}

impl Default for TupleRanges {
    fn default() -> Self {
        Self { scale_max: 3.0, n_max: 3 }
    }
}

fn ordered_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let u: f64 = rng.random_range(-1.0..=1.0);
        let v: f64 = rng.random_range(-1.0..=1.0);
        if u != v {
            return (u.max(v), u.min(v));
        }
    }
}

/// One random valid tuple for `lemma`.
///
/// Parameters the lemma's operator ignores are pinned to 1. The inverse-square lemma draws
/// E > 0. The quadratic-plus-derivative lemma keeps α free: at α = 1 its blocks never satisfy
/// K ≥ 0 and L < 0 together, and for α ≠ 1 the implication is vacuous since Φ(p)(0) = α.
pub fn sample_tuple(lemma: Lemma, rng: &mut ChaCha8Rng, ranges: &TupleRanges) -> Parameters {
    loop {
        let (a, b) = ordered_pair(rng);
        let (d, e) = ordered_pair(rng);
        let s = ranges.scale_max;
        let mut alpha = rng.random_range(-s..=s);
        let mut lambda = rng.random_range(-s..=s);
        let n = rng.random_range(1..=ranges.n_max.max(1));
        let mu_prime: f64 = 2.0 - rng.random_range(0.0..2.0);
        match lemma {
            Lemma::L21 | Lemma::L23 | Lemma::L26 => lambda = 1.0,
            Lemma::L22 => {
                alpha = 1.0;
                lambda = 1.0;
            }
            Lemma::L24 | Lemma::L25 => {}
        }
        if lemma == Lemma::L22 && e <= 0.0 {
            continue;
        }
        let raw = RawParameters {
            a,
            b,
            d,
            e,
            alpha,
            lambda,
            n,
            mu: mu_prime * (a - b) / 2.0,
        };
        if let Ok(p) = validate_params(raw) {
            return p;
        }
    }
}

/// Rejection-samples `count` tuples whose closed-form verdict is true.
///
/// Draw k uses its own RNG stream, so the result depends only on `seed`.
pub fn sample_verdict_true(lemma: Lemma, count: usize, seed: u64, max_draws: usize, ranges: &TupleRanges) -> Result<Vec<Parameters>> {
    let mut out = Vec::with_capacity(count);
    let chunk = 4096;
    let mut start = 0;
    while out.len() < count {
        if start >= max_draws {
            return Err(LabError::RejectionBudget(max_draws));
        }
        let end = (start + chunk).min(max_draws);
        let found: Vec<Parameters> = (start..end)
            .into_par_iter()
            .filter_map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64));
                let p = sample_tuple(lemma, &mut rng, ranges);
                check_lemma(lemma, &p).verdict.then_some(p)
            })
            .collect();
        out.extend(found.into_iter().take(count - out.len()));
        start = end;
    }
    Ok(out)
}

/// Why a verdict-true tuple fails the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribution {
    /// Oracle passes; nothing to explain.
    Agrees,
    /// The closed-form expression disagrees with the recipe applied to the operator's own coefficients.
    FormulaMismatch,
    /// The recipe holds, but f peaks left of σ = −½, so f(−½) is not the maximum.
    QuadMaxBranch,
    /// Neither explanation applies.
    Untraced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundnessRow {
    pub params: Parameters,
    pub report: ConditionReport,
    pub oracle: OracleReport,
    pub quartic: OracleReport,
    pub recipe: SystemRecipe,
    pub attribution: Attribution,
}

impl SoundnessRow {
    /// Pass/fail agreement of the Re ψ sweep and the normalized-quartic sweep.
    pub fn metrics_agree(&self) -> bool {
        self.oracle.pass == self.quartic.pass
    }
}

/// Runs both oracle sweeps on one tuple and attributes any disagreement with the verdict.
pub fn soundness_row(lemma: Lemma, params: &Parameters, grid: &OracleGrid) -> Result<SoundnessRow> {
    let kind = lemma.operator();
    let report = check_lemma(lemma, params);
    let sys = coeff_system(kind, params);
    let oracle = verify_admissibility(kind, params, grid)?;
    let quartic = quartic_negativity(&sys, params.n(), params.mu_prime(), grid)?;
    let recipe = system_recipe(&sys, params.n(), params.mu_prime());
    let attribution = if !report.verdict || oracle.pass {
        Attribution::Agrees
    } else if !recipe.holds {
        Attribution::FormulaMismatch
    } else {
        let (x, y, z) = reduced_quadratic(&sys.quartic_form(), params.n(), params.mu_prime());
        if half_line_quad_max(x, y, z).agrees_with_formula {
            Attribution::Untraced
        } else {
            Attribution::QuadMaxBranch
        }
    };
    Ok(SoundnessRow {
        params: *params,
        report,
        oracle,
        quartic,
        recipe,
        attribution,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundnessSummary {
    pub lemma: Lemma,
    pub rows: Vec<SoundnessRow>,
}

impl SoundnessSummary {
    pub fn count(&self, a: Attribution) -> usize {
        self.rows.iter().filter(|r| r.attribution == a).count()
    }

    pub fn oracle_passes(&self) -> usize {
        self.rows.iter().filter(|r| r.oracle.pass).count()
    }

    pub fn metrics_agree(&self) -> bool {
        self.rows.iter().all(SoundnessRow::metrics_agree)
    }
}

/// Audits each tuple in order; rows keep the input order.
pub fn soundness_sweep(lemma: Lemma, tuples: &[Parameters], grid: &OracleGrid) -> Result<SoundnessSummary> {
    let rows = tuples.iter().map(|p| soundness_row(lemma, p, grid)).collect::<Result<Vec<_>>>()?;
    Ok(SoundnessSummary { lemma, rows })
}
