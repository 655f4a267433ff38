//! Concrete analytic functions and the empirical implication harness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{LabError, Result};
use crate::geometry::{is_subordinate_numeric, janowski_image, CircleSamples, SubordinationVerdict};
use crate::operators::{apply_operator, OperatorKind};
use crate::params::Parameters;
use crate::seeding::derive_seed;
use crate::series::{self, CircleEvaluator};

/// Default radius for subordination checks on the boundary circle.
pub const R_CHECK: f64 = 1.0 - 1e-3;
/// Default number of equispaced samples on a check circle.
pub const CHECK_SAMPLES: usize = 4096;
/// Containment tolerance for sampled sweeps.
pub const SWEEP_TOL: f64 = 1e-6;
/// Minimum |p| on the check circle accepted by the sampler.
pub const MIN_MODULUS: f64 = 0.05;
/// Redraws allowed before the sampler gives up.
pub const REJECTION_BUDGET: usize = 64;
/// Degree cap for sampled polynomials.
pub const DEGREE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// p ∈ H_{μ,n}: c₀ = 1, c₁..c_{n−1} = 0, c_n = μ.
    PFunction,
    /// f ∈ A_{n,b}: c₀ = 0, c₁ = 1, c_{n+1} = b ≥ 0.
    NormalizedF,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSample {
    pub coefficients: Vec<Complex64>,
    pub degree: usize,
    pub family: Family,
    pub n: u32,
}

impl AnalyticSample {
    /// Validates a p-function with fixed coefficient μ = c_n.
    pub fn p_function(coefficients: Vec<Complex64>, n: u32) -> Result<Self> {
        let bad = |msg: &str| Err(LabError::InvalidSample(msg.to_string()));
        if n == 0 || coefficients.len() <= n as usize {
            return bad("a p-function needs coefficients up to z^n");
        }
        if coefficients[0] != Complex64::new(1.0, 0.0) {
            return bad("p(0) must equal 1");
        }
        if coefficients[1..n as usize].iter().any(|c| c.norm() != 0.0) {
            return bad("coefficients below z^n must vanish");
        }
        let cn = coefficients[n as usize];
        if cn.im != 0.0 || cn.re < 0.0 {
            return bad("the z^n coefficient must be a nonnegative real");
        }
        Ok(Self {
            degree: coefficients.len() - 1,
            coefficients,
            family: Family::PFunction,
            n,
        })
    }

    /// Validates a normalized f; n is read off as the first nonzero index above 1, minus one.
    pub fn normalized_f(coefficients: Vec<Complex64>) -> Result<Self> {
        let bad = |msg: &str| Err(LabError::InvalidSample(msg.to_string()));
        if coefficients.len() < 2 {
            return bad("a normalized function needs at least c_0 and c_1");
        }
        if coefficients[0].norm() > 1e-12 || (coefficients[1] - 1.0).norm() > 1e-12 {
            return bad("a normalized function has c_0 = 0 and c_1 = 1");
        }
        let first = coefficients.iter().skip(2).position(|c| c.norm() != 0.0);
        let n = first.map_or(1, |k| k as u32 + 1);
        if let Some(b) = coefficients.get(n as usize + 1) {
            if b.im.abs() > 1e-12 || b.re < -1e-12 {
                return bad("the fixed coefficient b = c_{n+1} must be a nonnegative real");
            }
        }
        Ok(Self {
            degree: coefficients.len() - 1,
            coefficients,
            family: Family::NormalizedF,
            n,
        })
    }

    /// The fixed coefficient: μ = c_n for p, b = c_{n+1} for f.
    pub fn fixed_coefficient(&self) -> f64 {
        let idx = match self.family {
            Family::PFunction => self.n as usize,
            Family::NormalizedF => self.n as usize + 1,
        };
        self.coefficients.get(idx).map_or(0.0, |c| c.re)
    }
}

/// Sampler knobs; [`sample_p`] uses the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerOptions {
    /// Reject draws with min |p| below this on the check circle; `None` disables rejection.
    pub min_modulus: Option<f64>,
    pub check_radius: f64,
    pub check_samples: usize,
    pub max_draws: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self {
            min_modulus: Some(MIN_MODULUS),
            check_radius: R_CHECK,
            check_samples: 1024,
            max_draws: REJECTION_BUDGET,
        }
    }
}

/// Unit-amplitude tail shape for one draw.
///
/// Half the draws continue the Möbius pattern μz^n/(1 + βz^n); every draw adds a
/// geometrically decaying random complex tail.
fn draw_tail(rng: &mut ChaCha8Rng, n: usize, mu: f64, degree: usize) -> Vec<Complex64> {
    let mut tail = vec![Complex64::new(0.0, 0.0); degree + 1];
    let beta: f64 = if rng.random_bool(0.5) { rng.random_range(-1.0..1.0) } else { 0.0 };
    let decay: f64 = rng.random_range(0.2..0.95);
    let mut pow = 1.0;
    let mut k = 2 * n;
    while k <= degree {
        pow *= -beta;
        tail[k] += mu * pow;
        k += n;
    }
    let mut w = 1.0;
    for c in tail.iter_mut().take(degree + 1).skip(n + 1) {
        let r = rng.random::<f64>() * w;
        *c += Complex64::from_polar(r, TAU * rng.random::<f64>());
        w *= decay;
    }
    tail
}

/// Random polynomial in H_{μ,n}: c_n = μ exactly, tail scaled by `amplitude`.
pub fn sample_p_with(n: u32, mu: f64, degree: usize, amplitude: f64, seed: u64, opts: &SamplerOptions) -> Result<AnalyticSample> {
    let nn = n as usize;
    if n == 0 || degree < nn {
        return Err(LabError::InvalidSample(format!("degree {degree} must be at least n = {n}")));
    }
    if !(mu >= 0.0 && mu.is_finite() && amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(LabError::InvalidSample("mu and amplitude must be finite and nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eval = opts.min_modulus.map(|_| CircleEvaluator::new(opts.check_samples));
    for _ in 0..opts.max_draws.max(1) {
        let tail = draw_tail(&mut rng, nn, mu, degree);
        let mut coeffs: Vec<Complex64> = tail.iter().map(|c| c * amplitude).collect();
        coeffs[0] = Complex64::new(1.0, 0.0);
        coeffs[1..nn].iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        coeffs[nn] = Complex64::new(mu, 0.0);
        let accept = match (opts.min_modulus, &eval) {
            (Some(floor), Some(ev)) => ev.values(&coeffs, opts.check_radius).iter().all(|v| v.norm() >= floor),
            _ => true,
        };
        if accept {
            return AnalyticSample::p_function(coeffs, n);
        }
    }
    Err(LabError::RejectionBudget(opts.max_draws.max(1)))
}

pub fn sample_p(n: u32, mu: f64, degree: usize, amplitude: f64, seed: u64) -> Result<AnalyticSample> {
    sample_p_with(n, mu, degree, amplitude, seed, &SamplerOptions::default())
}

fn min_modulus_on_circle(coeffs: &[Complex64], r: f64) -> f64 {
    CircleEvaluator::new(CHECK_SAMPLES)
        .values(coeffs, r)
        .iter()
        .map(|v| v.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Power series of z f′(z)/f(z) to z^degree.
pub fn series_to_p_of_f(f: &AnalyticSample, degree: usize) -> Result<AnalyticSample> {
    if f.family != Family::NormalizedF {
        return Err(LabError::InvalidSample("expected a normalized f".into()));
    }
    let c = &f.coefficients;
    // f(z)/z and f′(z) share the index shift: g_j = c_{j+1}, h_j = (j+1)c_{j+1}.
    let g: Vec<Complex64> = c[1..].to_vec();
    let h: Vec<Complex64> = c[1..].iter().enumerate().map(|(j, v)| v * (j + 1) as f64).collect();
    if min_modulus_on_circle(&g, R_CHECK) < 1e-12 {
        return Err(LabError::ZeroOnCircle);
    }
    let p = series::div(&h, &g, degree + 1).ok_or(LabError::ZeroOnCircle)?;
    let sample = AnalyticSample::p_function(p, f.n)?;
    let want = f.n as f64 * f.fixed_coefficient();
    assert!(
        (sample.fixed_coefficient() - want).abs() <= 1e-10 * (1.0 + want.abs()),
        "initial coefficient of zf'/f must equal n*b"
    );
    Ok(sample)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Supports,
    Vacuous,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
}

/// Radii and margins of the two-radius check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicationRadii {
    /// Hypothesis radius; it must hold here with margin above `hypothesis_margin`.
    pub hypothesis: f64,
    /// Conclusion radius; it fails only with margin below −`conclusion_margin`.
    pub conclusion: f64,
    pub hypothesis_margin: f64,
    pub conclusion_margin: f64,
    pub samples: usize,
}

impl Default for ImplicationRadii {
    fn default() -> Self {
        Self {
            hypothesis: R_CHECK,
            conclusion: 0.9,
            hypothesis_margin: 1e-4,
            conclusion_margin: 1e-4,
            samples: CHECK_SAMPLES,
        }
    }
}

impl ImplicationRadii {
    /// Defaults with the hypothesis radius replaced; the conclusion radius never exceeds it.
    pub fn with_check_radius(r_check: f64) -> Self {
        let d = Self::default();
        Self {
            hypothesis: r_check,
            conclusion: d.conclusion.min(r_check),
            ..d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicationCase {
    pub hypothesis: SubordinationVerdict,
    pub conclusion: SubordinationVerdict,
    pub classification: Classification,
    /// Φ(p)(0); must equal 1 for the hypothesis to be satisfiable.
    pub phi_at_origin: Complex64,
}

impl ImplicationCase {
    fn classify(hypothesis: &SubordinationVerdict, conclusion: &SubordinationVerdict) -> Classification {
        match (hypothesis.holds, conclusion.holds) {
            (false, _) => Classification::Vacuous,
            (true, true) => Classification::Supports,
            (true, false) => Classification::Counterexample,
        }
    }
}

fn phi_samples(kind: OperatorKind, params: &Parameters, p: &[Complex64], zp: &[Complex64], r: f64) -> Result<CircleSamples> {
    let values = p
        .iter()
        .zip(zp)
        .map(|(pv, zv)| apply_operator(kind, params, *pv, *zv))
        .collect::<Result<Vec<_>>>()?;
    Ok(CircleSamples { radius: r, values })
}

/// Winding number of sampled values around 0, or `None` if a value vanishes.
pub fn winding_number(values: &[Complex64]) -> Option<i64> {
    if values.iter().any(|v| v.norm() == 0.0) {
        return None;
    }
    let turn: f64 = values
        .iter()
        .zip(values.iter().cycle().skip(1))
        .map(|(a, b)| (b / a).arg())
        .sum();
    Some((turn / TAU).round() as i64)
}

fn pole_verdict() -> SubordinationVerdict {
    SubordinationVerdict {
        holds: false,
        worst_margin: f64::NEG_INFINITY,
        worst_point: Complex64::new(0.0, 0.0),
    }
}

fn origin_verdict(phi0: Complex64) -> Option<SubordinationVerdict> {
    let miss = (phi0 - 1.0).norm();
    (miss > 1e-12).then(|| SubordinationVerdict {
        holds: false,
        worst_margin: -miss,
        worst_point: Complex64::new(0.0, 0.0),
    })
}

/// Checks Φ(p) ≺ (1+Dz)/(1+Ez) and p ≺ (1+Az)/(1+Bz) at the two radii and classifies.
///
/// When Φ divides by p, a zero of p inside the hypothesis circle makes Φ(p) non-analytic
/// there and the hypothesis fails with margin −∞.
pub fn test_implication_with(kind: OperatorKind, params: &Parameters, p: &AnalyticSample, radii: &ImplicationRadii) -> Result<ImplicationCase> {
    let hyp_region = janowski_image(params.d(), params.e())?;
    let con_region = janowski_image(params.a(), params.b())?;
    let eval = CircleEvaluator::new(radii.samples);
    let zp_coeffs = series::z_derivative(&p.coefficients);
    let phi0 = apply_operator(kind, params, p.coefficients[0], Complex64::new(0.0, 0.0))?;
    let hypothesis = match origin_verdict(phi0) {
        Some(v) => v,
        None => {
            let r = radii.hypothesis;
            let pv = eval.values(&p.coefficients, r);
            if kind.divides_by_p() && winding_number(&pv) != Some(0) {
                pole_verdict()
            } else {
                let zv = eval.values(&zp_coeffs, r);
                let phi = phi_samples(kind, params, &pv, &zv, r)?;
                is_subordinate_numeric(&phi, &hyp_region, -radii.hypothesis_margin)?
            }
        }
    };
    let conclusion = is_subordinate_numeric(&eval.samples(&p.coefficients, radii.conclusion), &con_region, radii.conclusion_margin)?;
    Ok(ImplicationCase {
        classification: ImplicationCase::classify(&hypothesis, &conclusion),
        hypothesis,
        conclusion,
        phi_at_origin: phi0,
    })
}

/// [`test_implication_with`] using `r_check` as the hypothesis radius.
pub fn test_implication(kind: OperatorKind, params: &Parameters, p: &AnalyticSample, r_check: f64) -> Result<ImplicationCase> {
    test_implication_with(kind, params, p, &ImplicationRadii::with_check_radius(r_check))
}

/// Settings of the falsification driver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalsificationConfig {
    pub degree: usize,
    pub initial_amplitude: f64,
    /// Number of amplitude halvings tried after the initial amplitude.
    pub halvings: u32,
    pub radii: ImplicationRadii,
}

impl Default for FalsificationConfig {
    fn default() -> Self {
        Self {
            degree: DEGREE_CAP,
            initial_amplitude: 1.0,
            halvings: 14,
            radii: ImplicationRadii::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub trial: usize,
    pub seed: u64,
    pub amplitude: f64,
    pub sample: AnalyticSample,
    pub case: ImplicationCase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsificationSummary {
    pub trials: usize,
    pub supports: usize,
    pub vacuous: usize,
    pub counterexamples: usize,
    /// Trials whose sampler exhausted its rejection budget at every amplitude.
    pub rejected: usize,
    /// The counterexample with the smallest trial index.
    pub first_counterexample: Option<CounterexampleRecord>,
}

enum TrialOutcome {
    Supports,
    Vacuous,
    Rejected,
    Counterexample(Box<CounterexampleRecord>),
}

/// Coarse necessary test: the hypothesis margin on every 16th circle point.
fn coarse_hypothesis_fails(kind: OperatorKind, params: &Parameters, p: &AnalyticSample, radii: &ImplicationRadii, region: &crate::geometry::DiskOrHalfPlane) -> bool {
    let stride = 16.min(radii.samples);
    let m = radii.samples / stride;
    if m == 0 || radii.samples % stride != 0 {
        return false;
    }
    let zp = series::z_derivative(&p.coefficients);
    for j in 0..m {
        let z = Complex64::from_polar(radii.hypothesis, TAU * (j * stride) as f64 / radii.samples as f64);
        let Ok(phi) = apply_operator(kind, params, series::horner(&p.coefficients, z), series::horner(&zp, z)) else {
            return true;
        };
        if crate::geometry::region_contains(region, phi) <= radii.hypothesis_margin {
            return true;
        }
    }
    false
}

fn run_trial(kind: OperatorKind, params: &Parameters, cfg: &FalsificationConfig, trial: usize, seed: u64) -> TrialOutcome {
    let trial_seed = derive_seed(seed, trial as u64);
    let opts = SamplerOptions {
        min_modulus: kind.divides_by_p().then_some(MIN_MODULUS),
        ..SamplerOptions::default()
    };
    let Ok(hyp_region) = janowski_image(params.d(), params.e()) else {
        return TrialOutcome::Vacuous;
    };
    let mut any_sample = false;
    let mut amplitude = cfg.initial_amplitude;
    for _ in 0..=cfg.halvings {
        if let Ok(p) = sample_p_with(params.n(), params.mu(), cfg.degree, amplitude, trial_seed, &opts) {
            any_sample = true;
            if !coarse_hypothesis_fails(kind, params, &p, &cfg.radii, &hyp_region) {
                match test_implication_with(kind, params, &p, &cfg.radii) {
                    Ok(case) => match case.classification {
                        Classification::Supports => return TrialOutcome::Supports,
                        Classification::Counterexample => {
                            return TrialOutcome::Counterexample(Box::new(CounterexampleRecord {
                                trial,
                                seed: trial_seed,
                                amplitude,
                                sample: p,
                                case,
                            }))
                        }
                        Classification::Vacuous => {}
                    },
                    // A pole of Φ(p) on the circle: the hypothesis cannot hold there.
                    Err(LabError::OperatorPole(_)) => {}
                    Err(_) => {}
                }
            }
        }
        amplitude /= 2.0;
    }
    if any_sample {
        TrialOutcome::Vacuous
    } else {
        TrialOutcome::Rejected
    }
}

/// Runs `trials` seeded trials; each halves the tail amplitude until the hypothesis holds.
pub fn falsification_sweep(kind: OperatorKind, params: &Parameters, trials: usize, seed: u64, cfg: &FalsificationConfig) -> FalsificationSummary {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(kind, params, cfg, t, seed))
        .collect();
    let mut summary = FalsificationSummary {
        trials,
        supports: 0,
        vacuous: 0,
        counterexamples: 0,
        rejected: 0,
        first_counterexample: None,
    };
    for outcome in outcomes {
        match outcome {
            TrialOutcome::Supports => summary.supports += 1,
            TrialOutcome::Vacuous => summary.vacuous += 1,
            TrialOutcome::Rejected => summary.rejected += 1,
            TrialOutcome::Counterexample(rec) => {
                summary.counterexamples += 1;
                if summary.first_counterexample.is_none() {
                    summary.first_counterexample = Some(*rec);
                }
            }
        }
    }
    summary
}

/// First counterexample (by trial index) among `trials` seeded samples, if any.
pub fn find_counterexample(kind: OperatorKind, params: &Parameters, trials: usize, seed: u64) -> Option<ImplicationCase> {
    falsification_sweep(kind, params, trials, seed, &FalsificationConfig::default())
        .first_counterexample
        .map(|r| r.case)
}

/// zf′/f ≺ (1+Az)/(1+Bz) checked on |z| = r_check, evaluating f and zf′ directly.
pub fn starlike_membership(f: &AnalyticSample, a: f64, b: f64, r_check: f64) -> Result<SubordinationVerdict> {
    starlike_membership_with(f, a, b, r_check, CHECK_SAMPLES, SWEEP_TOL)
}

pub fn starlike_membership_with(f: &AnalyticSample, a: f64, b: f64, r_check: f64, samples: usize, tol: f64) -> Result<SubordinationVerdict> {
    if f.family != Family::NormalizedF {
        return Err(LabError::InvalidSample("expected a normalized f".into()));
    }
    let region = janowski_image(a, b)?;
    let eval = CircleEvaluator::new(samples);
    let fv = eval.values(&f.coefficients, r_check);
    let zfv = eval.values(&series::z_derivative(&f.coefficients), r_check);
    let mut values = Vec::with_capacity(samples);
    for (w, zw) in fv.iter().zip(&zfv) {
        if w.norm() < 1e-14 {
            return Err(LabError::ZeroOnCircle);
        }
        values.push(zw / w);
    }
    is_subordinate_numeric(&CircleSamples { radius: r_check, values }, &region, tol)
}

/// Parses "re im" per line, c₀ first. Blank lines and lines starting with '#' are skipped.
pub fn parse_coefficients(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| LabError::CoefficientFile(format!("line {}: '{s}' is not a finite number", lineno + 1)))
        };
        match fields.as_slice() {
            [re, im] => out.push(Complex64::new(parse(re)?, parse(im)?)),
            _ => {
                return Err(LabError::CoefficientFile(format!(
                    "line {}: expected two numbers 're im'",
                    lineno + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(LabError::CoefficientFile("no coefficients".into()));
    }
    Ok(out)
}

/// Truncated Koebe function z/(1−z)² = Σ k z^k.
pub fn koebe(degree: usize) -> AnalyticSample {
    let coeffs = (0..=degree).map(|k| Complex64::new(k as f64, 0.0)).collect();
    AnalyticSample::normalized_f(coeffs).expect("Koebe coefficients are normalized")
}
