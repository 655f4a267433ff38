//! Brute-force check that Re ψ(iρ, σ) ≤ 0 on the admissibility region
//! σ ≤ −½(n + (2−μ′)/(2+μ′))(1 + ρ²).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::operators::{coeff_system, CoeffSystem, OperatorKind, PsiPoint, QuarticForm, POLE_THRESHOLD};
use crate::params::Parameters;
use crate::seeding::{splitmix64, unit_f64};

/// Maximum admissible value of the swept metric for a pass.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Fraction of pole points above which the sweep is rejected.
pub const MAX_POLE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleGrid {
    pub rho_max: f64,
    pub rho_steps: usize,
    /// Depth below the bound, in units of (1 + ρ²).
    pub sigma_depth: f64,
    pub sigma_steps: usize,
    pub seed: u64,
    /// Adds one uniformly placed point per lattice cell.
    #[serde(default = "default_jitter")]
    pub jitter: bool,
}

fn default_jitter() -> bool {
    true
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            rho_max: 16.0,
            rho_steps: 513,
            sigma_depth: 8.0,
            sigma_steps: 257,
            seed: 0,
            jitter: true,
        }
    }
}

impl OracleGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho_max.is_finite() && self.rho_max >= 4.0) {
            return Err(LabError::InvalidGrid(format!("rho_max must be at least 4 (got {})", self.rho_max)));
        }
        if self.rho_steps < 16 || self.sigma_steps < 16 {
            return Err(LabError::InvalidGrid("rho_steps and sigma_steps must be at least 16".into()));
        }
        if !(self.sigma_depth.is_finite() && self.sigma_depth > 0.0) {
            return Err(LabError::InvalidGrid("sigma_depth must be positive".into()));
        }
        Ok(())
    }

    fn rho(&self, i: f64) -> f64 {
        -self.rho_max + 2.0 * self.rho_max * i / (self.rho_steps - 1) as f64
    }

    fn sigma(&self, bound: f64, rho: f64, j: f64) -> f64 {
        bound - self.sigma_depth * (1.0 + rho * rho) * j / (self.sigma_steps - 1) as f64
    }

    pub fn point_count(&self) -> usize {
        let lattice = self.rho_steps * self.sigma_steps;
        if self.jitter {
            lattice + (self.rho_steps - 1) * (self.sigma_steps - 1)
        } else {
            lattice
        }
    }
}

/// −½(n + (2−μ′)/(2+μ′))(1 + ρ²).
pub fn sigma_bound(n: u32, mu_prime: f64, rho: f64) -> f64 {
    -0.5 * (n as f64 + (2.0 - mu_prime) / (2.0 + mu_prime)) * (1.0 + rho * rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMetric {
    /// Re ψ itself.
    RePsi,
    /// The Re-numerator F divided by the sum of its term magnitudes.
    NormalizedQuartic,
}

/// Leading behaviour of F on the cone −σ ≥ κ(1 + ρ²) as ρ² and −σ grow.
///
/// With m = −σ/ρ², F/ρ⁴ → g(m) = a2·m² − b1·m + c for m ≥ κ, and F/σ² → a2 at ρ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCheck {
    pub sigma_sq_coeff: f64,
    pub cross_coeff: f64,
    pub rho4_coeff: f64,
    /// sup over m ≥ κ of g(m); +∞ when unbounded.
    pub leading_sup: f64,
    pub ok: bool,
}

pub fn asymptotic_check(form: &QuarticForm, n: u32, mu_prime: f64) -> AsymptoticCheck {
    let kappa = -sigma_bound(n, mu_prime, 0.0);
    let (a2, b1, c) = (form.a2, form.b1, form.c);
    let g = |m: f64| a2 * m * m - b1 * m + c;
    let sup = if a2 > 0.0 || (a2 == 0.0 && b1 < 0.0) {
        f64::INFINITY
    } else if a2 < 0.0 {
        let vertex = b1 / (2.0 * a2);
        if vertex > kappa {
            c - b1 * b1 / (4.0 * a2)
        } else {
            g(kappa)
        }
    } else {
        g(kappa)
    };
    let scale = a2.abs() * kappa * kappa + b1.abs() * kappa + c.abs();
    let ok = a2 <= 0.0 && sup <= 1e-12 * scale;
    AsymptoticCheck {
        sigma_sq_coeff: a2,
        cross_coeff: b1,
        rho4_coeff: c,
        leading_sup: sup,
        ok,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub metric: OracleMetric,
    pub max_re_psi: f64,
    pub arg_point: PsiPoint,
    pub asymptotic_ok: bool,
    pub asymptotic: AsymptoticCheck,
    pub pass: bool,
    pub samples_evaluated: usize,
    pub poles_excluded: usize,
    /// All coefficients vanish; nothing to sweep.
    pub degenerate: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    rho: f64,
    sigma: f64,
    evaluated: usize,
    poles: usize,
}

impl Best {
    fn empty() -> Self {
        Best {
            value: f64::NEG_INFINITY,
            rho: f64::INFINITY,
            sigma: f64::INFINITY,
            evaluated: 0,
            poles: 0,
        }
    }

    fn beats(&self, other: &Best) -> bool {
        self.value > other.value
            || (self.value == other.value && (self.rho, self.sigma) < (other.rho, other.sigma))
    }

    /// Order-independent merge: larger value wins, ties go to the smaller (ρ, σ).
    fn merge(self, other: Best) -> Best {
        let (evaluated, poles) = (self.evaluated + other.evaluated, self.poles + other.poles);
        let winner = if other.beats(&self) { other } else { self };
        Best {
            evaluated,
            poles,
            ..winner
        }
    }

    fn offer(&mut self, value: f64, rho: f64, sigma: f64) {
        let cand = Best {
            value,
            rho,
            sigma,
            evaluated: 0,
            poles: 0,
        };
        if cand.beats(self) {
            self.value = value;
            self.rho = rho;
            self.sigma = sigma;
        }
    }
}

/// Jitter offsets in [0, 1)² for cell (i, j), independent of evaluation order.
fn cell_jitter(seed: u64, i: usize, j: usize) -> (f64, f64) {
    let h = splitmix64(seed ^ splitmix64(((i as u64) << 32) | j as u64));
    (unit_f64(h), unit_f64(splitmix64(h)))
}

fn sweep_row<F: Fn(f64, f64) -> Option<f64>>(grid: &OracleGrid, n: u32, mu_prime: f64, i: usize, eval: &F) -> Best {
    let mut best = Best::empty();
    let visit = |rho: f64, j: f64, best: &mut Best| {
        let sigma = grid.sigma(sigma_bound(n, mu_prime, rho), rho, j);
        match eval(rho, sigma) {
            Some(v) => {
                best.evaluated += 1;
                best.offer(v, rho, sigma);
            }
            None => best.poles += 1,
        }
    };
    let rho = grid.rho(i as f64);
    for j in 0..grid.sigma_steps {
        visit(rho, j as f64, &mut best);
    }
    if grid.jitter && i + 1 < grid.rho_steps {
        for j in 0..grid.sigma_steps - 1 {
            let (u, v) = cell_jitter(grid.seed, i, j);
            visit(grid.rho(i as f64 + u), j as f64 + v, &mut best);
        }
    }
    best
}

fn sweep<F: Fn(f64, f64) -> Option<f64> + Sync>(grid: &OracleGrid, n: u32, mu_prime: f64, eval: F) -> Best {
    (0..grid.rho_steps)
        .into_par_iter()
        .map(|i| sweep_row(grid, n, mu_prime, i, &eval))
        .reduce(Best::empty, Best::merge)
}

fn re_psi_at(sys: &CoeffSystem) -> impl Fn(f64, f64) -> Option<f64> + Sync + '_ {
    move |rho, sigma| {
        let pt = PsiPoint::new(rho, sigma);
        let den = sys.denominator(pt);
        let den_norm = den.norm();
        if den_norm < POLE_THRESHOLD {
            return None;
        }
        Some((sys.numerator(pt) * den.conj()).re / (den_norm * den_norm))
    }
}

fn finish(metric: OracleMetric, best: Best, asymptotic: AsymptoticCheck, degenerate: bool) -> OracleReport {
    let pass = !degenerate && best.value <= ORACLE_TOLERANCE && asymptotic.ok;
    OracleReport {
        metric,
        max_re_psi: best.value,
        arg_point: PsiPoint::new(best.rho, best.sigma),
        asymptotic_ok: asymptotic.ok,
        asymptotic,
        pass,
        samples_evaluated: best.evaluated,
        poles_excluded: best.poles,
        degenerate,
        tolerance: ORACLE_TOLERANCE,
    }
}

/// Sweep of Re ψ for an explicit coefficient system.
pub fn verify_system(sys: &CoeffSystem, n: u32, mu_prime: f64, grid: &OracleGrid) -> Result<OracleReport> {
    grid.validate()?;
    let best = sweep(grid, n, mu_prime, re_psi_at(sys));
    let total = best.evaluated + best.poles;
    if best.poles as f64 > MAX_POLE_FRACTION * total as f64 {
        return Err(LabError::DomainTooThin {
            excluded: best.poles,
            total,
        });
    }
    let asym = asymptotic_check(&sys.quartic_form(), n, mu_prime);
    Ok(finish(OracleMetric::RePsi, best, asym, false))
}

/// Re ψ sweep for the operator's ground-truth coefficient system on the current rayon pool.
pub fn verify_admissibility(kind: OperatorKind, params: &Parameters, grid: &OracleGrid) -> Result<OracleReport> {
    verify_system(&coeff_system(kind, params), params.n(), params.mu_prime(), grid)
}

/// As [`verify_admissibility`] on a dedicated pool of `threads` workers.
pub fn verify_admissibility_with_threads(
    kind: OperatorKind,
    params: &Parameters,
    grid: &OracleGrid,
    threads: usize,
) -> Result<OracleReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| LabError::InvalidGrid(format!("thread pool: {e}")))?;
    pool.install(|| verify_admissibility(kind, params, grid))
}

/// Same sweep on the Re-numerator F, scaled by its term magnitudes.
pub fn quartic_negativity(coeffs: &CoeffSystem, n: u32, mu_prime: f64, grid: &OracleGrid) -> Result<OracleReport> {
    grid.validate()?;
    let form = coeffs.quartic_form();
    let asym = asymptotic_check(&form, n, mu_prime);
    if form.is_zero() {
        return Ok(finish(OracleMetric::NormalizedQuartic, Best::empty(), asym, true));
    }
    let best = sweep(grid, n, mu_prime, |rho, sigma| {
        let mag = form.magnitude(rho, sigma);
        Some(if mag == 0.0 { 0.0 } else { form.eval(rho, sigma) / mag })
    });
    Ok(finish(OracleMetric::NormalizedQuartic, best, asym, false))
}
