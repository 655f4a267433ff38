//! The closed-form recipe evaluated directly on a coefficient system.
//!
//! On the admissibility region t = ρ² ≤ T(σ) = −kσ − 1 with k = 2(2+μ′)/G.
//! If ∂F/∂t ≥ 0 there, the maximum over t sits on t = T(σ), leaving the
//! quadratic f(σ) = F(T(σ), σ). The closed-form conditions bound f by f(−½).

use serde::{Deserialize, Serialize};

use super::compute_gh;
use crate::operators::{CoeffSystem, QuarticForm};

/// Coefficients (x, y, z) of f(σ) = F(−kσ − 1, σ).
pub fn reduced_quadratic(form: &QuarticForm, n: u32, mu_prime: f64) -> (f64, f64, f64) {
    let g = compute_gh(n, mu_prime).g;
    let k = 2.0 * (2.0 + mu_prime) / g;
    let x = form.a2 - k * form.b1 + form.c * k * k;
    let y = form.a1 - form.b1 - k * form.b0 + 2.0 * form.c * k;
    let z = form.a0 - form.b0 + form.c;
    (x, y, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemRecipe {
    /// B0 − B1/2: lower bound of the t-slope coefficient on σ ≤ −½.
    pub slope_at_half: f64,
    /// B1, the σρ² coefficient; must be ≤ 0.
    pub cross: f64,
    /// C, the ρ⁴ coefficient; must be ≥ 0.
    pub quartic: f64,
    /// f(−½).
    pub boundary_value: f64,
    pub holds: bool,
}

/// Sign conditions and f(−½) ≤ 0, all computed from the coefficient system itself.
pub fn system_recipe(coeffs: &CoeffSystem, n: u32, mu_prime: f64) -> SystemRecipe {
    let form = coeffs.quartic_form();
    let (x, y, z) = reduced_quadratic(&form, n, mu_prime);
    let slope_at_half = form.b0 - form.b1 / 2.0;
    let boundary_value = x / 4.0 - y / 2.0 + z;
    SystemRecipe {
        slope_at_half,
        cross: form.b1,
        quartic: form.c,
        boundary_value,
        holds: slope_at_half >= 0.0 && form.b1 <= 0.0 && form.c >= 0.0 && boundary_value <= 0.0,
    }
}
