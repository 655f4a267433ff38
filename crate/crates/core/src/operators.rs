//! The six differential operators Φ and their transformed ψ(iρ, σ) systems.
//!
//! Every lemma sets q = ((A−1)+(1−B)p)/((A+1)−(1+B)p) and
//! t = ((D−1)+(1−E)Φ)/((D+1)−(1+E)Φ), so that ψ(q, zq′) = t. The coefficient
//! tables below give ψ(iρ, σ) as a ratio of two linear forms in (σ, ρ², iρ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::params::Parameters;

/// Denominator modulus below which a ψ test point is treated as a pole.
pub const POLE_THRESHOLD: f64 = 1e-14;

/// |p| below which operators dividing by p report a pole.
pub const OPERATOR_POLE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    /// 1 + α zp′
    LinearDeriv,
    /// 1 + zp′/p²
    InvSquare,
    /// 1 + α zp′/p
    LogDeriv,
    /// α p² + λ zp′
    SquarePlusDeriv,
    /// α p + (1−α) p² + λ zp′
    MixedQuadratic,
    /// (1−α) p + α (1 + zp′/p)
    ConvexCombo,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::LinearDeriv,
        OperatorKind::InvSquare,
        OperatorKind::LogDeriv,
        OperatorKind::SquarePlusDeriv,
        OperatorKind::MixedQuadratic,
        OperatorKind::ConvexCombo,
    ];

    /// Short name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            OperatorKind::LinearDeriv => "linear",
            OperatorKind::InvSquare => "invsq",
            OperatorKind::LogDeriv => "logderiv",
            OperatorKind::SquarePlusDeriv => "sqderiv",
            OperatorKind::MixedQuadratic => "mixed",
            OperatorKind::ConvexCombo => "convex",
        }
    }

    pub fn from_cli_name(name: &str) -> Option<OperatorKind> {
        OperatorKind::ALL.into_iter().find(|k| k.cli_name() == name)
    }

    /// Whether Φ divides by p (so p must be zero-free).
    pub fn divides_by_p(self) -> bool {
        matches!(
            self,
            OperatorKind::InvSquare | OperatorKind::LogDeriv | OperatorKind::ConvexCombo
        )
    }
}

/// Φ(p) at one point given p(z) and z·p′(z).
pub fn apply_operator(kind: OperatorKind, params: &Parameters, p: Complex64, zp: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let alpha = params.alpha();
    let lambda = params.lambda();
    if kind.divides_by_p() && p.norm() < OPERATOR_POLE_THRESHOLD {
        return Err(LabError::OperatorPole(p.norm()));
    }
    let value = match kind {
        OperatorKind::LinearDeriv => one + zp * alpha,
        OperatorKind::InvSquare => one + zp / (p * p),
        OperatorKind::LogDeriv => one + zp / p * alpha,
        OperatorKind::SquarePlusDeriv => p * p * alpha + zp * lambda,
        OperatorKind::MixedQuadratic => p * alpha + p * p * (1.0 - alpha) + zp * lambda,
        OperatorKind::ConvexCombo => p * (1.0 - alpha) + (one + zp / p) * alpha,
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(LabError::OperatorPole(p.norm()));
    }
    Ok(value)
}

/// q = ((A−1)+(1−B)p)/((A+1)−(1+B)p); maps the image of (1+Az)/(1+Bz) onto Re q > 0.
pub fn q_transform(a: f64, b: f64, p: Complex64) -> Complex64 {
    ((a - 1.0) + p * (1.0 - b)) / ((a + 1.0) - p * (1.0 + b))
}

/// Inverse of [`q_transform`] together with z·p′ in terms of (q, z·q′).
pub fn p_from_q(a: f64, b: f64, q: Complex64, zq: Complex64) -> (Complex64, Complex64) {
    let u = q * (1.0 + a) + (1.0 - a);
    let v = q * (1.0 + b) + (1.0 - b);
    (u / v, zq * (2.0 * (a - b)) / (v * v))
}

/// Five-coefficient system: ψ = (a + bσ + cρ² + idρ)/(a + eσ + cρ² + idρ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

/// Eight-coefficient system: ψ = (a + bσ + cρ² + idρ)/(e + fσ + gρ² + ihρ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EightCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum CoeffSystem {
    Five(FiveCoeffs),
    Eight(EightCoeffs),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiPoint {
    pub rho: f64,
    pub sigma: f64,
}

impl PsiPoint {
    pub fn new(rho: f64, sigma: f64) -> Self {
        Self { rho, sigma }
    }
}

/// Re-numerator of ψ in the variables (σ, t = ρ²):
/// F = a0 + a1σ + a2σ² + (b0 + b1σ)t + c t².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticForm {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b0: f64,
    pub b1: f64,
    pub c: f64,
}

impl QuarticForm {
    pub fn eval(&self, rho: f64, sigma: f64) -> f64 {
        let t = rho * rho;
        self.a0 + sigma * (self.a1 + sigma * self.a2) + (self.b0 + self.b1 * sigma) * t + self.c * t * t
    }

    /// Sum of term magnitudes; the natural scale for normalizing F.
    pub fn magnitude(&self, rho: f64, sigma: f64) -> f64 {
        let t = rho * rho;
        self.a0.abs()
            + (self.a1 * sigma).abs()
            + (self.a2 * sigma * sigma).abs()
            + (self.b0 * t).abs()
            + (self.b1 * sigma * t).abs()
            + (self.c * t * t).abs()
    }

    pub fn is_zero(&self) -> bool {
        [self.a0, self.a1, self.a2, self.b0, self.b1, self.c].iter().all(|v| *v == 0.0)
    }
}

impl CoeffSystem {
    /// The system viewed as numerator (a,b,c,d) over denominator (e,f,g,h).
    pub fn as_eight(&self) -> EightCoeffs {
        match *self {
            CoeffSystem::Eight(c) => c,
            CoeffSystem::Five(FiveCoeffs { a, b, c, d, e }) => EightCoeffs {
                a,
                b,
                c,
                d,
                e: a,
                f: e,
                g: c,
                h: d,
            },
        }
    }

    pub fn numerator(&self, point: PsiPoint) -> Complex64 {
        let k = self.as_eight();
        let (r, s) = (point.rho, point.sigma);
        Complex64::new(k.a + k.b * s + k.c * r * r, k.d * r)
    }

    pub fn denominator(&self, point: PsiPoint) -> Complex64 {
        let k = self.as_eight();
        let (r, s) = (point.rho, point.sigma);
        Complex64::new(k.e + k.f * s + k.g * r * r, k.h * r)
    }

    pub fn quartic_form(&self) -> QuarticForm {
        let EightCoeffs { a, b, c, d, e, f, g, h } = self.as_eight();
        QuarticForm {
            a0: a * e,
            a1: a * f + b * e,
            a2: b * f,
            b0: a * g + c * e + h * d,
            b1: b * g + c * f,
            c: c * g,
        }
    }

    pub fn is_all_zero(&self) -> bool {
        let k = self.as_eight();
        [k.a, k.b, k.c, k.d, k.e, k.f, k.g, k.h].iter().all(|v| *v == 0.0)
    }
}

/// ψ(iρ, σ) from the coefficient system.
pub fn psi_value(coeffs: &CoeffSystem, point: PsiPoint) -> Result<Complex64> {
    let den = coeffs.denominator(point);
    if den.norm() < POLE_THRESHOLD {
        return Err(LabError::PoleOnTestSet(den.norm()));
    }
    Ok(coeffs.numerator(point) / den)
}

/// Numerator of Re ψ after clearing |denominator|²; same sign as Re ψ.
pub fn re_psi_quartic(coeffs: &CoeffSystem, point: PsiPoint) -> f64 {
    coeffs.quartic_form().eval(point.rho, point.sigma)
}

fn linear_deriv_system(a: f64, b: f64, d: f64, e: f64, alpha: f64) -> CoeffSystem {
    CoeffSystem::Five(FiveCoeffs {
        a: (d - e) * (1.0 - b).powi(2),
        b: 2.0 * alpha * (1.0 - e) * (a - b),
        c: -(d - e) * (1.0 + b).powi(2),
        d: 2.0 * (d - e) * (1.0 - b * b),
        e: -2.0 * alpha * (1.0 + e) * (a - b),
    })
}

fn log_deriv_system(a: f64, b: f64, d: f64, e: f64, alpha: f64) -> CoeffSystem {
    CoeffSystem::Five(FiveCoeffs {
        a: (d - e) * (1.0 - a) * (1.0 - b),
        b: 2.0 * alpha * (1.0 - e) * (a - b),
        c: -(d - e) * (1.0 + a) * (1.0 + b),
        d: 2.0 * (d - e) * (1.0 - a * b),
        e: -2.0 * alpha * (1.0 + e) * (a - b),
    })
}

/// `dq` is the D-shift in the Q-side coefficients e, g, h.
fn square_plus_deriv_system(a: f64, b: f64, d: f64, e: f64, alpha: f64, lambda: f64, dq: f64) -> CoeffSystem {
    let dp = d - 1.0;
    CoeffSystem::Eight(EightCoeffs {
        a: dp * (1.0 - b).powi(2) + alpha * (1.0 - e) * (1.0 - a).powi(2),
        b: 2.0 * lambda * (1.0 - e) * (a - b),
        c: -dp * (1.0 + b).powi(2) - alpha * (1.0 - e) * (1.0 + a).powi(2),
        d: 2.0 * dp * (1.0 - b * b) + 2.0 * alpha * (1.0 - e) * (1.0 - a * a),
        e: dq * (1.0 - b).powi(2) - alpha * (1.0 + e) * (1.0 - a).powi(2),
        f: -2.0 * lambda * (1.0 + e) * (a - b),
        g: -dq * (1.0 + b).powi(2) + alpha * (1.0 + e) * (1.0 + a).powi(2),
        h: 2.0 * dq * (1.0 - b * b) - 2.0 * alpha * (1.0 + e) * (1.0 - a * a),
    })
}

fn mixed_quadratic_system(a: f64, b: f64, d: f64, e: f64, alpha: f64, lambda: f64, dq: f64) -> CoeffSystem {
    let dp = d - 1.0;
    let om = 1.0 - alpha;
    CoeffSystem::Eight(EightCoeffs {
        a: dp * (1.0 - b).powi(2) + alpha * (1.0 - e) * (1.0 - a) * (1.0 - b) + (1.0 - e) * om * (1.0 - a).powi(2),
        b: 2.0 * lambda * (1.0 - e) * (a - b),
        c: -dp * (1.0 + b).powi(2) - alpha * (1.0 - e) * (1.0 + a) * (1.0 + b) - om * (1.0 - e) * (1.0 + a).powi(2),
        d: 2.0 * dp * (1.0 - b * b) + 2.0 * alpha * (1.0 - e) * (1.0 - a * b) + 2.0 * (1.0 - e) * om * (1.0 - a * a),
        e: dq * (1.0 - b).powi(2) - alpha * (1.0 + e) * (1.0 - a) * (1.0 - b) - (1.0 + e) * om * (1.0 - a).powi(2),
        f: -2.0 * lambda * (1.0 + e) * (a - b),
        g: -dq * (1.0 + b).powi(2) + alpha * (1.0 + e) * (1.0 + a) * (1.0 + b) + om * (1.0 + e) * (1.0 + a).powi(2),
        h: 2.0 * dq * (1.0 - b * b) - 2.0 * alpha * (1.0 + e) * (1.0 - a * b) - 2.0 * (1.0 + e) * om * (1.0 - a * a),
    })
}

fn convex_combo_system(a: f64, b: f64, d: f64, e: f64, alpha: f64, dq: f64) -> CoeffSystem {
    let dp = d - 1.0;
    let om = 1.0 - alpha;
    let pn = dp + alpha * (1.0 - e);
    let qn = dq - alpha * (1.0 + e);
    CoeffSystem::Eight(EightCoeffs {
        a: (1.0 - a) * (1.0 - b) * pn + om * (1.0 - e) * (1.0 - a).powi(2),
        b: 2.0 * alpha * (1.0 - e) * (a - b),
        c: -(1.0 + a) * (1.0 + b) * pn - om * (1.0 - e) * (1.0 + a).powi(2),
        d: 2.0 * (1.0 - a * b) * pn + 2.0 * om * (1.0 - e) * (1.0 - a * a),
        e: (1.0 - a) * (1.0 - b) * qn - om * (1.0 + e) * (1.0 - a).powi(2),
        f: -2.0 * alpha * (1.0 + e) * (a - b),
        g: -(1.0 + a) * (1.0 + b) * qn + om * (1.0 + e) * (1.0 + a).powi(2),
        h: 2.0 * (1.0 - a * b) * qn - 2.0 * om * (1.0 + e) * (1.0 - a * a),
    })
}

fn system_with_shift(kind: OperatorKind, params: &Parameters, dq: f64) -> CoeffSystem {
    let (a, b, d, e) = (params.a(), params.b(), params.d(), params.e());
    let (alpha, lambda) = (params.alpha(), params.lambda());
    match kind {
        OperatorKind::LinearDeriv => linear_deriv_system(a, b, d, e, alpha),
        // p → 1/p, A → −B, B → −A, α = −1.
        OperatorKind::InvSquare => linear_deriv_system(-b, -a, d, e, -1.0),
        OperatorKind::LogDeriv => log_deriv_system(a, b, d, e, alpha),
        OperatorKind::SquarePlusDeriv => square_plus_deriv_system(a, b, d, e, alpha, lambda, dq),
        OperatorKind::MixedQuadratic => mixed_quadratic_system(a, b, d, e, alpha, lambda, dq),
        OperatorKind::ConvexCombo => convex_combo_system(a, b, d, e, alpha, dq),
    }
}

/// Coefficient system whose ratio equals ψ(iρ, σ) exactly.
///
/// For the eight-coefficient operators the denominator uses (D+1), which is
/// what the half-plane map of (1+Dz)/(1+Ez) produces; see
/// [`shifted_coeff_system`] for the (D−1) variant.
pub fn coeff_system(kind: OperatorKind, params: &Parameters) -> CoeffSystem {
    system_with_shift(kind, params, params.d() + 1.0)
}

/// Coefficient system with (D−1) in the denominator entries e, g, h.
///
/// Identical to [`coeff_system`] for the five-coefficient operators. Kept for
/// auditing the closed-form K/L/M/N blocks, which are built from these values.
pub fn shifted_coeff_system(kind: OperatorKind, params: &Parameters) -> CoeffSystem {
    system_with_shift(kind, params, params.d() - 1.0)
}
