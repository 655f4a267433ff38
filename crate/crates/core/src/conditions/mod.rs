//! Closed-form sufficient conditions and their building blocks.

mod corollary;
mod klmn;
mod quadmax;
mod recipe;

pub use corollary::{corollary_delta, CorollaryKind};
pub use klmn::{check_klmn_condition, compute_klmn, klmn_from_system, KlmnLemma, Klmn};
pub use quadmax::{half_line_quad_max, QuadMaxResult};
pub use recipe::{reduced_quadratic, system_recipe, SystemRecipe};

use serde::{Deserialize, Serialize};

use crate::numeric::{dot, CompensatedSum};
use crate::operators::OperatorKind;
use crate::params::Parameters;

/// Relative width of the "boundary, inconclusive" band around a zero margin.
pub const BOUNDARY_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gh {
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

/// G = n(2+μ′)+(2−μ′), H = (n−1)(2+μ′)+(2−μ′).
pub fn compute_gh(n: u32, mu_prime: f64) -> Gh {
    let n = n as f64;
    Gh {
        g: n * (2.0 + mu_prime) + (2.0 - mu_prime),
        h: (n - 1.0) * (2.0 + mu_prime) + (2.0 - mu_prime),
    }
}

impl Parameters {
    pub fn gh(&self) -> Gh {
        compute_gh(self.n(), self.mu_prime())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lemma {
    #[serde(rename = "2.1")]
    L21,
    #[serde(rename = "2.2")]
    L22,
    #[serde(rename = "2.3")]
    L23,
    #[serde(rename = "2.4")]
    L24,
    #[serde(rename = "2.5")]
    L25,
    #[serde(rename = "2.6")]
    L26,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [Lemma::L21, Lemma::L22, Lemma::L23, Lemma::L24, Lemma::L25, Lemma::L26];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::L21 => "2.1",
            Lemma::L22 => "2.2",
            Lemma::L23 => "2.3",
            Lemma::L24 => "2.4",
            Lemma::L25 => "2.5",
            Lemma::L26 => "2.6",
        }
    }

    pub fn from_id(id: &str) -> Option<Lemma> {
        Lemma::ALL.into_iter().find(|l| l.id() == id)
    }

    pub fn operator(self) -> OperatorKind {
        match self {
            Lemma::L21 => OperatorKind::LinearDeriv,
            Lemma::L22 => OperatorKind::InvSquare,
            Lemma::L23 => OperatorKind::LogDeriv,
            Lemma::L24 => OperatorKind::SquarePlusDeriv,
            Lemma::L25 => OperatorKind::MixedQuadratic,
            Lemma::L26 => OperatorKind::ConvexCombo,
        }
    }

    pub fn for_operator(kind: OperatorKind) -> Lemma {
        match kind {
            OperatorKind::LinearDeriv => Lemma::L21,
            OperatorKind::InvSquare => Lemma::L22,
            OperatorKind::LogDeriv => Lemma::L23,
            OperatorKind::SquarePlusDeriv => Lemma::L24,
            OperatorKind::MixedQuadratic => Lemma::L25,
            OperatorKind::ConvexCombo => Lemma::L26,
        }
    }

    pub fn klmn(self) -> Option<KlmnLemma> {
        match self {
            Lemma::L24 => Some(KlmnLemma::L24),
            Lemma::L25 => Some(KlmnLemma::L25),
            Lemma::L26 => Some(KlmnLemma::L26),
            _ => None,
        }
    }
}

/// The main inequalities assume n > 1; n = 1 is handled by reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterScope {
    NGreaterThanOne,
    NEqualsOneReduction,
}

impl ParameterScope {
    pub fn of(n: u32) -> Self {
        if n > 1 {
            ParameterScope::NGreaterThanOne
        } else {
            ParameterScope::NEqualsOneReduction
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    pub name: String,
    pub value: f64,
    pub holds: bool,
}

impl Precondition {
    fn new(name: &str, value: f64, holds: bool) -> Self {
        Self {
            name: name.to_string(),
            value,
            holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub lemma: Lemma,
    pub preconditions: Vec<Precondition>,
    pub preconditions_hold: bool,
    pub main_inequality_lhs: f64,
    pub main_inequality_rhs: f64,
    /// rhs − lhs of the ≤-type main inequality.
    pub margin: f64,
    /// |margin| is within rounding of zero relative to the inequality's scale.
    pub boundary_inconclusive: bool,
    pub verdict: bool,
    pub scope: ParameterScope,
}

impl ConditionReport {
    fn assemble(lemma: Lemma, n: u32, preconditions: Vec<Precondition>, lhs: f64, rhs: f64, margin: f64) -> Self {
        let preconditions_hold = preconditions.iter().all(|p| p.holds);
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        Self {
            lemma,
            preconditions_hold,
            preconditions,
            main_inequality_lhs: lhs,
            main_inequality_rhs: rhs,
            margin,
            boundary_inconclusive: margin.abs() <= BOUNDARY_BAND * scale,
            verdict: preconditions_hold && margin >= 0.0,
            scope: ParameterScope::of(n),
        }
    }
}

/// Sum of signed products, split into its positive (rhs) and negated negative (lhs) parts.
fn split_margin(lhs_terms: &[(f64, f64)], rhs_terms: &[(f64, f64)]) -> (f64, f64, f64) {
    let lhs = dot(lhs_terms);
    let rhs = dot(rhs_terms);
    let mut acc = CompensatedSum::new();
    for &(a, b) in rhs_terms {
        acc.add_product(a, b);
    }
    for &(a, b) in lhs_terms {
        acc.add_product(-a, b);
    }
    (lhs, rhs, acc.value())
}

/// Condition (00) with precondition αE < 0.
pub fn check_lemma_2_1(params: &Parameters) -> ConditionReport {
    let (a, b, d, e, alpha) = (params.a(), params.b(), params.d(), params.e(), params.alpha());
    let Gh { g, h } = params.gh();
    let de = d - e;
    let u = dot(&[(de, (1.0 - b).powi(2)), (alpha * e, a - b)]);
    let v = dot(&[(de, (1.0 - b).powi(2)), (-alpha * e, a - b)]);
    let w = de * (1.0 + b).powi(2);
    let (lhs, rhs, margin) = split_margin(
        &[(u * g, u * g), (w * h, w * h)],
        &[(alpha * (a - b) * g, alpha * (a - b) * g), (2.0 * w, v * g * h)],
    );
    let pre = vec![Precondition::new("alpha*E < 0", alpha * e, alpha * e < 0.0)];
    ConditionReport::assemble(Lemma::L21, params.n(), pre, lhs, rhs, margin)
}

/// Condition (2-11) with precondition 0 < E (which makes αE < 0 at α = −1).
pub fn check_lemma_2_2(params: &Parameters) -> ConditionReport {
    let (a, b, d, e) = (params.a(), params.b(), params.d(), params.e());
    let Gh { g, h } = params.gh();
    let de = d - e;
    let u = dot(&[(de, (1.0 + a).powi(2)), (-e, a - b)]);
    let v = dot(&[(de, (1.0 + a).powi(2)), (e, a - b)]);
    let w = de * (1.0 - a).powi(2);
    let (lhs, rhs, margin) = split_margin(
        &[(u * g, u * g), (w * h, w * h)],
        &[((a - b) * g, (a - b) * g), (2.0 * w, v * g * h)],
    );
    let pre = vec![Precondition::new("E > 0", e, e > 0.0)];
    ConditionReport::assemble(Lemma::L22, params.n(), pre, lhs, rhs, margin)
}

/// The log-derivative inequality with precondition αE < 0.
pub fn check_lemma_2_3(params: &Parameters) -> ConditionReport {
    let (a, b, d, e, alpha) = (params.a(), params.b(), params.d(), params.e(), params.alpha());
    let Gh { g, h } = params.gh();
    let de = d - e;
    let u = dot(&[(de, (1.0 - a) * (1.0 - b)), (alpha * e, a - b)]);
    let w = de * (1.0 + a) * (1.0 + b);
    let s = (1.0 - a * b).powi(2) + (a - b).powi(2);
    let v = dot(&[(de, s), (alpha * e * (a - b), (1.0 + a) * (1.0 + b))]);
    let al = alpha * (a - b);
    // (u² − α²(A−B)²)G² + w²H² ≤ 2(D−E)·v·GH; the α² term moves to the right.
    let (lhs, rhs, margin) = split_margin(
        &[(u * g, u * g), (w * h, w * h)],
        &[(al * g, al * g), (2.0 * de, v * g * h)],
    );
    let pre = vec![Precondition::new("alpha*E < 0", alpha * e, alpha * e < 0.0)];
    ConditionReport::assemble(Lemma::L23, params.n(), pre, lhs - al * al * g * g, rhs - al * al * g * g, margin)
}

/// Dispatches to the checker of `lemma`.
pub fn check_lemma(lemma: Lemma, params: &Parameters) -> ConditionReport {
    match lemma {
        Lemma::L21 => check_lemma_2_1(params),
        Lemma::L22 => check_lemma_2_2(params),
        Lemma::L23 => check_lemma_2_3(params),
        Lemma::L24 => check_klmn_condition(KlmnLemma::L24, params),
        Lemma::L25 => check_klmn_condition(KlmnLemma::L25, params),
        Lemma::L26 => check_klmn_condition(KlmnLemma::L26, params),
    }
}
