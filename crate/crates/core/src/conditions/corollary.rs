//! Closed-form δ bounds for the classical starlike subclasses.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorollaryKind {
    /// S*[λ] from the LinearDeriv theorem: A = −B = λ, D = −E = δ.
    SstarBracketLambdaLinear,
    /// S*_λ from the LinearDeriv theorem: δ = (1−λ)/2.
    SstarOrderLinear,
    /// S*(λ) from the LinearDeriv theorem: A = 1−λ, B = E = 0.
    SstarParenLinear,
    /// S*[λ] from the InvSquare theorem.
    SstarBracketLambdaInvSquare,
    /// F_c ⊂ S*(λ) from the InvSquare theorem.
    SstarOrderInvSquareFc,
    /// S*_λ from the InvSquare theorem: A = 1−2λ, B = −1, D = −E = δ.
    SstarOrderSubordInvSquare,
    /// |zp′/p| < δ implies p ≺ 1 + Az, with A = 1 − λ.
    LogDerivDisk,
}

impl CorollaryKind {
    pub const ALL: [CorollaryKind; 7] = [
        CorollaryKind::SstarBracketLambdaLinear,
        CorollaryKind::SstarOrderLinear,
        CorollaryKind::SstarParenLinear,
        CorollaryKind::SstarBracketLambdaInvSquare,
        CorollaryKind::SstarOrderInvSquareFc,
        CorollaryKind::SstarOrderSubordInvSquare,
        CorollaryKind::LogDerivDisk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorollaryKind::SstarBracketLambdaLinear => "SstarBracketLambdaLinear",
            CorollaryKind::SstarOrderLinear => "SstarOrderLinear",
            CorollaryKind::SstarParenLinear => "SstarParenLinear",
            CorollaryKind::SstarBracketLambdaInvSquare => "SstarBracketLambdaInvSquare",
            CorollaryKind::SstarOrderInvSquareFc => "SstarOrderInvSquareFc",
            CorollaryKind::SstarOrderSubordInvSquare => "SstarOrderSubordInvSquare",
            CorollaryKind::LogDerivDisk => "LogDerivDisk",
        }
    }
}

fn ratio(num: f64, radicand: f64) -> Result<f64> {
    if !(radicand > 0.0) || !num.is_finite() {
        return Err(LabError::DegenerateFormula);
    }
    Ok(num / radicand.sqrt())
}

/// δ for the selected corollary at λ ∈ [0, 1).
pub fn corollary_delta(kind: CorollaryKind, lambda: f64, g: f64, h: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(LabError::InvalidParameters(format!("lambda must lie in [0, 1) (got {lambda})")));
    }
    let l = lambda;
    let ol = 1.0 - l;
    match kind {
        CorollaryKind::SstarBracketLambdaLinear => ratio(
            l * g,
            ((1.0 + l).powi(2) - l).powi(2) * g * g + ol.powi(4) * h * h
                - 2.0 * ol.powi(2) * ((1.0 + l).powi(2) + l) * g * h,
        ),
        CorollaryKind::SstarOrderLinear => Ok(ol / 2.0),
        CorollaryKind::SstarParenLinear => {
            if g - h <= 0.0 {
                return Err(LabError::DegenerateFormula);
            }
            Ok(ol * g / (g - h))
        }
        CorollaryKind::SstarBracketLambdaInvSquare => ratio(
            l * g,
            ((1.0 + l).powi(2) + l).powi(2) * g * g + ol.powi(4) * h * h
                - 2.0 * ol.powi(2) * ((1.0 + l).powi(2) - l) * g * h,
        ),
        CorollaryKind::SstarOrderInvSquareFc => {
            let den = ((2.0 - l).powi(2) * g - l * l * h).abs();
            if den == 0.0 {
                return Err(LabError::DegenerateFormula);
            }
            Ok(ol * g / den)
        }
        CorollaryKind::SstarOrderSubordInvSquare => ratio(
            ol * g,
            ol.powi(2) * (5.0 - 4.0 * l).powi(2) * g * g + 16.0 * l * l * h * h
                - 8.0 * l * l * ol * (3.0 - 4.0 * l) * g * h,
        ),
        CorollaryKind::LogDerivDisk => {
            let a = ol;
            ratio(a * g, (1.0 - a).powi(2) * g * g + (1.0 + a).powi(2) * h * h - 2.0 * (1.0 + a * a) * g * h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{check_lemma, compute_gh, Lemma};
    use crate::params::{validate_params, RawParameters};

    #[test]
    fn classical_constants() {
        for i in 0..10 {
            let l = i as f64 / 10.0;
            let d = |k| corollary_delta(k, l, 4.0, 0.0).unwrap();
            assert!((d(CorollaryKind::SstarParenLinear) - (1.0 - l)).abs() < 1e-12);
            assert!((d(CorollaryKind::SstarOrderInvSquareFc) - (1.0 - l) / (2.0 - l).powi(2)).abs() < 1e-12);
            assert!((d(CorollaryKind::SstarOrderSubordInvSquare) - 1.0 / (5.0 - 4.0 * l)).abs() < 1e-12);
            if l > 0.0 {
                assert!((d(CorollaryKind::SstarBracketLambdaInvSquare) - l / (1.0 + 3.0 * l + l * l)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        assert_eq!(corollary_delta(CorollaryKind::LogDerivDisk, 0.0, 8.0, 4.0), Err(LabError::DegenerateFormula));
        assert!(corollary_delta(CorollaryKind::SstarParenLinear, 1.0, 4.0, 0.0).is_err());
        assert!(corollary_delta(CorollaryKind::SstarParenLinear, -0.1, 4.0, 0.0).is_err());
        assert_eq!(corollary_delta(CorollaryKind::SstarBracketLambdaLinear, 0.0, 4.0, 0.0).unwrap(), 0.0);
    }

    fn margin(lemma: Lemma, raw: RawParameters) -> f64 {
        check_lemma(lemma, &validate_params(raw).unwrap()).margin
    }

    fn raw(a: f64, b: f64, d: f64, e: f64, alpha: f64, n: u32, mu: f64) -> RawParameters {
        RawParameters { a, b, d, e, alpha, lambda: 1.0, n, mu }
    }

    #[test]
    fn bracket_delta_is_the_root_of_the_linear_condition() {
        for (n, mp) in [(1, 2.0), (2, 1.0), (3, 0.5), (2, 2.0)] {
            let gh = compute_gh(n, mp);
            for l in [0.2, 0.5, 0.8] {
                let d = corollary_delta(CorollaryKind::SstarBracketLambdaLinear, l, gh.g, gh.h).unwrap();
                let m = margin(Lemma::L21, raw(l, -l, d, -d, 1.0, n, mp * l));
                assert!(m.abs() < 1e-12, "n={n} mu'={mp} lambda={l}: {m}");
            }
        }
    }

    #[test]
    fn subordinate_order_delta_is_a_root_only_at_h_zero() {
        // Root of the inverse-square condition at A = 1−2λ, B = −1, D = −E = δ.
        let root = |l: f64, g: f64, h: f64| {
            let ol = 1.0 - l;
            ol * g
                / (ol.powi(2) * (5.0 - 4.0 * l).powi(2) * g * g + 16.0 * l.powi(4) * h * h
                    - 8.0 * l * l * ol * (3.0 - 4.0 * l) * g * h)
                    .sqrt()
        };
        for (n, mp) in [(1, 2.0), (2, 1.0), (3, 0.5), (2, 2.0)] {
            let gh = compute_gh(n, mp);
            for l in [0.2, 0.5, 0.8] {
                let a = 1.0 - 2.0 * l;
                let mu = mp * (a + 1.0) / 2.0;
                let closed = corollary_delta(CorollaryKind::SstarOrderSubordInvSquare, l, gh.g, gh.h).unwrap();
                let exact = root(l, gh.g, gh.h);
                assert!(margin(Lemma::L22, raw(a, -1.0, exact, -exact, 1.0, n, mu)).abs() < 1e-12);
                let m = margin(Lemma::L22, raw(a, -1.0, closed.min(1.0), -closed.min(1.0), 1.0, n, mu));
                if gh.h == 0.0 {
                    assert!(m.abs() < 1e-12);
                    assert_eq!(closed, exact);
                } else {
                    assert!(m > 1e-3, "n={n} mu'={mp} lambda={l}: {m}");
                }
            }
        }
    }

    #[test]
    fn classical_order_and_log_derivative_roots() {
        for l in [0.2, 0.5, 0.8] {
            let d = corollary_delta(CorollaryKind::SstarParenLinear, l, 4.0, 0.0).unwrap();
            assert!(margin(Lemma::L21, raw(1.0 - l, 0.0, d, 0.0, 1.0, 1, 1.0 - l)).abs() < 1e-12);
            let d = corollary_delta(CorollaryKind::LogDerivDisk, l, 4.0, 0.0).unwrap();
            if d <= 1.0 {
                let p = validate_params(raw(1.0 - l, 0.0, d, 0.0, 1.0, 1, 1.0 - l)).unwrap();
                let r = check_lemma(Lemma::L23, &p);
                assert!(r.margin.abs() < 1e-12);
                // The corollaries sit at E = 0, where the strict precondition αE < 0 fails.
                assert!(!r.preconditions_hold);
            }
        }
    }
}
