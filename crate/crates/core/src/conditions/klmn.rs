//! K/L/M/N blocks of the eight-coefficient lemmas.

use serde::{Deserialize, Serialize};

use super::{ConditionReport, Gh, Lemma, Precondition};
use crate::numeric::dot;
use crate::operators::EightCoeffs;
use crate::params::Parameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KlmnLemma {
    L24,
    L25,
    L26,
}

impl KlmnLemma {
    pub fn lemma(self) -> Lemma {
        match self {
            KlmnLemma::L24 => Lemma::L24,
            KlmnLemma::L25 => Lemma::L25,
            KlmnLemma::L26 => Lemma::L26,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Klmn {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub lemma: KlmnLemma,
}

impl Klmn {
    /// N·G² − 2M·G·H + K·H².
    pub fn combination(&self, gh: Gh) -> f64 {
        dot(&[(self.n, gh.g * gh.g), (-2.0 * self.m, gh.g * gh.h), (self.k, gh.h * gh.h)])
    }
}

fn klmn_24(a: f64, b: f64, d: f64, e: f64, al: f64, lam: f64) -> (f64, f64, f64, f64) {
    let dm = d - 1.0;
    let ab = a - b;
    let k = (dm * (1.0 + b).powi(2) - al * e * (1.0 + a).powi(2)).powi(2) - al * al * (1.0 + a).powi(4);
    let l = lam * ab * (e * dm * (1.0 + b).powi(2) + al * (1.0 - e * e) * (1.0 + a).powi(2));
    let m = (dm * (1.0 - b * b) - al * e * (1.0 - a * a)).powi(2) + 4.0 * al * e * dm * ab * ab
        - al * al * (1.0 - a * a).powi(2)
        - lam * ab * (al * (1.0 - e * e) * (1.0 + a).powi(2) + e * dm * (1.0 + b).powi(2));
    let n = (dm * (1.0 - b).powi(2) - al * e * (1.0 - a).powi(2)).powi(2)
        - (al * (1.0 - a).powi(2) - lam * ab).powi(2)
        - lam * ab * (e * e * (2.0 * al * (1.0 - a).powi(2) - lam * ab) - 2.0 * e * dm * (1.0 - b).powi(2));
    (k, l, m, n)
}

fn klmn_25(a: f64, b: f64, d: f64, e: f64, al: f64, lam: f64) -> (f64, f64, f64, f64) {
    let dm = d - 1.0;
    let ab = a - b;
    let om = 1.0 - al;
    let ee = 1.0 - e * e;
    let k = (dm * (1.0 + b).powi(2) - om * e * (1.0 + a).powi(2)).powi(2)
        - om * om * (1.0 + a).powi(4)
        - al * (1.0 + a)
            * (1.0 + b)
            * (2.0 * e * (1.0 + b).powi(2) + al * ee * (1.0 + a) * (1.0 + b) + 2.0 * om * ee * (1.0 + a).powi(2));
    let l = lam * ab * (e * dm * (1.0 + b).powi(2) + al * ee * (1.0 + a) * (1.0 + b) + om * ee * (1.0 + a).powi(2));
    let s = ab * ab + (1.0 - a * b).powi(2);
    let m = (dm * (1.0 - b * b) - e * om * (1.0 - a * a)).powi(2)
        - om * om * (1.0 - a * a).powi(2)
        - e * dm
            * (2.0 * (1.0 - b * b) * (om * (1.0 - a * a) + al * (1.0 - a * b)) - om * s + lam * ab * (1.0 + b).powi(2))
        - ee * (2.0 * al * (om * (1.0 - a * a) * (1.0 - a * b))
            + al * al * s
            + lam * ab * (1.0 + a) * (om * (1.0 + a) + al * (1.0 + b)));
    // The trailing 2E(D−1)(1−B)² term is kept verbatim.
    let n = ((dm * (1.0 - b).powi(2) - om * e * (1.0 - a).powi(2)).powi(2) - om * om * (1.0 - a).powi(4))
        - ee * ((al * (1.0 - a) * (1.0 - b) - lam * ab).powi(2)
            - 2.0 * om * (1.0 - a).powi(2) * (lam * ab - al * (1.0 - a) * (1.0 - b)))
        + 2.0 * e * dm * (1.0 - b).powi(2);
    (k, l, m, n)
}

fn klmn_26(a: f64, b: f64, d: f64, e: f64, al: f64, _lam: f64) -> (f64, f64, f64, f64) {
    let dm = d - 1.0;
    let ab = a - b;
    let om = 1.0 - al;
    let ee = 1.0 - e * e;
    let sq = (dm - al * e).powi(2) - al * al;
    let k = (1.0 + a).powi(2) * (1.0 + b).powi(2) * sq
        - om * (1.0 + a).powi(3) * ee * (2.0 * al * (1.0 + b) + om * (1.0 + a));
    let l = al * (e * dm * (1.0 + b) + ee * (al * (1.0 + b) + om * (1.0 + a)));
    let m = sq * (ab * ab + (1.0 - a * b).powi(2))
        - (1.0 + a) * (e * dm + al * ee) * (2.0 * om * (1.0 - a) * (1.0 - a * b) + al * (1.0 + b) * ab)
        - om * ee * (1.0 + a) * (om * (1.0 - a) * (1.0 - a * a) + al * (1.0 + a) * ab);
    let n = (1.0 - a).powi(2) * (1.0 - b).powi(2) * sq + (e * e - 1.0) * (om * (1.0 - a).powi(2) - al * ab).powi(2)
        + 2.0 * (1.0 - a) * (1.0 - b) * (e * dm + al * ee) * (al * ab - om * (1.0 - a).powi(2));
    (k, l, m, n)
}

/// The closed-form K, L, M, N of the selected lemma.
pub fn compute_klmn(lemma: KlmnLemma, params: &Parameters) -> Klmn {
    let args = (params.a(), params.b(), params.d(), params.e(), params.alpha(), params.lambda());
    let (k, l, m, n) = match lemma {
        KlmnLemma::L24 => klmn_24(args.0, args.1, args.2, args.3, args.4, args.5),
        KlmnLemma::L25 => klmn_25(args.0, args.1, args.2, args.3, args.4, args.5),
        KlmnLemma::L26 => klmn_26(args.0, args.1, args.2, args.3, args.4, args.5),
    };
    Klmn { k, l, m, n, lemma }
}

/// Blocks implied by an eight-coefficient system:
/// K = cg, L = (bg+cf)/4, M = (ag+ce+hd − (bg+cf)/2)/2, N = ae − (af+be)/2 + bf/4.
///
/// With these, N·G² − 2M·G·H + K·H² = G²·f(−½) for the reduced quadratic f.
pub fn klmn_from_system(sys: &EightCoeffs, lemma: KlmnLemma) -> Klmn {
    let EightCoeffs { a, b, c, d, e, f, g, h } = *sys;
    let cross = dot(&[(b, g), (c, f)]);
    Klmn {
        k: c * g,
        l: cross / 4.0,
        m: (dot(&[(a, g), (c, e), (h, d)]) - cross / 2.0) / 2.0,
        n: dot(&[(a, e), (-0.5 * a, f), (-0.5 * b, e), (0.25 * b, f)]),
        lemma,
    }
}

/// K ≥ 0, L < 0, M > 0 and N·G² − 2M·G·H + K·H² ≤ 0.
pub fn check_klmn_condition(lemma: KlmnLemma, params: &Parameters) -> ConditionReport {
    let blocks = compute_klmn(lemma, params);
    let lhs = blocks.combination(params.gh());
    let pre = vec![
        Precondition::new("K >= 0", blocks.k, blocks.k >= 0.0),
        Precondition::new("L < 0", blocks.l, blocks.l < 0.0),
        Precondition::new("M > 0", blocks.m, blocks.m > 0.0),
    ];
    ConditionReport::assemble(lemma.lemma(), params.n(), pre, lhs, 0.0, -lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{coeff_system, shifted_coeff_system, OperatorKind};
    use crate::params::{validate_params, RawParameters};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(a: f64, b: f64, d: f64, e: f64, alpha: f64, lambda: f64) -> Parameters {
        validate_params(RawParameters { a, b, d, e, alpha, lambda, n: 2, mu: (a - b) / 2.0 }).unwrap()
    }

    fn random(rng: &mut ChaCha8Rng) -> Parameters {
        let (x, y): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (u, v): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        params(x.max(y), x.min(y), u.max(v), u.min(v), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= 1e-10 * (1.0 + x.abs().max(y.abs()))
    }

    #[test]
    fn l24_alpha_zero_k_is_square() {
        let p = params(0.5, -0.2, 0.3, -0.7, 0.0, 1.3);
        let k = compute_klmn(KlmnLemma::L24, &p).k;
        assert_eq!(k, ((0.3 - 1.0) * (1.0f64 - 0.2).powi(2)).powi(2));
        assert!(k >= 0.0);
    }

    #[test]
    fn l26_alpha_one_drops_one_minus_alpha_terms() {
        let (a, b, d, e) = (0.5, -0.2, 0.3, -0.7);
        let blk = compute_klmn(KlmnLemma::L26, &params(a, b, d, e, 1.0, 0.4));
        let sq = ((d - 1.0) - e).powi(2) - 1.0;
        assert!(close(blk.k, (1.0 + a).powi(2) * (1.0 + b).powi(2) * sq));
        assert!(close(blk.n, (1.0 - a).powi(2) * (1.0 - b).powi(2) * sq + (e * e - 1.0) * (a - b).powi(2)
            + 2.0 * (1.0 - a) * (1.0 - b) * (e * (d - 1.0) + 1.0 - e * e) * (a - b)));
    }

    #[test]
    fn l25_alpha_zero_matches_l24_alpha_one_in_k_and_l_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut mn_mismatch = 0;
        for _ in 0..50 {
            let p = random(&mut rng);
            let l25 = compute_klmn(KlmnLemma::L25, &p.with_alpha_lambda(0.0, p.lambda()).unwrap());
            let l24 = compute_klmn(KlmnLemma::L24, &p.with_alpha_lambda(1.0, p.lambda()).unwrap());
            assert!(close(l25.k, l24.k));
            assert!(close(l25.l, l24.l));
            if !close(l25.m, l24.m) || !close(l25.n, l24.n) {
                mn_mismatch += 1;
            }
        }
        assert!(mn_mismatch > 40);
    }

    #[test]
    fn l24_closed_form_blocks_come_from_shifted_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let p = random(&mut rng);
            let closed = compute_klmn(KlmnLemma::L24, &p);
            let sys = shifted_coeff_system(OperatorKind::SquarePlusDeriv, &p).as_eight();
            let derived = klmn_from_system(&sys, KlmnLemma::L24);
            assert!(close(closed.k, derived.k), "{closed:?} {derived:?}");
            assert!(close(closed.l, derived.l));
            assert!(close(closed.m, derived.m));
            assert!(close(closed.n, derived.n));
        }
    }

    #[test]
    fn l25_l26_closed_form_blocks_disagree_with_their_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let (mut k25, mut n25, mut k26, mut m26, mut n26) = (0, 0, 0, 0, 0);
        for _ in 0..100 {
            let p = random(&mut rng);
            let s25 = klmn_from_system(&shifted_coeff_system(OperatorKind::MixedQuadratic, &p).as_eight(), KlmnLemma::L25);
            let c25 = compute_klmn(KlmnLemma::L25, &p);
            assert!(close(c25.l, s25.l));
            k25 += !close(c25.k, s25.k) as usize;
            n25 += !close(c25.n, s25.n) as usize;
            let s26 = klmn_from_system(&shifted_coeff_system(OperatorKind::ConvexCombo, &p).as_eight(), KlmnLemma::L26);
            let c26 = compute_klmn(KlmnLemma::L26, &p);
            // L26's closed-form L is the system block over the positive factor (A−B)(1+A).
            assert!(close(c26.l * (p.a() - p.b()) * (1.0 + p.a()), s26.l), "{} {}", c26.l, s26.l);
            k26 += !close(c26.k, s26.k) as usize;
            m26 += !close(c26.m, s26.m) as usize;
            n26 += !close(c26.n, s26.n) as usize;
        }
        assert!(k25 > 90 && n25 > 90, "{k25} {n25}");
        assert!(k26 > 90, "{k26}");
        assert_eq!((m26, n26), (0, 0));
    }

    #[test]
    fn system_blocks_reproduce_reduced_quadratic_at_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..50 {
            let p = random(&mut rng);
            let sys = coeff_system(OperatorKind::ConvexCombo, &p);
            let blocks = klmn_from_system(&sys.as_eight(), KlmnLemma::L26);
            let gh = p.gh();
            let (x, y, z) = crate::conditions::reduced_quadratic(&sys.quartic_form(), p.n(), p.mu_prime());
            let f_half = x / 4.0 - y / 2.0 + z;
            assert!(close(blocks.combination(gh), gh.g * gh.g * f_half));
        }
    }

    #[test]
    fn check_reports_signs_and_margin() {
        let p = params(0.5, -0.2, 0.3, -0.7, 0.4, 1.3);
        let r = check_klmn_condition(KlmnLemma::L24, &p);
        let blk = compute_klmn(KlmnLemma::L24, &p);
        assert_eq!(r.preconditions.len(), 3);
        assert_eq!(r.preconditions[1].holds, blk.l < 0.0);
        assert_eq!(r.main_inequality_rhs, 0.0);
        assert_eq!(r.margin, -r.main_inequality_lhs);
    }
}
