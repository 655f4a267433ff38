//! Truncated power series and evaluation on circles.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::TAU;
use std::sync::Arc;

use crate::geometry::CircleSamples;

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Coefficients of z·p′(z).
pub fn z_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().enumerate().map(|(k, c)| c * k as f64).collect()
}

/// Product truncated to `len` coefficients.
pub fn mul(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Quotient a/b truncated to `len` coefficients; requires b₀ ≠ 0.
pub fn div(a: &[Complex64], b: &[Complex64], len: usize) -> Option<Vec<Complex64>> {
    let b0 = *b.first()?;
    if b0.norm() == 0.0 {
        return None;
    }
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for k in 0..len {
        let mut acc = a.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            acc -= b[j] * out[k - j];
        }
        out[k] = acc / b0;
    }
    Some(out)
}

/// Taylor coefficients of (1 + Xz)/(1 + Yz) up to z^degree.
pub fn mobius_series(x: f64, y: f64, degree: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(degree + 1);
    out.push(Complex64::new(1.0, 0.0));
    // c_k = (X − Y)(−Y)^{k−1}
    let mut pow = 1.0;
    for _ in 1..=degree {
        out.push(Complex64::new((x - y) * pow, 0.0));
        pow *= -y;
    }
    out
}

/// Evaluates polynomials at the m-th roots of unity scaled by r via one FFT.
///
/// Coefficients beyond m are folded modulo m, which is exact for point values.
#[derive(Clone)]
pub struct CircleEvaluator {
    m: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CircleEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CircleEvaluator").field("m", &self.m).finish()
    }
}

impl CircleEvaluator {
    pub fn new(m: usize) -> Self {
        assert!(m > 0, "sample count must be positive");
        let fft = FftPlanner::new().plan_fft_inverse(m);
        Self { m, fft }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// p(r·e^{2πij/m}) for j = 0..m.
    pub fn values(&self, coeffs: &[Complex64], r: f64) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        let mut rk = 1.0;
        for (k, c) in coeffs.iter().enumerate() {
            buf[k % self.m] += c * rk;
            rk *= r;
        }
        self.fft.process(&mut buf);
        buf
    }

    pub fn samples(&self, coeffs: &[Complex64], r: f64) -> CircleSamples {
        CircleSamples {
            radius: r,
            values: self.values(coeffs, r),
        }
    }

    pub fn points(&self, r: f64) -> Vec<Complex64> {
        (0..self.m)
            .map(|j| Complex64::from_polar(r, TAU * j as f64 / self.m as f64))
            .collect()
    }

    /// Samples an arbitrary function at the same points.
    pub fn samples_fn(&self, r: f64, f: impl Fn(Complex64) -> Complex64) -> CircleSamples {
        CircleSamples {
            radius: r,
            values: self.points(r).into_iter().map(f).collect(),
        }
    }
}
