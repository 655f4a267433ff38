//! Compensated accumulation for cancellation-heavy polynomial blocks.

/// Error-free transformation a + b = s + err.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free transformation a·b = p + err (exact via fused multiply-add).
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Sum of terms and exact products carried in double-double style.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    hi: f64,
    lo: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) -> &mut Self {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
        self
    }

    /// Adds the exactly rounded-once product a·b.
    pub fn add_product(&mut self, a: f64, b: f64) -> &mut Self {
        let (p, e) = two_prod(a, b);
        self.add(p);
        self.lo += e;
        self
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Σ aᵢ·bᵢ with compensated accumulation.
pub fn dot(pairs: &[(f64, f64)]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &(a, b) in pairs {
        acc.add_product(a, b);
    }
    acc.value()
}

/// Σ xᵢ with compensated accumulation.
pub fn sum(terms: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in terms {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let naive = 1e16 + 1.0 - 1e16;
        assert_eq!(naive, 0.0);
        assert_eq!(sum(&[1e16, 1.0, -1e16]), 1.0);
    }

    #[test]
    fn exact_products() {
        let a = 1.0 + 2f64.powi(-30);
        // a² − (1 + 2^-29) = 2^-60, lost by naive evaluation.
        let v = dot(&[(a, a), (-1.0, 1.0 + 2f64.powi(-29))]);
        assert_eq!(v, 2f64.powi(-60));
    }
}
