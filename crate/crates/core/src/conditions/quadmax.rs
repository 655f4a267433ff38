//! Supremum of f(σ) = xσ² + yσ + z over the half-line σ ≤ −½.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadMaxResult {
    /// +∞ when the supremum is unbounded.
    pub max_value: f64,
    /// −∞ when the supremum is unbounded.
    pub argmax_sigma: f64,
    /// f(−½) = (4z − 2y + x)/4.
    pub formula_value: f64,
    /// True exactly when the maximum is attained at σ = −½.
    pub agrees_with_formula: bool,
    pub unbounded: bool,
}

/// Exact case analysis on the sign of x and the vertex −y/(2x).
pub fn half_line_quad_max(x: f64, y: f64, z: f64) -> QuadMaxResult {
    let formula = (4.0 * z - 2.0 * y + x) / 4.0;
    let at_half = QuadMaxResult {
        max_value: formula,
        argmax_sigma: -0.5,
        formula_value: formula,
        agrees_with_formula: true,
        unbounded: false,
    };
    let unbounded = QuadMaxResult {
        max_value: f64::INFINITY,
        argmax_sigma: f64::NEG_INFINITY,
        formula_value: formula,
        agrees_with_formula: false,
        unbounded: true,
    };
    if x > 0.0 || (x == 0.0 && y < 0.0) {
        return unbounded;
    }
    if x == 0.0 {
        return at_half;
    }
    let vertex = -y / (2.0 * x);
    if vertex < -0.5 {
        QuadMaxResult {
            max_value: z - y * y / (4.0 * x),
            argmax_sigma: vertex,
            formula_value: formula,
            agrees_with_formula: false,
            unbounded: false,
        }
    } else {
        at_half
    }
}
