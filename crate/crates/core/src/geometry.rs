//! Möbius images of the unit disk and the sampled subordination predicate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{LabError, Result};

/// Image of 𝔻 under w = (1 + Xz)/(1 + Yz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DiskOrHalfPlane {
    Disk { center: Complex64, radius: f64 },
    /// The open half-plane Re w > boundary_re.
    HalfPlane { boundary_re: f64 },
}

/// Region bounded by the image of the unit circle under (1 + Xz)/(1 + Yz).
///
/// Requires −1 ≤ Y < X ≤ 1. Y = −1 gives a half-plane, never a large disk.
pub fn janowski_image(x: f64, y: f64) -> Result<DiskOrHalfPlane> {
    if !x.is_finite() || !y.is_finite() || !(-1.0..=1.0).contains(&x) || !(-1.0..=1.0).contains(&y) {
        return Err(LabError::InvalidRegion(format!(
            "Möbius coefficients must lie in [-1, 1] (got X={x}, Y={y})"
        )));
    }
    if x <= y {
        return Err(LabError::InvalidRegion(format!(
            "numerator coefficient must exceed denominator coefficient (got X={x}, Y={y})"
        )));
    }
    if y == -1.0 {
        return Ok(DiskOrHalfPlane::HalfPlane {
            boundary_re: (1.0 - x) / 2.0,
        });
    }
    let s = (1.0 - y) * (1.0 + y);
    Ok(DiskOrHalfPlane::Disk {
        center: Complex64::new((1.0 - x * y) / s, 0.0),
        radius: (x - y) / s,
    })
}

/// Signed distance to the boundary; positive means strictly inside.
pub fn region_contains(region: &DiskOrHalfPlane, w: Complex64) -> f64 {
    match *region {
        DiskOrHalfPlane::Disk { center, radius } => radius - (w - center).norm(),
        DiskOrHalfPlane::HalfPlane { boundary_re } => w.re - boundary_re,
    }
}

/// How far `inner` sits inside `outer`: nonnegative iff inner ⊆ outer.
///
/// Half-plane in disk is never contained and reports −∞.
pub fn containment_margin(outer: &DiskOrHalfPlane, inner: &DiskOrHalfPlane) -> f64 {
    use DiskOrHalfPlane::*;
    match (*outer, *inner) {
        (Disk { center: c1, radius: r1 }, Disk { center: c2, radius: r2 }) => r1 - ((c1 - c2).norm() + r2),
        (HalfPlane { boundary_re: b1 }, HalfPlane { boundary_re: b2 }) => b2 - b1,
        (HalfPlane { boundary_re }, Disk { center, radius }) => center.re - radius - boundary_re,
        (Disk { .. }, HalfPlane { .. }) => f64::NEG_INFINITY,
    }
}

/// Values of a function sampled at z_j = r·exp(2πij/m), j = 0..m.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSamples {
    pub radius: f64,
    pub values: Vec<Complex64>,
}

impl CircleSamples {
    pub fn location(&self, index: usize) -> Complex64 {
        let m = self.values.len() as f64;
        Complex64::from_polar(self.radius, TAU * index as f64 / m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubordinationVerdict {
    pub holds: bool,
    pub worst_margin: f64,
    /// The z location on the sampling circle where the margin is smallest.
    pub worst_point: Complex64,
}

impl SubordinationVerdict {
    pub fn from_margin(worst_margin: f64, worst_point: Complex64, tol: f64) -> Self {
        Self {
            holds: worst_margin > -tol,
            worst_margin,
            worst_point,
        }
    }
}

/// Containment of the sampled image in `region`.
///
/// `holds` iff the worst margin exceeds −tol; a negative `tol` demands clearance.
/// Ties keep the first sample.
pub fn is_subordinate_numeric(samples: &CircleSamples, region: &DiskOrHalfPlane, tol: f64) -> Result<SubordinationVerdict> {
    if samples.values.is_empty() {
        return Err(LabError::EmptySamples);
    }
    let mut worst = f64::INFINITY;
    let mut worst_idx = 0;
    for (j, w) in samples.values.iter().enumerate() {
        let m = region_contains(region, *w);
        // NaN samples count as outside.
        let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
        if m < worst {
            worst = m;
            worst_idx = j;
        }
    }
    Ok(SubordinationVerdict::from_margin(worst, samples.location(worst_idx), tol))
}
