//! Scalar parameters of one lemma instance and their domain checks.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{LabError, Result};

/// Unvalidated parameter tuple as supplied by a caller or a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParameters {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub n: u32,
    pub mu: f64,
}

/// Validated tuple (A, B, D, E, α, λ, n, μ).
///
/// Fields are private so the invariants `B < A`, `E < D` and `0 < μ ≤ A − B`
/// cannot be broken after construction. `mu_prime` is derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    raw: RawParameters,
}

impl Parameters {
    pub fn a(&self) -> f64 {
        self.raw.a
    }
    pub fn b(&self) -> f64 {
        self.raw.b
    }
    pub fn d(&self) -> f64 {
        self.raw.d
    }
    pub fn e(&self) -> f64 {
        self.raw.e
    }
    pub fn alpha(&self) -> f64 {
        self.raw.alpha
    }
    pub fn lambda(&self) -> f64 {
        self.raw.lambda
    }
    pub fn n(&self) -> u32 {
        self.raw.n
    }
    pub fn mu(&self) -> f64 {
        self.raw.mu
    }

    /// μ′ = 2μ/(A − B), the initial coefficient of the transformed function q.
    pub fn mu_prime(&self) -> f64 {
        2.0 * self.raw.mu / (self.raw.a - self.raw.b)
    }

    pub fn raw(&self) -> RawParameters {
        self.raw
    }

    /// Copy with a different (α, λ); revalidated because nothing else changes.
    pub fn with_alpha_lambda(&self, alpha: f64, lambda: f64) -> Result<Parameters> {
        validate_params(RawParameters {
            alpha,
            lambda,
            ..self.raw
        })
    }
}

impl Serialize for Parameters {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            #[serde(rename = "A")]
            a: f64,
            #[serde(rename = "B")]
            b: f64,
            #[serde(rename = "D")]
            d: f64,
            #[serde(rename = "E")]
            e: f64,
            alpha: f64,
            lambda: f64,
            n: u32,
            mu: f64,
            mu_prime: f64,
        }
        View {
            a: self.raw.a,
            b: self.raw.b,
            d: self.raw.d,
            e: self.raw.e,
            alpha: self.raw.alpha,
            lambda: self.raw.lambda,
            n: self.raw.n,
            mu: self.raw.mu,
            mu_prime: self.mu_prime(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Parameters {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct View {
            #[serde(flatten)]
            raw: RawParameters,
            #[allow(dead_code)]
            mu_prime: Option<f64>,
        }
        let view = View::deserialize(deserializer)?;
        validate_params(view.raw).map_err(serde::de::Error::custom)
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
        return Err(LabError::InvalidParameters(format!(
            "{name} must lie in [-1, 1] (got {v})"
        )));
    }
    Ok(())
}

/// Enforces every domain invariant and returns the validated tuple.
pub fn validate_params(raw: RawParameters) -> Result<Parameters> {
    check_unit("A", raw.a)?;
    check_unit("B", raw.b)?;
    check_unit("D", raw.d)?;
    check_unit("E", raw.e)?;
    if raw.b >= raw.a {
        return Err(LabError::InvalidParameters(
            "B must be strictly less than A".into(),
        ));
    }
    if raw.e >= raw.d {
        return Err(LabError::InvalidParameters(
            "E must be strictly less than D".into(),
        ));
    }
    if !raw.alpha.is_finite() || !raw.lambda.is_finite() {
        return Err(LabError::InvalidParameters(
            "alpha and lambda must be finite".into(),
        ));
    }
    if raw.n == 0 {
        return Err(LabError::InvalidParameters("n must be a positive integer".into()));
    }
    if !raw.mu.is_finite() || raw.mu <= 0.0 {
        return Err(LabError::InvalidParameters("mu must be positive".into()));
    }
    if raw.mu > raw.a - raw.b {
        return Err(LabError::InvalidParameters(format!(
            "mu must not exceed A - B = {}",
            raw.a - raw.b
        )));
    }
    Ok(Parameters { raw })
}

/// How the fixed coefficient b of f ∈ A_{n,b} feeds the initial coefficient μ of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Binding {
    /// p = zf′/f, so μ = n·b.
    StarlikeQuotient,
    /// p = f′, so μ = (n + 1)·b.
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionFamily {
    pub n: u32,
    pub b: f64,
    pub binding: Binding,
}

impl FunctionFamily {
    pub fn new(n: u32, b: f64, binding: Binding) -> Result<Self> {
        if n == 0 {
            return Err(LabError::InvalidParameters("n must be a positive integer".into()));
        }
        if !b.is_finite() || b < 0.0 {
            return Err(LabError::InvalidParameters("b must be a nonnegative real".into()));
        }
        Ok(Self { n, b, binding })
    }

    pub fn mu(&self) -> f64 {
        match self.binding {
            Binding::StarlikeQuotient => self.n as f64 * self.b,
            Binding::Derivative => (self.n + 1) as f64 * self.b,
        }
    }

    /// Builds the lemma parameters implied by this family (μ taken from the binding).
    pub fn parameters(&self, a: f64, b: f64, d: f64, e: f64, alpha: f64, lambda: f64) -> Result<Parameters> {
        validate_params(RawParameters {
            a,
            b,
            d,
            e,
            alpha,
            lambda,
            n: self.n,
            mu: self.mu(),
        })
    }
}
