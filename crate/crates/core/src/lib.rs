//! Closed-form sufficient conditions for Janowski starlikeness with a fixed
//! initial coefficient, checked against brute-force admissibility oracles and
//! an empirical implication harness.

pub mod audit;
pub mod conditions;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod numeric;
pub mod operators;
pub mod oracle;
pub mod params;
pub mod seeding;
pub mod series;

pub use conditions::{check_lemma, compute_gh, ConditionReport, Gh, Lemma};
pub use error::{LabError, Result};
pub use geometry::{
    containment_margin, is_subordinate_numeric, janowski_image, region_contains, CircleSamples, DiskOrHalfPlane,
    SubordinationVerdict,
};
pub use lab::{find_counterexample, sample_p, starlike_membership, test_implication, AnalyticSample, ImplicationCase};
pub use operators::{
    apply_operator, coeff_system, shifted_coeff_system, psi_value, re_psi_quartic, CoeffSystem, EightCoeffs,
    FiveCoeffs, OperatorKind, PsiPoint, QuarticForm,
};
pub use oracle::{verify_admissibility, OracleGrid, OracleReport};
pub use params::{validate_params, Binding, FunctionFamily, Parameters, RawParameters};
