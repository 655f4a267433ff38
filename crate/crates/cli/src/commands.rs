use std::collections::BTreeMap;

use janowski_core::conditions::{check_lemma, compute_gh, corollary_delta, ConditionReport, CorollaryKind, Lemma};
use janowski_core::lab::{falsification_sweep, starlike_membership, AnalyticSample, FalsificationConfig, FalsificationSummary, ImplicationRadii};
use janowski_core::oracle::{verify_admissibility, OracleGrid, OracleReport};
use janowski_core::{Parameters, SubordinationVerdict};
use log::{info, warn};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Format, Job, ParamGrid, RunConfig, ValueRange};
use crate::report::format_f64;
use crate::InputError;

/// Rendered report plus the outcome that decides the exit code.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub success: bool,
}

#[derive(Serialize)]
struct Report<'a, S: Serialize, R: Serialize> {
    config: &'a RunConfig,
    summary: S,
    results: Vec<R>,
}

fn render<S: Serialize, R: Serialize>(config: &RunConfig, summary: S, results: Vec<R>) -> Result<Vec<u8>, InputError> {
    crate::report::to_json(&Report { config, summary, results }).map_err(|e| InputError(format!("serializing report: {e}")))
}

fn expand(params: &ParamGrid) -> Result<Vec<Parameters>, InputError> {
    let ex = params.expand()?;
    if !ex.rejected.is_empty() {
        warn!("skipped {} invalid parameter combinations, e.g. {}", ex.rejected.len(), ex.rejected[0]);
    }
    Ok(ex.tuples)
}

pub fn run(config: &RunConfig) -> Result<Outcome, InputError> {
    if config.output_format == Format::Csv && !matches!(config.job, Job::Bounds { .. }) {
        return Err(InputError(format!("--format csv is only available for bounds, not {}", config.job.name())));
    }
    match &config.job {
        Job::Check { lemmas, params } => check(config, lemmas, params),
        Job::Oracle { lemmas, params, grid } => oracle(config, lemmas, params, grid),
        Job::ImplicationSweep { lemmas, params, trials, seed, radius } => implication(config, lemmas, params, *trials, *seed, *radius),
        Job::Bounds { lambda, n, mu_prime } => bounds(config, lambda, n, mu_prime),
        Job::Membership { coefficients, a, b, radius, .. } => membership(config, coefficients, *a, *b, *radius),
    }
}

#[derive(Serialize)]
struct CheckRow {
    params: Parameters,
    reports: Vec<ConditionReport>,
}

#[derive(Serialize)]
struct CheckSummary {
    tuples: usize,
    reports: usize,
    verdict_true: usize,
    all_true: bool,
}

fn check(config: &RunConfig, lemmas: &[Lemma], params: &ParamGrid) -> Result<Outcome, InputError> {
    let tuples = expand(params)?;
    let rows: Vec<CheckRow> = tuples
        .iter()
        .map(|p| CheckRow { params: *p, reports: lemmas.iter().map(|&l| check_lemma(l, p)).collect() })
        .collect();
    let reports = rows.iter().map(|r| r.reports.len()).sum();
    let verdict_true = rows.iter().flat_map(|r| &r.reports).filter(|r| r.verdict).count();
    info!("check: {verdict_true} of {reports} verdicts true");
    let summary = CheckSummary { tuples: rows.len(), reports, verdict_true, all_true: verdict_true == reports };
    let success = summary.all_true;
    Ok(Outcome { bytes: render(config, summary, rows)?, success })
}

#[derive(Serialize)]
struct OracleRow {
    params: Parameters,
    lemma: Lemma,
    operator: &'static str,
    closed_form_verdict: bool,
    oracle: Option<OracleReport>,
    error: Option<String>,
    /// A true closed-form verdict is backed by a passing oracle.
    agrees: bool,
}

#[derive(Serialize)]
struct OracleSummary {
    runs: usize,
    passed: usize,
    errors: usize,
    disagreements: usize,
}

fn oracle(config: &RunConfig, lemmas: &[Lemma], params: &ParamGrid, grid: &OracleGrid) -> Result<Outcome, InputError> {
    grid.validate().map_err(|e| InputError(e.to_string()))?;
    let tuples = expand(params)?;
    let mut rows = Vec::new();
    for p in &tuples {
        for &lemma in lemmas {
            let kind = lemma.operator();
            let verdict = check_lemma(lemma, p).verdict;
            let (oracle, error) = match verify_admissibility(kind, p, grid) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let pass = oracle.is_some_and(|r| r.pass);
            rows.push(OracleRow {
                params: *p,
                lemma,
                operator: kind.cli_name(),
                closed_form_verdict: verdict,
                oracle,
                error,
                agrees: !verdict || pass,
            });
        }
    }
    let summary = OracleSummary {
        runs: rows.len(),
        passed: rows.iter().filter(|r| r.oracle.is_some_and(|o| o.pass)).count(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        disagreements: rows.iter().filter(|r| !r.agrees).count(),
    };
    info!("oracle: {} of {} runs pass", summary.passed, summary.runs);
    let success = summary.passed == summary.runs;
    Ok(Outcome { bytes: render(config, summary, rows)?, success })
}

#[derive(Serialize)]
struct ImplicationRow {
    params: Parameters,
    lemma: Lemma,
    operator: &'static str,
    closed_form_verdict: bool,
    sweep: FalsificationSummary,
}

#[derive(Serialize)]
struct ImplicationTotals {
    runs: usize,
    cases: usize,
    supports: usize,
    vacuous: usize,
    rejected: usize,
    counterexamples: usize,
    counterexamples_on_verdict_true: usize,
}

fn implication(config: &RunConfig, lemmas: &[Lemma], params: &ParamGrid, trials: usize, seed: u64, radius: f64) -> Result<Outcome, InputError> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(InputError(format!("--radius must lie in (0, 1) (got {radius})")));
    }
    if trials == 0 {
        return Err(InputError("--trials must be positive".into()));
    }
    let tuples = expand(params)?;
    let cfg = FalsificationConfig { radii: ImplicationRadii::with_check_radius(radius), ..FalsificationConfig::default() };
    let mut rows = Vec::new();
    for p in &tuples {
        for &lemma in lemmas {
            let kind = lemma.operator();
            rows.push(ImplicationRow {
                params: *p,
                lemma,
                operator: kind.cli_name(),
                closed_form_verdict: check_lemma(lemma, p).verdict,
                sweep: falsification_sweep(kind, p, trials, seed, &cfg),
            });
        }
    }
    let sum = |f: fn(&ImplicationRow) -> usize| rows.iter().map(f).sum::<usize>();
    let totals = ImplicationTotals {
        runs: rows.len(),
        cases: sum(|r| r.sweep.trials),
        supports: sum(|r| r.sweep.supports),
        vacuous: sum(|r| r.sweep.vacuous),
        rejected: sum(|r| r.sweep.rejected),
        counterexamples: sum(|r| r.sweep.counterexamples),
        counterexamples_on_verdict_true: sum(|r| if r.closed_form_verdict { r.sweep.counterexamples } else { 0 }),
    };
    info!("implication-sweep: {} counterexamples in {} cases", totals.counterexamples, totals.cases);
    let success = totals.counterexamples == 0;
    Ok(Outcome { bytes: render(config, totals, rows)?, success })
}

#[derive(Serialize)]
struct BoundsRow {
    lambda: f64,
    n: u32,
    mu_prime: f64,
    #[serde(rename = "G")]
    g: f64,
    #[serde(rename = "H")]
    h: f64,
    classical: bool,
    delta: BTreeMap<&'static str, Option<f64>>,
}

#[derive(Serialize)]
struct BoundsSummary {
    rows: usize,
    undefined_entries: usize,
}

fn bounds(config: &RunConfig, lambda: &ValueRange, n: &ValueRange, mu_prime: &ValueRange) -> Result<Outcome, InputError> {
    let lambdas = lambda.values("lambda")?;
    if let Some(bad) = lambdas.iter().find(|l| !(0.0..1.0).contains(*l)) {
        return Err(InputError(format!("--lambda values must lie in [0, 1) (got {bad})")));
    }
    let mps = mu_prime.values("mu-prime")?;
    if let Some(bad) = mps.iter().find(|m| !(**m > 0.0 && **m <= 2.0)) {
        return Err(InputError(format!("--mu-prime values must lie in (0, 2] (got {bad})")));
    }
    let mut pairs = vec![(1u32, 2.0f64)];
    for k in n.integers("n")? {
        for &m in &mps {
            if !pairs.contains(&(k, m)) {
                pairs.push((k, m));
            }
        }
    }
    let mut rows = Vec::new();
    for &l in &lambdas {
        for &(k, m) in &pairs {
            let gh = compute_gh(k, m);
            let delta = CorollaryKind::ALL
                .iter()
                .map(|&kind| (kind.name(), corollary_delta(kind, l, gh.g, gh.h).ok()))
                .collect();
            rows.push(BoundsRow { lambda: l, n: k, mu_prime: m, g: gh.g, h: gh.h, classical: (k, m) == (1, 2.0), delta });
        }
    }
    let summary = BoundsSummary {
        rows: rows.len(),
        undefined_entries: rows.iter().flat_map(|r| r.delta.values()).filter(|v| v.is_none()).count(),
    };
    let bytes = match config.output_format {
        Format::Json => render(config, summary, rows)?,
        Format::Csv => bounds_csv(&rows)?,
    };
    Ok(Outcome { bytes, success: true })
}

fn bounds_csv(rows: &[BoundsRow]) -> Result<Vec<u8>, InputError> {
    let io_err = |e: csv::Error| InputError(format!("writing csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["lambda", "n", "mu_prime", "G", "H", "classical"];
    header.extend(CorollaryKind::ALL.iter().map(|k| k.name()));
    w.write_record(&header).map_err(io_err)?;
    for r in rows {
        let mut rec = vec![format_f64(r.lambda), r.n.to_string(), format_f64(r.mu_prime), format_f64(r.g), format_f64(r.h), r.classical.to_string()];
        rec.extend(CorollaryKind::ALL.iter().map(|k| r.delta[k.name()].map(format_f64).unwrap_or_default()));
        w.write_record(&rec).map_err(io_err)?;
    }
    w.into_inner().map_err(|e| InputError(format!("writing csv: {e}")))
}

#[derive(Serialize)]
struct MembershipSummary {
    degree: usize,
    n: u32,
    holds: bool,
}

fn membership(config: &RunConfig, coefficients: &[[f64; 2]], a: f64, b: f64, radius: f64) -> Result<Outcome, InputError> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(InputError(format!("--radius must lie in (0, 1) (got {radius})")));
    }
    let coeffs = coefficients.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    let f = AnalyticSample::normalized_f(coeffs).map_err(|e| InputError(e.to_string()))?;
    let verdict: SubordinationVerdict = starlike_membership(&f, a, b, radius).map_err(|e| InputError(e.to_string()))?;
    info!("membership: holds = {}, margin = {:e}", verdict.holds, verdict.worst_margin);
    let summary = MembershipSummary { degree: f.degree, n: f.n, holds: verdict.holds };
    Ok(Outcome { bytes: render(config, summary, vec![verdict])?, success: verdict.holds })
}
