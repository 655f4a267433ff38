use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    lab_env(args, None)
}

fn lab_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_janowski-lab"));
    cmd.args(args).env("RUST_LOG", "warn");
    match threads {
        Some(t) => cmd.env("JANOWSKI_LAB_THREADS", t),
        None => cmd.env_remove("JANOWSKI_LAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL_GRID: [&str; 8] = [
    "--grid-rho-max",
    "6",
    "--grid-rho-steps",
    "65",
    "--grid-sigma-depth",
    "6",
    "--grid-sigma-steps",
    "65",
];

#[test]
fn check_extremal_tuple_fails_the_inequality() {
    let out = lab(&["check", "--lemma", "2.1", "--A", "1", "--B", "-1", "--D", "1", "--E", "-1", "--alpha", "1", "--n", "1", "--mu", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let r = &v["results"][0]["reports"][0];
    assert_eq!(r["verdict"], false);
    assert_eq!(r["preconditions_hold"], true);
    assert_eq!(r["main_inequality_lhs"].as_f64(), Some(576.0));
    assert_eq!(r["main_inequality_rhs"].as_f64(), Some(64.0));
    assert_eq!(v["config"]["command"], "check");
}

#[test]
fn check_all_fans_out_to_six_reports() {
    let out = lab(&["check", "--lemma", "all", "--A", "0.5", "--B", "-0.5", "--D", "0.5", "--E", "-0.5", "--mu", "0.5"]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    assert_eq!(json(&out)["results"][0]["reports"].as_array().unwrap().len(), 6);
}

#[test]
fn check_ranges_expand_and_skip_invalid_tuples() {
    let out = lab(&["check", "--lemma", "2.1", "--A", "0.5", "--B", "-0.5:0.5:0.5", "--D", "0.5", "--E", "-0.5", "--mu", "0.2"]);
    let v = json(&out);
    // B = 0.5 equals A and is dropped.
    assert_eq!(v["summary"]["tuples"], 2);
    assert_eq!(v["config"]["params"]["B"]["step"].as_f64(), Some(0.5));
}

#[test]
fn input_errors_exit_with_two() {
    let cases: [&[&str]; 6] = [
        &["check", "--A", "1", "--B", "-1", "--D", "1", "--E", "-1"],
        &["check", "--lemma", "9.9", "--A", "1", "--B", "-1", "--D", "1", "--E", "-1", "--mu", "1"],
        &["check", "--A", "-1", "--B", "1", "--D", "1", "--E", "-1", "--mu", "1"],
        &["check", "--A", "1", "--B", "-1", "--D", "1", "--E", "-1", "--mu", "1", "--format", "csv"],
        &["bounds", "--lambda", "0:1.5:0.5"],
        &["check", "--A", "1:0:1", "--B", "-1", "--D", "1", "--E", "-1", "--mu", "1"],
    ];
    for args in cases {
        let out = lab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn oracle_exit_code_tracks_pass() {
    let base = ["oracle", "--operator", "linear", "--A", "0.5", "--B", "-0.5", "--E", "-0.5", "--n", "2", "--mu", "0.5"];
    let mut pass: Vec<&str> = base.to_vec();
    pass.extend(["--D", "0.1", "--alpha", "1"]);
    pass.extend(SMALL_GRID);
    let out = lab(&pass);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["closed_form_verdict"], true);
    assert_eq!(v["results"][0]["agrees"], true);

    let mut fail: Vec<&str> = base.to_vec();
    fail.extend(["--D", "0.6", "--alpha", "0.001"]);
    fail.extend(SMALL_GRID);
    let out = lab(&fail);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["results"][0]["oracle"]["max_re_psi"].as_f64().unwrap() > 0.0);
}

#[test]
fn reports_replay_byte_identically_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let mut args = vec![
        "oracle", "--lemma", "all", "--A", "0.5", "--B", "-0.5", "--D", "0.1:0.3:0.2", "--E", "-0.5", "--n", "2", "--mu", "0.5", "--seed", "9",
    ];
    args.extend(SMALL_GRID);
    args.extend(["--out", first.to_str().unwrap()]);
    lab_env(&args, Some("1"));
    let out = lab_env(&["oracle", "--config", first.to_str().unwrap(), "--out", second.to_str().unwrap()], Some("3"));
    assert!(matches!(out.status.code(), Some(0 | 1)));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    let sweep = dir.path().join("sweep.json");
    let replay = dir.path().join("sweep2.json");
    lab_env(
        &["implication-sweep", "--operator", "convex", "--A", "0.6", "--B", "-0.4", "--D", "0.5", "--E", "-0.5", "--alpha", "0.8", "--n", "2", "--mu", "0.5", "--trials", "12", "--seed", "5", "--out", sweep.to_str().unwrap()],
        Some("1"),
    );
    lab_env(&["implication-sweep", "--config", sweep.to_str().unwrap(), "--out", replay.to_str().unwrap()], Some("2"));
    assert_eq!(std::fs::read(&sweep).unwrap(), std::fs::read(&replay).unwrap());
    assert_eq!(read_json(&sweep)["summary"]["cases"], 12);
}

#[test]
fn config_for_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.json");
    lab(&["bounds", "--out", path.to_str().unwrap()]);
    assert_eq!(lab(&["check", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    let replay = lab(&["bounds", "--config", path.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(replay.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn implication_sweep_finds_planted_counterexample() {
    let out = lab(&["implication-sweep", "--operator", "linear", "--A", "0.2", "--B", "-0.2", "--D", "0.5", "--E", "-0.5", "--alpha", "0.001", "--n", "1", "--mu", "0.4", "--trials", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["summary"]["counterexamples"].as_u64().unwrap() > 0);
    assert!(v["results"][0]["sweep"]["first_counterexample"]["sample"]["coefficients"].is_array());
}

#[test]
fn bounds_table_has_classical_column() {
    let out = lab(&["bounds", "--lambda", "0:0.5:0.5", "--n", "2", "--mu-prime", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let classical = |l: f64| rows.iter().find(|r| r["classical"] == true && r["lambda"].as_f64() == Some(l)).unwrap();
    let half = &classical(0.5)["delta"];
    assert!((half["SstarParenLinear"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!((half["SstarBracketLambdaInvSquare"].as_f64().unwrap() - 0.5 / 2.75).abs() < 1e-15);
    assert!((classical(0.0)["delta"]["SstarOrderSubordInvSquare"].as_f64().unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn bounds_csv_projection() {
    let out = lab(&["bounds", "--format", "csv", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let col = headers.iter().position(|h| h == "SstarParenLinear").unwrap();
    assert_eq!(rows[0][col].parse::<f64>().unwrap(), 0.5);
    assert_eq!(&rows[0][col], "5.0000000000000000e-1");
}

#[test]
fn membership_of_identity_and_koebe() {
    let dir = tempfile::tempdir().unwrap();
    let ident = dir.path().join("z.txt");
    std::fs::write(&ident, "# f(z) = z\n0 0\n1 0\n").unwrap();
    let out = lab(&["membership", "--coeffs", ident.to_str().unwrap(), "--A", "0.5", "--B", "-0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["holds"], true);

    let koebe = dir.path().join("koebe.txt");
    let text: String = (0..=40_000).map(|k| format!("{k} 0\n")).collect();
    std::fs::write(&koebe, text).unwrap();
    let out = lab(&["membership", "--coeffs", koebe.to_str().unwrap(), "--A", "1", "--B", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["results"][0]["worst_margin"].as_f64().unwrap() >= -1e-6);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 0\n1 zero\n").unwrap();
    assert_eq!(lab(&["membership", "--coeffs", bad.to_str().unwrap(), "--A", "1", "--B", "-1"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(lab(&["membership", "--coeffs", missing.to_str().unwrap(), "--A", "1", "--B", "-1"]).status.code(), Some(2));
}

#[test]
fn thread_variable_is_validated() {
    let out = lab_env(&["bounds"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}
