mod common;

use askey_finite::report::Report;
use common::{run, schema_errors, stderr, stdout};
use serde_json::Value;

#[test]
fn eval_prints_an_exact_rational() {
    let o = run(&["eval", "--family", "K", "--params", r#"{"p":"1/2","N":1}"#, "--n", "1", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "-1");
}

#[test]
fn eval_with_grid_parameters_matches_the_library() {
    let o = run(&["eval", "--family", "qR", "--n", "2", "--x", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let grid = askey_finite::grid::Grid::builtin();
    let set = grid.expand(&["qR".into()]).into_iter().find(|s| s.size == grid.largest_size()).unwrap();
    let want = set.to_family_params().unwrap().eval_p(2, 3).unwrap();
    assert_eq!(stdout(&o).trim(), askey_core::arith::to_fraction_string(&want));
}

#[test]
fn table_csv_is_square() {
    let o = run(&["table", "--family", "H", "--format", "csv", "--size", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("non_authoritative"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.len() == 4 && r[2].parse::<i64>().is_ok() || r[2].contains('/')));
}

#[test]
fn table_json_carries_parameters() {
    let o = run(&["table", "--family", "dqK", "--format", "json", "--size", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["family"], "dqK");
    assert_eq!(v["entries"].as_array().unwrap().len(), 9);
}

#[test]
fn single_parameter_set_passes_every_suite() {
    let o = run(&["verify", "--suite", "all", "--family", "K", "--params", r#"{"p":"1/3","N":4}"#, "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(schema_errors(&v).is_empty(), "{:?}", schema_errors(&v));
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.runs.len(), 1);
    assert_eq!(report.runs[0].suites.len(), 5);
    assert_eq!(report.to_json(), stdout(&o));
}

#[test]
fn reports_are_deterministic_without_timestamp() {
    let args = ["verify", "--suite", "orthogonality", "--suite", "diophantine", "--family", "qqK", "--no-timestamp"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let stamped = run(&args[..args.len() - 1]);
    let v: Value = serde_json::from_slice(&stamped.stdout).unwrap();
    assert!(v["generated_at_unix"].is_u64());
    assert!(v["runs"][0]["suites"][0]["elapsed_ms"].is_u64());
}

#[test]
fn tampered_coefficient_exits_one_with_an_anchored_witness() {
    let o = run(&["verify", "--suite", "orthogonality", "--family", "H", "--size", "3", "--tamper", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(1));
    let report = Report::from_json(&stdout(&o)).unwrap();
    let (_, _, c) = report.checks().find(|(_, _, c)| c.status == askey_core::verify::Status::Fail).unwrap();
    assert_eq!(c.anchor, "matrix-eigen-equation");
    let w = c.witness.as_ref().unwrap();
    assert!(w.lhs.is_some() && w.rhs.is_some() && w.x.is_some() && w.n.is_some());
    assert!(stderr(&o).contains("[matrix-eigen-equation]"));
}

#[test]
fn csv_report() {
    let o = run(&["verify", "--suite", "operators", "--family", "R", "--size", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("family,N,q,params,suite,id,anchor,status,"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("R,2,,")));
}

#[test]
fn out_of_range_parameters_need_allow_invalid() {
    let params = r#"{"p":"3/2","N":3}"#;
    let o = run(&["verify", "--suite", "diophantine", "--family", "K", "--params", params]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("0<p<1"));
    let o = run(&["verify", "--suite", "diophantine", "--family", "K", "--params", params, "--allow-invalid"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--n", "1", "--x", "0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--family", "Z", "--n", "1", "--x", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--family", "K", "--family", "H", "--params", "{}"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn grid_override_and_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    std::fs::write(&path, r#"{"sizes":[2],"sets":[{"family":"qK","q":"1/2","params":{"p":"2"}}]}"#).unwrap();
    let o = common::bin()
        .env("ASKEY_FINITE_GRID", &path)
        .args(["verify", "--suite", "orthogonality", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.runs.len(), 1);
    assert_eq!(report.runs[0].params.params["p"], "2");

    std::fs::write(&path, r#"{"sizes":[2],"sets":[]}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = common::bin()
        .env("ASKEY_FINITE_GRID", &path)
        .args(["verify", "--no-timestamp", "--output"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(schema_errors(&v).is_empty());
    assert_eq!(v["runs"].as_array().unwrap().len(), 0);
}
