//! Acceptance criteria 1 to 10. One full `verify --suite all` over the default grid drives
//! criteria 1 to 9 and the first half of 10; each criterion then reads the checks it names.

mod common;

use std::collections::BTreeSet;
use std::io::Write;

use askey_core::verify::Status;
use askey_core::FamilyId;
use askey_finite::grid::Grid;
use askey_finite::report::{Report, Run};
use serde_json::Value;

struct Outcome {
    passed: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { passed: true, lines: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.lines.push(what.into());
        }
    }
}

fn family(run: &Run) -> FamilyId {
    FamilyId::parse(&run.params.family).unwrap()
}

/// Every run must carry each listed id with one of the allowed statuses.
fn expect_ids(
    out: &mut Outcome,
    report: &Report,
    runs: &dyn Fn(&Run) -> bool,
    ids: &dyn Fn(&Run) -> Vec<String>,
    allowed: &[Status],
) {
    let mut seen = 0;
    for run in report.runs.iter().filter(|r| runs(r)) {
        seen += 1;
        for id in ids(run) {
            let found = run.suites.iter().flat_map(|s| &s.checks).find(|c| c.id == id);
            match found {
                None => out.require(false, format!("{} N={}: missing {id}", run.params.family, run.params.size)),
                Some(c) => out.require(
                    allowed.contains(&c.status),
                    format!(
                        "{} N={} {:?}: {id} is {:?} {:?}",
                        run.params.family, run.params.size, run.params.params, c.status, c.witness
                    ),
                ),
            }
        }
    }
    out.require(seen > 0, "no runs selected");
}

fn suite_ms(report: &Report, suite: &str, runs: &dyn Fn(&Run) -> bool) -> u64 {
    report
        .runs
        .iter()
        .filter(|r| runs(r))
        .flat_map(|r| &r.suites)
        .filter(|s| s.name == suite)
        .map(|s| s.elapsed_ms.unwrap_or(u64::MAX / 1024))
        .sum()
}

fn lattice_ids(prefix: &str, run: &Run) -> Vec<String> {
    (0..=run.params.size).map(|n| format!("{prefix}/n={n}")).collect()
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let full = common::bin().args(["verify", "--suite", "all", "--output"]).arg(&path).output().unwrap();
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    let json: Value = serde_json::from_str(&text).unwrap_or(Value::Null);
    let report = Report::from_json(&text).unwrap_or_else(|_| Report::new(vec![], false));
    let all = |_: &Run| true;
    let pass = [Status::Pass];
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    // Grid coverage underlies every criterion.
    let grid = Grid::builtin();
    let mut cover = Outcome::new();
    for f in FamilyId::ALL {
        let sets: BTreeSet<String> = report
            .runs
            .iter()
            .filter(|r| family(r) == f)
            .map(|r| format!("{:?}{:?}", r.params.q, r.params.params))
            .collect();
        cover.require(sets.len() == 2, format!("{f:?}: {} parameter sets", sets.len()));
        for n in 1..=6 {
            cover.require(
                report.runs.iter().filter(|r| family(r) == f && r.params.size == n).count() == 2,
                format!("{f:?}: N={n} not covered twice"),
            );
        }
    }
    cover.require(grid.sizes == vec![1, 2, 3, 4, 5, 6], "grid sizes");

    let mut c1 = Outcome::new();
    c1.lines.append(&mut cover.lines.clone());
    c1.passed &= cover.passed;
    expect_ids(
        &mut c1,
        &report,
        &all,
        &|r| {
            let mut ids = lattice_ids("difference-equation", r);
            ids.extend(lattice_ids("matrix-eigen-equation", r));
            ids.push("orthogonality".into());
            ids.push("norm-positivity".into());
            ids
        },
        &pass,
    );
    let ms = suite_ms(&report, "orthogonality", &all);
    c1.require(ms < 30_000, format!("orthogonality suite took {ms} ms"));
    results.push((1, "eigen equations and orthogonality, exact, whole grid, < 30 s", c1));

    let mut c2 = Outcome::new();
    expect_ids(
        &mut c2,
        &report,
        &all,
        &|_| {
            (0..=3)
                .flat_map(|m| {
                    [format!("zero-norm/m={m}"), format!("factorisation/m={m}"), format!("quotient-closed-form/m={m}")]
                })
                .collect()
        },
        &pass,
    );
    let ms = suite_ms(&report, "diophantine", &all);
    c2.require(ms < 60_000, format!("diophantine suite took {ms} ms"));
    results.push((2, "zero-norm factorisation and quotient closed forms, m = 0..3, < 60 s", c2));

    let mut c3 = Outcome::new();
    expect_ids(&mut c3, &report, &|r| family(r) == FamilyId::QR, &|_| vec!["lambda-product".into()], &pass);
    results.push((3, "q-Racah Lambda product form at x = -2..N+3", c3));

    let mut c4 = Outcome::new();
    expect_ids(
        &mut c4,
        &report,
        &all,
        &|_| ["{0}", "{0,1}", "{0,1,2}"].iter().map(|d| format!("norm-relation/D={d}")).collect(),
        &pass,
    );
    expect_ids(
        &mut c4,
        &report,
        &all,
        &|_| ["{1}", "{0,2}"].iter().map(|d| format!("norm-relation/D={d}")).collect(),
        &[Status::Pass, Status::Degenerate],
    );
    for (run, _, c) in report.checks().filter(|(_, _, c)| c.status == Status::Degenerate) {
        c4.require(
            c.witness.as_ref().is_some_and(|w| w.x.is_some()),
            format!("{} N={}: degeneracy without witness", run.params.family, run.params.size),
        );
    }
    let ms = suite_ms(&report, "darboux", &|r| r.params.size <= 5);
    c4.require(ms < 300_000, format!("darboux suite at N <= 5 took {ms} ms"));
    results.push((4, "deformed norm relation for D = {0},{0,1},{0,1,2}; {1},{0,2} unless degenerate; < 5 min", c4));

    let mut c5 = Outcome::new();
    expect_ids(&mut c5, &report, &all, &|_| (1..=3).map(|m| format!("shifted-coefficients/M={m}")).collect(), &pass);
    results.push((5, "Darboux coefficients equal the x-shifted family, M = 1..3", c5));

    let mut c6 = Outcome::new();
    expect_ids(&mut c6, &report, &all, &|_| (1..=3).map(|m| format!("x-shift-sum/M={m}")).collect(), &pass);
    results.push((6, "x-shift summation identities, M = 1..3, x = -M..N+1", c6));

    let mut c7 = Outcome::new();
    expect_ids(
        &mut c7,
        &report,
        &all,
        &|_| {
            let mut ids: Vec<String> = (1..=3).map(|m| format!("ordered-product/M={m}")).collect();
            ids.push("pascal-identities".into());
            ids
        },
        &pass,
    );
    results.push((7, "ordered forward-shift products and Pascal identities (M <= 12)", c7));

    let mut c8 = Outcome::new();
    expect_ids(&mut c8, &report, &all, &|_| vec!["x-shift-factorisation".into()], &pass);
    expect_ids(&mut c8, &report, &|r| family(r) == FamilyId::R, &|_| vec!["degree-shift-factorisation".into()], &pass);
    results.push((8, "x-shift factorisation on eta^0..eta^(N+2); Racah degree-shift factorisation", c8));

    let mut c9 = Outcome::new();
    expect_ids(
        &mut c9,
        &report,
        &|r| matches!(family(r), FamilyId::K | FamilyId::H),
        &|r| lattice_ids("mirror-symmetry", r),
        &pass,
    );
    results.push((9, "Krawtchouk and Hahn mirror symmetries", c9));

    let mut c10 = Outcome::new();
    c10.require(
        full.status.code() == Some(0),
        format!("verify --suite all exited {:?}: {}", full.status.code(), common::stderr(&full)),
    );
    let errors = common::schema_errors(&json);
    c10.require(errors.is_empty(), format!("schema: {:?}", errors.iter().take(3).collect::<Vec<_>>()));
    c10.require(!report.runs.is_empty() && report.to_json() == text, "report does not round-trip");
    let tampered =
        common::run(&["verify", "--suite", "all", "--family", "K", "--size", "3", "--tamper", "--no-timestamp"]);
    c10.require(tampered.status.code() == Some(1), format!("tampered run exited {:?}", tampered.status.code()));
    let t = Report::from_json(&common::stdout(&tampered)).ok();
    let failing: Vec<_> = t
        .iter()
        .flat_map(|r| r.checks())
        .filter(|(_, _, c)| c.status == Status::Fail)
        .map(|(_, _, c)| c.clone())
        .collect();
    c10.require(!failing.is_empty(), "tampered run reports no failure");
    c10.require(
        failing.iter().all(|c| {
            c.anchor == "matrix-eigen-equation"
                && c.witness.as_ref().is_some_and(|w| w.lhs.is_some() && w.rhs.is_some())
        }),
        format!("tampered witnesses: {failing:?}"),
    );
    results.push((
        10,
        "CLI: grid run exits 0 with a schema-valid report; tampered coefficient exits 1 with an anchored witness",
        c10,
    ));

    // Written to the raw handle so the lines survive the test harness's output capture.
    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (k, what, outcome) in &results {
        let _ = writeln!(err, "criterion {k:>2}: {} | {what}", if outcome.passed { "PASS" } else { "FAIL" });
        for line in outcome.lines.iter().take(8) {
            let _ = writeln!(err, "              {line}");
        }
        if !outcome.passed {
            failed.push(*k);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
