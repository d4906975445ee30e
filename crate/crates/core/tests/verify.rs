mod common;

use askey_core::verify::{run_suite, Status, Suite, SuiteOptions};

#[test]
fn every_suite_passes_on_valid_members() {
    let opts = SuiteOptions { m_max: 2, big_m_max: 2, tamper: false };
    for n in [1u32, 3] {
        for params in common::members(n) {
            for suite in Suite::ALL {
                let report = run_suite(&params, suite, &opts);
                for c in &report.checks {
                    assert_ne!(c.status, Status::Fail, "{:?} N={n} {}: {c:?}", params.family(), report.name);
                }
                assert!(!report.checks.is_empty());
            }
        }
    }
}

#[test]
fn check_ids_are_sorted_and_unique() {
    let params = &common::members(2)[2];
    for suite in Suite::ALL {
        let report = run_suite(params, suite, &SuiteOptions::default());
        let ids: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }
}

#[test]
fn tampered_matrix_is_caught() {
    let params = &common::members(3)[0];
    let opts = SuiteOptions { tamper: true, ..SuiteOptions::default() };
    let report = run_suite(params, Suite::Orthogonality, &opts);
    assert!(report.failed());
    let bad = report.checks.iter().find(|c| c.status == Status::Fail).unwrap();
    assert_eq!(bad.anchor, "matrix-eigen-equation");
    let w = bad.witness.as_ref().unwrap();
    assert_eq!(w.x, Some(0));
    assert_ne!(w.lhs, w.rhs);
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(Suite::parse(s.name()), Some(s));
    }
    assert_eq!(Suite::parse("nope"), None);
}
