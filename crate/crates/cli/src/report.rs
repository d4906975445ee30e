//! Verification reports: JSON (lossless, round-trips) and a flat CSV view.

use std::time::Instant;

use anyhow::Result;
use askey_core::verify::{run_suite, Check, Status, Suite, SuiteOptions};
use askey_core::FamilyParams;
use serde::{Deserialize, Serialize};

use crate::params::ParamSet;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    /// Wall time; omitted when the report must be reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    #[serde(flatten)]
    pub params: ParamSet,
    pub suites: Vec<SuiteResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    pub runs: Vec<Run>,
}

impl Report {
    pub fn new(runs: Vec<Run>, stamped: bool) -> Self {
        let generated_at_unix = stamped.then(|| {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
        });
        Self { version: REPORT_VERSION, generated_at_unix, runs }
    }

    pub fn checks(&self) -> impl Iterator<Item = (&Run, &SuiteResult, &Check)> {
        self.runs.iter().flat_map(|r| r.suites.iter().flat_map(move |s| s.checks.iter().map(move |c| (r, s, c))))
    }

    pub fn failed(&self) -> bool {
        self.checks().any(|(_, _, c)| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,N,q,params,suite,id,anchor,status,x,n,lhs,rhs,detail\n");
        for (run, suite, check) in self.checks() {
            let p = &run.params;
            let params: Vec<String> = p.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let w = check.witness.clone().unwrap_or_default();
            let status = serde_json::to_value(check.status).expect("status serializes");
            let fields = [
                p.family.clone(),
                p.size.to_string(),
                p.q.clone().unwrap_or_default(),
                params.join(";"),
                suite.name.clone(),
                check.id.clone(),
                check.anchor.clone(),
                status.as_str().unwrap_or_default().to_string(),
                w.x.map(|x| x.to_string()).unwrap_or_default(),
                w.n.map(|n| n.to_string()).unwrap_or_default(),
                w.lhs.unwrap_or_default(),
                w.rhs.unwrap_or_default(),
                w.detail.unwrap_or_default(),
            ];
            let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Runs the selected suites on one parameter set, in the order given.
pub fn run_one(params: &FamilyParams, suites: &[Suite], opts: &SuiteOptions, timed: bool) -> Run {
    let suites = suites
        .iter()
        .map(|&s| {
            let start = Instant::now();
            let r = run_suite(params, s, opts);
            let elapsed_ms = timed.then(|| start.elapsed().as_millis() as u64);
            SuiteResult { name: r.name, elapsed_ms, checks: r.checks }
        })
        .collect();
    Run { params: ParamSet::from_family_params(params), suites }
}

#[cfg(test)]
mod tests {
    use super::*;
    use askey_core::verify::Witness;

    fn sample() -> Report {
        let params = ParamSet::parse_inline(r#"{"family":"K","N":2,"p":"1/3"}"#, None, None).unwrap();
        let check = Check {
            id: "difference-equation/n=1".into(),
            anchor: "difference-equation".into(),
            status: Status::Fail,
            witness: Some(Witness {
                x: Some(-1),
                n: Some(1),
                lhs: Some("-1/3".into()),
                rhs: Some("2".into()),
                detail: Some("a, \"b\"".into()),
            }),
        };
        let suite = SuiteResult { name: "orthogonality".into(), elapsed_ms: Some(3), checks: vec![check] };
        Report::new(vec![Run { params, suites: vec![suite] }], false)
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert!(r.failed());
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(vec![], false);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["runs"].as_array().unwrap().len(), 0);
        assert!(!r.failed());
    }

    #[test]
    fn csv_quotes_fields() {
        let csv = sample().to_csv();
        let line = csv.lines().nth(1).unwrap();
        assert!(
            line.starts_with("K,2,,p=1/3,orthogonality,difference-equation/n=1,difference-equation,fail,-1,1,-1/3,2,")
        );
        assert!(line.ends_with("\"a, \"\"b\"\"\""));
    }
}
