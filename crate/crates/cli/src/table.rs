//! Value tables of `P_n(x)` over the lattice.

use anyhow::Result;
use askey_core::arith::{to_decimal_string, to_fraction_string};
use askey_core::{FamilyParams, Rational};
use serde::Serialize;

/// Significant digits of the approximate column.
pub const APPROX_DIGITS: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub n: u64,
    pub x: i64,
    pub value: String,
    pub approx: String,
}

pub fn entries(params: &FamilyParams) -> Result<Vec<Entry>> {
    let nn = params.size() as u64;
    let mut out = Vec::new();
    for n in 0..=nn {
        for x in 0..=nn as i64 {
            let v: Rational = params.eval_p(n, x)?;
            out.push(Entry { n, x, value: to_fraction_string(&v), approx: to_decimal_string(&v, APPROX_DIGITS) });
        }
    }
    Ok(out)
}

pub fn to_csv(entries: &[Entry]) -> String {
    let mut out = String::from("n,x,value,approx_12_significant_non_authoritative\n");
    for e in entries {
        out.push_str(&format!("{},{},{},{}\n", e.n, e.x, e.value, e.approx));
    }
    out
}

pub fn to_json(params: &FamilyParams, entries: &[Entry]) -> String {
    let doc = serde_json::json!({
        "params": crate::params::ParamSet::from_family_params(params),
        "approx_note": "approx is a 12-significant-digit truncation; value is exact",
        "entries": entries,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamSet;

    #[test]
    fn square_table() {
        let p =
            ParamSet::parse_inline(r#"{"a":"1","b":"2","N":3}"#, Some("H"), None).unwrap().to_family_params().unwrap();
        let e = entries(&p).unwrap();
        assert_eq!(e.len(), 16);
        assert!(e.iter().filter(|e| e.n == 0).all(|e| e.value == "1"));
        let csv = to_csv(&e);
        assert_eq!(csv.lines().count(), 17);
    }
}
