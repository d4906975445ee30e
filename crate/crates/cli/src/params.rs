//! Parameter sets as JSON: `{"family": "K", "N": 4, "q": "1/2", "params": {"p": "1/3"}}`.
//! Rationals are `"num/den"` strings; plain JSON integers are accepted on input.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use askey_core::arith::{parse_rational, to_fraction_string};
use askey_core::{FamilyId, FamilyParams, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSet {
    pub family: String,
    #[serde(rename = "N")]
    pub size: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub params: BTreeMap<String, String>,
}

impl ParamSet {
    pub fn from_family_params(p: &FamilyParams) -> Self {
        Self {
            family: p.family().code().to_string(),
            size: p.size(),
            q: p.q().map(to_fraction_string),
            params: p.named_values().into_iter().map(|(k, v)| (k.to_string(), to_fraction_string(&v))).collect(),
        }
    }

    pub fn family_id(&self) -> Result<FamilyId> {
        FamilyId::parse(&self.family).ok_or_else(|| anyhow!("unknown family {:?}", self.family))
    }

    /// Builds the core parameters without range validation.
    pub fn to_family_params(&self) -> Result<FamilyParams> {
        let family = self.family_id()?;
        let q = self.q.as_deref().map(parse_rational).transpose().context("parameter q")?;
        let named: Vec<(String, Rational)> = self
            .params
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_rational(v).with_context(|| format!("parameter {k}"))?)))
            .collect::<Result<_>>()?;
        Ok(FamilyParams::from_named(family, self.size, q, &named)?)
    }

    /// Parses either the nested form above or a flat object such as `{"p": "1/3", "N": 4}`.
    /// `family` and `size` fill in whatever the object leaves out.
    pub fn parse_inline(text: &str, family: Option<&str>, size: Option<u32>) -> Result<Self> {
        let value: Value = serde_json::from_str(text).context("parameter JSON")?;
        let Value::Object(map) = value else { bail!("parameter JSON must be an object") };
        let mut family = family.map(str::to_string);
        let mut size = size;
        let mut q = None;
        let mut params = BTreeMap::new();
        for (key, v) in map {
            match key.as_str() {
                "family" => family = Some(scalar_text(&v)?),
                "N" => {
                    let n = v.as_u64().or_else(|| v.as_str().and_then(|s| s.parse().ok()));
                    size = Some(n.ok_or_else(|| anyhow!("N must be a positive integer"))? as u32);
                }
                "q" => q = Some(scalar_text(&v)?),
                "params" => {
                    let Value::Object(inner) = v else { bail!("params must be an object") };
                    for (k, v) in inner {
                        params.insert(k, scalar_text(&v)?);
                    }
                }
                _ => {
                    params.insert(key, scalar_text(&v)?);
                }
            }
        }
        Ok(Self {
            family: family.ok_or_else(|| anyhow!("no family given"))?,
            size: size.ok_or_else(|| anyhow!("no lattice size N given"))?,
            q,
            params,
        })
    }
}

fn scalar_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => bail!("expected a rational string or an integer, got {v}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_nested_forms_agree() {
        let flat = ParamSet::parse_inline(r#"{"p":"1/3","N":4}"#, Some("K"), None).unwrap();
        let nested = ParamSet::parse_inline(r#"{"family":"K","N":4,"params":{"p":"1/3"}}"#, None, None).unwrap();
        assert_eq!(flat, nested);
        let p = flat.to_family_params().unwrap();
        assert_eq!(ParamSet::from_family_params(&p), flat);
    }

    #[test]
    fn integers_and_q() {
        let s = ParamSet::parse_inline(r#"{"family":"qqK","N":2,"q":"1/2","p":65}"#, None, None).unwrap();
        assert_eq!(s.params["p"], "65");
        assert!(s.to_family_params().unwrap().is_valid());
    }

    #[test]
    fn rejects_unknown_names() {
        let s = ParamSet::parse_inline(r#"{"x":"1"}"#, Some("K"), Some(2)).unwrap();
        assert!(s.to_family_params().is_err());
        assert!(ParamSet::parse_inline("[1]", Some("K"), Some(2)).is_err());
    }
}
