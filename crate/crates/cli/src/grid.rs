//! The default parameter grid. `ASKEY_FINITE_GRID` names a replacement file.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::params::ParamSet;

pub const GRID_ENV: &str = "ASKEY_FINITE_GRID";
const DEFAULT_GRID: &str = include_str!("../data/grid.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSet {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub sizes: Vec<u32>,
    pub sets: Vec<GridSet>,
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self> {
        let grid: Grid = serde_json::from_str(text).context("grid JSON")?;
        if grid.sizes.contains(&0) {
            bail!("grid sizes must be at least 1");
        }
        Ok(grid)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_GRID).expect("embedded grid parses")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    /// The file named by the environment variable, else the embedded grid.
    pub fn load() -> Result<Self> {
        match std::env::var_os(GRID_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Self::builtin()),
        }
    }

    /// Every set at every size, optionally restricted to some families, in file order.
    pub fn expand(&self, families: &[String]) -> Vec<ParamSet> {
        let wanted = |f: &str| families.is_empty() || families.iter().any(|g| g.eq_ignore_ascii_case(f));
        self.sets
            .iter()
            .filter(|s| wanted(&s.family))
            .flat_map(|s| {
                self.sizes.iter().map(move |&n| ParamSet {
                    family: s.family.clone(),
                    size: n,
                    q: s.q.clone(),
                    params: s.params.clone(),
                })
            })
            .collect()
    }

    pub fn largest_size(&self) -> u32 {
        self.sizes.iter().copied().max().unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use askey_core::FamilyId;

    #[test]
    fn builtin_grid_is_valid_everywhere() {
        let grid = Grid::builtin();
        for f in FamilyId::ALL {
            assert_eq!(grid.sets.iter().filter(|s| FamilyId::parse(&s.family) == Some(f)).count(), 2, "{f:?}");
        }
        for set in grid.expand(&[]) {
            let p = set.to_family_params().unwrap();
            assert!(p.is_valid(), "{set:?}: {:?}", p.validate());
        }
    }

    #[test]
    fn family_filter() {
        let grid = Grid::builtin();
        let sets = grid.expand(&["qr".to_string()]);
        assert_eq!(sets.len(), 2 * grid.sizes.len());
        assert!(sets.iter().all(|s| s.family == "qR"));
    }
}
