//! Group input JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{builtin_group, FiniteGroup};
use crate::error::{Error, Result};

/// `{"name": .., "permutations": [[..], ..]}`, `{"name": .., "cayley": [[..], ..]}`
/// or a built-in name such as `"auto:S4"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Permutations {
        name: String,
        permutations: Vec<Vec<u32>>,
    },
    Cayley {
        name: String,
        cayley: Vec<Vec<u32>>,
    },
    Named(String),
}

impl GroupSpec {
    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Permutations { name, permutations } => {
                FiniteGroup::from_permutations(name, permutations, cap)
            }
            GroupSpec::Cayley { name, cayley } => FiniteGroup::from_cayley(name, cayley, cap),
            GroupSpec::Named(name) => {
                let g = builtin_group(name)?;
                if g.order() > cap {
                    return Err(Error::OrderCapExceeded { cap });
                }
                Ok(g)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("group JSON: {e}")))
    }
}

pub fn load_group(path: &Path, cap: usize) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?;
    GroupSpec::from_json(&text)?.build(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let p = GroupSpec::from_json(r#"{"name": "C2", "permutations": [[1, 0]]}"#).unwrap();
        assert_eq!(p.build(100).unwrap().order(), 2);
        let c = GroupSpec::from_json(r#"{"name": "C2", "cayley": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(c.build(100).unwrap().order(), 2);
        let n = GroupSpec::from_json(r#""auto:A4""#).unwrap();
        assert_eq!(n.build(100).unwrap().order(), 12);
        assert!(GroupSpec::from_json(r#"{"name": 3}"#).is_err());
    }
}
