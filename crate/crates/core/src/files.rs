//! JSON instance and space files.

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{NearnessError, Result};
use crate::nearness::NearnessInstance;
use crate::poset::{bits, ElementSet, Mask, Poset};
use crate::spaces::{CoverMode, FiniteSpace, Role};

/// Marks an instance whose poset should be read as a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    /// Derive meets and joins from the order.
    #[serde(default = "yes")]
    pub derive: bool,
}

fn yes() -> bool {
    true
}

/// `{"elements": [...], "order": [[p, q], ...], "theta": [[...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub elements: Vec<String>,
    /// Pairs p ≤ q; the reflexive-transitive closure is taken.
    #[serde(default)]
    pub order: Vec<[String; 2]>,
    #[serde(default)]
    pub theta: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameSpec>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| NearnessError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn poset(&self) -> Result<Arc<Poset>> {
        let elements: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = self.order.iter().map(|[p, q]| (p.as_str(), q.as_str())).collect();
        Ok(Arc::new(Poset::new(&elements, &pairs)?))
    }

    pub fn to_instance(&self) -> Result<NearnessInstance> {
        let poset = self.poset()?;
        let sets = self
            .theta
            .iter()
            .map(|c| poset.set_from_names(c))
            .collect::<Result<Vec<ElementSet>>>()?;
        NearnessInstance::new(poset, &sets)
    }

    /// Writes Θ as listed members and ≤ as its covering pairs.
    pub fn from_instance(n: &NearnessInstance) -> Result<Self> {
        let p = n.poset();
        let mut order = Vec::new();
        for a in 0..p.len() {
            for b in 0..p.len() {
                let covering = a != b
                    && p.le(a, b)
                    && !(0..p.len()).any(|c| c != a && c != b && p.le(a, c) && p.le(c, b));
                if covering {
                    order.push([p.name(a).to_string(), p.name(b).to_string()]);
                }
            }
        }
        let theta = n
            .member_masks()?
            .into_iter()
            .map(|c| bits(c).map(|i| p.name(i).to_string()).collect())
            .collect();
        Ok(InstanceFile {
            elements: p.names().to_vec(),
            order,
            theta,
            frame: None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }
}

/// Θ of a space file: every cover of X, or a list of covers by set name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    Keyword(String),
    Listed(Vec<Vec<String>>),
}

/// `{"points": [...], "sets": {name: [...]}, "role": "subbasis", "theta": "all-covers"}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub sets: IndexMap<String, Vec<String>>,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaSpec>,
}

impl SpaceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| NearnessError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn space(&self) -> Result<FiniteSpace> {
        let family: Vec<(String, Vec<String>)> = self.sets.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        FiniteSpace::new(&self.points, &family, self.role)
    }

    /// The space and its Θ; `None` for Θ means all covers.
    pub fn build(&self) -> Result<(FiniteSpace, NearnessInstance)> {
        let s = self.space()?;
        let inst = match &self.theta {
            None => s.cover_family(CoverMode::All)?,
            Some(ThetaSpec::Keyword(k)) if k == "all-covers" => s.cover_family(CoverMode::All)?,
            Some(ThetaSpec::Keyword(k)) => {
                return Err(NearnessError::Parse(format!("theta must be \"all-covers\" or a list, not `{k}`")))
            }
            Some(ThetaSpec::Listed(covers)) => {
                let poset = s.family_poset()?;
                let sets = covers
                    .iter()
                    .map(|c| poset.set_from_names(c))
                    .collect::<Result<Vec<_>>>()?;
                NearnessInstance::new(poset, &sets)?
            }
        };
        Ok((s, inst))
    }
}

/// Either file kind, told apart by the `points` key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFile {
    Instance(InstanceFile),
    Space(SpaceFile),
}

impl AnyFile {
    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| NearnessError::Parse(e.to_string()))?;
        if v.get("points").is_some() {
            serde_json::from_value(v)
                .map(AnyFile::Space)
                .map_err(|e| NearnessError::Parse(e.to_string()))
        } else {
            serde_json::from_value(v)
                .map(AnyFile::Instance)
                .map_err(|e| NearnessError::Parse(e.to_string()))
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|_| NearnessError::Io(path.display().to_string()))
}

/// Names of the members of `m`, in element order.
pub fn names_of(p: &Poset, m: Mask) -> Vec<String> {
    bits(m).map(|i| p.name(i).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let f = InstanceFile::parse(r#"{"elements":["a","b","1"],"order":[["a","1"],["b","1"]],"theta":[["a","b"]]}"#)
            .unwrap();
        let n = f.to_instance().unwrap();
        let back = InstanceFile::from_instance(&n).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = InstanceFile::parse(r#"{"elements":["a","b"],"order":[["a","b"],["b","a"]],"theta":[]}"#).unwrap();
        assert!(matches!(bad.to_instance(), Err(NearnessError::NotAntisymmetric(..))));
        let unknown = InstanceFile::parse(r#"{"elements":["a"],"theta":[["z"]]}"#).unwrap();
        assert!(matches!(unknown.to_instance(), Err(NearnessError::UnknownElement(_))));
        assert!(matches!(InstanceFile::parse("{"), Err(NearnessError::Parse(_))));
    }

    #[test]
    fn space_files() {
        let f = SpaceFile::parse(
            r#"{"points":["x","y","z"],"sets":{"xy":["x","y"],"yz":["y","z"],"xz":["x","z"]},"role":"subbasis","theta":"all-covers"}"#,
        )
        .unwrap();
        let (s, n) = f.build().unwrap();
        assert!(s.is_t1_family());
        assert_eq!(n.generator_masks(), &[0b011, 0b101, 0b110]);
        assert!(matches!(AnyFile::parse(&serde_json::to_string(&f).unwrap()), Ok(AnyFile::Space(_))));
    }
}
