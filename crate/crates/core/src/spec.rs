//! Group-product specifications: the JSON input format describing a graph
//! product of finite abelian groups.
//!
//! A spec lists vertices, each carrying a finite abelian group as a list of
//! cyclic factor orders, and an edge set over vertex names.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecVertex {
    pub name: String,
    /// Orders of the cyclic factors of the vertex group, each >= 2.
    pub group: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupProductSpec {
    pub vertices: Vec<SpecVertex>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

impl GroupProductSpec {
    /// Convenience constructor for tests and internal corpora.
    pub fn new(vertices: &[(&str, &[u64])], edges: &[(&str, &str)]) -> Self {
        GroupProductSpec {
            vertices: vertices
                .iter()
                .map(|(name, group)| SpecVertex {
                    name: (*name).to_string(),
                    group: group.to_vec(),
                })
                .collect(),
            edges: edges
                .iter()
                .map(|(a, b)| ((*a).to_string(), (*b).to_string()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GroupProductSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for v in &self.vertices {
            if v.name.is_empty() {
                return Err(Error::InvalidSpec("empty vertex name".into()));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate vertex `{}`", v.name)));
            }
            if v.group.is_empty() {
                return Err(Error::InvalidSpec(format!(
                    "vertex `{}` has an empty group",
                    v.name
                )));
            }
            for &m in &v.group {
                if m < 2 {
                    return Err(Error::InvalidSpec(format!(
                        "vertex `{}` has cyclic factor order {m} < 2",
                        v.name
                    )));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (a, b) in &self.edges {
            if !names.contains(a.as_str()) {
                return Err(Error::InvalidSpec(format!("edge endpoint `{a}` is not a vertex")));
            }
            if !names.contains(b.as_str()) {
                return Err(Error::InvalidSpec(format!("edge endpoint `{b}` is not a vertex")));
            }
            if a == b {
                return Err(Error::InvalidSpec(format!("self-loop at `{a}`")));
            }
            let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            if !seen.insert(key) {
                return Err(Error::InvalidSpec(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(())
    }
}
