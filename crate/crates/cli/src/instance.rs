use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qanneal_core::{CostFunction, GraphPartitionInstance};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A problem instance in either of its two input forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Graph(GraphPartitionInstance),
    Cost(CostFunction),
}

impl Instance {
    pub fn cost(&self) -> Result<CostFunction> {
        match self {
            Instance::Graph(g) => Ok(g.cost()?),
            Instance::Cost(c) => Ok(c.clone()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Graph(_) => "graph",
            Instance::Cost(_) => "cost",
        }
    }
}

/// On-disk wrapper written by `generate`; the provenance block is not needed
/// for loading and is skipped.
#[derive(Debug, Clone, Deserialize)]
struct InstanceFile {
    instance: Instance,
}

/// Reads a file written by `generate`, or a bare cost or graph object.
pub fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let parsed = if value.get("instance").is_some() {
        serde_json::from_value::<InstanceFile>(value).map(|f| f.instance)
    } else if value.get("terms").is_some() {
        serde_json::from_value(value).map(Instance::Cost)
    } else if value.get("edges").is_some() {
        serde_json::from_value(value).map(Instance::Graph)
    } else {
        bail!("{}: expected a cost function or graph instance", path.display());
    };
    parsed.with_context(|| format!("invalid instance in {}", path.display()))
}
