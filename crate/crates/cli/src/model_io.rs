//! Cost-model files: the fitted logistic parameters, the boosted tree
//! ensemble and the entry/exit costs, as pretty-printed JSON.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use cuetrack_core::cost::{AssociationCosts, LogisticParams, TreeEnsemble, TreeNode};

use crate::formats::FORMAT_VERSION;

#[derive(Debug, Serialize, Deserialize)]
struct CostModelFile {
    version: u32,
    logistic: LogisticJson,
    ensemble: EnsembleJson,
    c_entr: f64,
    c_exit: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct LogisticJson {
    alpha: f64,
    beta: f64,
    bias: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EnsembleJson {
    base_score: f64,
    shrinkage: f64,
    trees: Vec<TreeJson>,
}

/// A decision tree node: split objects carry `feature`/`threshold` and two
/// children, leaves carry a single `leaf` value.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum TreeJson {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeJson>,
        right: Box<TreeJson>,
    },
    Leaf {
        leaf: f64,
    },
}

impl TreeJson {
    fn from_core(node: &TreeNode) -> Self {
        match node {
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => TreeJson::Split {
                feature: *feature,
                threshold: *threshold,
                left: Box::new(TreeJson::from_core(left)),
                right: Box::new(TreeJson::from_core(right)),
            },
            TreeNode::Leaf { value } => TreeJson::Leaf { leaf: *value },
        }
    }

    fn into_core(self) -> TreeNode {
        match self {
            TreeJson::Split {
                feature,
                threshold,
                left,
                right,
            } => TreeNode::Split {
                feature,
                threshold,
                left: Box::new(left.into_core()),
                right: Box::new(right.into_core()),
            },
            TreeJson::Leaf { leaf } => TreeNode::Leaf { value: leaf },
        }
    }
}

/// Writes a cost model as JSON.
pub fn write_model(path: &Path, costs: &AssociationCosts) -> Result<()> {
    let file = CostModelFile {
        version: FORMAT_VERSION,
        logistic: LogisticJson {
            alpha: costs.logistic.alpha,
            beta: costs.logistic.beta,
            bias: costs.logistic.bias,
        },
        ensemble: EnsembleJson {
            base_score: costs.ensemble.base_score,
            shrinkage: costs.ensemble.shrinkage,
            trees: costs.ensemble.trees.iter().map(TreeJson::from_core).collect(),
        },
        c_entr: costs.c_entr,
        c_exit: costs.c_exit,
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write model file {}", path.display()))
}

/// Reads and validates a cost model.
pub fn read_model(path: &Path) -> Result<AssociationCosts> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    let file: CostModelFile = serde_json::from_str(&text)
        .with_context(|| format!("{}: invalid cost model", path.display()))?;
    let ensemble = TreeEnsemble {
        trees: file.ensemble.trees.into_iter().map(TreeJson::into_core).collect(),
        shrinkage: file.ensemble.shrinkage,
        base_score: file.ensemble.base_score,
    };
    ensemble
        .validate()
        .map_err(|e| anyhow::anyhow!("{}: invalid cost model: {e}", path.display()))?;
    Ok(AssociationCosts {
        logistic: LogisticParams {
            alpha: file.logistic.alpha,
            beta: file.logistic.beta,
            bias: file.logistic.bias,
        },
        ensemble,
        c_entr: file.c_entr,
        c_exit: file.c_exit,
    })
}
