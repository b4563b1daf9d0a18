//! Association cost models.
//!
//! Two trainable models price the edges of the association problem. The
//! observation model maps a detector score to the cost of keeping the
//! detection at all: a logistic curve `p = 1/(1 + exp(b + alpha + beta*c))`
//! turned into a log-odds cost `-log(p/(1-p))`, which algebraically equals
//! `b + alpha + beta*c`. The transition model scores how likely two
//! detections are the same person one hop apart, from a three-cue vector
//! (box overlap, appearance distance, action-feature distance), using a
//! gradient-boosted tree ensemble whose raw score `q` becomes the cost
//! `-log(sigmoid(q))`.
//!
//! Submodules hold the trainers: [`fisher`] fits the logistic curve by
//! Fisher scoring, [`boost`] fits the tree ensemble by gradient boosting.

pub mod boost;
pub mod fisher;

pub use boost::{
    build_training_pairs, fit_transition_model, fit_transition_model_traced, BoostOptions,
    PairOptions,
};
pub use fisher::{fit_observation_cost, FitOptions};

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::geometry::iou;
use crate::model::Observation;

/// Probabilities are kept this far away from 0 and 1 before a log.
pub const PROB_CLAMP: f64 = 1e-12;

/// Errors from cost evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CostError {
    #[error("cosine distance of a zero-norm vector is undefined")]
    ZeroNorm,
    #[error("vectors have mismatched dimensions {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Errors from model fitting.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("training data contains only one class")]
    SingleClass,
    #[error("no training pairs could be built from the ground truth")]
    NoPairs,
    #[error("fitting did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error(transparent)]
    Cue(#[from] CostError),
}

/// Logistic observation-cost parameters. `bias` is the detector-level
/// offset, `alpha` and `beta` are the fitted intercept and slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    pub alpha: f64,
    pub beta: f64,
    pub bias: f64,
}

impl Default for LogisticParams {
    /// Untrained curve: only the default bias of -2, so every detection has
    /// observation cost -2 regardless of score.
    fn default() -> Self {
        LogisticParams {
            alpha: 0.0,
            beta: 0.0,
            bias: -2.0,
        }
    }
}

/// The three association cues for a detection pair `(a, b)` with
/// `a.frame < b.frame`: box overlap (higher = closer) and two cosine
/// distances (lower = closer).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CueVector {
    pub c_iou: f64,
    pub c_app: f64,
    pub c_paf: f64,
}

impl CueVector {
    pub const DIM: usize = 3;

    /// Cue component by feature index; the order is `c_iou`, `c_app`,
    /// `c_paf`.
    pub fn feature(&self, index: usize) -> f64 {
        match index {
            0 => self.c_iou,
            1 => self.c_app,
            2 => self.c_paf,
            _ => panic!("cue feature index out of range"),
        }
    }
}

/// One node of a binary regression tree over cue vectors. Samples with
/// `feature < threshold` go left, the rest go right.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        value: f64,
    },
}

impl TreeNode {
    pub fn evaluate(&self, cue: &CueVector) -> f64 {
        match self {
            TreeNode::Leaf { value } => *value,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if cue.feature(*feature) < *threshold {
                    left.evaluate(cue)
                } else {
                    right.evaluate(cue)
                }
            }
        }
    }

    /// Checks that every split uses a valid feature index and a finite
    /// threshold, and every leaf a finite value.
    pub fn validate(&self) -> Result<(), &'static str> {
        match self {
            TreeNode::Leaf { value } => {
                if value.is_finite() {
                    Ok(())
                } else {
                    Err("non-finite leaf value")
                }
            }
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if *feature >= CueVector::DIM {
                    return Err("split feature index out of range");
                }
                if !threshold.is_finite() {
                    return Err("non-finite split threshold");
                }
                left.validate()?;
                right.validate()
            }
        }
    }
}

/// Gradient-boosted regression forest: raw score is
/// `base_score + shrinkage * sum(tree outputs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEnsemble {
    pub trees: Vec<TreeNode>,
    pub shrinkage: f64,
    pub base_score: f64,
}

impl TreeEnsemble {
    /// An ensemble with no trees that always scores `base_score`.
    pub fn constant(base_score: f64) -> Self {
        TreeEnsemble {
            trees: Vec::new(),
            shrinkage: 1.0,
            base_score,
        }
    }

    /// Raw ensemble score `q` for a cue vector. Positive means the pair
    /// looks like the same identity.
    pub fn score(&self, cue: &CueVector) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.evaluate(cue)).sum();
        self.base_score + self.shrinkage * sum
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if !(self.shrinkage > 0.0 && self.shrinkage <= 1.0) {
            return Err("shrinkage must lie in (0,1]");
        }
        if !self.base_score.is_finite() {
            return Err("non-finite base score");
        }
        for tree in &self.trees {
            tree.validate()?;
        }
        Ok(())
    }
}

/// Everything needed to price an association problem: the two trained
/// models plus the constant track birth/death costs.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationCosts {
    pub logistic: LogisticParams,
    pub ensemble: TreeEnsemble,
    pub c_entr: f64,
    pub c_exit: f64,
}

impl Default for AssociationCosts {
    /// Untrained defaults: entry/exit cost 10, observation cost -2,
    /// transition score 0 (cost `log 2`).
    fn default() -> Self {
        AssociationCosts {
            logistic: LogisticParams::default(),
            ensemble: TreeEnsemble::constant(0.0),
            c_entr: 10.0,
            c_exit: 10.0,
        }
    }
}

impl AssociationCosts {
    pub fn observation_cost(&self, det_score: f64) -> f64 {
        observation_cost(det_score, &self.logistic)
    }

    pub fn transition_cost(&self, cue: &CueVector) -> f64 {
        transition_cost(cue, &self.ensemble)
    }
}

fn sigmoid(q: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-q))
}

/// Cosine distance `1 - cos(u, v)`, in `[0, 2]`. Zero-norm input is an
/// error rather than a default: a silent fallback would poison every cost
/// built on top.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64, CostError> {
    if u.len() != v.len() {
        return Err(CostError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (&a, &b) in u.iter().zip(v.iter()) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(CostError::ZeroNorm);
    }
    let cos = dot / (libm::sqrt(nu) * libm::sqrt(nv));
    Ok((1.0 - cos).clamp(0.0, 2.0))
}

/// Builds the cue vector for an ordered detection pair (`a` strictly before
/// `b` in time).
pub fn cue_vector(a: &Observation, b: &Observation) -> Result<CueVector, CostError> {
    debug_assert!(a.frame < b.frame, "cue pairs must be time-ordered");
    Ok(CueVector {
        c_iou: iou(&a.bbox, &b.bbox),
        c_app: cosine_distance(&a.appearance, &b.appearance)?,
        c_paf: cosine_distance(&a.paf, &b.paf)?,
    })
}

/// Cost of accepting a detection as real. Computes the logistic
/// `p = 1/(1 + exp(b + alpha + beta*c))` and returns the log-odds cost
/// `-log(p/(1-p))`, which equals `b + alpha + beta*c` exactly; the clamp
/// only guards the saturated tails.
pub fn observation_cost(det_score: f64, params: &LogisticParams) -> f64 {
    let eta = params.bias + params.alpha + params.beta * det_score;
    let p = (1.0 / (1.0 + libm::exp(eta))).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    -libm::log(p / (1.0 - p))
}

/// Raw transition score `q` from the boosted ensemble.
pub fn transition_score(cue: &CueVector, ensemble: &TreeEnsemble) -> f64 {
    ensemble.score(cue)
}

/// Cost of linking two detections as consecutive members of one identity:
/// `-log(sigmoid(q))`, clamped so the cost stays finite.
pub fn transition_cost(cue: &CueVector, ensemble: &TreeEnsemble) -> f64 {
    let p = sigmoid(transition_score(cue, ensemble)).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    -libm::log(p)
}
