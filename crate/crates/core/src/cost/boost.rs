//! Gradient-boosted trees for the transition model, plus extraction of
//! labeled cue pairs from ground-truth trajectories.
//!
//! Boosting minimizes logistic loss: each round fits a small regression
//! tree to the current residuals `y - sigmoid(F)` by variance-reduction
//! splits, then sets each leaf to the one-step Newton value
//! `sum(residual) / sum(p*(1-p))` and applies it with shrinkage.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cost::{cue_vector, CueVector, FitError, TreeEnsemble, TreeNode};
use crate::model::{Observation, Trajectory};

/// Boosting knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostOptions {
    pub n_trees: usize,
    pub max_depth: usize,
    pub shrinkage: f64,
    pub min_samples_leaf: usize,
}

impl Default for BoostOptions {
    fn default() -> Self {
        BoostOptions {
            n_trees: 100,
            max_depth: 3,
            shrinkage: 0.1,
            min_samples_leaf: 5,
        }
    }
}

/// How cue pairs are mined from ground truth: the largest frame gap that
/// still forms a pair, the cap on negatives per positive, and the seed for
/// negative subsampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOptions {
    pub max_gap: u64,
    pub negative_ratio: f64,
    pub seed: u64,
}

impl Default for PairOptions {
    fn default() -> Self {
        PairOptions {
            max_gap: 30,
            negative_ratio: 3.0,
            seed: 0,
        }
    }
}

/// Builds labeled cue pairs from ground-truth trajectories.
///
/// Positives are consecutive members of one trajectory within the frame
/// gap. Negatives are cross-identity pairs inside the same gap window,
/// subsampled (seeded, order-preserving) to at most `negative_ratio` times
/// the positive count. Positives come first in the output.
pub fn build_training_pairs(
    gt: &[Trajectory],
    observations: &[Observation],
    options: &PairOptions,
) -> Result<Vec<(CueVector, bool)>, FitError> {
    let in_window = |a: u64, b: u64| b > a && b - a <= options.max_gap;

    let mut pairs = Vec::new();
    for traj in gt {
        for k in 1..traj.len() {
            if in_window(traj.frames()[k - 1], traj.frames()[k]) {
                let a = &observations[traj.members()[k - 1]];
                let b = &observations[traj.members()[k]];
                pairs.push((cue_vector(a, b)?, true));
            }
        }
    }
    let n_pos = pairs.len();

    let mut negatives = Vec::new();
    for (i, ti) in gt.iter().enumerate() {
        for (j, tj) in gt.iter().enumerate() {
            if i == j {
                continue;
            }
            for (&ma, &fa) in ti.members().iter().zip(ti.frames()) {
                for (&mb, &fb) in tj.members().iter().zip(tj.frames()) {
                    if in_window(fa, fb) {
                        negatives.push((cue_vector(&observations[ma], &observations[mb])?, false));
                    }
                }
            }
        }
    }

    if n_pos == 0 && negatives.is_empty() {
        return Err(FitError::NoPairs);
    }

    let cap = (options.negative_ratio * n_pos as f64) as usize;
    if n_pos > 0 && negatives.len() > cap {
        let mut rng = ChaCha20Rng::seed_from_u64(options.seed);
        let mut keep: Vec<usize> =
            rand::seq::index::sample(&mut rng, negatives.len(), cap).into_vec();
        keep.sort_unstable();
        let mut kept = Vec::with_capacity(cap);
        for idx in keep {
            kept.push(negatives[idx]);
        }
        negatives = kept;
    }
    pairs.extend(negatives);
    Ok(pairs)
}

/// Fits the transition ensemble by gradient boosting with logistic loss.
pub fn fit_transition_model(
    pairs: &[(CueVector, bool)],
    options: &BoostOptions,
) -> Result<TreeEnsemble, FitError> {
    fit_transition_model_traced(pairs, options).map(|(ensemble, _)| ensemble)
}

/// Like [`fit_transition_model`] but also returns the mean training loss
/// after the base score and after each boosting round (`n_trees + 1`
/// values, non-increasing).
pub fn fit_transition_model_traced(
    pairs: &[(CueVector, bool)],
    options: &BoostOptions,
) -> Result<(TreeEnsemble, Vec<f64>), FitError> {
    let n = pairs.len();
    let n_pos = pairs.iter().filter(|&&(_, y)| y).count();
    if n_pos == 0 || n_pos == n {
        return Err(FitError::SingleClass);
    }

    let features: Vec<[f64; 3]> = pairs
        .iter()
        .map(|(c, _)| [c.c_iou, c.c_app, c.c_paf])
        .collect();
    let labels: Vec<f64> = pairs
        .iter()
        .map(|&(_, y)| if y { 1.0 } else { 0.0 })
        .collect();

    let base_score = libm::log(n_pos as f64 / (n - n_pos) as f64);
    let mut scores = vec![base_score; n];
    let mut losses = vec![mean_logistic_loss(&scores, &labels)];
    let mut trees = Vec::with_capacity(options.n_trees);

    let all: Vec<usize> = (0..n).collect();
    for _ in 0..options.n_trees {
        let mut residual = Vec::with_capacity(n);
        let mut hessian = Vec::with_capacity(n);
        for (&f, &y) in scores.iter().zip(&labels) {
            let p = 1.0 / (1.0 + libm::exp(-f));
            residual.push(y - p);
            hessian.push(p * (1.0 - p));
        }
        let tree = build_tree(&all, 0, &features, &residual, &hessian, options);
        for (i, f) in scores.iter_mut().enumerate() {
            *f += options.shrinkage
                * tree.evaluate(&CueVector {
                    c_iou: features[i][0],
                    c_app: features[i][1],
                    c_paf: features[i][2],
                });
        }
        losses.push(mean_logistic_loss(&scores, &labels));
        trees.push(tree);
    }

    Ok((
        TreeEnsemble {
            trees,
            shrinkage: options.shrinkage,
            base_score,
        },
        losses,
    ))
}

fn mean_logistic_loss(scores: &[f64], labels: &[f64]) -> f64 {
    let mut loss = 0.0;
    for (&f, &y) in scores.iter().zip(labels) {
        let p = (1.0 / (1.0 + libm::exp(-f))).clamp(1e-12, 1.0 - 1e-12);
        loss -= y * libm::log(p) + (1.0 - y) * libm::log(1.0 - p);
    }
    loss / scores.len() as f64
}

fn newton_leaf(indices: &[usize], residual: &[f64], hessian: &[f64]) -> TreeNode {
    let sum_r: f64 = indices.iter().map(|&i| residual[i]).sum();
    let sum_h: f64 = indices.iter().map(|&i| hessian[i]).sum();
    let value = if sum_h < 1e-12 {
        0.0
    } else {
        (sum_r / sum_h).clamp(-10.0, 10.0)
    };
    TreeNode::Leaf { value }
}

fn build_tree(
    indices: &[usize],
    depth: usize,
    features: &[[f64; 3]],
    residual: &[f64],
    hessian: &[f64],
    options: &BoostOptions,
) -> TreeNode {
    let min_leaf = options.min_samples_leaf.max(1);
    if depth >= options.max_depth || indices.len() < 2 * min_leaf {
        return newton_leaf(indices, residual, hessian);
    }

    // Pick the split with the largest residual-variance reduction; ties go
    // to the lowest feature index and earliest position, so the tree shape
    // is deterministic.
    let sum_r: f64 = indices.iter().map(|&i| residual[i]).sum();
    let sum_rr: f64 = indices.iter().map(|&i| residual[i] * residual[i]).sum();
    let parent_sse = sum_rr - sum_r * sum_r / indices.len() as f64;

    let mut best: Option<(f64, usize, f64)> = None; // (gain, feature, threshold)
    for feature in [0, 1, 2] {
        let mut order: Vec<usize> = indices.to_vec();
        order.sort_unstable_by(|&a, &b| {
            features[a][feature]
                .total_cmp(&features[b][feature])
                .then(a.cmp(&b))
        });
        let mut left_r = 0.0;
        let mut left_rr = 0.0;
        for k in 1..order.len() {
            let i = order[k - 1];
            left_r += residual[i];
            left_rr += residual[i] * residual[i];
            if k < min_leaf || order.len() - k < min_leaf {
                continue;
            }
            let lo = features[order[k - 1]][feature];
            let hi = features[order[k]][feature];
            if lo >= hi {
                continue;
            }
            let right_r = sum_r - left_r;
            let right_rr = sum_rr - left_rr;
            let sse = (left_rr - left_r * left_r / k as f64)
                + (right_rr - right_r * right_r / (order.len() - k) as f64);
            let gain = parent_sse - sse;
            if best.map_or(true, |(g, _, _)| gain > g) {
                best = Some((gain, feature, (lo + hi) / 2.0));
            }
        }
    }

    let Some((gain, feature, threshold)) = best else {
        return newton_leaf(indices, residual, hessian);
    };
    if gain <= 1e-12 {
        return newton_leaf(indices, residual, hessian);
    }

    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| features[i][feature] < threshold);
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(build_tree(
            &left_idx, depth + 1, features, residual, hessian, options,
        )),
        right: Box::new(build_tree(
            &right_idx, depth + 1, features, residual, hessian, options,
        )),
    }
}
