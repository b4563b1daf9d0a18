//! Fisher-scoring fit of the logistic observation-cost curve.
//!
//! Training data are `(detector score, is-real)` samples. The fit solves a
//! two-parameter logistic regression with the detector bias held fixed,
//! maximizing the ridge-penalized log-likelihood by iterated Newton steps
//! on the 2x2 Fisher information matrix.

use crate::cost::{FitError, LogisticParams};

/// Fisher-scoring knobs: ridge strength, convergence tolerance on the
/// parameter step, and the iteration cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub ridge: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            ridge: 1e-6,
            tol: 1e-8,
            max_iter: 100,
        }
    }
}

/// Fits `alpha` and `beta` of the observation-cost curve on
/// `(det_score, label)` samples, holding `bias` fixed.
///
/// The keep-probability of a sample is `p = sigma(-(bias + alpha +
/// beta*score))`, so on typical data (real detections score high) the
/// fitted `beta` is negative: higher score, lower cost.
pub fn fit_observation_cost(
    samples: &[(f64, bool)],
    bias: f64,
    options: &FitOptions,
) -> Result<LogisticParams, FitError> {
    let n_pos = samples.iter().filter(|&&(_, y)| y).count();
    if n_pos == 0 || n_pos == samples.len() {
        return Err(FitError::SingleClass);
    }

    let mut alpha = 0.0f64;
    let mut beta = 0.0f64;
    for _ in 0..options.max_iter {
        // Gradient of the penalized log-likelihood and the Fisher
        // information, accumulated over the samples. With
        // p = sigma(-eta) the per-sample gradient in eta is (p - y).
        let mut g0 = 0.0;
        let mut g1 = 0.0;
        let mut i00 = 0.0;
        let mut i01 = 0.0;
        let mut i11 = 0.0;
        for &(c, y) in samples {
            let eta = bias + alpha + beta * c;
            let p = 1.0 / (1.0 + libm::exp(eta));
            let d = p - if y { 1.0 } else { 0.0 };
            g0 += d;
            g1 += d * c;
            let w = p * (1.0 - p);
            i00 += w;
            i01 += w * c;
            i11 += w * c * c;
        }
        g0 -= options.ridge * alpha;
        g1 -= options.ridge * beta;
        i00 += options.ridge;
        i11 += options.ridge;

        // Newton step: solve the 2x2 system I * delta = g.
        let det = i00 * i11 - i01 * i01;
        let d0 = (g0 * i11 - g1 * i01) / det;
        let d1 = (g1 * i00 - g0 * i01) / det;
        alpha += d0;
        beta += d1;

        if libm::fabs(d0).max(libm::fabs(d1)) < options.tol {
            return Ok(LogisticParams { alpha, beta, bias });
        }
    }
    Err(FitError::NoConvergence {
        iterations: options.max_iter,
    })
}
