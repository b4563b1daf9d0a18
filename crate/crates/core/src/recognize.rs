//! Sliding-window multi-label action recognition over trajectories.
//!
//! A trajectory member at frame t is labeled from the mean per-class action
//! scores of the trajectory's members in the trailing window `(t - lambda,
//! t]`; classes at or above the threshold epsilon are emitted, and an empty
//! set means the action is unknown.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{ActionTimeline, Frame, Observation, Trajectory};

/// Recognition errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecognizeError {
    #[error("window length must be at least 1 frame")]
    BadWindow,
    #[error("threshold must lie in [0,1], got {value}")]
    BadThreshold { value: f64 },
    #[error("no trajectory members fall in the window ending at frame {frame}")]
    EmptyWindow { frame: Frame },
}

/// Window length, decision threshold and the class name table.
#[derive(Debug, Clone, PartialEq)]
pub struct RecognitionConfig {
    pub lambda: u64,
    pub epsilon: f64,
    pub class_names: Vec<String>,
}

impl RecognitionConfig {
    pub fn new(
        lambda: u64,
        epsilon: f64,
        class_names: Vec<String>,
    ) -> Result<Self, RecognizeError> {
        if lambda < 1 {
            return Err(RecognizeError::BadWindow);
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(RecognizeError::BadThreshold { value: epsilon });
        }
        Ok(RecognitionConfig {
            lambda,
            epsilon,
            class_names,
        })
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }
}

/// Mean per-class action scores over the trajectory's members in the
/// trailing window `(t - lambda, t]`, summed in member order. Errors when
/// no member falls inside the window.
pub fn window_scores(
    traj: &Trajectory,
    observations: &[Observation],
    t: Frame,
    lambda: u64,
) -> Result<Vec<f64>, RecognizeError> {
    let mut sums: Option<Vec<f64>> = None;
    let mut count = 0usize;
    for (&member, &frame) in traj.members().iter().zip(traj.frames()) {
        if frame <= t && t - frame < lambda {
            let scores = &observations[member].action_scores;
            let sums = sums.get_or_insert_with(|| vec![0.0; scores.len()]);
            debug_assert_eq!(sums.len(), scores.len());
            for (acc, &s) in sums.iter_mut().zip(scores) {
                *acc += s;
            }
            count += 1;
        }
    }
    let Some(mut sums) = sums else {
        return Err(RecognizeError::EmptyWindow { frame: t });
    };
    for s in &mut sums {
        *s /= count as f64;
    }
    Ok(sums)
}

/// Labels every member frame of every trajectory. Classes whose windowed
/// score reaches `epsilon` are emitted; frames where none does stay
/// unknown (empty label set).
pub fn recognize_timeline(
    trajectories: &[Trajectory],
    observations: &[Observation],
    config: &RecognitionConfig,
) -> Result<ActionTimeline, RecognizeError> {
    if config.lambda < 1 {
        return Err(RecognizeError::BadWindow);
    }
    if !(0.0..=1.0).contains(&config.epsilon) {
        return Err(RecognizeError::BadThreshold {
            value: config.epsilon,
        });
    }
    let mut timeline = ActionTimeline::new();
    for traj in trajectories {
        for &frame in traj.frames() {
            let scores = window_scores(traj, observations, frame, config.lambda)?;
            let labels: Vec<usize> = scores
                .iter()
                .enumerate()
                .filter(|&(_, &s)| s >= config.epsilon)
                .map(|(c, _)| c)
                .collect();
            timeline.set_labels(traj.id(), frame, labels);
        }
    }
    Ok(timeline)
}
