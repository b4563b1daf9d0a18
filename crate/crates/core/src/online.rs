//! Online tracking: frame-by-frame Hungarian assignment against the same
//! trained cost models the global solver uses.
//!
//! Each step matches live tracks to the new frame's detections by
//! transition cost, gated so implausible pairs are never linked. Unmatched
//! detections whose observation cost is negative spawn tracks; tracks
//! unseen for too long are retired.

use alloc::vec::Vec;

use crate::assignment::hungarian;
use crate::cost::{cue_vector, AssociationCosts, CostError};
use crate::model::{Frame, Observation, TrackId, Trajectory};

/// Gated pairs carry this cost in the assignment matrix; assignments at or
/// above half of it are discarded afterwards.
const GATE_SENTINEL: f64 = 1e12;

/// Online-mode knobs: the largest transition cost still considered a
/// plausible match, and how many consecutive unmatched frames a track
/// survives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineConfig {
    pub gate: f64,
    pub max_misses: u64,
}

impl Default for OnlineConfig {
    /// The default gate is `-log(sigmoid(0)) = log 2`: a pair must be more
    /// likely a match than not.
    fn default() -> Self {
        OnlineConfig {
            gate: core::f64::consts::LN_2,
            max_misses: 30,
        }
    }
}

/// Errors from online stepping.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OnlineError {
    #[error(transparent)]
    Cue(#[from] CostError),
    #[error("frame {got} does not follow frame {last}")]
    OutOfOrder { last: Frame, got: Frame },
    #[error("observation {index} belongs to frame {obs_frame}, not the stepped frame {frame}")]
    FrameMismatch {
        index: usize,
        obs_frame: Frame,
        frame: Frame,
    },
}

#[derive(Debug, Clone)]
struct ActiveTrack {
    traj: Trajectory,
    last_obs: usize,
    misses: u64,
}

/// Incremental tracker state. Feed frames in strictly increasing order via
/// [`OnlineTracker::step`], then collect trajectories with
/// [`OnlineTracker::finish`].
#[derive(Debug, Clone)]
pub struct OnlineTracker {
    config: OnlineConfig,
    active: Vec<ActiveTrack>,
    finished: Vec<Trajectory>,
    next_id: TrackId,
    last_frame: Option<Frame>,
}

impl OnlineTracker {
    pub fn new(config: OnlineConfig) -> Self {
        OnlineTracker {
            config,
            active: Vec::new(),
            finished: Vec::new(),
            next_id: 1,
            last_frame: None,
        }
    }

    /// Number of tracks currently alive.
    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    /// Processes one frame. `detections` are indices into `observations`,
    /// all of which must sit exactly at `frame`. Returns every
    /// `(track id, observation index)` pair recorded this frame, matches
    /// and newly spawned tracks alike, in detection order.
    pub fn step(
        &mut self,
        frame: Frame,
        detections: &[usize],
        observations: &[Observation],
        costs: &AssociationCosts,
    ) -> Result<Vec<(TrackId, usize)>, OnlineError> {
        if let Some(last) = self.last_frame {
            if frame <= last {
                return Err(OnlineError::OutOfOrder { last, got: frame });
            }
        }
        self.last_frame = Some(frame);
        for &d in detections {
            if observations[d].frame != frame {
                return Err(OnlineError::FrameMismatch {
                    index: d,
                    obs_frame: observations[d].frame,
                    frame,
                });
            }
        }

        // Transition costs, track rows by detection columns; pairs past the
        // gate get a sentinel so the assignment can always complete.
        let rows = self.active.len();
        let cols = detections.len();
        let mut matrix = Vec::with_capacity(rows * cols);
        for track in &self.active {
            let last = &observations[track.last_obs];
            for &d in detections {
                let cost = costs.transition_cost(&cue_vector(last, &observations[d])?);
                matrix.push(if cost > self.config.gate {
                    GATE_SENTINEL
                } else {
                    cost
                });
            }
        }

        let mut track_of_detection = vec_none(cols);
        for (r, c) in hungarian(&matrix, rows, cols) {
            if matrix[r * cols + c] < GATE_SENTINEL / 2.0 {
                track_of_detection[c] = Some(r);
            }
        }

        let mut assigned = Vec::new();
        let mut matched_rows = alloc::vec![false; rows];
        for (c, &d) in detections.iter().enumerate() {
            match track_of_detection[c] {
                Some(r) => {
                    let track = &mut self.active[r];
                    track
                        .traj
                        .push(d, frame)
                        .expect("stepped frames are strictly increasing");
                    track.last_obs = d;
                    track.misses = 0;
                    matched_rows[r] = true;
                    assigned.push((track.traj.id(), d));
                }
                None => {
                    // A detection worth keeping on its own starts a track.
                    if costs.observation_cost(observations[d].det_score) < 0.0 {
                        let mut traj = Trajectory::new(self.next_id);
                        self.next_id += 1;
                        traj.push(d, frame).expect("fresh trajectory accepts any frame");
                        assigned.push((traj.id(), d));
                        self.active.push(ActiveTrack {
                            traj,
                            last_obs: d,
                            misses: 0,
                        });
                        matched_rows.push(true);
                    }
                }
            }
        }

        // Age unmatched tracks and retire the ones past the miss budget.
        let mut still_active = Vec::with_capacity(self.active.len());
        for (r, mut track) in core::mem::take(&mut self.active).into_iter().enumerate() {
            if !matched_rows[r] {
                track.misses += 1;
                if track.misses > self.config.max_misses {
                    self.finished.push(track.traj);
                    continue;
                }
            }
            still_active.push(track);
        }
        self.active = still_active;

        Ok(assigned)
    }

    /// Ends the sequence, returning all trajectories sorted by id (spawn
    /// order, which follows first frame then detection order).
    pub fn finish(self) -> Vec<Trajectory> {
        let mut all = self.finished;
        all.extend(self.active.into_iter().map(|t| t.traj));
        all.sort_unstable_by_key(Trajectory::id);
        all
    }
}

fn vec_none(n: usize) -> Vec<Option<usize>> {
    alloc::vec![None; n]
}

/// Runs the online tracker over a whole observation list, grouping by
/// frame in ascending order.
pub fn run_online(
    observations: &[Observation],
    costs: &AssociationCosts,
    config: &OnlineConfig,
) -> Result<Vec<Trajectory>, OnlineError> {
    let mut by_frame = alloc::collections::BTreeMap::<Frame, Vec<usize>>::new();
    for (i, obs) in observations.iter().enumerate() {
        by_frame.entry(obs.frame).or_default().push(i);
    }
    let mut tracker = OnlineTracker::new(*config);
    for (frame, detections) in &by_frame {
        tracker.step(*frame, detections, observations, costs)?;
    }
    Ok(tracker.finish())
}
