//! Shared domain types: bounding boxes, observations, trajectories and
//! per-frame action label sets, together with validation of their
//! invariants.
//!
//! Everything here is an immutable value object after construction and can
//! be shared freely across threads.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Frame index within a sequence.
pub type Frame = u64;
/// Identity assigned to a trajectory (1-based).
pub type TrackId = u64;

/// Validation errors for the domain types.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("{field} contains a non-finite value")]
    NonFinite { field: &'static str },
    #[error("bounding box must have positive size, got w={w} h={h}")]
    NonPositiveBox { w: f64, h: f64 },
    #[error("{field} must lie in [0,1], got {value}")]
    ScoreOutOfRange { field: &'static str, value: f64 },
    #[error("{field} has dimension {got}, dataset expects {expected}")]
    DimensionMismatch {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("frame {pushed} does not follow frame {last}")]
    FrameOrder { last: Frame, pushed: Frame },
    #[error("observation {index} appears in more than one trajectory")]
    OverlappingMember { index: usize },
}

/// Axis-aligned bounding box in continuous pixel coordinates.
///
/// `(x, y)` is the top-left corner; `w` and `h` must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    /// Builds a box, rejecting non-finite coordinates and non-positive sizes.
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Result<Self, ModelError> {
        let b = BBox { x, y, w, h };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.x.is_finite() && self.y.is_finite() && self.w.is_finite() && self.h.is_finite())
        {
            return Err(ModelError::NonFinite { field: "bbox" });
        }
        if !(self.w > 0.0 && self.h > 0.0) {
            return Err(ModelError::NonPositiveBox {
                w: self.w,
                h: self.h,
            });
        }
        Ok(())
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }
}

/// Per-dataset feature dimensions, fixed for every observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetConfig {
    pub appearance_dim: usize,
    pub paf_dim: usize,
    pub class_count: usize,
}

/// One detection: where it is, how confident the detector was, and the
/// feature vectors used as association cues.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub frame: Frame,
    pub bbox: BBox,
    /// Detector confidence in [0,1].
    pub det_score: f64,
    /// Identity embedding; cosine distance between two of these is small for
    /// the same person.
    pub appearance: Vec<f64>,
    /// Action embedding (RGB and flow halves concatenated).
    pub paf: Vec<f64>,
    /// Per-class action scores in [0,1], one per dataset class.
    pub action_scores: Vec<f64>,
}

impl Observation {
    /// Checks every observation invariant against the dataset configuration.
    pub fn validate(&self, config: &DatasetConfig) -> Result<(), ModelError> {
        self.bbox.validate()?;
        if !self.det_score.is_finite() {
            return Err(ModelError::NonFinite { field: "det_score" });
        }
        if !(0.0..=1.0).contains(&self.det_score) {
            return Err(ModelError::ScoreOutOfRange {
                field: "det_score",
                value: self.det_score,
            });
        }
        if self.appearance.len() != config.appearance_dim {
            return Err(ModelError::DimensionMismatch {
                field: "appearance",
                expected: config.appearance_dim,
                got: self.appearance.len(),
            });
        }
        if self.paf.len() != config.paf_dim {
            return Err(ModelError::DimensionMismatch {
                field: "paf",
                expected: config.paf_dim,
                got: self.paf.len(),
            });
        }
        if self.action_scores.len() != config.class_count {
            return Err(ModelError::DimensionMismatch {
                field: "action_scores",
                expected: config.class_count,
                got: self.action_scores.len(),
            });
        }
        if !self.appearance.iter().all(|v| v.is_finite()) {
            return Err(ModelError::NonFinite { field: "appearance" });
        }
        if !self.paf.iter().all(|v| v.is_finite()) {
            return Err(ModelError::NonFinite { field: "paf" });
        }
        for &s in &self.action_scores {
            if !s.is_finite() {
                return Err(ModelError::NonFinite {
                    field: "action_scores",
                });
            }
            if !(0.0..=1.0).contains(&s) {
                return Err(ModelError::ScoreOutOfRange {
                    field: "action_scores",
                    value: s,
                });
            }
        }
        Ok(())
    }
}

/// Validates an observation, returning it unchanged on success.
pub fn validate_observation(
    obs: Observation,
    config: &DatasetConfig,
) -> Result<Observation, ModelError> {
    obs.validate(config)?;
    Ok(obs)
}

/// A time-ordered sequence of observation indices under one identity.
///
/// Member frames are strictly increasing; pushes that would break the
/// ordering are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    id: TrackId,
    members: Vec<usize>,
    frames: Vec<Frame>,
}

impl Trajectory {
    pub fn new(id: TrackId) -> Self {
        Trajectory {
            id,
            members: Vec::new(),
            frames: Vec::new(),
        }
    }

    pub fn id(&self) -> TrackId {
        self.id
    }

    /// Observation indices in frame order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Frames of the members, parallel to [`Self::members`].
    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn first_frame(&self) -> Option<Frame> {
        self.frames.first().copied()
    }

    pub fn last_frame(&self) -> Option<Frame> {
        self.frames.last().copied()
    }

    /// Appends an observation, enforcing strictly increasing frames.
    pub fn push(&mut self, index: usize, frame: Frame) -> Result<(), ModelError> {
        if let Some(&last) = self.frames.last() {
            if frame <= last {
                return Err(ModelError::FrameOrder {
                    last,
                    pushed: frame,
                });
            }
        }
        self.members.push(index);
        self.frames.push(frame);
        Ok(())
    }
}

/// A full tracking output: disjoint trajectories over one observation list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrackingResult {
    pub trajectories: Vec<Trajectory>,
}

impl TrackingResult {
    /// Wraps trajectories after checking the non-overlap constraint: no
    /// observation index may be claimed by two trajectories.
    pub fn new(trajectories: Vec<Trajectory>) -> Result<Self, ModelError> {
        let mut seen = alloc::collections::BTreeSet::new();
        for traj in &trajectories {
            for &m in traj.members() {
                if !seen.insert(m) {
                    return Err(ModelError::OverlappingMember { index: m });
                }
            }
        }
        Ok(TrackingResult { trajectories })
    }
}

/// Recognized action classes per (trajectory id, frame). An empty label set
/// means the action is unknown.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionTimeline {
    entries: BTreeMap<(TrackId, Frame), Vec<usize>>,
}

impl ActionTimeline {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores the label set for a cell; labels are kept sorted and unique.
    pub fn set_labels(&mut self, id: TrackId, frame: Frame, mut labels: Vec<usize>) {
        labels.sort_unstable();
        labels.dedup();
        self.entries.insert((id, frame), labels);
    }

    /// Labels for a cell; an empty slice means unknown.
    pub fn labels(&self, id: TrackId, frame: Frame) -> &[usize] {
        self.entries
            .get(&(id, frame))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (TrackId, Frame, &[usize])> {
        self.entries
            .iter()
            .map(|(&(id, frame), labels)| (id, frame, labels.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn config() -> DatasetConfig {
        DatasetConfig {
            appearance_dim: 8,
            paf_dim: 8,
            class_count: 12,
        }
    }

    fn valid_obs() -> Observation {
        Observation {
            frame: 0,
            bbox: BBox::new(0.0, 0.0, 10.0, 20.0).unwrap(),
            det_score: 0.9,
            appearance: vec![1.0; 8],
            paf: vec![0.5; 8],
            action_scores: vec![0.1; 12],
        }
    }

    #[test]
    fn well_formed_observation_passes() {
        let obs = valid_obs();
        let out = validate_observation(obs.clone(), &config()).unwrap();
        assert_eq!(out, obs);
    }

    #[test]
    fn appearance_dimension_mismatch_is_rejected() {
        let mut obs = valid_obs();
        obs.appearance = vec![1.0; 7];
        assert_eq!(
            obs.validate(&config()),
            Err(ModelError::DimensionMismatch {
                field: "appearance",
                expected: 8,
                got: 7,
            })
        );
    }

    #[test]
    fn zero_width_box_is_rejected() {
        assert!(matches!(
            BBox::new(0.0, 0.0, 0.0, 5.0),
            Err(ModelError::NonPositiveBox { .. })
        ));
    }

    #[test]
    fn non_finite_fields_are_rejected() {
        let mut obs = valid_obs();
        obs.paf[3] = f64::NAN;
        assert_eq!(
            obs.validate(&config()),
            Err(ModelError::NonFinite { field: "paf" })
        );
    }

    #[test]
    fn det_score_out_of_range_is_rejected() {
        let mut obs = valid_obs();
        obs.det_score = 1.5;
        assert!(matches!(
            obs.validate(&config()),
            Err(ModelError::ScoreOutOfRange {
                field: "det_score",
                ..
            })
        ));
    }

    #[test]
    fn action_score_out_of_range_is_rejected() {
        let mut obs = valid_obs();
        obs.action_scores[2] = -0.1;
        assert!(matches!(
            obs.validate(&config()),
            Err(ModelError::ScoreOutOfRange {
                field: "action_scores",
                ..
            })
        ));
    }

    #[test]
    fn trajectory_push_keeps_frames_increasing() {
        let mut t = Trajectory::new(1);
        t.push(3, 0).unwrap();
        assert_eq!(t.members(), &[3]);

        let mut t = Trajectory::new(1);
        t.push(1, 5).unwrap();
        t.push(9, 6).unwrap();
        assert_eq!(t.frames(), &[5, 6]);

        let mut t = Trajectory::new(1);
        t.push(1, 5).unwrap();
        assert_eq!(
            t.push(9, 5),
            Err(ModelError::FrameOrder { last: 5, pushed: 5 })
        );
    }

    #[test]
    fn tracking_result_rejects_overlap() {
        let mut a = Trajectory::new(1);
        a.push(0, 0).unwrap();
        a.push(2, 1).unwrap();
        let mut b = Trajectory::new(2);
        b.push(2, 3).unwrap();
        assert_eq!(
            TrackingResult::new(vec![a, b]),
            Err(ModelError::OverlappingMember { index: 2 })
        );
    }

    #[test]
    fn timeline_labels_default_to_unknown() {
        let mut tl = ActionTimeline::new();
        tl.set_labels(1, 4, vec![11, 8, 8]);
        assert_eq!(tl.labels(1, 4), &[8, 11]);
        assert!(tl.labels(1, 5).is_empty());
    }
}
