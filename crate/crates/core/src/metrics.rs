//! Evaluation metrics: CLEAR-MOT tracking scores and per-class average
//! precision for action detection.
//!
//! MOT matching walks the frames in order. Correspondences from the
//! previous frame are kept while their boxes still overlap, which makes
//! identity assignments sticky; the remaining boxes are matched by
//! maximum-total-IoU assignment. Identity switches count every frame where
//! a ground-truth id resumes under a different hypothesis id than it last
//! had, gaps included; fragmentations count interrupted-then-resumed
//! coverage regardless of id.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::assignment::hungarian;
use crate::geometry::iou;
use crate::model::{BBox, Frame, Observation, Trajectory, TrackId};

/// Cost placed on box pairs below the IoU threshold; real pair costs are
/// at most 1, so these are never preferred.
const FORBIDDEN: f64 = 1e6;

/// Metric errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("ground truth contains no boxes")]
    EmptyGroundTruth,
    #[error("IoU threshold must lie in (0,1], got {value}")]
    InvalidThreshold { value: f64 },
    #[error("class {class} out of range for {class_count} classes")]
    BadClass { class: usize, class_count: usize },
}

/// One box of a track (ground truth or hypothesis) at one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedBox {
    pub frame: Frame,
    pub id: TrackId,
    pub bbox: BBox,
}

/// Active ground-truth-to-hypothesis id mapping.
pub type Correspondences = BTreeMap<TrackId, TrackId>;

/// Per-frame matching outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatch {
    pub correspondences: Correspondences,
    pub false_positives: usize,
    pub misses: usize,
}

/// Matches one frame's boxes. Prior correspondences whose current IoU
/// still reaches the threshold are kept even when a fresher box overlaps
/// better; everything else is matched by Hungarian assignment on `1 - IoU`
/// with sub-threshold pairs forbidden.
pub fn match_frame(
    gt: &[(TrackId, BBox)],
    hyp: &[(TrackId, BBox)],
    prev: &Correspondences,
    iou_thresh: f64,
) -> FrameMatch {
    let mut correspondences = Correspondences::new();
    let mut gt_free: Vec<usize> = Vec::new();
    let mut hyp_used = vec![false; hyp.len()];

    for (gi, &(gid, gbox)) in gt.iter().enumerate() {
        let kept = prev.get(&gid).and_then(|hid| {
            hyp.iter()
                .position(|&(h, _)| h == *hid)
                .filter(|&hi| !hyp_used[hi] && iou(&gbox, &hyp[hi].1) >= iou_thresh)
        });
        match kept {
            Some(hi) => {
                correspondences.insert(gid, hyp[hi].0);
                hyp_used[hi] = true;
            }
            None => gt_free.push(gi),
        }
    }

    let hyp_free: Vec<usize> = (0..hyp.len()).filter(|&hi| !hyp_used[hi]).collect();
    let rows = gt_free.len();
    let cols = hyp_free.len();
    let mut costs = Vec::with_capacity(rows * cols);
    for &gi in &gt_free {
        for &hi in &hyp_free {
            let ov = iou(&gt[gi].1, &hyp[hi].1);
            costs.push(if ov >= iou_thresh { 1.0 - ov } else { FORBIDDEN });
        }
    }
    for (r, c) in hungarian(&costs, rows, cols) {
        if costs[r * cols + c] < FORBIDDEN / 2.0 {
            correspondences.insert(gt[gt_free[r]].0, hyp[hyp_free[c]].0);
        }
    }

    let matched = correspondences.len();
    FrameMatch {
        false_positives: hyp.len() - matched,
        misses: gt.len() - matched,
        correspondences,
    }
}

/// Transfers ground-truth identities onto detections by per-frame
/// maximum-total-IoU matching at `iou_thresh`.
///
/// Returns one trajectory over detection indices per covered ground-truth
/// id (trajectory ids are the ground-truth ids) plus a per-detection flag
/// marking the matched ones, the supervision needed to train cost models.
pub fn label_detections(
    gt: &[TrackedBox],
    observations: &[Observation],
    iou_thresh: f64,
) -> Result<(Vec<Trajectory>, Vec<bool>), MetricsError> {
    if !(iou_thresh > 0.0 && iou_thresh <= 1.0) {
        return Err(MetricsError::InvalidThreshold { value: iou_thresh });
    }
    let mut gt_frames: BTreeMap<Frame, Vec<(TrackId, BBox)>> = BTreeMap::new();
    for b in gt {
        gt_frames.entry(b.frame).or_default().push((b.id, b.bbox));
    }
    let mut obs_frames: BTreeMap<Frame, Vec<(TrackId, BBox)>> = BTreeMap::new();
    for (i, o) in observations.iter().enumerate() {
        obs_frames
            .entry(o.frame)
            .or_default()
            .push((i as TrackId, o.bbox));
    }

    let mut matched = vec![false; observations.len()];
    let mut members: BTreeMap<TrackId, Vec<(usize, Frame)>> = BTreeMap::new();
    let empty = Correspondences::new();
    for (&frame, gt_boxes) in &gt_frames {
        let Some(obs_boxes) = obs_frames.get(&frame) else {
            continue;
        };
        let matches = match_frame(gt_boxes, obs_boxes, &empty, iou_thresh);
        for (&gid, &det) in &matches.correspondences {
            matched[det as usize] = true;
            members.entry(gid).or_default().push((det as usize, frame));
        }
    }

    let trajectories = members
        .into_iter()
        .map(|(gid, list)| {
            let mut traj = Trajectory::new(gid);
            for (index, frame) in list {
                traj.push(index, frame)
                    .expect("one match per ground-truth id per frame");
            }
            traj
        })
        .collect();
    Ok((trajectories, matched))
}

/// CLEAR-MOT summary. Counts are absolute; `mota`, `recall` and
/// `precision` are percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct MotReport {
    pub fn_count: usize,
    pub fp_count: usize,
    pub id_switches: usize,
    pub fragmentations: usize,
    pub det_total: usize,
    pub matches: usize,
    pub mota: f64,
    pub recall: f64,
    pub precision: f64,
}

/// Scores a hypothesis track set against ground truth.
///
/// `id_switches` counts frames where a ground-truth id is matched to a
/// different hypothesis id than the one it last had, including
/// re-acquisitions after coverage gaps. `fragmentations` counts
/// interruptions of coverage that later resume. With no hypothesis boxes
/// at all, precision is reported as 100 (no false claims were made).
pub fn mot_report(
    gt: &[TrackedBox],
    hyp: &[TrackedBox],
    iou_thresh: f64,
) -> Result<MotReport, MetricsError> {
    if !(iou_thresh > 0.0 && iou_thresh <= 1.0) {
        return Err(MetricsError::InvalidThreshold { value: iou_thresh });
    }
    let det_total = gt.len();
    if det_total == 0 {
        return Err(MetricsError::EmptyGroundTruth);
    }

    let mut gt_frames: BTreeMap<Frame, Vec<(TrackId, BBox)>> = BTreeMap::new();
    for b in gt {
        gt_frames.entry(b.frame).or_default().push((b.id, b.bbox));
    }
    let mut hyp_frames: BTreeMap<Frame, Vec<(TrackId, BBox)>> = BTreeMap::new();
    for b in hyp {
        hyp_frames.entry(b.frame).or_default().push((b.id, b.bbox));
    }
    let mut frames: Vec<Frame> = gt_frames.keys().chain(hyp_frames.keys()).copied().collect();
    frames.sort_unstable();
    frames.dedup();

    let empty: Vec<(TrackId, BBox)> = Vec::new();
    let mut prev = Correspondences::new();
    let mut last_matched: BTreeMap<TrackId, TrackId> = BTreeMap::new();
    // Per ground-truth id: was it matched on each frame where it appears?
    let mut coverage: BTreeMap<TrackId, Vec<bool>> = BTreeMap::new();

    let mut fp_count = 0;
    let mut fn_count = 0;
    let mut matches = 0;
    let mut id_switches = 0;

    for &frame in &frames {
        let gt_here = gt_frames.get(&frame).unwrap_or(&empty);
        let hyp_here = hyp_frames.get(&frame).unwrap_or(&empty);
        let fm = match_frame(gt_here, hyp_here, &prev, iou_thresh);

        matches += fm.correspondences.len();
        fp_count += fm.false_positives;
        fn_count += fm.misses;
        for (&gid, &hid) in &fm.correspondences {
            if let Some(&was) = last_matched.get(&gid) {
                if was != hid {
                    id_switches += 1;
                }
            }
            last_matched.insert(gid, hid);
        }
        for &(gid, _) in gt_here {
            coverage
                .entry(gid)
                .or_default()
                .push(fm.correspondences.contains_key(&gid));
        }
        prev = fm.correspondences;
    }

    let mut fragmentations = 0;
    for hist in coverage.values() {
        let mut seen = false;
        let mut in_gap = false;
        for &m in hist {
            if m {
                if seen && in_gap {
                    fragmentations += 1;
                }
                seen = true;
                in_gap = false;
            } else if seen {
                in_gap = true;
            }
        }
    }

    let det = det_total as f64;
    let mota = 100.0 * (1.0 - (fn_count + id_switches + fp_count) as f64 / det);
    let recall = 100.0 * matches as f64 / det;
    let precision = if matches + fp_count == 0 {
        100.0
    } else {
        100.0 * matches as f64 / (matches + fp_count) as f64
    };

    Ok(MotReport {
        fn_count,
        fp_count,
        id_switches,
        fragmentations,
        det_total,
        matches,
        mota,
        recall,
        precision,
    })
}

/// All-point interpolated average precision from `(score, is_true)`
/// predictions against `n_gt` positives. Predictions are ranked by
/// descending score; equal scores keep their input order. Returns 0 when
/// there are no positives to find.
pub fn average_precision(predictions: &[(f64, bool)], n_gt: usize) -> f64 {
    if n_gt == 0 {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..predictions.len()).collect();
    order.sort_by(|&a, &b| {
        predictions[b]
            .0
            .total_cmp(&predictions[a].0)
            .then(a.cmp(&b))
    });

    // Recall/precision at every true positive in rank order.
    let mut points = Vec::new();
    let mut tp = 0usize;
    for (rank, &i) in order.iter().enumerate() {
        if predictions[i].1 {
            tp += 1;
            points.push((
                tp as f64 / n_gt as f64,
                tp as f64 / (rank + 1) as f64,
            ));
        }
    }

    // Precision envelope: at each recall point take the best precision
    // achieved at that recall or beyond, then integrate over recall.
    let mut envelope = vec![0.0; points.len()];
    let mut best = 0.0f64;
    for k in (0..points.len()).rev() {
        best = best.max(points[k].1);
        envelope[k] = best;
    }
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for (k, &(recall, _)) in points.iter().enumerate() {
        ap += (recall - prev_recall) * envelope[k];
        prev_recall = recall;
    }
    ap
}

/// A ground-truth box with its action label set.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBox {
    pub frame: Frame,
    pub bbox: BBox,
    pub labels: Vec<usize>,
}

/// One scored class claim on one hypothesis box.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionPrediction {
    pub frame: Frame,
    pub bbox: BBox,
    pub class: usize,
    pub score: f64,
}

/// Per-class average precision and its mean over the classes that actually
/// occur in the ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct ApReport {
    pub per_class_ap: Vec<f64>,
    pub present: Vec<bool>,
    pub map: f64,
}

/// Scores action detection: per class, predictions are matched greedily in
/// score order to same-frame ground-truth boxes carrying that label (IoU at
/// or above the threshold, best overlap first, each box consumed once per
/// class). Classes absent from the ground truth are excluded from the mean.
pub fn map_action_detection(
    gt: &[LabeledBox],
    predictions: &[ActionPrediction],
    class_count: usize,
    iou_thresh: f64,
) -> Result<ApReport, MetricsError> {
    if !(iou_thresh > 0.0 && iou_thresh <= 1.0) {
        return Err(MetricsError::InvalidThreshold { value: iou_thresh });
    }
    if gt.is_empty() {
        return Err(MetricsError::EmptyGroundTruth);
    }
    for b in gt {
        if let Some(&c) = b.labels.iter().find(|&&c| c >= class_count) {
            return Err(MetricsError::BadClass {
                class: c,
                class_count,
            });
        }
    }
    for p in predictions {
        if p.class >= class_count {
            return Err(MetricsError::BadClass {
                class: p.class,
                class_count,
            });
        }
    }

    let mut per_class_ap = vec![0.0; class_count];
    let mut present = vec![false; class_count];
    for class in 0..class_count {
        let n_gt = gt.iter().filter(|b| b.labels.contains(&class)).count();
        present[class] = n_gt > 0;

        let mut order: Vec<usize> = (0..predictions.len())
            .filter(|&i| predictions[i].class == class)
            .collect();
        order.sort_by(|&a, &b| {
            predictions[b]
                .score
                .total_cmp(&predictions[a].score)
                .then(a.cmp(&b))
        });

        let mut consumed = vec![false; gt.len()];
        let mut labeled = Vec::with_capacity(order.len());
        for &pi in &order {
            let p = &predictions[pi];
            let mut best: Option<(f64, usize)> = None;
            for (gi, g) in gt.iter().enumerate() {
                if g.frame == p.frame && !consumed[gi] && g.labels.contains(&class) {
                    let ov = iou(&g.bbox, &p.bbox);
                    if ov >= iou_thresh && best.map_or(true, |(b, _)| ov > b) {
                        best = Some((ov, gi));
                    }
                }
            }
            if let Some((_, gi)) = best {
                consumed[gi] = true;
                labeled.push((p.score, true));
            } else {
                labeled.push((p.score, false));
            }
        }
        per_class_ap[class] = average_precision(&labeled, n_gt);
    }

    let n_present = present.iter().filter(|&&p| p).count();
    let map = if n_present == 0 {
        0.0
    } else {
        per_class_ap
            .iter()
            .zip(&present)
            .filter(|&(_, &p)| p)
            .map(|(&ap, _)| ap)
            .sum::<f64>()
            / n_present as f64
    };

    Ok(ApReport {
        per_class_ap,
        present,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bbox(x: f64, y: f64) -> BBox {
        BBox::new(x, y, 10.0, 10.0).unwrap()
    }

    fn tracked(frame: Frame, id: TrackId, x: f64) -> TrackedBox {
        TrackedBox {
            frame,
            id,
            bbox: bbox(x, 0.0),
        }
    }

    /// Two identities tracked perfectly over three frames.
    fn perfect_pair() -> (Vec<TrackedBox>, Vec<TrackedBox>) {
        let mut gt = Vec::new();
        let mut hyp = Vec::new();
        for f in 0..3 {
            for (id, x) in [(1u64, 0.0), (2, 100.0)] {
                gt.push(tracked(f, id, x));
                hyp.push(tracked(f, id + 10, x));
            }
        }
        (gt, hyp)
    }

    #[test]
    fn perfect_tracking_scores_a_hundred() {
        let (gt, hyp) = perfect_pair();
        let r = mot_report(&gt, &hyp, 0.5).unwrap();
        assert_eq!(r.det_total, 6);
        assert_eq!(r.matches, 6);
        assert_eq!((r.fn_count, r.fp_count, r.id_switches, r.fragmentations), (0, 0, 0, 0));
        assert_eq!(r.mota, 100.0);
        assert_eq!(r.recall, 100.0);
        assert_eq!(r.precision, 100.0);
    }

    #[test]
    fn empty_hypothesis_loses_everything() {
        let (gt, _) = perfect_pair();
        let r = mot_report(&gt, &[], 0.5).unwrap();
        assert_eq!(r.fn_count, 6);
        assert_eq!(r.mota, 0.0);
        assert_eq!(r.recall, 0.0);
        assert_eq!(r.precision, 100.0);
    }

    #[test]
    fn empty_ground_truth_is_an_error() {
        assert_eq!(
            mot_report(&[], &[tracked(0, 1, 0.0)], 0.5),
            Err(MetricsError::EmptyGroundTruth)
        );
    }

    #[test]
    fn mid_track_id_change_counts_one_switch() {
        let gt: Vec<TrackedBox> = (0..4).map(|f| tracked(f, 1, 0.0)).collect();
        let hyp: Vec<TrackedBox> = (0..4)
            .map(|f| tracked(f, if f < 2 { 7 } else { 8 }, 0.0))
            .collect();
        let r = mot_report(&gt, &hyp, 0.5).unwrap();
        assert_eq!(r.id_switches, 1);
        assert_eq!(r.fragmentations, 0);
        assert_eq!(r.mota, 75.0);
    }

    #[test]
    fn reacquisition_after_gap_counts_switch_and_fragmentation() {
        let gt: Vec<TrackedBox> = (0..4).map(|f| tracked(f, 1, 0.0)).collect();
        // Covered by id 7, lost one frame, re-acquired by id 8.
        let hyp = vec![tracked(0, 7, 0.0), tracked(1, 7, 0.0), tracked(3, 8, 0.0)];
        let r = mot_report(&gt, &hyp, 0.5).unwrap();
        assert_eq!(r.fn_count, 1);
        assert_eq!(r.id_switches, 1);
        assert_eq!(r.fragmentations, 1);
        // MOTA = 100 * (1 - (1 + 1 + 0) / 4).
        assert_eq!(r.mota, 50.0);
    }

    #[test]
    fn same_id_reacquisition_fragments_without_switching() {
        let gt: Vec<TrackedBox> = (0..4).map(|f| tracked(f, 1, 0.0)).collect();
        let hyp = vec![tracked(0, 7, 0.0), tracked(1, 7, 0.0), tracked(3, 7, 0.0)];
        let r = mot_report(&gt, &hyp, 0.5).unwrap();
        assert_eq!(r.id_switches, 0);
        assert_eq!(r.fragmentations, 1);
    }

    #[test]
    fn kept_correspondence_beats_better_overlap() {
        // Frame 0 pairs gt 1 with hyp 7. On frame 1 hyp 8 sits exactly on
        // the ground truth, but 7 still clears the threshold and is kept.
        let gt = vec![tracked(0, 1, 0.0), tracked(1, 1, 0.0)];
        let mut hyp = vec![
            tracked(0, 7, 0.0),
            TrackedBox {
                frame: 1,
                id: 7,
                bbox: BBox::new(0.0, 3.0, 10.0, 10.0).unwrap(),
            },
            tracked(1, 8, 0.0),
        ];
        let r = mot_report(&gt, &hyp, 0.5).unwrap();
        assert_eq!(r.id_switches, 0);
        assert_eq!(r.fp_count, 1, "the fresher box is the false positive");

        // Without history (frame 1 alone) the exact overlap wins instead.
        hyp.remove(0);
        let fm = match_frame(
            &[(1, bbox(0.0, 0.0))],
            &[(7, BBox::new(0.0, 3.0, 10.0, 10.0).unwrap()), (8, bbox(0.0, 0.0))],
            &Correspondences::new(),
            0.5,
        );
        assert_eq!(fm.correspondences.get(&1), Some(&8));
    }

    #[test]
    fn matching_respects_threshold_boundary() {
        // Offset 5 of 10 gives IoU 1/3; exactly at threshold matches.
        let fm = match_frame(
            &[(1, bbox(0.0, 0.0))],
            &[(7, bbox(5.0, 0.0))],
            &Correspondences::new(),
            1.0 / 3.0,
        );
        assert_eq!(fm.correspondences.len(), 1);
        let fm = match_frame(
            &[(1, bbox(0.0, 0.0))],
            &[(7, bbox(5.0, 0.0))],
            &Correspondences::new(),
            0.34,
        );
        assert!(fm.correspondences.is_empty());
        assert_eq!((fm.false_positives, fm.misses), (1, 1));
    }

    #[test]
    fn hungarian_fallback_maximizes_total_overlap() {
        // Two ground-truth boxes, two hypotheses: the greedy pairing would
        // give one great and one failed match, the assignment matches both.
        let gt = [(1, bbox(0.0, 0.0)), (2, bbox(4.0, 0.0))];
        let hyp = [(7, bbox(2.0, 0.0)), (8, bbox(0.5, 0.0))];
        let fm = match_frame(&gt, &hyp, &Correspondences::new(), 0.3);
        assert_eq!(fm.correspondences.get(&1), Some(&8));
        assert_eq!(fm.correspondences.get(&2), Some(&7));
    }

    #[test]
    fn average_precision_reference_values() {
        // One perfect hit.
        assert_eq!(average_precision(&[(0.9, true)], 1), 1.0);
        // No hits at all.
        assert_eq!(average_precision(&[(0.9, false), (0.8, false)], 2), 0.0);
        // Hit, miss, hit: AP = 0.5*1 + 0.5*(2/3) = 5/6.
        let ap = average_precision(&[(0.9, true), (0.8, false), (0.7, true)], 2);
        assert!((ap - 5.0 / 6.0).abs() < 1e-12);
        // Unreached positives cap the recall.
        let ap = average_precision(&[(0.9, true)], 2);
        assert!((ap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn average_precision_breaks_score_ties_by_input_order() {
        assert_eq!(average_precision(&[(0.5, false), (0.5, true)], 1), 0.5);
        assert_eq!(average_precision(&[(0.5, true), (0.5, false)], 1), 1.0);
    }

    #[test]
    fn envelope_interpolation_uses_best_later_precision() {
        // TP FP TP TP: raw precisions 1, 2/3, 3/4; the envelope lifts the
        // middle point to 3/4.
        let preds = [(0.9, true), (0.8, false), (0.7, true), (0.6, true)];
        let ap = average_precision(&preds, 3);
        let want = (1.0 / 3.0) * 1.0 + (1.0 / 3.0) * 0.75 + (1.0 / 3.0) * 0.75;
        assert!((ap - want).abs() < 1e-12);
    }

    fn labeled(frame: Frame, x: f64, labels: &[usize]) -> LabeledBox {
        LabeledBox {
            frame,
            bbox: bbox(x, 0.0),
            labels: labels.to_vec(),
        }
    }

    fn pred(frame: Frame, x: f64, class: usize, score: f64) -> ActionPrediction {
        ActionPrediction {
            frame,
            bbox: bbox(x, 0.0),
            class,
            score,
        }
    }

    #[test]
    fn perfect_action_predictions_reach_map_one() {
        let gt = vec![labeled(0, 0.0, &[0, 2]), labeled(1, 50.0, &[2])];
        let preds = vec![
            pred(0, 0.0, 0, 0.9),
            pred(0, 0.0, 2, 0.8),
            pred(1, 50.0, 2, 0.95),
        ];
        let r = map_action_detection(&gt, &preds, 3, 0.5).unwrap();
        assert_eq!(r.per_class_ap[0], 1.0);
        assert_eq!(r.per_class_ap[2], 1.0);
        assert_eq!(r.present, vec![true, false, true]);
        assert_eq!(r.map, 1.0);
    }

    #[test]
    fn absent_classes_stay_out_of_the_mean() {
        let gt = vec![labeled(0, 0.0, &[1])];
        // A confident claim for a class nobody performs scores zero AP but
        // must not drag the mean down.
        let preds = vec![pred(0, 0.0, 1, 0.9), pred(0, 0.0, 0, 0.99)];
        let r = map_action_detection(&gt, &preds, 2, 0.5).unwrap();
        assert_eq!(r.map, 1.0);
        assert_eq!(r.per_class_ap[0], 0.0);
        assert!(!r.present[0]);
    }

    #[test]
    fn each_box_is_consumed_once_per_class() {
        let gt = vec![labeled(0, 0.0, &[0])];
        // Two claims on the same box: the higher-scored one wins, the
        // duplicate is a false positive at full recall.
        let preds = vec![pred(0, 0.0, 0, 0.6), pred(0, 1.0, 0, 0.9)];
        let r = map_action_detection(&gt, &preds, 1, 0.5).unwrap();
        assert_eq!(r.per_class_ap[0], 1.0);

        // The duplicate outranked by a miss: AP drops.
        let preds = vec![pred(0, 20.0, 0, 0.9), pred(0, 0.0, 0, 0.6)];
        let r = map_action_detection(&gt, &preds, 1, 0.5).unwrap();
        assert!((r.per_class_ap[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn multi_label_boxes_serve_every_class() {
        let gt = vec![labeled(0, 0.0, &[0, 1])];
        let preds = vec![pred(0, 0.0, 0, 0.9), pred(0, 0.0, 1, 0.9)];
        let r = map_action_detection(&gt, &preds, 2, 0.5).unwrap();
        assert_eq!(r.map, 1.0);
    }

    #[test]
    fn out_of_range_classes_are_rejected() {
        let gt = vec![labeled(0, 0.0, &[5])];
        assert_eq!(
            map_action_detection(&gt, &[], 3, 0.5),
            Err(MetricsError::BadClass {
                class: 5,
                class_count: 3
            })
        );
    }

    fn obs_at(frame: Frame, x: f64) -> Observation {
        Observation {
            frame,
            bbox: bbox(x, 0.0),
            det_score: 0.9,
            appearance: vec![1.0],
            paf: vec![1.0],
            action_scores: Vec::new(),
        }
    }

    #[test]
    fn labeling_recovers_identities_and_flags_clutter() {
        // Identity 1 at x=0, identity 2 at x=100, three frames; identity 2
        // misses frame 1 and a clutter box sits far from both.
        let gt = vec![
            tracked(0, 1, 0.0),
            tracked(0, 2, 100.0),
            tracked(1, 1, 0.0),
            tracked(1, 2, 100.0),
            tracked(2, 1, 0.0),
            tracked(2, 2, 100.0),
        ];
        let observations = vec![
            obs_at(0, 1.0),   // 0: id 1
            obs_at(0, 101.0), // 1: id 2
            obs_at(1, 1.0),   // 2: id 1
            obs_at(1, 500.0), // 3: clutter
            obs_at(2, 1.0),   // 4: id 1
            obs_at(2, 101.0), // 5: id 2
        ];
        let (trajectories, matched) = label_detections(&gt, &observations, 0.5).unwrap();
        assert_eq!(trajectories.len(), 2);
        assert_eq!(trajectories[0].id(), 1);
        assert_eq!(trajectories[0].members(), &[0, 2, 4]);
        assert_eq!(trajectories[0].frames(), &[0, 1, 2]);
        assert_eq!(trajectories[1].id(), 2);
        assert_eq!(trajectories[1].members(), &[1, 5]);
        assert_eq!(trajectories[1].frames(), &[0, 2]);
        assert_eq!(matched, vec![true, true, true, false, true, true]);
    }

    #[test]
    fn labeling_rejects_bad_threshold() {
        assert_eq!(
            label_detections(&[], &[], 0.0),
            Err(MetricsError::InvalidThreshold { value: 0.0 })
        );
    }
}
