//! Seeded synthetic scenario generator.
//!
//! Identities move with constant velocity plus per-frame path jitter under
//! a global camera shake; their detections carry noisy copies of
//! per-identity appearance anchors and per-action-class feature anchors,
//! all unit vectors. A corruption model drops true boxes, perturbs the
//! survivors, and injects clutter whose features come from fresh random
//! anchors near nobody.
//!
//! Generation is driven by a single ChaCha20 stream seeded with
//! `seed_from_u64`, so equal configurations reproduce byte-identical
//! scenarios. The draw order is fixed: first per-identity constants
//! (appearance anchor, box size, start position, velocity), then the
//! action-class anchors (one extra idle anchor last), then frame by frame:
//! camera shake, per identity in order (path jitter, miss coin, and for
//! kept boxes detection jitter, score, appearance noise, action-feature
//! noise, action-score noise), and finally the frame's clutter coin and,
//! when it fires, the clutter box draws.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::model::{BBox, Frame, Observation, TrackId};

/// Generator validation errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("{field} must be positive")]
    NonPositive { field: &'static str },
    #[error("{field} must not be negative")]
    Negative { field: &'static str },
    #[error("{field} must lie in [0,1], got {value}")]
    BadProbability { field: &'static str, value: f64 },
    #[error("box sizes must satisfy 0 < min <= max and fit the image")]
    BadBoxRange,
    #[error("script label {label} out of range for {class_count} classes")]
    BadScriptLabel { label: usize, class_count: usize },
    #[error("script span {from}..={to} exceeds the {n_frames}-frame sequence")]
    BadSpan { from: Frame, to: Frame, n_frames: Frame },
}

/// Per-identity motion: velocity scale, path wobble, global camera shake,
/// and the box size ranges identities are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionModel {
    pub speed_std: f64,
    pub jitter_std: f64,
    pub shake_std: f64,
    pub box_w_min: f64,
    pub box_w_max: f64,
    pub box_h_min: f64,
    pub box_h_max: f64,
}

impl Default for MotionModel {
    fn default() -> Self {
        MotionModel {
            speed_std: 2.0,
            jitter_std: 0.5,
            shake_std: 1.0,
            box_w_min: 24.0,
            box_w_max: 48.0,
            box_h_min: 40.0,
            box_h_max: 80.0,
        }
    }
}

/// Feature synthesis: embedding dimensions, anchor noise, and the action
/// score levels for scripted versus unscripted classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureModel {
    pub appearance_dim: usize,
    pub appearance_noise_std: f64,
    pub paf_rgb_dim: usize,
    pub paf_flow_dim: usize,
    pub paf_noise_std: f64,
    pub action_score_hi: f64,
    pub action_score_lo: f64,
    pub action_score_noise_std: f64,
}

impl Default for FeatureModel {
    fn default() -> Self {
        FeatureModel {
            appearance_dim: 16,
            appearance_noise_std: 0.2,
            paf_rgb_dim: 8,
            paf_flow_dim: 8,
            paf_noise_std: 0.15,
            action_score_hi: 1.0,
            action_score_lo: 0.0,
            action_score_noise_std: 0.0,
        }
    }
}

/// Detector imperfections: per-box miss probability, per-frame clutter
/// probability, box jitter, and the score distributions of true and false
/// boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionModel {
    pub miss_prob: f64,
    pub fp_rate: f64,
    pub bbox_jitter_std: f64,
    pub true_score_mean: f64,
    pub true_score_std: f64,
    pub false_score_mean: f64,
    pub false_score_std: f64,
}

impl Default for CorruptionModel {
    fn default() -> Self {
        CorruptionModel {
            miss_prob: 0.05,
            fp_rate: 0.3,
            bbox_jitter_std: 1.0,
            true_score_mean: 0.85,
            true_score_std: 0.08,
            false_score_mean: 0.5,
            false_score_std: 0.12,
        }
    }
}

/// One scripted action interval, frames `from..=to`, labels applied to the
/// identity throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptSpan {
    pub from: Frame,
    pub to: Frame,
    pub labels: Vec<usize>,
}

/// Full scenario description. `scripts` holds one span list per identity
/// (missing tails mean unscripted); overlapping spans merge their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub n_identities: usize,
    pub n_frames: u64,
    pub image_w: f64,
    pub image_h: f64,
    pub class_count: usize,
    pub motion: MotionModel,
    pub features: FeatureModel,
    pub corruption: CorruptionModel,
    pub scripts: Vec<Vec<ScriptSpan>>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 0,
            n_identities: 4,
            n_frames: 60,
            image_w: 1280.0,
            image_h: 720.0,
            class_count: 12,
            motion: MotionModel::default(),
            features: FeatureModel::default(),
            corruption: CorruptionModel::default(),
            scripts: Vec::new(),
        }
    }
}

/// One ground-truth box with identity and scripted labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GtBox {
    pub frame: Frame,
    pub id: TrackId,
    pub bbox: BBox,
    pub labels: Vec<usize>,
}

/// Generated scenario: clean ground truth and the corrupted detection
/// list. `is_clutter` marks, per detection, the injected false positives;
/// trackers must not read it, but tests and statistics do.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub ground_truth: Vec<GtBox>,
    pub detections: Vec<Observation>,
    pub is_clutter: Vec<bool>,
}

/// Box and corruption counts of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioStats {
    pub gt_boxes: usize,
    pub detections: usize,
    pub clutter: usize,
    pub misses: usize,
    pub per_class_boxes: Vec<usize>,
    pub clutter_ratio: f64,
}

/// Round-robin helper: identity i performs `classes[i % classes.len()]`
/// for the whole sequence.
pub fn round_robin_scripts(
    n_identities: usize,
    n_frames: u64,
    classes: &[usize],
) -> Vec<Vec<ScriptSpan>> {
    (0..n_identities)
        .map(|i| {
            if classes.is_empty() || n_frames == 0 {
                Vec::new()
            } else {
                vec![ScriptSpan {
                    from: 0,
                    to: n_frames - 1,
                    labels: vec![classes[i % classes.len()]],
                }]
            }
        })
        .collect()
}

fn validate(config: &ScenarioConfig) -> Result<(), SynthError> {
    if config.n_frames == 0 {
        return Err(SynthError::NonPositive { field: "n_frames" });
    }
    if config.class_count == 0 {
        return Err(SynthError::NonPositive {
            field: "class_count",
        });
    }
    if !(config.image_w > 0.0 && config.image_h > 0.0) {
        return Err(SynthError::NonPositive { field: "image size" });
    }
    let f = &config.features;
    if f.appearance_dim == 0 {
        return Err(SynthError::NonPositive {
            field: "appearance_dim",
        });
    }
    if f.paf_rgb_dim + f.paf_flow_dim == 0 {
        return Err(SynthError::NonPositive { field: "paf dims" });
    }
    let m = &config.motion;
    if !(m.box_w_min > 0.0
        && m.box_w_min <= m.box_w_max
        && m.box_w_max <= config.image_w
        && m.box_h_min > 0.0
        && m.box_h_min <= m.box_h_max
        && m.box_h_max <= config.image_h)
    {
        return Err(SynthError::BadBoxRange);
    }
    for (field, value) in [
        ("speed_std", m.speed_std),
        ("jitter_std", m.jitter_std),
        ("shake_std", m.shake_std),
        ("appearance_noise_std", f.appearance_noise_std),
        ("paf_noise_std", f.paf_noise_std),
        ("action_score_noise_std", f.action_score_noise_std),
        ("bbox_jitter_std", config.corruption.bbox_jitter_std),
        ("true_score_std", config.corruption.true_score_std),
        ("false_score_std", config.corruption.false_score_std),
    ] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(SynthError::Negative { field });
        }
    }
    for (field, value) in [
        ("miss_prob", config.corruption.miss_prob),
        ("fp_rate", config.corruption.fp_rate),
        ("action_score_hi", f.action_score_hi),
        ("action_score_lo", f.action_score_lo),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(SynthError::BadProbability { field, value });
        }
    }
    for spans in &config.scripts {
        for span in spans {
            if span.from > span.to || span.to >= config.n_frames {
                return Err(SynthError::BadSpan {
                    from: span.from,
                    to: span.to,
                    n_frames: config.n_frames,
                });
            }
            for &label in &span.labels {
                if label >= config.class_count {
                    return Err(SynthError::BadScriptLabel {
                        label,
                        class_count: config.class_count,
                    });
                }
            }
        }
    }
    Ok(())
}

fn normalize(v: &mut [f64]) {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm < 1e-12 {
        v[0] = 1.0;
        return;
    }
    for x in v {
        *x /= norm;
    }
}

fn unit_vector(rng: &mut ChaCha20Rng, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    normalize(&mut v);
    v
}

/// Clamps a box to lie fully inside the image, shrinking it only when it
/// is larger than the image itself.
fn place_box(x: f64, y: f64, w: f64, h: f64, image_w: f64, image_h: f64) -> BBox {
    let w = w.clamp(1.0f64.min(image_w), image_w);
    let h = h.clamp(1.0f64.min(image_h), image_h);
    BBox {
        x: x.clamp(0.0, image_w - w),
        y: y.clamp(0.0, image_h - h),
        w,
        h,
    }
}

/// Union of all script labels covering frame `t`, sorted and unique.
fn labels_at(spans: &[ScriptSpan], t: Frame) -> Vec<usize> {
    let mut labels: Vec<usize> = spans
        .iter()
        .filter(|s| s.from <= t && t <= s.to)
        .flat_map(|s| s.labels.iter().copied())
        .collect();
    labels.sort_unstable();
    labels.dedup();
    labels
}

/// Generates a scenario from the configuration; equal configurations give
/// identical output.
pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario, SynthError> {
    validate(config)?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let normal = |std: f64| Normal::<f64>::new(0.0, std).expect("validated std");
    let jitter = normal(config.motion.jitter_std);
    let shake = normal(config.motion.shake_std);
    let speed = normal(config.motion.speed_std);
    let box_jitter = normal(config.corruption.bbox_jitter_std);
    let app_noise = normal(config.features.appearance_noise_std);
    let paf_noise = normal(config.features.paf_noise_std);
    let act_noise = normal(config.features.action_score_noise_std);
    let true_score =
        Normal::<f64>::new(config.corruption.true_score_mean, config.corruption.true_score_std)
            .expect("validated std");
    let false_score = Normal::<f64>::new(
        config.corruption.false_score_mean,
        config.corruption.false_score_std,
    )
    .expect("validated std");

    let paf_dim = config.features.paf_rgb_dim + config.features.paf_flow_dim;
    let m = &config.motion;

    struct Identity {
        appearance: Vec<f64>,
        w: f64,
        h: f64,
        x0: f64,
        y0: f64,
        vx: f64,
        vy: f64,
    }
    let identities: Vec<Identity> = (0..config.n_identities)
        .map(|_| {
            let appearance = unit_vector(&mut rng, config.features.appearance_dim);
            let w = rng.random_range(m.box_w_min..=m.box_w_max);
            let h = rng.random_range(m.box_h_min..=m.box_h_max);
            let x0 = rng.random_range(0.0..=(config.image_w - w));
            let y0 = rng.random_range(0.0..=(config.image_h - h));
            let vx = speed.sample(&mut rng);
            let vy = speed.sample(&mut rng);
            Identity {
                appearance,
                w,
                h,
                x0,
                y0,
                vx,
                vy,
            }
        })
        .collect();

    // One anchor per action class plus a trailing idle anchor for frames
    // with no scripted action.
    let action_anchors: Vec<Vec<f64>> = (0..=config.class_count)
        .map(|_| unit_vector(&mut rng, paf_dim))
        .collect();
    let combined_anchor = |labels: &[usize]| -> Vec<f64> {
        if labels.is_empty() {
            return action_anchors[config.class_count].clone();
        }
        let mut v = vec![0.0; paf_dim];
        for &c in labels {
            for (acc, &x) in v.iter_mut().zip(&action_anchors[c]) {
                *acc += x;
            }
        }
        normalize(&mut v);
        v
    };

    let mut ground_truth = Vec::new();
    let mut detections = Vec::new();
    let mut is_clutter = Vec::new();
    let no_script: Vec<ScriptSpan> = Vec::new();

    for t in 0..config.n_frames {
        let sx: f64 = shake.sample(&mut rng);
        let sy: f64 = shake.sample(&mut rng);
        for (i, identity) in identities.iter().enumerate() {
            let jx: f64 = jitter.sample(&mut rng);
            let jy: f64 = jitter.sample(&mut rng);
            let x = identity.x0 + identity.vx * t as f64 + jx + sx;
            let y = identity.y0 + identity.vy * t as f64 + jy + sy;
            let gt_bbox = place_box(x, y, identity.w, identity.h, config.image_w, config.image_h);
            let spans = config.scripts.get(i).unwrap_or(&no_script);
            let labels = labels_at(spans, t);
            ground_truth.push(GtBox {
                frame: t,
                id: i as TrackId + 1,
                bbox: gt_bbox,
                labels: labels.clone(),
            });

            if rng.random_bool(config.corruption.miss_prob) {
                continue;
            }
            let dx: f64 = box_jitter.sample(&mut rng);
            let dy: f64 = box_jitter.sample(&mut rng);
            let dw: f64 = box_jitter.sample(&mut rng);
            let dh: f64 = box_jitter.sample(&mut rng);
            let det_bbox = place_box(
                gt_bbox.x + dx,
                gt_bbox.y + dy,
                gt_bbox.w + dw,
                gt_bbox.h + dh,
                config.image_w,
                config.image_h,
            );
            let det_score = true_score.sample(&mut rng).clamp(0.0, 1.0);
            let mut appearance = identity.appearance.clone();
            for v in &mut appearance {
                *v += app_noise.sample(&mut rng);
            }
            normalize(&mut appearance);
            let mut paf = combined_anchor(&labels);
            for v in &mut paf {
                *v += paf_noise.sample(&mut rng);
            }
            normalize(&mut paf);
            let action_scores: Vec<f64> = (0..config.class_count)
                .map(|c| {
                    let base = if labels.contains(&c) {
                        config.features.action_score_hi
                    } else {
                        config.features.action_score_lo
                    };
                    (base + act_noise.sample(&mut rng)).clamp(0.0, 1.0)
                })
                .collect();
            detections.push(Observation {
                frame: t,
                bbox: det_bbox,
                det_score,
                appearance,
                paf,
                action_scores,
            });
            is_clutter.push(false);
        }

        if rng.random_bool(config.corruption.fp_rate) {
            let w = rng.random_range(m.box_w_min..=m.box_w_max);
            let h = rng.random_range(m.box_h_min..=m.box_h_max);
            let x = rng.random_range(0.0..=(config.image_w - w));
            let y = rng.random_range(0.0..=(config.image_h - h));
            let det_score = false_score.sample(&mut rng).clamp(0.0, 1.0);
            let appearance = unit_vector(&mut rng, config.features.appearance_dim);
            let paf = unit_vector(&mut rng, paf_dim);
            let action_scores: Vec<f64> = (0..config.class_count)
                .map(|_| {
                    (config.features.action_score_lo + act_noise.sample(&mut rng)).clamp(0.0, 1.0)
                })
                .collect();
            detections.push(Observation {
                frame: t,
                bbox: place_box(x, y, w, h, config.image_w, config.image_h),
                det_score,
                appearance,
                paf,
                action_scores,
            });
            is_clutter.push(true);
        }
    }

    Ok(Scenario {
        ground_truth,
        detections,
        is_clutter,
    })
}

/// Box counts, per-class ground-truth counts and the clutter share.
pub fn scenario_stats(scenario: &Scenario, class_count: usize) -> ScenarioStats {
    let clutter = scenario.is_clutter.iter().filter(|&&c| c).count();
    let mut per_class_boxes = vec![0usize; class_count];
    for b in &scenario.ground_truth {
        for &c in &b.labels {
            if c < class_count {
                per_class_boxes[c] += 1;
            }
        }
    }
    let detections = scenario.detections.len();
    ScenarioStats {
        gt_boxes: scenario.ground_truth.len(),
        detections,
        clutter,
        misses: scenario.ground_truth.len() - (detections - clutter),
        per_class_boxes,
        clutter_ratio: if detections == 0 {
            0.0
        } else {
            clutter as f64 / detections as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DatasetConfig;

    fn quiet_config() -> ScenarioConfig {
        ScenarioConfig {
            seed: 7,
            n_identities: 2,
            n_frames: 10,
            corruption: CorruptionModel {
                miss_prob: 0.0,
                fp_rate: 0.0,
                ..CorruptionModel::default()
            },
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn box_counts_without_corruption() {
        let s = generate_scenario(&quiet_config()).unwrap();
        let stats = scenario_stats(&s, 12);
        assert_eq!(stats.gt_boxes, 20);
        assert_eq!(stats.detections, 20);
        assert_eq!(stats.clutter, 0);
        assert_eq!(stats.misses, 0);
        assert_eq!(stats.clutter_ratio, 0.0);
    }

    #[test]
    fn same_seed_reproduces_everything() {
        let mut config = ScenarioConfig {
            scripts: round_robin_scripts(4, 60, &[8, 11]),
            ..ScenarioConfig::default()
        };
        let a = generate_scenario(&config).unwrap();
        let b = generate_scenario(&config).unwrap();
        assert_eq!(a, b);

        config.seed = 1;
        let c = generate_scenario(&config).unwrap();
        assert_ne!(a.detections, c.detections);
    }

    #[test]
    fn all_boxes_lie_inside_the_image() {
        let config = ScenarioConfig {
            seed: 3,
            n_identities: 6,
            n_frames: 50,
            motion: MotionModel {
                speed_std: 15.0,
                shake_std: 10.0,
                ..MotionModel::default()
            },
            ..ScenarioConfig::default()
        };
        let s = generate_scenario(&config).unwrap();
        for b in s.ground_truth.iter().map(|g| &g.bbox).chain(s.detections.iter().map(|d| &d.bbox))
        {
            assert!(b.x >= 0.0 && b.y >= 0.0);
            assert!(b.right() <= config.image_w + 1e-9);
            assert!(b.bottom() <= config.image_h + 1e-9);
        }
    }

    #[test]
    fn detections_validate_against_the_dataset_shape() {
        let config = ScenarioConfig {
            seed: 5,
            corruption: CorruptionModel {
                fp_rate: 0.5,
                ..CorruptionModel::default()
            },
            features: FeatureModel {
                action_score_noise_std: 0.1,
                ..FeatureModel::default()
            },
            scripts: round_robin_scripts(4, 60, &[0, 3, 8]),
            ..ScenarioConfig::default()
        };
        let s = generate_scenario(&config).unwrap();
        let shape = DatasetConfig {
            appearance_dim: 16,
            paf_dim: 16,
            class_count: 12,
        };
        for d in &s.detections {
            d.validate(&shape).unwrap();
            let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm(&d.appearance) - 1.0).abs() < 1e-9);
            assert!((norm(&d.paf) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn clutter_count_tracks_the_rate() {
        // 300 frames at rate 0.5: binomial mean 150, 3 sigma ~ 26.
        let config = ScenarioConfig {
            seed: 11,
            n_frames: 300,
            n_identities: 1,
            corruption: CorruptionModel {
                miss_prob: 0.0,
                fp_rate: 0.5,
                ..CorruptionModel::default()
            },
            ..ScenarioConfig::default()
        };
        let stats = scenario_stats(&generate_scenario(&config).unwrap(), 12);
        assert!(
            (124..=176).contains(&stats.clutter),
            "clutter {} outside 3 sigma of 150",
            stats.clutter
        );
    }

    #[test]
    fn misses_track_the_probability() {
        // 4 identities x 250 frames at miss 0.2: mean 200, 3 sigma ~ 38.
        let config = ScenarioConfig {
            seed: 13,
            n_frames: 250,
            corruption: CorruptionModel {
                miss_prob: 0.2,
                fp_rate: 0.0,
                ..CorruptionModel::default()
            },
            ..ScenarioConfig::default()
        };
        let stats = scenario_stats(&generate_scenario(&config).unwrap(), 12);
        assert_eq!(stats.gt_boxes, 1000);
        assert!(
            (162..=238).contains(&stats.misses),
            "misses {} outside 3 sigma of 200",
            stats.misses
        );
    }

    #[test]
    fn scripts_drive_labels_and_stats() {
        let config = ScenarioConfig {
            scripts: vec![
                vec![
                    ScriptSpan {
                        from: 0,
                        to: 4,
                        labels: vec![8],
                    },
                    ScriptSpan {
                        from: 3,
                        to: 9,
                        labels: vec![11],
                    },
                ],
                Vec::new(),
            ],
            ..quiet_config()
        };
        let s = generate_scenario(&config).unwrap();
        let labels_of = |frame: Frame, id: TrackId| {
            s.ground_truth
                .iter()
                .find(|b| b.frame == frame && b.id == id)
                .unwrap()
                .labels
                .clone()
        };
        assert_eq!(labels_of(0, 1), vec![8]);
        assert_eq!(labels_of(3, 1), vec![8, 11], "overlapping spans merge");
        assert_eq!(labels_of(9, 1), vec![11]);
        assert!(labels_of(5, 2).is_empty(), "unscripted identity stays unknown");

        let stats = scenario_stats(&s, 12);
        assert_eq!(stats.per_class_boxes[8], 5);
        assert_eq!(stats.per_class_boxes[11], 7);
    }

    #[test]
    fn zero_noise_motion_is_exactly_linear() {
        let config = ScenarioConfig {
            motion: MotionModel {
                jitter_std: 0.0,
                shake_std: 0.0,
                ..MotionModel::default()
            },
            ..quiet_config()
        };
        let s = generate_scenario(&config).unwrap();
        // Pick the identity-1 boxes; away from the borders consecutive
        // deltas are equal.
        let xs: Vec<f64> = s
            .ground_truth
            .iter()
            .filter(|b| b.id == 1)
            .map(|b| b.bbox.x)
            .collect();
        let interior = |x: f64| x > 0.0 && x < config.image_w - 48.0;
        for w in xs.windows(3) {
            if w.iter().all(|&x| interior(x)) {
                assert!(((w[1] - w[0]) - (w[2] - w[1])).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        let mut config = quiet_config();
        config.corruption.miss_prob = 1.5;
        assert!(matches!(
            generate_scenario(&config),
            Err(SynthError::BadProbability { .. })
        ));

        let mut config = quiet_config();
        config.scripts = vec![vec![ScriptSpan {
            from: 0,
            to: 99,
            labels: vec![0],
        }]];
        assert!(matches!(
            generate_scenario(&config),
            Err(SynthError::BadSpan { .. })
        ));

        let mut config = quiet_config();
        config.scripts = vec![vec![ScriptSpan {
            from: 0,
            to: 1,
            labels: vec![99],
        }]];
        assert!(matches!(
            generate_scenario(&config),
            Err(SynthError::BadScriptLabel { .. })
        ));

        let mut config = quiet_config();
        config.motion.box_w_max = 10_000.0;
        assert_eq!(generate_scenario(&config), Err(SynthError::BadBoxRange));
    }
}
