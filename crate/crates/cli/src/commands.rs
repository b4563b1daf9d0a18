//! Subcommand implementations. Result files go to the given paths,
//! reports to stdout, progress notes to stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;

use anyhow::{bail, Context, Result};
use serde_json::json;

use cuetrack_core::cost::{
    build_training_pairs, fit_observation_cost, fit_transition_model_traced, AssociationCosts,
    BoostOptions, FitOptions, PairOptions,
};
use cuetrack_core::flow::{associate, AssociationConfig};
use cuetrack_core::metrics::{
    label_detections, map_action_detection, mot_report, ActionPrediction, LabeledBox, TrackedBox,
};
use cuetrack_core::model::{
    ActionTimeline, Frame, Observation, TrackingResult, Trajectory, TrackId,
};
use cuetrack_core::online::{run_online, OnlineConfig};
use cuetrack_core::recognize::{recognize_timeline, window_scores, RecognitionConfig};
use cuetrack_core::synth::{generate_scenario, scenario_stats};

use crate::formats::{
    default_class_names, read_detections, read_tracks, write_detections, write_tracks,
    DatasetHeader, PipelineDefaults, TrackRow, FORMAT_VERSION,
};
use crate::model_io::{read_model, write_model};
use crate::scenario::read_scenario;
use crate::{
    EvalMapArgs, EvalMotArgs, Mode, RecognizeArgs, Report, SynthArgs, TrackArgs, TrainArgs,
};

pub fn synth(args: &SynthArgs) -> Result<()> {
    let mut file = read_scenario(&args.config)?;
    if let Some(seed) = args.seed {
        file.seed = seed;
    }
    let (config, fps) = file.into_config();
    let scenario = generate_scenario(&config)?;

    let header = DatasetHeader {
        version: FORMAT_VERSION,
        class_names: default_class_names(config.class_count),
        appearance_dim: config.features.appearance_dim,
        paf_rgb_dim: config.features.paf_rgb_dim,
        paf_flow_dim: config.features.paf_flow_dim,
        fps,
        defaults: Some(PipelineDefaults::default()),
    };
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    write_detections(
        &args.out_dir.join("detections.jsonl"),
        &header,
        &scenario.detections,
    )?;
    let rows: Vec<TrackRow> = scenario
        .ground_truth
        .iter()
        .map(|b| TrackRow {
            frame: b.frame,
            id: b.id,
            bbox: b.bbox,
            labels: b.labels.clone(),
        })
        .collect();
    write_tracks(&args.out_dir.join("gt.csv"), &rows)?;

    let stats = scenario_stats(&scenario, config.class_count);
    eprintln!(
        "wrote {} ground-truth boxes and {} detections ({} clutter, {} missed) to {}",
        stats.gt_boxes,
        stats.detections,
        stats.clutter,
        stats.misses,
        args.out_dir.display()
    );
    Ok(())
}

fn rows_to_tracked(rows: &[TrackRow]) -> Vec<TrackedBox> {
    rows.iter()
        .map(|r| TrackedBox {
            frame: r.frame,
            id: r.id,
            bbox: r.bbox,
        })
        .collect()
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let (_, observations) = read_detections(&args.detections)?;
    let gt = rows_to_tracked(&read_tracks(&args.ground_truth)?);
    let (trajectories, matched) = label_detections(&gt, &observations, args.iou)?;

    let samples: Vec<(f64, bool)> = observations
        .iter()
        .zip(&matched)
        .map(|(o, &m)| (o.det_score, m))
        .collect();
    let logistic = fit_observation_cost(&samples, args.bias, &FitOptions::default())
        .context("observation-cost fit failed")?;

    let pair_options = PairOptions {
        max_gap: args.max_gap,
        negative_ratio: args.negative_ratio,
        seed: args.pair_seed,
    };
    let pairs = build_training_pairs(&trajectories, &observations, &pair_options)?;
    let boost_options = BoostOptions {
        n_trees: args.trees,
        max_depth: args.max_depth,
        shrinkage: args.shrinkage,
        min_samples_leaf: args.min_leaf,
    };
    let (ensemble, losses) =
        fit_transition_model_traced(&pairs, &boost_options).context("transition fit failed")?;

    write_model(
        &args.out,
        &AssociationCosts {
            logistic,
            ensemble,
            c_entr: args.entry_cost,
            c_exit: args.exit_cost,
        },
    )?;
    let n_true = matched.iter().filter(|&&m| m).count();
    eprintln!(
        "observation model: alpha {:.4}, beta {:.4} from {} detections ({} matched)",
        logistic.alpha,
        logistic.beta,
        observations.len(),
        n_true
    );
    eprintln!(
        "transition model: {} trees on {} pairs, training loss {:.4} -> {:.4}",
        args.trees,
        pairs.len(),
        losses.first().unwrap_or(&f64::NAN),
        losses.last().unwrap_or(&f64::NAN)
    );
    Ok(())
}

fn tracks_to_rows(
    trajectories: &[Trajectory],
    observations: &[Observation],
    timeline: &ActionTimeline,
) -> Vec<TrackRow> {
    trajectories
        .iter()
        .flat_map(|t| {
            t.members().iter().zip(t.frames()).map(|(&m, &f)| TrackRow {
                frame: f,
                id: t.id(),
                bbox: observations[m].bbox,
                labels: timeline.labels(t.id(), f).to_vec(),
            })
        })
        .collect()
}

pub fn track(args: &TrackArgs) -> Result<()> {
    let (header, observations) = read_detections(&args.detections)?;
    let mut costs = read_model(&args.model)?;
    if let Some(v) = args.entry_cost {
        costs.c_entr = v;
    }
    if let Some(v) = args.exit_cost {
        costs.c_exit = v;
    }
    if let Some(v) = args.bias {
        costs.logistic.bias = v;
    }

    let trajectories = match args.mode {
        Mode::Offline => {
            let config = AssociationConfig {
                max_gap: args.max_gap,
                costs,
            };
            let (trajectories, total_cost) = associate(&observations, &config)?;
            eprintln!(
                "offline association: {} trajectories over {} detections, total cost {:.4}",
                trajectories.len(),
                observations.len(),
                total_cost
            );
            trajectories
        }
        Mode::Online => {
            let config = OnlineConfig {
                max_misses: args.max_gap.saturating_sub(1),
                ..OnlineConfig::default()
            };
            let trajectories = run_online(&observations, &costs, &config)?;
            eprintln!(
                "online tracking: {} trajectories over {} detections",
                trajectories.len(),
                observations.len()
            );
            trajectories
        }
    };
    let result = TrackingResult::new(trajectories)?;
    let recog = RecognitionConfig::new(args.lambda, args.epsilon, header.class_names.clone())?;
    let timeline = recognize_timeline(&result.trajectories, &observations, &recog)?;
    write_tracks(
        &args.out,
        &tracks_to_rows(&result.trajectories, &observations, &timeline),
    )
}

/// Reconnects track rows to their detections (same frame, same box up to
/// 1e-9) and rebuilds the trajectories.
fn rebuild_trajectories(
    rows: &[TrackRow],
    observations: &[Observation],
) -> Result<Vec<Trajectory>> {
    let mut by_frame: BTreeMap<Frame, Vec<usize>> = BTreeMap::new();
    for (i, o) in observations.iter().enumerate() {
        by_frame.entry(o.frame).or_default().push(i);
    }
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-9;

    let mut grouped: BTreeMap<TrackId, Vec<(Frame, usize)>> = BTreeMap::new();
    for row in rows {
        let index = by_frame
            .get(&row.frame)
            .and_then(|candidates| {
                candidates.iter().copied().find(|&i| {
                    let b = observations[i].bbox;
                    same(b.x, row.bbox.x)
                        && same(b.y, row.bbox.y)
                        && same(b.w, row.bbox.w)
                        && same(b.h, row.bbox.h)
                })
            })
            .with_context(|| {
                format!(
                    "no detection matches the track box at frame {} id {}",
                    row.frame, row.id
                )
            })?;
        grouped.entry(row.id).or_default().push((row.frame, index));
    }

    grouped
        .into_iter()
        .map(|(id, mut list)| {
            list.sort_unstable();
            let mut traj = Trajectory::new(id);
            for (frame, index) in list {
                traj.push(index, frame)?;
            }
            Ok(traj)
        })
        .collect()
}

pub fn recognize(args: &RecognizeArgs) -> Result<()> {
    let (header, observations) = read_detections(&args.detections)?;
    let rows = read_tracks(&args.tracks)?;
    let trajectories = rebuild_trajectories(&rows, &observations)?;
    let recog = RecognitionConfig::new(args.lambda, args.epsilon, header.class_names.clone())?;
    let timeline = recognize_timeline(&trajectories, &observations, &recog)?;
    write_tracks(
        &args.out,
        &tracks_to_rows(&trajectories, &observations, &timeline),
    )
}

/// Prints a report, tolerating a consumer that stopped reading early.
fn emit(report: &str) -> Result<()> {
    match std::io::stdout().write_all(report.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.context("cannot write report"),
    }
}

pub fn eval_mot(args: &EvalMotArgs) -> Result<()> {
    let gt = rows_to_tracked(&read_tracks(&args.ground_truth)?);
    let hyp = rows_to_tracked(&read_tracks(&args.tracks)?);
    let r = mot_report(&gt, &hyp, args.iou)?;
    let mut out = String::new();
    match args.report {
        Report::Json => {
            let value = json!({
                "mota": r.mota,
                "recall": r.recall,
                "precision": r.precision,
                "det_total": r.det_total,
                "matches": r.matches,
                "false_negatives": r.fn_count,
                "false_positives": r.fp_count,
                "id_switches": r.id_switches,
                "fragmentations": r.fragmentations,
            });
            out.push_str(&serde_json::to_string_pretty(&value)?);
            out.push('\n');
        }
        Report::Table => {
            let _ = writeln!(out, "{:<16} {:>10.2}", "MOTA", r.mota);
            let _ = writeln!(out, "{:<16} {:>10.2}", "recall", r.recall);
            let _ = writeln!(out, "{:<16} {:>10.2}", "precision", r.precision);
            let _ = writeln!(out, "{:<16} {:>10}", "GT boxes", r.det_total);
            let _ = writeln!(out, "{:<16} {:>10}", "matches", r.matches);
            let _ = writeln!(out, "{:<16} {:>10}", "false negatives", r.fn_count);
            let _ = writeln!(out, "{:<16} {:>10}", "false positives", r.fp_count);
            let _ = writeln!(out, "{:<16} {:>10}", "ID switches", r.id_switches);
            let _ = writeln!(out, "{:<16} {:>10}", "fragmentations", r.fragmentations);
        }
    }
    emit(&out)
}

pub fn eval_map(args: &EvalMapArgs) -> Result<()> {
    let (header, observations) = read_detections(&args.detections)?;
    let gt_rows = read_tracks(&args.ground_truth)?;
    let class_count = header.class_names.len();
    for row in &gt_rows {
        if let Some(&class) = row.labels.iter().find(|&&c| c >= class_count) {
            bail!(
                "ground-truth label {class} out of range for {class_count} classes (frame {} id {})",
                row.frame,
                row.id
            );
        }
    }
    let gt: Vec<LabeledBox> = gt_rows
        .iter()
        .map(|r| LabeledBox {
            frame: r.frame,
            bbox: r.bbox,
            labels: r.labels.clone(),
        })
        .collect();

    let trajectories = rebuild_trajectories(&read_tracks(&args.tracks)?, &observations)?;
    let mut predictions = Vec::new();
    for t in &trajectories {
        for (&m, &f) in t.members().iter().zip(t.frames()) {
            let scores = window_scores(t, &observations, f, args.lambda)?;
            for (class, &score) in scores.iter().enumerate() {
                predictions.push(ActionPrediction {
                    frame: f,
                    bbox: observations[m].bbox,
                    class,
                    score,
                });
            }
        }
    }

    let r = map_action_detection(&gt, &predictions, class_count, args.iou)?;
    let mut out = String::new();
    match args.report {
        Report::Json => {
            let per_class: Vec<_> = header
                .class_names
                .iter()
                .enumerate()
                .map(|(c, name)| {
                    json!({
                        "class": name,
                        "ap": r.per_class_ap[c],
                        "present": r.present[c],
                    })
                })
                .collect();
            let value = json!({ "map": r.map, "per_class": per_class });
            out.push_str(&serde_json::to_string_pretty(&value)?);
            out.push('\n');
        }
        Report::Table => {
            for (c, name) in header.class_names.iter().enumerate() {
                if r.present[c] {
                    let _ = writeln!(out, "{:<18} {:>8.4}", name, r.per_class_ap[c]);
                } else {
                    let _ = writeln!(out, "{:<18} {:>8}", name, "absent");
                }
            }
            let _ = writeln!(out, "{:<18} {:>8.4}", "mAP", r.map);
        }
    }
    emit(&out)
}
