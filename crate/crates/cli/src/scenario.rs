//! Scenario configuration files: a JSON mirror of the generator's
//! configuration in which every field is optional and falls back to the
//! generator defaults. A `round_robin_classes` shortcut builds
//! whole-sequence scripts when no explicit scripts are given.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

use cuetrack_core::synth::{
    round_robin_scripts, CorruptionModel, FeatureModel, MotionModel, ScenarioConfig, ScriptSpan,
};

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub seed: u64,
    pub n_identities: usize,
    pub n_frames: u64,
    pub image_w: f64,
    pub image_h: f64,
    pub class_count: usize,
    pub fps: f64,
    pub motion: MotionFile,
    pub features: FeatureFile,
    pub corruption: CorruptionFile,
    pub scripts: Vec<Vec<SpanFile>>,
    pub round_robin_classes: Vec<usize>,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        let base = ScenarioConfig::default();
        ScenarioFile {
            seed: base.seed,
            n_identities: base.n_identities,
            n_frames: base.n_frames,
            image_w: base.image_w,
            image_h: base.image_h,
            class_count: base.class_count,
            fps: 30.0,
            motion: MotionFile::default(),
            features: FeatureFile::default(),
            corruption: CorruptionFile::default(),
            scripts: Vec::new(),
            round_robin_classes: Vec::new(),
        }
    }
}

macro_rules! mirror {
    ($name:ident of $core:ident { $($field:ident),+ $(,)? }) => {
        #[derive(Debug, Deserialize)]
        #[serde(default, deny_unknown_fields)]
        pub struct $name {
            $(pub $field: f64,)+
        }

        impl Default for $name {
            fn default() -> Self {
                let base = $core::default();
                $name { $($field: base.$field,)+ }
            }
        }

        impl $name {
            fn into_core(self) -> $core {
                $core { $($field: self.$field,)+ }
            }
        }
    };
}

mirror!(MotionFile of MotionModel {
    speed_std, jitter_std, shake_std, box_w_min, box_w_max, box_h_min, box_h_max,
});

mirror!(CorruptionFile of CorruptionModel {
    miss_prob, fp_rate, bbox_jitter_std,
    true_score_mean, true_score_std, false_score_mean, false_score_std,
});

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureFile {
    pub appearance_dim: usize,
    pub appearance_noise_std: f64,
    pub paf_rgb_dim: usize,
    pub paf_flow_dim: usize,
    pub paf_noise_std: f64,
    pub action_score_hi: f64,
    pub action_score_lo: f64,
    pub action_score_noise_std: f64,
}

impl Default for FeatureFile {
    fn default() -> Self {
        let base = FeatureModel::default();
        FeatureFile {
            appearance_dim: base.appearance_dim,
            appearance_noise_std: base.appearance_noise_std,
            paf_rgb_dim: base.paf_rgb_dim,
            paf_flow_dim: base.paf_flow_dim,
            paf_noise_std: base.paf_noise_std,
            action_score_hi: base.action_score_hi,
            action_score_lo: base.action_score_lo,
            action_score_noise_std: base.action_score_noise_std,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanFile {
    pub from: u64,
    pub to: u64,
    #[serde(default)]
    pub labels: Vec<usize>,
}

impl ScenarioFile {
    /// Converts the file into a generator configuration plus the nominal
    /// frame rate for the dataset header.
    pub fn into_config(self) -> (ScenarioConfig, f64) {
        let scripts = if self.scripts.is_empty() && !self.round_robin_classes.is_empty() {
            round_robin_scripts(self.n_identities, self.n_frames, &self.round_robin_classes)
        } else {
            self.scripts
                .into_iter()
                .map(|spans| {
                    spans
                        .into_iter()
                        .map(|s| ScriptSpan {
                            from: s.from,
                            to: s.to,
                            labels: s.labels,
                        })
                        .collect()
                })
                .collect()
        };
        let config = ScenarioConfig {
            seed: self.seed,
            n_identities: self.n_identities,
            n_frames: self.n_frames,
            image_w: self.image_w,
            image_h: self.image_h,
            class_count: self.class_count,
            motion: self.motion.into_core(),
            features: FeatureModel {
                appearance_dim: self.features.appearance_dim,
                appearance_noise_std: self.features.appearance_noise_std,
                paf_rgb_dim: self.features.paf_rgb_dim,
                paf_flow_dim: self.features.paf_flow_dim,
                paf_noise_std: self.features.paf_noise_std,
                action_score_hi: self.features.action_score_hi,
                action_score_lo: self.features.action_score_lo,
                action_score_noise_std: self.features.action_score_noise_std,
            },
            corruption: self.corruption.into_core(),
            scripts,
        };
        (config, self.fps)
    }
}

/// Reads a scenario configuration file.
pub fn read_scenario(path: &Path) -> Result<ScenarioFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read scenario config {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("{}: invalid scenario config", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_the_default_scenario() {
        let file: ScenarioFile = serde_json::from_str("{}").unwrap();
        let (config, fps) = file.into_config();
        assert_eq!(config, ScenarioConfig::default());
        assert_eq!(fps, 30.0);
    }

    #[test]
    fn partial_sections_keep_unlisted_defaults() {
        let file: ScenarioFile = serde_json::from_str(
            r#"{"seed": 9, "motion": {"speed_std": 5.5}, "round_robin_classes": [8, 11]}"#,
        )
        .unwrap();
        let (config, _) = file.into_config();
        assert_eq!(config.seed, 9);
        assert_eq!(config.motion.speed_std, 5.5);
        assert_eq!(config.motion.jitter_std, MotionModel::default().jitter_std);
        assert_eq!(config.scripts.len(), config.n_identities);
        assert_eq!(config.scripts[0][0].labels, vec![8]);
        assert_eq!(config.scripts[1][0].labels, vec![11]);
        assert_eq!(config.scripts[2][0].labels, vec![8]);
    }

    #[test]
    fn explicit_scripts_win_over_round_robin() {
        let file: ScenarioFile = serde_json::from_str(
            r#"{"scripts": [[{"from": 0, "to": 9, "labels": [2]}]], "round_robin_classes": [5]}"#,
        )
        .unwrap();
        let (config, _) = file.into_config();
        assert_eq!(config.scripts.len(), 1);
        assert_eq!(config.scripts[0][0].labels, vec![2]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<ScenarioFile>(r#"{"n_identitees": 3}"#).is_err());
    }
}
