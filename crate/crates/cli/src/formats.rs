//! Dataset file formats.
//!
//! Detections travel as JSON Lines: one header object, then one record
//! per line. Ground truth and track output share a CSV layout
//! (`frame,id,x,y,w,h,labels` with `;`-separated class indices). Floats
//! are written in their shortest round-trip form, so writing is
//! byte-stable and `parse(write(x)) == x` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cuetrack_core::model::{BBox, DatasetConfig, Frame, Observation, TrackId};

/// The Okutama-Action label set, in class-index order.
pub const OKUTAMA_CLASSES: [&str; 12] = [
    "handshaking",
    "hugging",
    "reading",
    "drinking",
    "pushing/pulling",
    "carrying",
    "calling",
    "running",
    "walking",
    "lying",
    "sitting",
    "standing",
];

pub const FORMAT_VERSION: u32 = 1;

const TRACK_HEADER: &str = "frame,id,x,y,w,h,labels";

/// First line of a detections file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub version: u32,
    pub class_names: Vec<String>,
    pub appearance_dim: usize,
    pub paf_rgb_dim: usize,
    pub paf_flow_dim: usize,
    pub fps: f64,
    /// Pipeline defaults recorded for provenance; readers ignore them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defaults: Option<PipelineDefaults>,
}

/// The tracking and recognition constants a dataset was produced under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineDefaults {
    pub bias: f64,
    pub entry_cost: f64,
    pub exit_cost: f64,
    pub lambda: u64,
    pub epsilon: f64,
    pub mu: f64,
}

impl Default for PipelineDefaults {
    fn default() -> Self {
        PipelineDefaults {
            bias: -2.0,
            entry_cost: 10.0,
            exit_cost: 10.0,
            lambda: 15,
            epsilon: 0.4,
            mu: 3.0,
        }
    }
}

impl DatasetHeader {
    pub fn shape(&self) -> DatasetConfig {
        DatasetConfig {
            appearance_dim: self.appearance_dim,
            paf_dim: self.paf_rgb_dim + self.paf_flow_dim,
            class_count: self.class_names.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.appearance_dim == 0 || self.paf_rgb_dim + self.paf_flow_dim == 0 {
            bail!("feature dimensions must be positive");
        }
        if self.class_names.is_empty() {
            bail!("class name list must not be empty");
        }
        Ok(())
    }
}

/// Names the first `count` classes: the Okutama list when it fits, generic
/// `class_N` names otherwise.
pub fn default_class_names(count: usize) -> Vec<String> {
    if count <= OKUTAMA_CLASSES.len() {
        OKUTAMA_CLASSES[..count].iter().map(|s| s.to_string()).collect()
    } else {
        (0..count).map(|i| format!("class_{i}")).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct DetectionRecord {
    frame: Frame,
    bbox: [f64; 4],
    score: f64,
    app: Vec<f64>,
    paf: Vec<f64>,
    actions: Vec<f64>,
}

/// Reads a detections file; every record is validated against the header
/// shape and errors carry 1-based line numbers.
pub fn read_detections(path: &Path) -> Result<(DatasetHeader, Vec<Observation>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read detections file {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let header: DatasetHeader = match lines.next() {
        Some((_, line)) => serde_json::from_str(line)
            .with_context(|| format!("{}: line 1: invalid dataset header", path.display()))?,
        None => bail!("{}: empty file, expected a dataset header", path.display()),
    };
    header
        .validate()
        .with_context(|| format!("{}: line 1", path.display()))?;

    let shape = header.shape();
    let mut observations = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let record: DetectionRecord = serde_json::from_str(line)
            .with_context(|| format!("{}: line {lineno}: invalid detection record", path.display()))?;
        let [x, y, w, h] = record.bbox;
        let observation = Observation {
            frame: record.frame,
            bbox: BBox { x, y, w, h },
            det_score: record.score,
            appearance: record.app,
            paf: record.paf,
            action_scores: record.actions,
        };
        observation
            .validate(&shape)
            .with_context(|| format!("{}: line {lineno}: invalid detection", path.display()))?;
        observations.push(observation);
    }
    Ok((header, observations))
}

/// Writes a detections file in the format [`read_detections`] parses.
pub fn write_detections(
    path: &Path,
    header: &DatasetHeader,
    observations: &[Observation],
) -> Result<()> {
    let mut out = serde_json::to_string(header)?;
    out.push('\n');
    for o in observations {
        let record = DetectionRecord {
            frame: o.frame,
            bbox: [o.bbox.x, o.bbox.y, o.bbox.w, o.bbox.h],
            score: o.det_score,
            app: o.appearance.clone(),
            paf: o.paf.clone(),
            actions: o.action_scores.clone(),
        };
        out.push_str(&serde_json::to_string(&record)?);
        out.push('\n');
    }
    fs::write(path, out)
        .with_context(|| format!("cannot write detections file {}", path.display()))
}

/// One row of a ground-truth or track file.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackRow {
    pub frame: Frame,
    pub id: TrackId,
    pub bbox: BBox,
    pub labels: Vec<usize>,
}

/// Reads a track CSV; rejects duplicate `(frame, id)` pairs and invalid
/// boxes, naming the offending line.
pub fn read_tracks(path: &Path) -> Result<Vec<TrackRow>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read track file {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, line)) if line.trim() == TRACK_HEADER => {}
        Some((_, line)) => bail!(
            "{}: line 1: expected header '{TRACK_HEADER}', found '{line}'",
            path.display()
        ),
        None => bail!("{}: empty file, expected '{TRACK_HEADER}'", path.display()),
    }

    let mut rows = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let row = parse_track_row(line)
            .with_context(|| format!("{}: line {lineno}: invalid row", path.display()))?;
        if !seen.insert((row.frame, row.id)) {
            bail!(
                "{}: line {lineno}: duplicate box for frame {} id {}",
                path.display(),
                row.frame,
                row.id
            );
        }
        rows.push(row);
    }
    Ok(rows)
}

fn parse_track_row(line: &str) -> Result<TrackRow> {
    let fields: Vec<&str> = line.split(',').collect();
    let [frame, id, x, y, w, h, labels] = fields.as_slice() else {
        bail!("expected 7 comma-separated fields, found {}", fields.len());
    };
    let bbox = BBox::new(x.parse()?, y.parse()?, w.parse()?, h.parse()?)?;
    let labels = labels
        .split(';')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrackRow {
        frame: frame.parse()?,
        id: id.parse()?,
        bbox,
        labels,
    })
}

/// Writes a track CSV sorted by frame then id; output is byte-stable for
/// identical inputs.
pub fn write_tracks(path: &Path, rows: &[TrackRow]) -> Result<()> {
    let mut sorted: Vec<&TrackRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.frame, r.id));
    let mut out = String::from(TRACK_HEADER);
    out.push('\n');
    for r in sorted {
        let labels = r
            .labels
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{},{labels}",
            r.frame, r.id, r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h
        )
        .expect("writing to a string cannot fail");
    }
    fs::write(path, out).with_context(|| format!("cannot write track file {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> DatasetHeader {
        DatasetHeader {
            version: FORMAT_VERSION,
            class_names: default_class_names(12),
            appearance_dim: 2,
            paf_rgb_dim: 1,
            paf_flow_dim: 1,
            fps: 30.0,
            defaults: Some(PipelineDefaults::default()),
        }
    }

    fn observation(frame: Frame, x: f64) -> Observation {
        Observation {
            frame,
            bbox: BBox::new(x, 5.0, 10.0, 20.0).unwrap(),
            det_score: 0.75,
            appearance: vec![0.6, 0.8],
            paf: vec![1.0, 0.0],
            action_scores: vec![0.25; 12],
        }
    }

    #[test]
    fn detections_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        // 62.020649700636724 needs all 17 digits and trips JSON parsers
        // that cut the last ulp; the box must survive bit-for-bit.
        let mut original = vec![observation(0, 1.5), observation(1, 0.1 + 0.2)];
        original[1].bbox = BBox::new(1165.3941219007813, 0.3, 5.1, 62.020649700636724).unwrap();
        write_detections(&path, &header(), &original).unwrap();
        let (h, parsed) = read_detections(&path).unwrap();
        assert_eq!(h, header());
        assert_eq!(parsed, original);

        write_detections(&path, &h, &parsed).unwrap();
        let again = fs::read(&path).unwrap();
        write_detections(&path, &h, &parsed).unwrap();
        assert_eq!(again, fs::read(&path).unwrap(), "byte-stable");
    }

    #[test]
    fn empty_body_yields_no_observations() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        write_detections(&path, &header(), &[]).unwrap();
        let (_, parsed) = read_detections(&path).unwrap();
        assert!(parsed.is_empty());
    }

    #[test]
    fn short_action_vector_errors_name_line_two() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        let mut bad = observation(0, 1.0);
        bad.action_scores.pop();
        let text = format!(
            "{}\n{}\n",
            serde_json::to_string(&header()).unwrap(),
            serde_json::to_string(&DetectionRecord {
                frame: bad.frame,
                bbox: [bad.bbox.x, bad.bbox.y, bad.bbox.w, bad.bbox.h],
                score: bad.det_score,
                app: bad.appearance.clone(),
                paf: bad.paf.clone(),
                actions: bad.action_scores.clone(),
            })
            .unwrap()
        );
        fs::write(&path, text).unwrap();
        let err = format!("{:#}", read_detections(&path).unwrap_err());
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn tracks_round_trip_and_parse_the_documented_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        fs::write(&path, "frame,id,x,y,w,h,labels\n0,1,10,10,20,40,8;11\n1,1,10,10,20,40,\n")
            .unwrap();
        let rows = read_tracks(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].frame, 0);
        assert_eq!(rows[0].id, 1);
        assert_eq!(rows[0].bbox, BBox::new(10.0, 10.0, 20.0, 40.0).unwrap());
        assert_eq!(rows[0].labels, vec![8, 11]);
        assert!(rows[1].labels.is_empty());

        write_tracks(&path, &rows).unwrap();
        assert_eq!(read_tracks(&path).unwrap(), rows);
    }

    #[test]
    fn duplicate_frame_id_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        fs::write(&path, "frame,id,x,y,w,h,labels\n0,1,0,0,5,5,\n0,1,9,9,5,5,\n").unwrap();
        let err = format!("{:#}", read_tracks(&path).unwrap_err());
        assert!(err.contains("duplicate") && err.contains("line 3"), "{err}");
    }

    #[test]
    fn track_output_is_sorted_by_frame_then_id() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let row = |frame, id| TrackRow {
            frame,
            id,
            bbox: BBox::new(0.0, 0.0, 5.0, 5.0).unwrap(),
            labels: Vec::new(),
        };
        write_tracks(&path, &[row(1, 2), row(0, 9), row(1, 1)]).unwrap();
        let rows = read_tracks(&path).unwrap();
        let order: Vec<(Frame, TrackId)> = rows.iter().map(|r| (r.frame, r.id)).collect();
        assert_eq!(order, vec![(0, 9), (1, 1), (1, 2)]);
    }

    #[test]
    fn missing_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        fs::write(&path, "0,1,0,0,5,5,\n").unwrap();
        assert!(read_tracks(&path).is_err());
    }
}
