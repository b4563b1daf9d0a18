//! Multi-cue multi-object tracking core.
//!
//! Tracking-by-detection over per-detection feature records: every detection
//! carries a bounding box, a detector score, an appearance embedding, an
//! action embedding, and per-class action scores. Association links the
//! detections into identity trajectories either globally (min-cost network
//! flow over the whole sequence) or online (per-frame Hungarian assignment),
//! using trainable observation and transition cost models. Tracked
//! trajectories feed sliding-window multi-label action recognition, and the
//! results are scored with CLEAR-MOT tracking metrics and per-class average
//! precision.
//!
//! The crate is `no_std` (with `alloc`) and performs no I/O; file formats and
//! the command line live in the companion `cuetrack` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assignment;
pub mod cost;
pub mod flow;
pub mod geometry;
pub mod metrics;
pub mod model;
pub mod online;
pub mod recognize;
pub mod synth;
