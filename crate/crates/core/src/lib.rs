//! Expected-goals engine over StatsBomb open data.
//!
//! The pipeline: ingest event JSON into [`ingest::ShotEvent`]s, engineer
//! the shot features and encode a design matrix ([`features`]), train a
//! logistic baseline or boosted-tree model ([`models`]), evaluate against
//! the provider's stored xG ([`evaluation`]), retrain on sub-corpora for
//! position- and player-adjusted xG ([`adjustment`]), and render match
//! reports and SVG figures ([`report`]).
//!
//! Everything is deterministic: same inputs, same seed, same bytes out.
//! With the default `parallel` feature the per-row loops run on rayon;
//! results are bit-identical to the sequential fallback.

pub mod adjustment;
pub mod evaluation;
pub mod exec;
pub mod features;
pub mod ingest;
pub mod models;
pub mod pitch;
pub mod report;
