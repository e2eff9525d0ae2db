//! Probability models: a full-batch gradient-descent logistic regression
//! (baseline) and a gradient-boosted forest of depth-limited regression
//! trees on log-loss (proposed).

pub mod artifact;
pub mod gbdt;
pub mod logistic;
pub mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use artifact::{load_model, save_model, ModelArtifact, SavedModel, ARTIFACT_FORMAT_VERSION};
pub use gbdt::{train_gbdt, train_gbdt_seq, BoostedForest, GbdtHyper, GbdtMeta};
pub use logistic::{predict_logistic, train_logistic, LinearModel, LogisticHyper, TrainMeta};
pub use tree::TreeNode;

/// Probability clamp: predictions are never exactly 0 or 1.
pub const PROBABILITY_EPSILON: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("training set contains a single class")]
    SingleClass,
    #[error("training loss became non-finite at iteration {iteration}")]
    NonFiniteLoss { iteration: u32 },
    #[error("schema fingerprint mismatch: model {model}, data {data}")]
    SchemaMismatch { model: String, data: String },
    #[error("length mismatch: {left} predictions vs {right} labels")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("unsupported artifact version {found} (expected {expected})")]
    BadVersion { found: u32, expected: u32 },
    #[error("failed to read/write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("bad model artifact {path}: {message}")]
    BadArtifact {
        path: std::path::PathBuf,
        message: String,
    },
}

/// A clamped per-shot probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub event_id: String,
    pub probability: f64,
}

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Clamp a probability into `[eps, 1 - eps]`.
pub fn clamp_probability(p: f64) -> f64 {
    p.clamp(PROBABILITY_EPSILON, 1.0 - PROBABILITY_EPSILON)
}

/// Mean binary cross-entropy.
pub fn log_loss(predictions: &[f64], labels: &[bool]) -> Result<f64, ModelError> {
    if predictions.len() != labels.len() {
        return Err(ModelError::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(ModelError::Empty);
    }
    let total: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(&p, &y)| if y { -p.ln() } else { -(1.0 - p).ln() })
        .sum();
    Ok(total / predictions.len() as f64)
}

pub(crate) fn check_both_classes(labels: &[bool]) -> Result<(), ModelError> {
    let positives = labels.iter().filter(|&&y| y).count();
    if labels.is_empty() {
        return Err(ModelError::Empty);
    }
    if positives == 0 || positives == labels.len() {
        return Err(ModelError::SingleClass);
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::features::{FeatureKind, FeatureMatrix, FeatureSchema, FeatureSpec};

    /// An all-numeric matrix for small hand-built training sets.
    pub(crate) fn numeric_matrix(rows: &[&[f64]], labels: &[bool]) -> FeatureMatrix {
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        let schema = FeatureSchema::new(
            (0..d)
                .map(|i| FeatureSpec {
                    name: format!("f{i}"),
                    kind: FeatureKind::Numeric,
                })
                .collect(),
        );
        let ids = (0..rows.len()).map(|i| format!("row-{i}")).collect();
        FeatureMatrix::from_rows(
            schema,
            rows.iter().map(|r| r.to_vec()).collect(),
            labels.to_vec(),
            ids,
        )
        .unwrap()
    }
}
