//! Versioned on-disk model artifacts. Round-tripping through JSON is
//! lossless for f64, so a loaded model predicts bit-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::features::FeatureMatrix;
use crate::models::gbdt::BoostedForest;
use crate::models::logistic::LinearModel;
use crate::models::{ModelError, Prediction};

pub const ARTIFACT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelArtifact {
    Logistic(LinearModel),
    Gbdt(BoostedForest),
}

impl ModelArtifact {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelArtifact::Logistic(_) => "logistic",
            ModelArtifact::Gbdt(_) => "gbdt",
        }
    }

    pub fn fingerprint(&self) -> &str {
        match self {
            ModelArtifact::Logistic(m) => &m.fingerprint,
            ModelArtifact::Gbdt(m) => &m.fingerprint,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ModelArtifact::Logistic(m) => m.meta.seed,
            ModelArtifact::Gbdt(m) => m.meta.seed,
        }
    }

    pub fn predict_matrix(&self, matrix: &FeatureMatrix) -> Result<Vec<Prediction>, ModelError> {
        match self {
            ModelArtifact::Logistic(m) => m.predict_matrix(matrix),
            ModelArtifact::Gbdt(m) => m.predict_matrix(matrix),
        }
    }
}

/// A model plus provenance, as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub format_version: u32,
    /// Human label, e.g. "base", "forward-adjusted", "player-5503".
    pub label: String,
    pub training_rows: usize,
    pub artifact: ModelArtifact,
}

impl SavedModel {
    pub fn new(label: impl Into<String>, training_rows: usize, artifact: ModelArtifact) -> Self {
        Self {
            format_version: ARTIFACT_FORMAT_VERSION,
            label: label.into(),
            training_rows,
            artifact,
        }
    }
}

pub fn save_model(path: &Path, model: &SavedModel) -> Result<(), ModelError> {
    let json = serde_json::to_string_pretty(model).expect("model serializes");
    fs::write(path, json).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<SavedModel, ModelError> {
    let bytes = fs::read(path).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let model: SavedModel =
        serde_json::from_slice(&bytes).map_err(|e| ModelError::BadArtifact {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    if model.format_version != ARTIFACT_FORMAT_VERSION {
        return Err(ModelError::BadVersion {
            found: model.format_version,
            expected: ARTIFACT_FORMAT_VERSION,
        });
    }
    Ok(model)
}
