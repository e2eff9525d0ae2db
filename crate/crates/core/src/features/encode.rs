//! Design-matrix assembly: min-max scaling for numerics, lexicographic
//! label encoding for categoricals, 0/1 columns for booleans, coordinates
//! split into X and Y, missing values replaced with 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exec;
use crate::features::geometry;
use crate::ingest::ShotEvent;

pub const BODY_PART_RIGHT_FOOT: &str = "Right Foot";
pub const BODY_PART_LEFT_FOOT: &str = "Left Foot";

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("cannot fit an encoder on an empty corpus")]
    EmptyCorpus,
    #[error("schema fingerprint mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: String, found: String },
    #[error("geometry error: {0}")]
    Geometry(#[from] geometry::GeometryError),
    #[error("failed to read/write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bad feature artifact {path}: {message}")]
    BadArtifact { path: PathBuf, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Numeric,
    Categorical,
    Boolean,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKind::Numeric => write!(f, "numeric"),
            FeatureKind::Categorical => write!(f, "categorical"),
            FeatureKind::Boolean => write!(f, "boolean"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

/// Ordered feature names and kinds plus a content fingerprint. The
/// fingerprint changes iff names or kinds change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<FeatureSpec>,
    pub fingerprint: String,
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureSpec>) -> Self {
        let fingerprint = fingerprint_of(&features);
        Self {
            features,
            fingerprint,
        }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }
}

fn fingerprint_of(features: &[FeatureSpec]) -> String {
    let mut hasher = Sha256::new();
    for spec in features {
        hasher.update(spec.name.as_bytes());
        hasher.update(b"\t");
        hasher.update(spec.kind.to_string().as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

/// Which predictor set to realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureSet {
    /// StatsBomb-native variables only.
    Baseline,
    /// Baseline plus the engineered geometry variables.
    Enriched,
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureSet::Baseline => write!(f, "baseline"),
            FeatureSet::Enriched => write!(f, "enriched"),
        }
    }
}

pub const DEFAULT_PRESSURE_RADIUS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub set: FeatureSet,
    /// Radius (pitch units) for the opponent-pressure count.
    pub pressure_radius: f64,
}

impl FeatureConfig {
    pub fn baseline() -> Self {
        Self {
            set: FeatureSet::Baseline,
            pressure_radius: DEFAULT_PRESSURE_RADIUS,
        }
    }

    pub fn enriched() -> Self {
        Self {
            set: FeatureSet::Enriched,
            pressure_radius: DEFAULT_PRESSURE_RADIUS,
        }
    }

    pub fn schema(&self) -> FeatureSchema {
        let mut specs = vec![
            spec("aerial_won", FeatureKind::Boolean),
            spec("first_time", FeatureKind::Boolean),
            spec("open_goal", FeatureKind::Boolean),
            spec("under_pressure", FeatureKind::Boolean),
            spec("body_part", FeatureKind::Categorical),
            spec("technique", FeatureKind::Categorical),
            spec("key_pass_type", FeatureKind::Categorical),
            spec("location_x", FeatureKind::Numeric),
            spec("location_y", FeatureKind::Numeric),
        ];
        if self.set == FeatureSet::Enriched {
            specs.extend([
                spec("strong_footed", FeatureKind::Categorical),
                spec("within_penalty_area", FeatureKind::Boolean),
                spec("distance_to_goal", FeatureKind::Numeric),
                spec("angle_to_goal", FeatureKind::Numeric),
                spec("gk_distance_from_goal", FeatureKind::Numeric),
                spec("opponents_in_triangle", FeatureKind::Numeric),
                spec("opponents_within_radius", FeatureKind::Numeric),
            ]);
        }
        FeatureSchema::new(specs)
    }
}

fn spec(name: &str, kind: FeatureKind) -> FeatureSpec {
    FeatureSpec {
        name: name.to_string(),
        kind,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Foot {
    Right,
    Left,
    Unknown,
}

/// Majority shooting foot per player, inferred from the corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DominantFootMap {
    map: BTreeMap<i64, Foot>,
}

impl DominantFootMap {
    pub fn foot(&self, player_id: i64) -> Foot {
        self.map.get(&player_id).copied().unwrap_or(Foot::Unknown)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Per player, the majority foot among that player's footed shots; ties or
/// no footed shots give `Unknown`.
pub fn infer_dominant_foot(shots: &[ShotEvent]) -> DominantFootMap {
    let mut counts: BTreeMap<i64, (u32, u32)> = BTreeMap::new();
    for shot in shots {
        let entry = counts.entry(shot.player_id).or_insert((0, 0));
        match shot.body_part.as_str() {
            BODY_PART_RIGHT_FOOT => entry.0 += 1,
            BODY_PART_LEFT_FOOT => entry.1 += 1,
            _ => {}
        }
    }
    let map = counts
        .into_iter()
        .map(|(player, (right, left))| {
            let foot = match right.cmp(&left) {
                std::cmp::Ordering::Greater => Foot::Right,
                std::cmp::Ordering::Less => Foot::Left,
                std::cmp::Ordering::Equal => Foot::Unknown,
            };
            (player, foot)
        })
        .collect();
    DominantFootMap { map }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrongFooted {
    Strong,
    Weak,
    Other,
}

impl StrongFooted {
    pub fn label(self) -> &'static str {
        match self {
            StrongFooted::Strong => "Strong",
            StrongFooted::Weak => "Weak",
            StrongFooted::Other => "Other",
        }
    }
}

/// Strong if the shot used the player's dominant foot, Weak if the
/// opposite foot, Other for headers/other body parts or unknown dominance.
pub fn strong_footed(shot: &ShotEvent, feet: &DominantFootMap) -> StrongFooted {
    let shot_foot = match shot.body_part.as_str() {
        BODY_PART_RIGHT_FOOT => Foot::Right,
        BODY_PART_LEFT_FOOT => Foot::Left,
        _ => return StrongFooted::Other,
    };
    match feet.foot(shot.player_id) {
        Foot::Unknown => StrongFooted::Other,
        dominant if dominant == shot_foot => StrongFooted::Strong,
        _ => StrongFooted::Weak,
    }
}

/// One raw (pre-encoding) feature value.
#[derive(Debug, Clone, PartialEq)]
enum RawValue {
    Num(f64),
    Cat(Option<String>),
    Flag(bool),
}

struct RawRow {
    values: Vec<RawValue>,
    degenerate_angle: bool,
}

fn raw_row(shot: &ShotEvent, feet: &DominantFootMap, config: &FeatureConfig) -> RawRow {
    let mut degenerate_angle = false;
    let mut values = vec![
        RawValue::Flag(shot.aerial_won),
        RawValue::Flag(shot.first_time),
        RawValue::Flag(shot.open_goal),
        RawValue::Flag(shot.under_pressure),
        RawValue::Cat(Some(shot.body_part.clone())),
        RawValue::Cat(Some(shot.technique.clone())),
        RawValue::Cat(shot.key_pass_type.clone()),
        RawValue::Num(shot.location.x),
        RawValue::Num(shot.location.y),
    ];
    if config.set == FeatureSet::Enriched {
        let distance = shot.location.distance_to(crate::pitch::GOAL_CENTER);
        let angle = match geometry::angle_to_goal_center(shot.location) {
            Ok(a) => a,
            Err(_) => {
                // Shot from the goal mouth itself: substitute 0, flag it.
                degenerate_angle = true;
                0.0
            }
        };
        let radius_count =
            geometry::opponents_within_radius(shot.location, &shot.freeze_frame, config.pressure_radius)
                .unwrap_or(0);
        values.extend([
            RawValue::Cat(Some(strong_footed(shot, feet).label().to_string())),
            RawValue::Flag(geometry::within_penalty_area(shot.location)),
            RawValue::Num(distance),
            RawValue::Num(angle),
            RawValue::Num(geometry::gk_distance_from_goal_center(&shot.freeze_frame)),
            RawValue::Num(geometry::opponents_in_shot_triangle(shot.location, &shot.freeze_frame) as f64),
            RawValue::Num(radius_count as f64),
        ]);
    }
    RawRow {
        values,
        degenerate_angle,
    }
}

/// Fitted scaling and encoding state; immutable after fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderState {
    pub config: FeatureConfig,
    pub schema: FeatureSchema,
    /// (min, max) per schema slot; `None` for non-numeric slots.
    pub numeric_ranges: Vec<Option<(f64, f64)>>,
    /// Lexicographic label -> code maps per categorical feature name.
    pub label_maps: BTreeMap<String, BTreeMap<String, u32>>,
    pub fit_rows: usize,
}

/// Fit scaling ranges and label maps over a corpus.
pub fn fit_encoder(
    shots: &[ShotEvent],
    config: &FeatureConfig,
    feet: &DominantFootMap,
) -> Result<EncoderState, FeatureError> {
    if shots.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let schema = config.schema();
    let mut numeric_ranges: Vec<Option<(f64, f64)>> = vec![None; schema.len()];
    let mut label_sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();

    for shot in shots {
        let row = raw_row(shot, feet, config);
        for (slot, (spec, value)) in schema.features.iter().zip(&row.values).enumerate() {
            match (spec.kind, value) {
                (FeatureKind::Numeric, RawValue::Num(v)) => {
                    let entry = numeric_ranges[slot].get_or_insert((*v, *v));
                    entry.0 = entry.0.min(*v);
                    entry.1 = entry.1.max(*v);
                }
                (FeatureKind::Categorical, RawValue::Cat(Some(label))) => {
                    label_sets
                        .entry(spec.name.clone())
                        .or_default()
                        .insert(label.clone());
                }
                _ => {}
            }
        }
    }

    let label_maps = label_sets
        .into_iter()
        .map(|(name, set)| {
            let map = set
                .into_iter()
                .enumerate()
                .map(|(code, label)| (label, code as u32))
                .collect();
            (name, map)
        })
        .collect();

    Ok(EncoderState {
        config: *config,
        schema,
        numeric_ranges,
        label_maps,
        fit_rows: shots.len(),
    })
}

impl EncoderState {
    fn encode_row(&self, shot: &ShotEvent, feet: &DominantFootMap) -> (Vec<f64>, bool) {
        let raw = raw_row(shot, feet, &self.config);
        let mut out = Vec::with_capacity(self.schema.len());
        for (slot, (spec, value)) in self.schema.features.iter().zip(&raw.values).enumerate() {
            let cell = match (spec.kind, value) {
                (FeatureKind::Numeric, RawValue::Num(v)) => {
                    match self.numeric_ranges[slot] {
                        Some((min, max)) if max > min => (v - min) / (max - min),
                        // Constant feature over the fit corpus.
                        _ => 0.0,
                    }
                }
                (FeatureKind::Categorical, RawValue::Cat(label)) => match label {
                    // Missing values are replaced with 0.
                    None => 0.0,
                    Some(label) => {
                        let map = self.label_maps.get(&spec.name);
                        match map.and_then(|m| m.get(label)) {
                            Some(code) => f64::from(*code),
                            // Unseen label: dedicated overflow code.
                            None => map.map(BTreeMap::len).unwrap_or(0) as f64,
                        }
                    }
                },
                (FeatureKind::Boolean, RawValue::Flag(b)) => f64::from(u8::from(*b)),
                // Kind/value shape mismatch cannot happen for rows built by
                // raw_row against this schema.
                _ => 0.0,
            };
            out.push(cell);
        }
        (out, raw.degenerate_angle)
    }
}

/// The numeric design matrix, row-aligned with labels and event ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub schema: FeatureSchema,
    n_cols: usize,
    values: Vec<f64>,
    pub labels: Vec<bool>,
    pub ids: Vec<String>,
    /// Shots whose angle degenerated at the goal mouth (substituted 0).
    pub degenerate_angles: u64,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_cols.max(1))
    }

    pub fn fingerprint(&self) -> &str {
        &self.schema.fingerprint
    }

    pub fn goals(&self) -> u64 {
        self.labels.iter().filter(|&&g| g).count() as u64
    }

    /// Build a matrix from explicit rows. Row, label and id counts must
    /// agree and every row must match the schema width.
    pub fn from_rows(
        schema: FeatureSchema,
        rows: Vec<Vec<f64>>,
        labels: Vec<bool>,
        ids: Vec<String>,
    ) -> Result<Self, FeatureError> {
        if rows.len() != labels.len() || rows.len() != ids.len() {
            return Err(FeatureError::BadArtifact {
                path: PathBuf::new(),
                message: format!(
                    "row/label/id counts disagree: {}/{}/{}",
                    rows.len(),
                    labels.len(),
                    ids.len()
                ),
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != schema.len()) {
            return Err(FeatureError::BadArtifact {
                path: PathBuf::new(),
                message: format!(
                    "row width {} does not match schema width {}",
                    row.len(),
                    schema.len()
                ),
            });
        }
        Ok(Self::from_parts(schema, rows, labels, ids, 0))
    }

    /// New matrix with the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.n_cols);
        let mut labels = Vec::with_capacity(indices.len());
        let mut ids = Vec::with_capacity(indices.len());
        for &i in indices {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
            ids.push(self.ids[i].clone());
        }
        FeatureMatrix {
            schema: self.schema.clone(),
            n_cols: self.n_cols,
            values,
            labels,
            ids,
            degenerate_angles: 0,
        }
    }

    fn from_parts(
        schema: FeatureSchema,
        rows: Vec<Vec<f64>>,
        labels: Vec<bool>,
        ids: Vec<String>,
        degenerate_angles: u64,
    ) -> Self {
        let n_cols = schema.len();
        let mut values = Vec::with_capacity(rows.len() * n_cols);
        for row in rows {
            debug_assert_eq!(row.len(), n_cols);
            values.extend(row);
        }
        Self {
            schema,
            n_cols,
            values,
            labels,
            ids,
            degenerate_angles,
        }
    }
}

/// Encode shots against a fitted encoder. Rows are computed independently
/// and may run in parallel; output order always follows input order.
pub fn transform(
    shots: &[ShotEvent],
    encoder: &EncoderState,
    feet: &DominantFootMap,
) -> FeatureMatrix {
    let encoded = exec::map_slice(shots, |shot| encoder.encode_row(shot, feet));
    assemble(shots, encoder, encoded)
}

/// Sequential twin of [`transform`] for benchmarking.
pub fn transform_seq(
    shots: &[ShotEvent],
    encoder: &EncoderState,
    feet: &DominantFootMap,
) -> FeatureMatrix {
    let encoded = exec::map_slice_seq(shots, |shot| encoder.encode_row(shot, feet));
    assemble(shots, encoder, encoded)
}

fn assemble(
    shots: &[ShotEvent],
    encoder: &EncoderState,
    encoded: Vec<(Vec<f64>, bool)>,
) -> FeatureMatrix {
    let mut rows = Vec::with_capacity(encoded.len());
    let mut degenerate = 0u64;
    for (row, flag) in encoded {
        rows.push(row);
        degenerate += u64::from(flag);
    }
    FeatureMatrix::from_parts(
        encoder.schema.clone(),
        rows,
        shots.iter().map(|s| s.is_goal).collect(),
        shots.iter().map(|s| s.event_id.clone()).collect(),
        degenerate,
    )
}

// ---------------------------------------------------------------------------
// Persistence

pub fn save_encoder(path: &Path, encoder: &EncoderState) -> Result<(), FeatureError> {
    let json = serde_json::to_string_pretty(encoder).expect("encoder state serializes");
    fs::write(path, json).map_err(|source| FeatureError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_encoder(path: &Path) -> Result<EncoderState, FeatureError> {
    let bytes = fs::read(path).map_err(|source| FeatureError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let encoder: EncoderState =
        serde_json::from_slice(&bytes).map_err(|e| FeatureError::BadArtifact {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let expected = fingerprint_of(&encoder.schema.features);
    if encoder.schema.fingerprint != expected {
        return Err(FeatureError::SchemaMismatch {
            expected,
            found: encoder.schema.fingerprint.clone(),
        });
    }
    Ok(encoder)
}

/// Write the matrix as CSV: a fingerprint comment line, then
/// `event_id,goal,<feature columns>`.
pub fn save_matrix_csv(path: &Path, matrix: &FeatureMatrix) -> Result<(), FeatureError> {
    let io_err = |source| FeatureError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    writeln!(file, "# fingerprint={}", matrix.fingerprint()).map_err(io_err)?;
    let mut writer = csv::Writer::from_writer(file);
    let mut header = vec!["event_id".to_string(), "goal".to_string()];
    header.extend(matrix.schema.names().iter().map(ToString::to_string));
    let csv_err = |e: csv::Error| FeatureError::BadArtifact {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    writer.write_record(&header).map_err(csv_err)?;
    for i in 0..matrix.n_rows() {
        let mut record = vec![
            matrix.ids[i].clone(),
            if matrix.labels[i] { "1" } else { "0" }.to_string(),
        ];
        record.extend(matrix.row(i).iter().map(|v| v.to_string()));
        writer.write_record(&record).map_err(csv_err)?;
    }
    writer.flush().map_err(io_err)?;
    Ok(())
}

/// Read a matrix back, checking the embedded fingerprint against the
/// expected schema.
pub fn load_matrix_csv(path: &Path, schema: &FeatureSchema) -> Result<FeatureMatrix, FeatureError> {
    let text = fs::read_to_string(path).map_err(|source| FeatureError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |message: String| FeatureError::BadArtifact {
        path: path.to_path_buf(),
        message,
    };
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let fingerprint = first
        .strip_prefix("# fingerprint=")
        .ok_or_else(|| bad("missing fingerprint comment line".into()))?;
    if fingerprint != schema.fingerprint {
        return Err(FeatureError::SchemaMismatch {
            expected: schema.fingerprint.clone(),
            found: fingerprint.to_string(),
        });
    }
    let rest = text
        .split_once('\n')
        .map(|(_, rest)| rest)
        .unwrap_or_default();
    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .clone();
    let expected_len = schema.len() + 2;
    if header.len() != expected_len {
        return Err(bad(format!(
            "expected {expected_len} columns, found {}",
            header.len()
        )));
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        ids.push(record[0].to_string());
        labels.push(&record[1] == "1");
        let mut row = Vec::with_capacity(schema.len());
        for cell in record.iter().skip(2) {
            row.push(cell.parse::<f64>().map_err(|e| bad(e.to_string()))?);
        }
        rows.push(row);
    }
    Ok(FeatureMatrix::from_parts(
        schema.clone(),
        rows,
        labels,
        ids,
        0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::FreezeFramePlayer;
    use crate::pitch::PitchPoint;

    fn shot(id: &str, x: f64, y: f64) -> ShotEvent {
        ShotEvent {
            event_id: id.to_string(),
            match_id: 1,
            minute: 10,
            second: 0,
            player_id: 7,
            player_name: "Seven".into(),
            position_name: "Center Forward".into(),
            team_id: 1,
            location: PitchPoint::new(x, y),
            body_part: "Right Foot".into(),
            technique: "Normal".into(),
            shot_type: "Open Play".into(),
            first_time: false,
            open_goal: false,
            aerial_won: false,
            under_pressure: false,
            key_pass_type: None,
            freeze_frame: Vec::new(),
            statsbomb_xg: 0.1,
            is_goal: false,
        }
    }

    fn with_technique(mut s: ShotEvent, t: &str) -> ShotEvent {
        s.technique = t.to_string();
        s
    }

    #[test]
    fn min_max_over_fit_corpus() {
        // Distances 0, 12, 24.0832 via locations.
        let shots = vec![
            shot("a", 120.0, 40.0),
            shot("b", 108.0, 40.0),
            shot("c", 102.0, 56.0),
        ];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        let slot = enc
            .schema
            .features
            .iter()
            .position(|f| f.name == "distance_to_goal")
            .unwrap();
        let (min, max) = enc.numeric_ranges[slot].unwrap();
        assert_eq!(min, 0.0);
        assert!((max - 580.0_f64.sqrt()).abs() < 1e-12);
        // Distance 12 scales to 12 / max.
        let m = transform(&shots, &enc, &feet);
        assert!((m.row(1)[slot] - 12.0 / max).abs() < 1e-15);
    }

    #[test]
    fn labels_are_lexicographic() {
        let shots = vec![
            with_technique(shot("a", 100.0, 40.0), "Volley"),
            with_technique(shot("b", 100.0, 41.0), "Normal"),
            with_technique(shot("c", 100.0, 42.0), "Lob"),
        ];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::baseline(), &feet).unwrap();
        let map = &enc.label_maps["technique"];
        assert_eq!(map["Lob"], 0);
        assert_eq!(map["Normal"], 1);
        assert_eq!(map["Volley"], 2);
    }

    #[test]
    fn unseen_label_maps_to_overflow_code() {
        let shots = vec![
            with_technique(shot("a", 100.0, 40.0), "Volley"),
            with_technique(shot("b", 100.0, 41.0), "Normal"),
        ];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::baseline(), &feet).unwrap();
        let unseen = vec![with_technique(shot("z", 100.0, 40.0), "Rabona")];
        let m = transform(&unseen, &enc, &feet);
        let slot = enc
            .schema
            .features
            .iter()
            .position(|f| f.name == "technique")
            .unwrap();
        assert_eq!(m.row(0)[slot], 2.0); // map size
    }

    #[test]
    fn missing_categorical_is_zero() {
        let shots = vec![shot("a", 100.0, 40.0)];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::baseline(), &feet).unwrap();
        let m = transform(&shots, &enc, &feet);
        let slot = enc
            .schema
            .features
            .iter()
            .position(|f| f.name == "key_pass_type")
            .unwrap();
        assert_eq!(m.row(0)[slot], 0.0);
    }

    #[test]
    fn single_shot_corpus_degenerates_to_zero_cells() {
        let shots = vec![shot("a", 100.0, 40.0)];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        for range in enc.numeric_ranges.iter().flatten() {
            assert_eq!(range.0, range.1);
        }
        let m = transform(&shots, &enc, &feet);
        for (spec, cell) in enc.schema.features.iter().zip(m.row(0)) {
            if spec.kind == FeatureKind::Numeric {
                assert_eq!(*cell, 0.0);
            }
        }
    }

    #[test]
    fn missing_freeze_frame_features_are_zero() {
        let shots = vec![shot("a", 110.0, 40.0)];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        let m = transform(&shots, &enc, &feet);
        for name in [
            "gk_distance_from_goal",
            "opponents_in_triangle",
            "opponents_within_radius",
        ] {
            let slot = enc
                .schema
                .features
                .iter()
                .position(|f| f.name == name)
                .unwrap();
            assert_eq!(m.row(0)[slot], 0.0, "{name}");
        }
    }

    #[test]
    fn empty_corpus_is_a_fit_error() {
        let feet = DominantFootMap::default();
        assert!(matches!(
            fit_encoder(&[], &FeatureConfig::enriched(), &feet),
            Err(FeatureError::EmptyCorpus)
        ));
    }

    #[test]
    fn dominant_foot_majority_tie_and_no_evidence() {
        let mut shots = Vec::new();
        for i in 0..10 {
            shots.push(shot(&format!("r{i}"), 100.0, 40.0));
        }
        for i in 0..2 {
            let mut s = shot(&format!("l{i}"), 100.0, 40.0);
            s.body_part = "Left Foot".into();
            shots.push(s);
        }
        let mut header = shot("h", 100.0, 40.0);
        header.player_id = 8;
        header.body_part = "Head".into();
        shots.push(header);
        let mut tied_a = shot("t1", 100.0, 40.0);
        tied_a.player_id = 9;
        let mut tied_b = shot("t2", 100.0, 40.0);
        tied_b.player_id = 9;
        tied_b.body_part = "Left Foot".into();
        shots.push(tied_a);
        shots.push(tied_b);

        let feet = infer_dominant_foot(&shots);
        assert_eq!(feet.foot(7), Foot::Right);
        assert_eq!(feet.foot(8), Foot::Unknown);
        assert_eq!(feet.foot(9), Foot::Unknown);
        assert_eq!(feet.foot(999), Foot::Unknown);
    }

    #[test]
    fn strong_footed_classification() {
        let shots = vec![shot("a", 100.0, 40.0)];
        let feet = infer_dominant_foot(&shots); // player 7 right-footed
        assert_eq!(strong_footed(&shots[0], &feet), StrongFooted::Strong);
        let mut weak = shots[0].clone();
        weak.body_part = "Left Foot".into();
        assert_eq!(strong_footed(&weak, &feet), StrongFooted::Weak);
        let mut head = shots[0].clone();
        head.body_part = "Head".into();
        assert_eq!(strong_footed(&head, &feet), StrongFooted::Other);
    }

    #[test]
    fn transform_is_deterministic_and_matches_sequential() {
        let mut shots = Vec::new();
        for i in 0..200 {
            let mut s = shot(&format!("s{i}"), 90.0 + (i % 30) as f64, 10.0 + (i % 60) as f64);
            s.player_id = i64::from(i % 11);
            if i % 3 == 0 {
                s.freeze_frame.push(FreezeFramePlayer {
                    location: PitchPoint::new(115.0, 40.0),
                    teammate: false,
                    keeper: i % 6 == 0,
                    player_id: None,
                });
            }
            shots.push(s);
        }
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        let enc2 = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        assert_eq!(enc, enc2);
        let a = transform(&shots, &enc, &feet);
        let b = transform_seq(&shots, &enc, &feet);
        assert_eq!(a, b);
    }

    #[test]
    fn in_range_cells_stay_in_unit_interval() {
        let mut shots = Vec::new();
        for i in 0..50 {
            shots.push(shot(
                &format!("s{i}"),
                60.0 + (i as f64),
                (i % 80) as f64,
            ));
        }
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        let m = transform(&shots, &enc, &feet);
        for i in 0..m.n_rows() {
            for (spec, cell) in enc.schema.features.iter().zip(m.row(i)) {
                if spec.kind == FeatureKind::Numeric {
                    assert!((0.0..=1.0).contains(cell), "{}: {cell}", spec.name);
                }
            }
        }
    }

    #[test]
    fn encoder_round_trip_is_bit_identical() {
        let shots = vec![
            shot("a", 100.0, 40.0),
            with_technique(shot("b", 90.0, 30.0), "Volley"),
        ];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("encoder.json");
        save_encoder(&path, &enc).unwrap();
        let loaded = load_encoder(&path).unwrap();
        assert_eq!(enc, loaded);
        let a = transform(&shots, &enc, &feet);
        let b = transform(&shots, &loaded, &feet);
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_csv_round_trip_and_fingerprint_check() {
        let shots = vec![shot("a", 100.0, 40.0), shot("b", 90.0, 30.0)];
        let feet = infer_dominant_foot(&shots);
        let enc = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
        let m = transform(&shots, &enc, &feet);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        save_matrix_csv(&path, &m).unwrap();
        let loaded = load_matrix_csv(&path, &enc.schema).unwrap();
        assert_eq!(m.ids, loaded.ids);
        assert_eq!(m.labels, loaded.labels);
        for i in 0..m.n_rows() {
            assert_eq!(m.row(i), loaded.row(i));
        }
        let other = FeatureConfig::baseline().schema();
        assert!(matches!(
            load_matrix_csv(&path, &other),
            Err(FeatureError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn fingerprint_changes_iff_names_or_kinds_change() {
        let a = FeatureConfig::enriched().schema();
        let b = FeatureConfig::enriched().schema();
        assert_eq!(a.fingerprint, b.fingerprint);
        let c = FeatureConfig::baseline().schema();
        assert_ne!(a.fingerprint, c.fingerprint);
        let mut flipped = a.features.clone();
        flipped[0].kind = FeatureKind::Numeric;
        assert_ne!(FeatureSchema::new(flipped).fingerprint, a.fingerprint);
    }
}
