//! Position-adjusted and player-adjusted xG: retrain the proposed model on
//! a sub-corpus, apply it across a target corpus, and compare accumulated
//! xG against the base model. Subset models reuse the full-corpus encoder
//! so predictions stay comparable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureMatrix;
use crate::ingest::ShotEvent;
use crate::models::{train_gbdt, BoostedForest, GbdtHyper, ModelArtifact, ModelError};

pub const DEFAULT_MIN_SUBSET: usize = 200;

#[derive(Debug, Error)]
pub enum AdjustError {
    #[error("subset '{label}' has {got} rows, below the minimum {need}")]
    SubsetTooSmall {
        label: String,
        got: usize,
        need: usize,
    },
    #[error("subset '{label}' contains a single class")]
    SingleClass { label: String },
    #[error("matrix rows ({rows}) and shots ({shots}) are misaligned")]
    Misaligned { rows: usize, shots: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("failed to read/write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("bad position map {path}: {message}")]
    BadPositionMap {
        path: std::path::PathBuf,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PositionGroup {
    Forward,
    Midfield,
    Defender,
    Goalkeeper,
}

impl PositionGroup {
    pub const ALL: [PositionGroup; 4] = [
        PositionGroup::Forward,
        PositionGroup::Midfield,
        PositionGroup::Defender,
        PositionGroup::Goalkeeper,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PositionGroup::Forward => "Forward",
            PositionGroup::Midfield => "Midfield",
            PositionGroup::Defender => "Defender",
            PositionGroup::Goalkeeper => "Goalkeeper",
        }
    }
}

impl std::fmt::Display for PositionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// StatsBomb position name -> positional group. Ships with the full v4
/// position list; editable via JSON. Unknown names fall back to Midfield
/// (the modal group) with a warning count, never a crash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionMap {
    pub entries: BTreeMap<String, PositionGroup>,
    pub fallback: PositionGroup,
}

impl Default for PositionMap {
    fn default() -> Self {
        use PositionGroup::*;
        let table: [(&str, PositionGroup); 25] = [
            ("Goalkeeper", Goalkeeper),
            ("Right Back", Defender),
            ("Right Center Back", Defender),
            ("Center Back", Defender),
            ("Left Center Back", Defender),
            ("Left Back", Defender),
            ("Right Wing Back", Defender),
            ("Left Wing Back", Defender),
            ("Right Defensive Midfield", Midfield),
            ("Center Defensive Midfield", Midfield),
            ("Left Defensive Midfield", Midfield),
            ("Right Midfield", Midfield),
            ("Right Center Midfield", Midfield),
            ("Center Midfield", Midfield),
            ("Left Center Midfield", Midfield),
            ("Left Midfield", Midfield),
            ("Right Attacking Midfield", Midfield),
            ("Center Attacking Midfield", Midfield),
            ("Left Attacking Midfield", Midfield),
            ("Right Wing", Forward),
            ("Left Wing", Forward),
            ("Right Center Forward", Forward),
            ("Center Forward", Forward),
            ("Left Center Forward", Forward),
            ("Secondary Striker", Forward),
        ];
        PositionMap {
            entries: table
                .into_iter()
                .map(|(name, group)| (name.to_string(), group))
                .collect(),
            fallback: Midfield,
        }
    }
}

impl PositionMap {
    /// Group for a position name plus whether the fallback was used.
    pub fn group_with_flag(&self, position_name: &str) -> (PositionGroup, bool) {
        if let Some(&group) = self.entries.get(position_name) {
            return (group, false);
        }
        // Suffix rules cover open-data label drift before falling back.
        if position_name == "Goalkeeper" {
            return (PositionGroup::Goalkeeper, false);
        }
        if position_name.ends_with("Back") {
            return (PositionGroup::Defender, false);
        }
        if position_name.ends_with("Midfield") || position_name.ends_with("Midfielder") {
            return (PositionGroup::Midfield, false);
        }
        if position_name.ends_with("Forward")
            || position_name.ends_with("Wing")
            || position_name.ends_with("Striker")
        {
            return (PositionGroup::Forward, false);
        }
        (self.fallback, true)
    }

    pub fn group(&self, position_name: &str) -> PositionGroup {
        self.group_with_flag(position_name).0
    }

    pub fn save(&self, path: &Path) -> Result<(), AdjustError> {
        let json = serde_json::to_string_pretty(self).expect("position map serializes");
        std::fs::write(path, json).map_err(|source| AdjustError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, AdjustError> {
        let bytes = std::fs::read(path).map_err(|source| AdjustError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_slice(&bytes).map_err(|e| AdjustError::BadPositionMap {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Which sub-corpus to retrain on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubsetSpec {
    All,
    ByPosition { group: PositionGroup },
    ByPlayer { player_id: i64 },
    ComplementOfPlayer { player_id: i64 },
}

impl SubsetSpec {
    pub fn label(&self) -> String {
        match self {
            SubsetSpec::All => "all".to_string(),
            SubsetSpec::ByPosition { group } => format!("{}-adjusted", group.label().to_lowercase()),
            SubsetSpec::ByPlayer { player_id } => format!("player-{player_id}-adjusted"),
            SubsetSpec::ComplementOfPlayer { player_id } => format!("non-player-{player_id}"),
        }
    }
}

/// Rows selected by a subset spec, in corpus order.
pub fn select_indices(spec: &SubsetSpec, shots: &[ShotEvent], positions: &PositionMap) -> Vec<usize> {
    shots
        .iter()
        .enumerate()
        .filter(|(_, shot)| match spec {
            SubsetSpec::All => true,
            SubsetSpec::ByPosition { group } => positions.group(&shot.position_name) == *group,
            SubsetSpec::ByPlayer { player_id } => shot.player_id == *player_id,
            SubsetSpec::ComplementOfPlayer { player_id } => shot.player_id != *player_id,
        })
        .map(|(i, _)| i)
        .collect()
}

/// A subset-trained forest labeled with its spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustedModel {
    pub spec: SubsetSpec,
    pub subset_size: usize,
    pub forest: BoostedForest,
}

/// Retrain the proposed model on the rows selected by `spec`. The matrix
/// must already be encoded with the full-corpus encoder.
pub fn train_adjusted(
    matrix: &FeatureMatrix,
    shots: &[ShotEvent],
    spec: &SubsetSpec,
    positions: &PositionMap,
    hyper: &GbdtHyper,
    min_subset: usize,
) -> Result<AdjustedModel, AdjustError> {
    if matrix.n_rows() != shots.len() {
        return Err(AdjustError::Misaligned {
            rows: matrix.n_rows(),
            shots: shots.len(),
        });
    }
    let indices = select_indices(spec, shots, positions);
    if indices.len() < min_subset {
        return Err(AdjustError::SubsetTooSmall {
            label: spec.label(),
            got: indices.len(),
            need: min_subset,
        });
    }
    let subset = matrix.select_rows(&indices);
    let forest = train_gbdt(&subset, hyper).map_err(|e| match e {
        ModelError::SingleClass => AdjustError::SingleClass { label: spec.label() },
        other => AdjustError::Model(other),
    })?;
    Ok(AdjustedModel {
        spec: *spec,
        subset_size: indices.len(),
        forest,
    })
}

/// Base vs. subset-trained accumulated xG over a target corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentResult {
    pub label: String,
    pub base_xg: f64,
    pub adjusted_xg: f64,
    /// adjusted - base.
    pub adjustment: f64,
    pub subset_size: usize,
    pub target_size: usize,
}

/// Sum both models' predictions over the target rows and report the delta.
pub fn apply_adjustment(
    base: &ModelArtifact,
    adjusted: &AdjustedModel,
    target: &FeatureMatrix,
) -> Result<AdjustmentResult, AdjustError> {
    let base_xg: f64 = base
        .predict_matrix(target)?
        .iter()
        .map(|p| p.probability)
        .sum();
    let adjusted_xg: f64 = adjusted
        .forest
        .predict_matrix(target)?
        .iter()
        .map(|p| p.probability)
        .sum();
    Ok(AdjustmentResult {
        label: adjusted.spec.label(),
        base_xg,
        adjusted_xg,
        adjustment: adjusted_xg - base_xg,
        subset_size: adjusted.subset_size,
        target_size: target.n_rows(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionRow {
    pub group: PositionGroup,
    pub shots: u64,
    pub goals: u64,
    /// Shots divided by goals; reported as 0 when the group scored none.
    pub shots_per_goal: f64,
    pub zero_goals: bool,
    /// Accumulated xG per model label, in input order.
    pub xg: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionTable {
    pub rows: Vec<PositionRow>,
    pub unmapped_warnings: u64,
}

/// Positional breakdown of the corpus with per-model accumulated xG.
/// `predictions` holds (model label, per-shot probabilities) columns.
pub fn position_table(
    shots: &[ShotEvent],
    predictions: &[(String, Vec<f64>)],
    positions: &PositionMap,
) -> PositionTable {
    let mut warnings = 0u64;
    let mut by_group: BTreeMap<PositionGroup, (u64, u64, Vec<f64>)> = PositionGroup::ALL
        .iter()
        .map(|&g| (g, (0, 0, vec![0.0; predictions.len()])))
        .collect();
    for (i, shot) in shots.iter().enumerate() {
        let (group, fell_back) = positions.group_with_flag(&shot.position_name);
        warnings += u64::from(fell_back);
        let entry = by_group.get_mut(&group).expect("all groups present");
        entry.0 += 1;
        entry.1 += u64::from(shot.is_goal);
        for (slot, (_, probs)) in entry.2.iter_mut().zip(predictions) {
            *slot += probs[i];
        }
    }
    let rows = PositionGroup::ALL
        .iter()
        .map(|&group| {
            let (shots, goals, sums) = &by_group[&group];
            PositionRow {
                group,
                shots: *shots,
                goals: *goals,
                shots_per_goal: if *goals > 0 {
                    *shots as f64 / *goals as f64
                } else {
                    0.0
                },
                zero_goals: *goals == 0,
                xg: predictions
                    .iter()
                    .zip(sums)
                    .map(|((label, _), &sum)| (label.clone(), sum))
                    .collect(),
            }
        })
        .collect();
    PositionTable {
        rows,
        unmapped_warnings: warnings,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRow {
    pub player_id: i64,
    pub player_name: String,
    pub shots: u64,
    pub goals: u64,
    pub proposed_xg: f64,
    pub benchmark_xg: f64,
    pub adjusted_xg: f64,
    /// goals > adjusted xG.
    pub overperformance: bool,
}

/// Per-player accumulated xG under the base, benchmark and adjusted
/// models, sorted by goals descending. Players with no shots in the
/// target never appear.
pub fn player_overperformance_table(
    shots: &[ShotEvent],
    base: &[f64],
    adjusted: &[f64],
    benchmark: &[f64],
) -> Vec<PlayerRow> {
    let mut by_player: BTreeMap<i64, PlayerRow> = BTreeMap::new();
    for (i, shot) in shots.iter().enumerate() {
        let row = by_player.entry(shot.player_id).or_insert_with(|| PlayerRow {
            player_id: shot.player_id,
            player_name: shot.player_name.clone(),
            shots: 0,
            goals: 0,
            proposed_xg: 0.0,
            benchmark_xg: 0.0,
            adjusted_xg: 0.0,
            overperformance: false,
        });
        row.shots += 1;
        row.goals += u64::from(shot.is_goal);
        row.proposed_xg += base[i];
        row.benchmark_xg += benchmark[i];
        row.adjusted_xg += adjusted[i];
    }
    let mut rows: Vec<PlayerRow> = by_player.into_values().collect();
    for row in &mut rows {
        row.overperformance = row.goals as f64 > row.adjusted_xg;
    }
    rows.sort_by(|a, b| b.goals.cmp(&a.goals).then(a.player_id.cmp(&b.player_id)));
    rows
}

/// Aligned-text rendering of the positional table.
pub fn render_position_table(table: &PositionTable) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<12}{:>8}{:>8}{:>11}", "Position", "Shots", "Goals", "Shot/Goal");
    for (label, _) in table.rows.first().map(|r| r.xg.as_slice()).unwrap_or(&[]) {
        let _ = write!(out, "{label:>18}");
    }
    out.push('\n');
    for row in &table.rows {
        let _ = write!(
            out,
            "{:<12}{:>8}{:>8}{:>11.2}",
            row.group.label(),
            row.shots,
            row.goals,
            row.shots_per_goal
        );
        for (_, xg) in &row.xg {
            let _ = write!(out, "{xg:>18.3}");
        }
        if row.zero_goals {
            let _ = write!(out, "  (no goals)");
        }
        out.push('\n');
    }
    if table.unmapped_warnings > 0 {
        let _ = writeln!(
            out,
            "warning: {} shots with unmapped position names fell back to Midfield",
            table.unmapped_warnings
        );
    }
    out
}

/// Aligned-text rendering of adjustment results, Table-3 style.
pub fn render_adjustments(base_label: &str, results: &[AdjustmentResult]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<26}{:>14}{:>14}{:>14}{:>10}",
        "Model", "xG", "Base xG", "Adjustment", "Subset"
    );
    for r in results {
        let _ = writeln!(
            out,
            "{:<26}{:>14.2}{:>14.2}{:>+14.2}{:>10}",
            r.label, r.adjusted_xg, r.base_xg, r.adjustment, r.subset_size
        );
    }
    let _ = writeln!(out, "(base model: {base_label})");
    out
}

/// Aligned-text rendering of the player table, Table-5 style.
pub fn render_player_table(rows: &[PlayerRow], limit: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<28}{:>7}{:>7}{:>14}{:>14}{:>14}  {}",
        "Player", "Shots", "Goals", "Proposed xG", "Benchmark xG", "Adjusted xG", "Over?"
    );
    for row in rows.iter().take(limit) {
        let _ = writeln!(
            out,
            "{:<28}{:>7}{:>7}{:>14.2}{:>14.2}{:>14.2}  {}",
            row.player_name,
            row.shots,
            row.goals,
            row.proposed_xg,
            row.benchmark_xg,
            row.adjusted_xg,
            if row.overperformance { "Yes" } else { "No" }
        );
    }
    out
}
