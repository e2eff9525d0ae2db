//! StatsBomb open-data ingestion: `competitions.json`,
//! `matches/{competition_id}/{season_id}.json`, `events/{match_id}.json`.
//!
//! Shot records are decoded into [`ShotEvent`]; everything else stays
//! opaque JSON. Record-level problems (missing location, missing outcome,
//! out-of-bounds coordinates) skip the record and bump a counter instead
//! of aborting a corpus-scale run.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::exec;
use crate::pitch::PitchPoint;

pub const SHOT_TYPE_OPEN_PLAY: &str = "Open Play";
pub const SHOT_TYPE_PENALTY: &str = "Penalty";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path} at line {line}, column {column}: {source}")]
    Malformed {
        path: PathBuf,
        line: usize,
        column: usize,
        source: serde_json::Error,
    },
}

/// One (competition, season) pair from `competitions.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitionSeason {
    pub competition_id: i64,
    pub season_id: i64,
    pub competition_name: String,
    pub season_name: String,
    #[serde(default)]
    pub country_name: String,
}

/// Minimal row from a `matches/{comp}/{season}.json` file.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchStub {
    pub match_id: i64,
    pub home_team: String,
    pub away_team: String,
}

/// All event records of one match, in file order.
#[derive(Debug, Clone)]
pub struct RawEventFile {
    pub match_id: i64,
    pub events: Vec<Value>,
}

/// One player in a shot freeze frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreezeFramePlayer {
    pub location: PitchPoint,
    pub teammate: bool,
    pub keeper: bool,
    pub player_id: Option<i64>,
}

/// A fully decoded shot event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotEvent {
    pub event_id: String,
    pub match_id: i64,
    pub minute: u32,
    pub second: u32,
    pub player_id: i64,
    pub player_name: String,
    pub position_name: String,
    pub team_id: i64,
    pub location: PitchPoint,
    pub body_part: String,
    pub technique: String,
    pub shot_type: String,
    pub first_time: bool,
    pub open_goal: bool,
    pub aerial_won: bool,
    pub under_pressure: bool,
    pub key_pass_type: Option<String>,
    pub freeze_frame: Vec<FreezeFramePlayer>,
    pub statsbomb_xg: f64,
    pub is_goal: bool,
}

impl ShotEvent {
    pub fn is_open_play(&self) -> bool {
        self.shot_type == SHOT_TYPE_OPEN_PLAY
    }
}

/// Result of [`extract_shots`]: decoded shots plus skip accounting.
#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub shots: Vec<ShotEvent>,
    pub events_seen: u64,
    pub skipped: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    /// Freeze-frame locations pulled back inside the pitch.
    pub clamped_freeze_locations: u64,
}

impl Extraction {
    fn skip(&mut self, reason: &str) {
        self.skipped += 1;
        *self.skip_reasons.entry(reason.to_string()).or_insert(0) += 1;
    }

    fn merge(&mut self, other: Extraction) {
        self.shots.extend(other.shots);
        self.events_seen += other.events_seen;
        self.skipped += other.skipped;
        self.clamped_freeze_locations += other.clamped_freeze_locations;
        for (k, v) in other.skip_reasons {
            *self.skip_reasons.entry(k).or_insert(0) += v;
        }
    }
}

fn read_json(path: &Path) -> Result<Value, IngestError> {
    if !path.exists() {
        return Err(IngestError::MissingFile(path.to_path_buf()));
    }
    let bytes = fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|source| IngestError::Malformed {
        path: path.to_path_buf(),
        line: source.line(),
        column: source.column(),
        source,
    })
}

/// Load every (competition, season) pair from `competitions.json`.
pub fn load_competitions(root: &Path) -> Result<Vec<CompetitionSeason>, IngestError> {
    let path = root.join("competitions.json");
    let value = read_json(&path)?;
    let rows: Vec<CompetitionSeason> =
        serde_json::from_value(value).map_err(|source| IngestError::Malformed {
            path,
            line: 0,
            column: 0,
            source,
        })?;
    Ok(rows)
}

/// List match stubs for one competition season.
pub fn load_matches(
    root: &Path,
    competition_id: i64,
    season_id: i64,
) -> Result<Vec<MatchStub>, IngestError> {
    let path = root
        .join("matches")
        .join(competition_id.to_string())
        .join(format!("{season_id}.json"));
    let value = read_json(&path)?;
    let mut out = Vec::new();
    if let Some(rows) = value.as_array() {
        for row in rows {
            let Some(match_id) = row.get("match_id").and_then(Value::as_i64) else {
                continue;
            };
            let team = |key: &str, name_key: &str| {
                row.get(key)
                    .and_then(|t| t.get(name_key))
                    .and_then(Value::as_str)
                    .unwrap_or("")
                    .to_string()
            };
            out.push(MatchStub {
                match_id,
                home_team: team("home_team", "home_team_name"),
                away_team: team("away_team", "away_team_name"),
            });
        }
    }
    Ok(out)
}

/// Load one match event file, preserving record order.
pub fn load_match_events(root: &Path, match_id: i64) -> Result<RawEventFile, IngestError> {
    let path = root.join("events").join(format!("{match_id}.json"));
    let value = read_json(&path)?;
    let events = match value {
        Value::Array(events) => events,
        other => vec![other],
    };
    Ok(RawEventFile { match_id, events })
}

fn name_of(value: &Value, key: &str) -> Option<String> {
    value
        .get(key)?
        .get("name")?
        .as_str()
        .map(ToString::to_string)
}

fn id_of(value: &Value, key: &str) -> Option<i64> {
    value.get(key)?.get("id")?.as_i64()
}

fn point_of(value: &Value, key: &str) -> Option<PitchPoint> {
    let arr = value.get(key)?.as_array()?;
    let x = arr.first()?.as_f64()?;
    let y = arr.get(1)?.as_f64()?;
    Some(PitchPoint::new(x, y))
}

fn event_type_name(event: &Value) -> Option<&str> {
    event.get("type")?.get("name")?.as_str()
}

/// Pass type (or, failing that, pass height) per pass event id. Used to
/// resolve a shot's `key_pass_id` into the assist pass category.
fn key_pass_index(events: &[Value]) -> BTreeMap<&str, String> {
    let mut index = BTreeMap::new();
    for event in events {
        if event_type_name(event) != Some("Pass") {
            continue;
        }
        let Some(id) = event.get("id").and_then(Value::as_str) else {
            continue;
        };
        let Some(pass) = event.get("pass") else {
            continue;
        };
        let label = name_of(pass, "type").or_else(|| name_of(pass, "height"));
        if let Some(label) = label {
            index.insert(id, label);
        }
    }
    index
}

fn decode_freeze_frame(shot: &Value, stats: &mut Extraction) -> Vec<FreezeFramePlayer> {
    let Some(frames) = shot.get("freeze_frame").and_then(Value::as_array) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(frames.len());
    for frame in frames {
        let Some(location) = point_of(frame, "location") else {
            stats.skip("freeze_frame_missing_location");
            continue;
        };
        let location = if location.in_bounds() {
            location
        } else {
            stats.clamped_freeze_locations += 1;
            location.clamped()
        };
        let teammate = frame
            .get("teammate")
            .and_then(Value::as_bool)
            .unwrap_or(false);
        let keeper = name_of(frame, "position").as_deref() == Some("Goalkeeper");
        out.push(FreezeFramePlayer {
            location,
            teammate,
            keeper,
            player_id: id_of(frame, "player"),
        });
    }
    out
}

fn decode_shot(
    event: &Value,
    match_id: i64,
    key_passes: &BTreeMap<&str, String>,
    stats: &mut Extraction,
) -> Option<ShotEvent> {
    let Some(event_id) = event.get("id").and_then(Value::as_str) else {
        stats.skip("missing_event_id");
        return None;
    };
    let Some(shot) = event.get("shot") else {
        stats.skip("missing_shot_body");
        return None;
    };
    let Some(location) = point_of(event, "location") else {
        stats.skip("missing_location");
        return None;
    };
    if !location.in_bounds() {
        stats.skip("location_out_of_bounds");
        return None;
    }
    let Some(outcome) = name_of(shot, "outcome") else {
        stats.skip("missing_outcome");
        return None;
    };
    let Some(shot_type) = name_of(shot, "type") else {
        stats.skip("missing_shot_type");
        return None;
    };
    let (Some(player_id), Some(team_id)) = (id_of(event, "player"), id_of(event, "team")) else {
        stats.skip("missing_player_or_team");
        return None;
    };
    let statsbomb_xg = shot
        .get("statsbomb_xg")
        .and_then(Value::as_f64)
        .unwrap_or(0.0);
    if !(0.0..=1.0).contains(&statsbomb_xg) {
        stats.skip("benchmark_xg_out_of_range");
        return None;
    }
    let flag = |key: &str| shot.get(key).and_then(Value::as_bool).unwrap_or(false);
    let key_pass_type = shot
        .get("key_pass_id")
        .and_then(Value::as_str)
        .and_then(|id| key_passes.get(id).cloned());
    Some(ShotEvent {
        event_id: event_id.to_string(),
        match_id,
        minute: event.get("minute").and_then(Value::as_u64).unwrap_or(0) as u32,
        second: event.get("second").and_then(Value::as_u64).unwrap_or(0) as u32,
        player_id,
        player_name: name_of(event, "player").unwrap_or_default(),
        position_name: name_of(event, "position").unwrap_or_default(),
        team_id,
        location,
        body_part: name_of(shot, "body_part").unwrap_or_else(|| "Other".to_string()),
        technique: name_of(shot, "technique").unwrap_or_else(|| "Normal".to_string()),
        shot_type,
        first_time: flag("first_time"),
        open_goal: flag("open_goal"),
        aerial_won: flag("aerial_won"),
        under_pressure: event
            .get("under_pressure")
            .and_then(Value::as_bool)
            .unwrap_or(false),
        key_pass_type,
        freeze_frame: decode_freeze_frame(shot, stats),
        statsbomb_xg,
        is_goal: outcome == "Goal",
    })
}

/// Decode every Shot event of a file; non-shot events are ignored.
pub fn extract_shots(file: &RawEventFile) -> Extraction {
    let key_passes = key_pass_index(&file.events);
    let mut stats = Extraction {
        events_seen: file.events.len() as u64,
        ..Extraction::default()
    };
    for event in &file.events {
        if event_type_name(event) != Some("Shot") {
            continue;
        }
        if let Some(shot) = decode_shot(event, file.match_id, &key_passes, &mut stats) {
            stats.shots.push(shot);
        }
    }
    stats
}

/// Keep only open-play shots; removes penalties, free kicks, corners and
/// kick-offs in one rule.
pub fn filter_open_play(shots: Vec<ShotEvent>) -> Vec<ShotEvent> {
    shots.into_iter().filter(ShotEvent::is_open_play).collect()
}

/// Team id -> team name, from whichever events carry a team object.
pub fn team_names(file: &RawEventFile) -> BTreeMap<i64, String> {
    let mut names = BTreeMap::new();
    for event in &file.events {
        if let (Some(id), Some(name)) = (id_of(event, "team"), name_of(event, "team")) {
            names.entry(id).or_insert(name);
        }
    }
    names
}

/// Which competitions to ingest; `None` means everything present.
#[derive(Debug, Clone, Default)]
pub struct CorpusFilter {
    pub competitions: Option<BTreeSet<i64>>,
}

impl CorpusFilter {
    pub fn competitions(ids: impl IntoIterator<Item = i64>) -> Self {
        Self {
            competitions: Some(ids.into_iter().collect()),
        }
    }

    fn accepts(&self, competition_id: i64) -> bool {
        match &self.competitions {
            Some(set) => set.contains(&competition_id),
            None => true,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CompetitionCount {
    pub matches: u64,
    pub shots: u64,
    pub open_play_shots: u64,
}

/// Ingest accounting, emitted as JSON by the CLI.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IngestSummary {
    pub matches_loaded: u64,
    pub events_seen: u64,
    pub shots_extracted: u64,
    pub open_play_shots: u64,
    pub skipped_records: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    pub clamped_freeze_locations: u64,
    pub per_competition: BTreeMap<String, CompetitionCount>,
    /// Per-match load failures (skippable in bulk mode).
    pub match_errors: Vec<String>,
}

/// A decoded corpus: every shot of every ingested match, match_id order.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub shots: Vec<ShotEvent>,
    pub summary: IngestSummary,
}

/// Load and decode a whole open-data checkout. Event files are decoded in
/// parallel and merged in match_id order, so output is deterministic.
pub fn load_corpus(root: &Path, filter: &CorpusFilter) -> Result<Corpus, IngestError> {
    let competitions = load_competitions(root)?;
    // A match can appear under several seasons; keep the first label.
    let mut match_to_label: BTreeMap<i64, String> = BTreeMap::new();
    let mut match_errors = Vec::new();
    for comp in &competitions {
        if !filter.accepts(comp.competition_id) {
            continue;
        }
        let label = format!("{} {}", comp.competition_name, comp.season_name);
        match load_matches(root, comp.competition_id, comp.season_id) {
            Ok(stubs) => {
                for stub in stubs {
                    match_to_label.entry(stub.match_id).or_insert(label.clone());
                }
            }
            Err(err) => match_errors.push(err.to_string()),
        }
    }

    let match_ids: Vec<i64> = match_to_label.keys().copied().collect();
    let per_match: Vec<Result<Extraction, String>> = exec::map_slice(&match_ids, |&match_id| {
        load_match_events(root, match_id)
            .map(|file| extract_shots(&file))
            .map_err(|err| err.to_string())
    });

    let mut total = Extraction::default();
    let mut summary = IngestSummary::default();
    for (match_id, result) in match_ids.iter().zip(per_match) {
        let label = &match_to_label[match_id];
        match result {
            Ok(extraction) => {
                let entry = summary.per_competition.entry(label.clone()).or_default();
                entry.matches += 1;
                entry.shots += extraction.shots.len() as u64;
                entry.open_play_shots +=
                    extraction.shots.iter().filter(|s| s.is_open_play()).count() as u64;
                summary.matches_loaded += 1;
                total.merge(extraction);
            }
            Err(err) => summary.match_errors.push(err),
        }
    }
    summary.match_errors.extend(match_errors);
    summary.events_seen = total.events_seen;
    summary.shots_extracted = total.shots.len() as u64;
    summary.open_play_shots = total.shots.iter().filter(|s| s.is_open_play()).count() as u64;
    summary.skipped_records = total.skipped;
    summary.skip_reasons = total.skip_reasons;
    summary.clamped_freeze_locations = total.clamped_freeze_locations;

    Ok(Corpus {
        shots: total.shots,
        summary,
    })
}
