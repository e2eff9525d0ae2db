//! Deterministic synthetic StatsBomb open-data checkout for tests and
//! benchmarks.
//!
//! The generator writes a full directory tree (`competitions.json`,
//! `matches/{comp}/{season}.json`, `events/{match_id}.json`) whose event
//! records decode through `xg_core::ingest` exactly like the real feed.
//! Goal outcomes are drawn from a ground-truth logistic model over the
//! same engineered geometry the engine computes, with per-position and
//! per-player finishing offsets; the stored `statsbomb_xg` column is the
//! ground-truth structural probability (no player identity) plus noise,
//! playing the role of the provider benchmark.

pub mod fixture;

use std::fs;
use std::io;
use std::path::Path;

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use xg_core::features::geometry;
use xg_core::ingest::{FreezeFramePlayer, ShotEvent};
use xg_core::models::sigmoid;
use xg_core::pitch::PitchPoint;

pub use fixture::{
    final_match_events, final_match_shots, fixture_freeze_frame, FINAL_MATCH_ID,
    LIVERPOOL_BENCHMARK_TOTAL, LIVERPOOL_TEAM_ID, REAL_MADRID_BENCHMARK_TOTAL,
    REAL_MADRID_TEAM_ID,
};

pub const LA_LIGA_COMPETITION_ID: i64 = 11;
pub const WORLD_CUP_COMPETITION_ID: i64 = 43;
pub const EURO_COMPETITION_ID: i64 = 55;
pub const CHAMPIONS_LEAGUE_COMPETITION_ID: i64 = 16;

pub const BARCELONA_TEAM_ID: i64 = 217;
pub const MESSI_PLAYER_ID: i64 = 5503;

/// Ground-truth coefficients. `statsbomb_xg` is sigmoid of the structural
/// part plus noise; goal outcomes add the position/player offsets.
pub mod truth {
    pub const INTERCEPT: f64 = 0.9;
    pub const PER_DISTANCE_UNIT: f64 = -0.13;
    pub const PER_ANGLE_RADIAN: f64 = -1.1;
    pub const PER_TRIANGLE_OPPONENT: f64 = -0.45;
    pub const PER_RADIUS_OPPONENT: f64 = -0.12;
    pub const PER_KEEPER_UNIT: f64 = 0.05;
    pub const PRESSURE_RADIUS: f64 = 5.0;
    pub const OPEN_GOAL_BONUS: f64 = 2.5;
    pub const UNDER_PRESSURE: f64 = -0.25;
    pub const FIRST_TIME: f64 = -0.1;
    pub const HEAD: f64 = -0.7;
    pub const BENCHMARK_NOISE_SD: f64 = 0.35;

    pub const FORWARD_ABILITY: f64 = 0.10;
    pub const MIDFIELD_ABILITY: f64 = -0.22;
    pub const DEFENDER_ABILITY: f64 = -0.45;
    pub const GOALKEEPER_ABILITY: f64 = -0.30;
    pub const MESSI_EXTRA_ABILITY: f64 = 0.33;

    pub fn technique_adjustment(technique: &str) -> f64 {
        match technique {
            "Volley" => -0.3,
            "Half Volley" => -0.2,
            "Lob" => 0.2,
            "Overhead Kick" => -0.8,
            "Diving Header" => -0.5,
            "Backheel" => -0.9,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub seed: u64,
    pub la_liga_matches: usize,
    pub international_matches: usize,
    /// Mean open-play shots per match (both teams).
    pub open_play_shots_per_match: f64,
    pub include_final: bool,
}

impl SynthConfig {
    /// Corpus at the published scale: ~12.7k La Liga shots with a heavy
    /// Messi share, ~2.6k international shots, plus the 28-shot final.
    pub fn paper_scale(seed: u64) -> Self {
        Self {
            seed,
            la_liga_matches: 520,
            international_matches: 110,
            open_play_shots_per_match: 24.4,
            include_final: true,
        }
    }

    /// Small corpus for cheap end-to-end tests (~1.5k shots).
    pub fn small(seed: u64) -> Self {
        Self {
            seed,
            la_liga_matches: 48,
            international_matches: 12,
            open_play_shots_per_match: 24.0,
            include_final: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthSummary {
    pub matches: usize,
    pub shots: usize,
    pub open_play_shots: usize,
    pub goals: u64,
    pub messi_shots: usize,
    pub benchmark_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Forward,
    Midfield,
    Defender,
    Goalkeeper,
}

impl Group {
    fn ability(self) -> f64 {
        match self {
            Group::Forward => truth::FORWARD_ABILITY,
            Group::Midfield => truth::MIDFIELD_ABILITY,
            Group::Defender => truth::DEFENDER_ABILITY,
            Group::Goalkeeper => truth::GOALKEEPER_ABILITY,
        }
    }
}

#[derive(Debug, Clone)]
struct PlayerSpec {
    id: i64,
    name: String,
    position: &'static str,
    group: Group,
    right_footed: bool,
    extra_ability: f64,
}

#[derive(Debug, Clone)]
struct TeamSpec {
    id: i64,
    name: String,
    players: Vec<PlayerSpec>,
}

const OUTFIELD_POSITIONS: [(&str, Group); 14] = [
    ("Right Back", Group::Defender),
    ("Right Center Back", Group::Defender),
    ("Center Back", Group::Defender),
    ("Left Center Back", Group::Defender),
    ("Left Back", Group::Defender),
    ("Center Defensive Midfield", Group::Midfield),
    ("Right Center Midfield", Group::Midfield),
    ("Center Midfield", Group::Midfield),
    ("Left Center Midfield", Group::Midfield),
    ("Center Attacking Midfield", Group::Midfield),
    ("Right Wing", Group::Forward),
    ("Left Wing", Group::Forward),
    ("Center Forward", Group::Forward),
    ("Secondary Striker", Group::Forward),
];

fn generic_team(id: i64, name: &str) -> TeamSpec {
    let mut players = vec![PlayerSpec {
        id: id * 100,
        name: format!("{name} Goalkeeper"),
        position: "Goalkeeper",
        group: Group::Goalkeeper,
        right_footed: true,
        extra_ability: 0.0,
    }];
    for (k, (position, group)) in OUTFIELD_POSITIONS.iter().enumerate() {
        players.push(PlayerSpec {
            id: id * 100 + 1 + k as i64,
            name: format!("{name} {position}"),
            position,
            group: *group,
            right_footed: (id + k as i64) % 4 != 0,
            extra_ability: 0.0,
        });
    }
    TeamSpec {
        id,
        name: name.to_string(),
        players,
    }
}

fn barcelona() -> TeamSpec {
    let named: [(i64, &str, &str, Group, bool, f64); 15] = [
        (20055, "Marc-Andre ter Stegen", "Goalkeeper", Group::Goalkeeper, true, 0.0),
        (5213, "Gerard Pique", "Center Back", Group::Defender, true, 0.0),
        (5492, "Samuel Umtiti", "Left Center Back", Group::Defender, false, 0.0),
        (5498, "Carles Puyol", "Right Center Back", Group::Defender, true, 0.0),
        (5211, "Jordi Alba", "Left Back", Group::Defender, false, 0.0),
        (5208, "Sergi Roberto", "Right Back", Group::Defender, true, 0.0),
        (5203, "Sergio Busquets", "Center Defensive Midfield", Group::Midfield, true, 0.0),
        (5470, "Xavi Hernandez", "Right Center Midfield", Group::Midfield, true, 0.05),
        (5216, "Andres Iniesta", "Left Center Midfield", Group::Midfield, true, 0.05),
        (5477, "Ivan Rakitic", "Center Midfield", Group::Midfield, true, 0.0),
        (6379, "Arthur Melo", "Center Attacking Midfield", Group::Midfield, true, 0.0),
        (MESSI_PLAYER_ID, "Lionel Messi", "Right Wing", Group::Forward, false, truth::MESSI_EXTRA_ABILITY),
        (5246, "Luis Suarez", "Center Forward", Group::Forward, true, 0.12),
        (4320, "Neymar Junior", "Left Wing", Group::Forward, true, 0.08),
        (5201, "Pedro Rodriguez", "Secondary Striker", Group::Forward, true, 0.04),
    ];
    TeamSpec {
        id: BARCELONA_TEAM_ID,
        name: "Barcelona".to_string(),
        players: named
            .into_iter()
            .map(|(id, name, position, group, right_footed, extra_ability)| PlayerSpec {
                id,
                name: name.to_string(),
                position,
                group,
                right_footed,
                extra_ability,
            })
            .collect(),
    }
}

fn la_liga_opponents() -> Vec<TeamSpec> {
    [
        "Real Madrid CF", "Atletico Madrid", "Sevilla", "Valencia", "Villarreal",
        "Athletic Club", "Real Sociedad", "Real Betis", "Celta Vigo", "Espanyol",
        "Getafe", "Granada", "Levante", "Mallorca", "Osasuna", "Eibar",
        "Deportivo Alaves", "Leganes", "Real Valladolid",
    ]
    .iter()
    .enumerate()
    .map(|(i, name)| generic_team(301 + i as i64, name))
    .collect()
}

fn international_teams() -> Vec<TeamSpec> {
    ["Spain", "France", "Germany", "England", "Brazil", "Argentina", "Portugal", "Croatia"]
        .iter()
        .enumerate()
        .map(|(i, name)| generic_team(701 + i as i64, name))
        .collect()
}

// --- RNG helpers -----------------------------------------------------------

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u1 strictly positive.
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn poisson(rng: &mut ChaCha8Rng, lambda: f64) -> usize {
    let cap = (-lambda).exp();
    let mut p = 1.0;
    let mut k = 0usize;
    loop {
        p *= rng.random::<f64>();
        if p <= cap || k > 200 {
            return k;
        }
        k += 1;
    }
}

fn chance(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.random::<f64>() < p
}

// --- shot synthesis --------------------------------------------------------

fn sample_location(rng: &mut ChaCha8Rng, group: Group, set_piece: bool) -> PitchPoint {
    let d = if set_piece {
        18.0 + normal(rng).abs() * 8.0
    } else {
        match group {
            Group::Forward => {
                if chance(rng, 0.75) {
                    2.5 + normal(rng).abs() * 7.0
                } else {
                    16.0 + normal(rng).abs() * 8.0
                }
            }
            Group::Midfield => {
                if chance(rng, 0.30) {
                    4.0 + normal(rng).abs() * 6.0
                } else {
                    14.0 + normal(rng).abs() * 9.0
                }
            }
            Group::Defender => {
                if chance(rng, 0.55) {
                    3.0 + normal(rng).abs() * 4.0
                } else {
                    20.0 + normal(rng).abs() * 8.0
                }
            }
            Group::Goalkeeper => 50.0 + normal(rng).abs() * 8.0,
        }
    };
    let d = d.clamp(0.8, 62.0);
    let phi = (normal(rng) * 0.55).clamp(-1.25, 1.25);
    let x = (120.0 - d * phi.cos()).clamp(58.0, 119.8);
    let y = (40.0 + d * phi.sin()).clamp(1.5, 78.5);
    PitchPoint::new(x, y)
}

fn sample_freeze_frame(
    rng: &mut ChaCha8Rng,
    location: PitchPoint,
    open_goal: bool,
) -> Vec<FreezeFramePlayer> {
    if chance(rng, 0.03) {
        return Vec::new();
    }
    let mut frame = Vec::new();
    let distance = location.distance_to(xg_core::pitch::GOAL_CENTER).max(0.1);
    if !open_goal {
        let depth = (0.3 + normal(rng).abs() * 1.4).clamp(0.3, 10.0);
        let toward = (
            (location.x - 120.0) / distance,
            (location.y - 40.0) / distance,
        );
        let keeper = PitchPoint::new(
            120.0 + toward.0 * depth,
            40.0 + toward.1 * depth + normal(rng) * 0.8,
        )
        .clamped();
        frame.push(FreezeFramePlayer {
            location: keeper,
            teammate: false,
            keeper: true,
            player_id: Some(90_000),
        });
    }
    let lambda = 1.2 + 2.2 * (-distance / 12.0).exp();
    for k in 0..poisson(rng, lambda) {
        let t = rng.random::<f64>() * 0.75 + 0.15;
        let x = location.x + (120.0 - location.x) * t + normal(rng) * 1.0;
        let y = location.y + (40.0 - location.y) * t + normal(rng) * 2.2;
        frame.push(FreezeFramePlayer {
            location: PitchPoint::new(x, y).clamped(),
            teammate: false,
            keeper: false,
            player_id: Some(91_000 + k as i64),
        });
    }
    for k in 0..poisson(rng, 1.1) {
        frame.push(FreezeFramePlayer {
            location: PitchPoint::new(
                location.x + normal(rng) * 7.0,
                location.y + normal(rng) * 7.0,
            )
            .clamped(),
            teammate: true,
            keeper: false,
            player_id: Some(92_000 + k as i64),
        });
    }
    frame
}

fn sample_technique(rng: &mut ChaCha8Rng, header: bool) -> &'static str {
    if header {
        if chance(rng, 0.10) {
            return "Diving Header";
        }
        return "Normal";
    }
    let roll: f64 = rng.random();
    if roll < 0.08 {
        "Volley"
    } else if roll < 0.14 {
        "Half Volley"
    } else if roll < 0.16 {
        "Lob"
    } else if roll < 0.17 {
        "Overhead Kick"
    } else if roll < 0.175 {
        "Backheel"
    } else {
        "Normal"
    }
}

fn sample_key_pass(rng: &mut ChaCha8Rng) -> Option<&'static str> {
    if !chance(rng, 0.65) {
        return None;
    }
    let roll: f64 = rng.random();
    Some(if roll < 0.35 {
        "Ground Pass"
    } else if roll < 0.55 {
        "Low Pass"
    } else if roll < 0.75 {
        "High Pass"
    } else if roll < 0.88 {
        "Recovery"
    } else if roll < 0.96 {
        "Throw-in"
    } else {
        "Interchange"
    })
}

/// Structural log-odds: the part of shot quality visible to any model
/// (geometry, traffic, technique) with no player identity.
pub fn structural_logit(shot: &ShotEvent) -> f64 {
    let distance = shot.location.distance_to(xg_core::pitch::GOAL_CENTER);
    let angle = geometry::angle_to_goal_center(shot.location).unwrap_or(0.0);
    let triangle = geometry::opponents_in_shot_triangle(shot.location, &shot.freeze_frame) as f64;
    let radius = geometry::opponents_within_radius(
        shot.location,
        &shot.freeze_frame,
        truth::PRESSURE_RADIUS,
    )
    .unwrap_or(0) as f64;
    let keeper = geometry::gk_distance_from_goal_center(&shot.freeze_frame);
    truth::INTERCEPT
        + truth::PER_DISTANCE_UNIT * distance
        + truth::PER_ANGLE_RADIAN * angle
        + truth::PER_TRIANGLE_OPPONENT * triangle
        + truth::PER_RADIUS_OPPONENT * radius
        + truth::PER_KEEPER_UNIT * keeper
        + truth::technique_adjustment(&shot.technique)
        + if shot.body_part == "Head" { truth::HEAD } else { 0.0 }
        + if shot.open_goal { truth::OPEN_GOAL_BONUS } else { 0.0 }
        + if shot.under_pressure { truth::UNDER_PRESSURE } else { 0.0 }
        + if shot.first_time { truth::FIRST_TIME } else { 0.0 }
}

struct DrawnShot {
    shot: ShotEvent,
    team_name: String,
    key_pass: Option<&'static str>,
}

fn draw_shot(
    rng: &mut ChaCha8Rng,
    match_id: i64,
    team: &TeamSpec,
    player: &PlayerSpec,
    shot_type: &str,
    event_seq: usize,
) -> DrawnShot {
    let set_piece = shot_type != "Open Play";
    let location = if shot_type == "Penalty" {
        PitchPoint::new(108.0, 40.0)
    } else {
        sample_location(rng, player.group, set_piece)
    };
    let distance = location.distance_to(xg_core::pitch::GOAL_CENTER);
    let header = shot_type == "Open Play"
        && distance < 9.0
        && chance(rng, if player.group == Group::Defender { 0.5 } else { 0.3 });
    let body_part = if header {
        "Head"
    } else if chance(rng, 0.78) {
        if player.right_footed { "Right Foot" } else { "Left Foot" }
    } else if player.right_footed {
        "Left Foot"
    } else {
        "Right Foot"
    };
    let open_goal = shot_type == "Open Play" && chance(rng, 0.01);
    let technique = if set_piece { "Normal" } else { sample_technique(rng, header) };
    let mut shot = ShotEvent {
        event_id: format!("m{match_id}-e{event_seq:05}"),
        match_id,
        minute: rng.random_range(0..94u32),
        second: rng.random_range(0..60u32),
        player_id: player.id,
        player_name: player.name.clone(),
        position_name: player.position.to_string(),
        team_id: team.id,
        location,
        body_part: body_part.to_string(),
        technique: technique.to_string(),
        shot_type: shot_type.to_string(),
        first_time: chance(rng, 0.30),
        open_goal,
        aerial_won: header && chance(rng, 0.5),
        under_pressure: chance(rng, if distance < 10.0 { 0.45 } else { 0.2 }),
        key_pass_type: None,
        freeze_frame: sample_freeze_frame(rng, location, open_goal),
        statsbomb_xg: 0.0,
        is_goal: false,
    };
    let structural = structural_logit(&shot);
    let ability = player.group.ability() + player.extra_ability;
    shot.is_goal = chance(rng, sigmoid(structural + ability));
    shot.statsbomb_xg =
        sigmoid(structural + normal(rng) * truth::BENCHMARK_NOISE_SD).clamp(0.005, 0.98);
    let key_pass = if shot_type == "Open Play" { sample_key_pass(rng) } else { None };
    DrawnShot {
        shot,
        team_name: team.name.clone(),
        key_pass,
    }
}

fn pick_shooter<'t>(rng: &mut ChaCha8Rng, team: &'t TeamSpec) -> &'t PlayerSpec {
    // Positional shot shares roughly matching the published breakdown.
    let roll: f64 = rng.random();
    let group = if roll < 0.555 {
        Group::Forward
    } else if roll < 0.85 {
        Group::Midfield
    } else {
        Group::Defender
    };
    if team.id == BARCELONA_TEAM_ID && group == Group::Forward && chance(rng, 0.65) {
        return team
            .players
            .iter()
            .find(|p| p.id == MESSI_PLAYER_ID)
            .expect("Messi on the roster");
    }
    let pool: Vec<&PlayerSpec> = team.players.iter().filter(|p| p.group == group).collect();
    pool[rng.random_range(0..pool.len())]
}

// --- JSON emission ---------------------------------------------------------

fn shot_event_json(
    shot: &ShotEvent,
    team_name: &str,
    index: usize,
    key_pass_id: Option<&str>,
) -> Value {
    let freeze: Vec<Value> = shot
        .freeze_frame
        .iter()
        .map(|p| {
            json!({
                "location": [p.location.x, p.location.y],
                "teammate": p.teammate,
                "player": {"id": p.player_id, "name": if p.keeper { "Keeper" } else { "Player" }},
                "position": {"id": if p.keeper { 1 } else { 3 },
                              "name": if p.keeper { "Goalkeeper" } else { "Center Back" }},
            })
        })
        .collect();
    let mut body = json!({
        "statsbomb_xg": shot.statsbomb_xg,
        "type": {"id": 87, "name": shot.shot_type},
        "outcome": if shot.is_goal {
            json!({"id": 97, "name": "Goal"})
        } else {
            json!({"id": 100, "name": "Saved"})
        },
        "body_part": {"id": 40, "name": shot.body_part},
        "technique": {"id": 93, "name": shot.technique},
    });
    if !shot.freeze_frame.is_empty() {
        body["freeze_frame"] = json!(freeze);
    }
    if shot.first_time {
        body["first_time"] = json!(true);
    }
    if shot.open_goal {
        body["open_goal"] = json!(true);
    }
    if shot.aerial_won {
        body["aerial_won"] = json!(true);
    }
    if let Some(kp) = key_pass_id {
        body["key_pass_id"] = json!(kp);
    }
    let mut event = json!({
        "id": shot.event_id,
        "index": index,
        "period": if shot.minute <= 45 { 1 } else { 2 },
        "minute": shot.minute,
        "second": shot.second,
        "type": {"id": 16, "name": "Shot"},
        "team": {"id": shot.team_id, "name": team_name},
        "player": {"id": shot.player_id, "name": shot.player_name},
        "position": {"id": 23, "name": shot.position_name},
        "location": [shot.location.x, shot.location.y],
        "shot": body,
    });
    if shot.under_pressure {
        event["under_pressure"] = json!(true);
    }
    event
}

fn pass_event_json(
    id: &str,
    index: usize,
    shot: &ShotEvent,
    team_name: &str,
    label: &str,
) -> Value {
    let pass = if matches!(label, "Recovery" | "Throw-in" | "Interchange") {
        json!({"type": {"id": 66, "name": label}})
    } else {
        json!({"height": {"id": 1, "name": label}})
    };
    json!({
        "id": id,
        "index": index,
        "period": if shot.minute <= 45 { 1 } else { 2 },
        "minute": shot.minute,
        "second": shot.second.saturating_sub(3),
        "type": {"id": 30, "name": "Pass"},
        "team": {"id": shot.team_id, "name": team_name},
        "player": {"id": shot.player_id, "name": shot.player_name},
        "pass": pass,
    })
}

fn write_json(path: &Path, value: &Value) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_string(value).expect("json serializes"))
}

// --- corpus generation -----------------------------------------------------

struct MatchPlan<'t> {
    match_id: i64,
    home: &'t TeamSpec,
    away: &'t TeamSpec,
    home_share: f64,
    inject_gk_shot: bool,
}

fn generate_match(
    rng: &mut ChaCha8Rng,
    plan: &MatchPlan<'_>,
    mean_open_play: f64,
    summary: &mut SynthSummary,
) -> Vec<Value> {
    let mut drawn: Vec<DrawnShot> = Vec::new();
    let total_shots = poisson(rng, mean_open_play).max(4);
    let mut seq = 0usize;
    for _ in 0..total_shots {
        let team = if chance(rng, plan.home_share) { plan.home } else { plan.away };
        let player = pick_shooter(rng, team);
        seq += 1;
        drawn.push(draw_shot(rng, plan.match_id, team, player, "Open Play", seq));
    }
    // Set pieces: filtered out of the modeling corpus, present in reports.
    for _ in 0..poisson(rng, 1.3) {
        let team = if chance(rng, 0.5) { plan.home } else { plan.away };
        let player = pick_shooter(rng, team);
        seq += 1;
        drawn.push(draw_shot(rng, plan.match_id, team, player, "Free Kick", seq));
    }
    if chance(rng, 0.06) {
        let team = if chance(rng, 0.5) { plan.home } else { plan.away };
        let player = pick_shooter(rng, team);
        seq += 1;
        drawn.push(draw_shot(rng, plan.match_id, team, player, "Penalty", seq));
    }
    if plan.inject_gk_shot {
        let keeper = plan
            .home
            .players
            .iter()
            .find(|p| p.group == Group::Goalkeeper)
            .expect("roster has a keeper");
        seq += 1;
        drawn.push(draw_shot(rng, plan.match_id, plan.home, keeper, "Open Play", seq));
    }

    drawn.sort_by(|a, b| {
        (a.shot.minute, a.shot.second, &a.shot.event_id)
            .cmp(&(b.shot.minute, b.shot.second, &b.shot.event_id))
    });

    let mut events = Vec::new();
    let mut index = 1usize;
    for d in &drawn {
        let key_pass_id = d.key_pass.map(|label| {
            let id = format!("{}-kp", d.shot.event_id);
            events.push(pass_event_json(&id, index, &d.shot, &d.team_name, label));
            index += 1;
            id
        });
        events.push(shot_event_json(&d.shot, &d.team_name, index, key_pass_id.as_deref()));
        index += 1;

        summary.shots += 1;
        summary.goals += u64::from(d.shot.is_goal);
        summary.benchmark_total += d.shot.statsbomb_xg;
        if d.shot.is_open_play() {
            summary.open_play_shots += 1;
        }
        if d.shot.player_id == MESSI_PLAYER_ID {
            summary.messi_shots += 1;
        }
    }
    events
}

/// Write a complete synthetic open-data checkout under `root`.
pub fn generate(root: &Path, config: &SynthConfig) -> io::Result<SynthSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut summary = SynthSummary::default();

    let barca = barcelona();
    let opponents = la_liga_opponents();
    let nations = international_teams();

    // competitions.json: four La Liga seasons, one WC, one Euro, one CL.
    let la_liga_seasons: [(i64, &str); 4] =
        [(21, "2015/2016"), (22, "2016/2017"), (23, "2017/2018"), (24, "2018/2019")];
    let mut competitions = Vec::new();
    for (season_id, season_name) in la_liga_seasons {
        competitions.push(json!({
            "competition_id": LA_LIGA_COMPETITION_ID,
            "season_id": season_id,
            "competition_name": "La Liga",
            "season_name": season_name,
            "country_name": "Spain",
        }));
    }
    competitions.push(json!({
        "competition_id": WORLD_CUP_COMPETITION_ID, "season_id": 3,
        "competition_name": "FIFA World Cup", "season_name": "2018",
        "country_name": "International",
    }));
    competitions.push(json!({
        "competition_id": EURO_COMPETITION_ID, "season_id": 43,
        "competition_name": "UEFA Euro", "season_name": "2020",
        "country_name": "Europe",
    }));
    if config.include_final {
        competitions.push(json!({
            "competition_id": CHAMPIONS_LEAGUE_COMPETITION_ID, "season_id": 4,
            "competition_name": "Champions League", "season_name": "2017/2018",
            "country_name": "Europe",
        }));
    }
    write_json(&root.join("competitions.json"), &json!(competitions))?;

    // La Liga: the checkout mirrors the Messi-era release, so every match
    // is a Barcelona match with the opponent rotating.
    let mut season_matches: std::collections::BTreeMap<i64, Vec<Value>> = Default::default();
    for i in 0..config.la_liga_matches {
        let match_id = 1_000_000 + i as i64;
        let opponent = &opponents[i % opponents.len()];
        let barca_home = i % 2 == 0;
        let (home, away) = if barca_home { (&barca, opponent) } else { (opponent, &barca) };
        let plan = MatchPlan {
            match_id,
            home,
            away,
            home_share: if barca_home { 0.54 } else { 0.46 },
            inject_gk_shot: i == 0 || i == 7,
        };
        let events = generate_match(
            &mut rng,
            &plan,
            config.open_play_shots_per_match,
            &mut summary,
        );
        write_json(&root.join(format!("events/{match_id}.json")), &json!(events))?;
        summary.matches += 1;
        let season = la_liga_seasons[i % la_liga_seasons.len()].0;
        season_matches.entry(season).or_default().push(json!({
            "match_id": match_id,
            "home_team": {"home_team_id": home.id, "home_team_name": home.name},
            "away_team": {"away_team_id": away.id, "away_team_name": away.name},
        }));
    }
    for (season_id, matches) in season_matches {
        write_json(
            &root.join(format!("matches/{LA_LIGA_COMPETITION_ID}/{season_id}.json")),
            &json!(matches),
        )?;
    }

    // International matches, split between World Cup and Euro.
    let mut wc_matches = Vec::new();
    let mut euro_matches = Vec::new();
    for i in 0..config.international_matches {
        let match_id = 2_000_000 + i as i64;
        let home = &nations[i % nations.len()];
        let away = &nations[(i + 1 + i / nations.len()) % nations.len()];
        if home.id == away.id {
            continue;
        }
        let plan = MatchPlan {
            match_id,
            home,
            away,
            home_share: 0.5,
            inject_gk_shot: false,
        };
        let events = generate_match(
            &mut rng,
            &plan,
            config.open_play_shots_per_match,
            &mut summary,
        );
        write_json(&root.join(format!("events/{match_id}.json")), &json!(events))?;
        summary.matches += 1;
        let row = json!({
            "match_id": match_id,
            "home_team": {"home_team_id": home.id, "home_team_name": home.name},
            "away_team": {"away_team_id": away.id, "away_team_name": away.name},
        });
        if i % 2 == 0 {
            wc_matches.push(row);
        } else {
            euro_matches.push(row);
        }
    }
    write_json(
        &root.join(format!("matches/{WORLD_CUP_COMPETITION_ID}/3.json")),
        &json!(wc_matches),
    )?;
    write_json(
        &root.join(format!("matches/{EURO_COMPETITION_ID}/43.json")),
        &json!(euro_matches),
    )?;

    // The fixed Champions League final.
    if config.include_final {
        let events = final_match_events();
        for shot in final_match_shots() {
            summary.shots += 1;
            summary.open_play_shots += 1;
            summary.goals += u64::from(shot.is_goal);
            summary.benchmark_total += shot.statsbomb_xg;
        }
        summary.matches += 1;
        write_json(
            &root.join(format!("events/{FINAL_MATCH_ID}.json")),
            &json!(events),
        )?;
        write_json(
            &root.join(format!("matches/{CHAMPIONS_LEAGUE_COMPETITION_ID}/4.json")),
            &json!([{
                "match_id": FINAL_MATCH_ID,
                "home_team": {"home_team_id": REAL_MADRID_TEAM_ID, "home_team_name": "Real Madrid"},
                "away_team": {"away_team_id": LIVERPOOL_TEAM_ID, "away_team_name": "Liverpool"},
            }]),
        )?;
    }

    Ok(summary)
}
