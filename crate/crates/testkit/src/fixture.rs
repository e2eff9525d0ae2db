//! The fixed 28-shot final fixture: Real Madrid 3-1 Liverpool, 14 shots
//! apiece. Stored benchmark xG reproduces the published per-team totals
//! (1.367858 / 1.31442) and the four goal rows exactly. Freeze frames are
//! derived by a deterministic formula so the fixture never drifts.

use serde_json::{json, Value};

use xg_core::ingest::{FreezeFramePlayer, ShotEvent};
use xg_core::pitch::PitchPoint;

pub const FINAL_MATCH_ID: i64 = 18245;
pub const LIVERPOOL_TEAM_ID: i64 = 24;
pub const REAL_MADRID_TEAM_ID: i64 = 220;
pub const LIVERPOOL: &str = "Liverpool";
pub const REAL_MADRID: &str = "Real Madrid";

struct FixtureShot {
    team_id: i64,
    team: &'static str,
    minute: u32,
    player_id: i64,
    player: &'static str,
    position: &'static str,
    x: f64,
    y: f64,
    body_part: &'static str,
    technique: &'static str,
    statsbomb_xg: f64,
    goal: bool,
    defenders: usize,
    keeper_depth: f64,
}

const L: i64 = LIVERPOOL_TEAM_ID;
const R: i64 = REAL_MADRID_TEAM_ID;

/// 14 Liverpool + 14 Real Madrid shots. Non-goal benchmark values were
/// chosen so each team's stored-xG sum matches the published totals.
#[rustfmt::skip]
fn table() -> Vec<FixtureShot> {
    let s = |team_id, team, minute, player_id, player, position, x, y, body_part, technique,
             statsbomb_xg, goal, defenders, keeper_depth| FixtureShot {
        team_id, team, minute, player_id, player, position, x, y, body_part, technique,
        statsbomb_xg, goal, defenders, keeper_depth,
    };
    vec![
        // Liverpool: 13 non-goals summing 0.765904, plus Mane 0.548516.
        s(L, LIVERPOOL, 4,  3531, "Mohamed Salah",          "Right Wing",               105.2, 46.3, "Left Foot",  "Normal",        0.021,    false, 2, 1.2),
        s(L, LIVERPOOL, 9,  3629, "Trent Alexander-Arnold", "Right Back",               89.6,  52.1, "Right Foot", "Normal",        0.033,    false, 1, 0.8),
        s(L, LIVERPOOL, 16, 3533, "Roberto Firmino",        "Center Forward",           110.8, 36.9, "Right Foot", "Normal",        0.044,    false, 3, 1.6),
        s(L, LIVERPOOL, 19, 3532, "Sadio Mane",             "Left Center Forward",      108.3, 33.5, "Right Foot", "Normal",        0.052,    false, 2, 2.0),
        s(L, LIVERPOOL, 23, 3531, "Mohamed Salah",          "Right Wing",               112.6, 44.8, "Left Foot",  "Normal",        0.061,    false, 2, 1.2),
        s(L, LIVERPOOL, 29, 3567, "James Milner",           "Left Center Midfield",     94.1,  37.2, "Right Foot", "Normal",        0.028,    false, 1, 0.8),
        s(L, LIVERPOOL, 35, 3533, "Roberto Firmino",        "Center Forward",           114.9, 41.7, "Right Foot", "Half Volley",   0.095,    false, 2, 1.6),
        s(L, LIVERPOOL, 43, 3532, "Sadio Mane",             "Left Center Forward",      113.2, 46.5, "Head",       "Normal",        0.077,    false, 3, 1.2),
        s(L, LIVERPOOL, 48, 3574, "Georginio Wijnaldum",    "Right Center Midfield",    104.7, 40.6, "Right Foot", "Normal",        0.104,    false, 1, 2.4),
        s(L, LIVERPOOL, 54, 3532, "Sadio Mane",             "Left Center Forward",      116.4, 42.9, "Right Foot", "Volley",        0.548516, true,  1, 1.0),
        s(L, LIVERPOOL, 60, 3533, "Roberto Firmino",        "Center Forward",           109.5, 38.8, "Left Foot",  "Normal",        0.066,    false, 2, 1.6),
        s(L, LIVERPOOL, 69, 3532, "Sadio Mane",             "Left Center Forward",      111.7, 31.2, "Right Foot", "Normal",        0.049,    false, 2, 1.4),
        s(L, LIVERPOOL, 77, 3535, "Jordan Henderson",       "Center Defensive Midfield", 96.8, 42.4, "Right Foot", "Normal",        0.085,    false, 1, 2.8),
        s(L, LIVERPOOL, 88, 3531, "Mohamed Salah",          "Right Wing",               107.9, 47.6, "Left Foot",  "Normal",        0.050904, false, 2, 1.2),
        // Real Madrid: 11 non-goals summing 0.814151, plus three goals.
        s(R, REAL_MADRID, 2,  3509, "Cristiano Ronaldo",    "Left Center Forward",      110.4, 42.6, "Right Foot", "Normal",        0.018,    false, 3, 1.0),
        s(R, REAL_MADRID, 13, 5721, "Karim Benzema",        "Right Center Forward",     112.9, 37.4, "Right Foot", "Normal",        0.042,    false, 2, 1.4),
        s(R, REAL_MADRID, 21, 5719, "Isco",                 "Center Attacking Midfield", 101.3, 44.2, "Left Foot", "Normal",        0.067,    false, 2, 2.0),
        s(R, REAL_MADRID, 26, 3509, "Cristiano Ronaldo",    "Left Center Forward",      114.2, 35.1, "Head",       "Normal",        0.081,    false, 2, 1.2),
        s(R, REAL_MADRID, 33, 5720, "Toni Kroos",           "Left Center Midfield",     91.7,  36.3, "Left Foot",  "Normal",        0.123,    false, 1, 3.2),
        s(R, REAL_MADRID, 39, 3495, "Gareth Bale",          "Right Wing",               106.6, 49.3, "Left Foot",  "Normal",        0.056,    false, 2, 1.2),
        s(R, REAL_MADRID, 44, 5721, "Karim Benzema",        "Right Center Forward",     109.1, 40.2, "Right Foot", "Half Volley",   0.092,    false, 3, 1.6),
        s(R, REAL_MADRID, 50, 5721, "Karim Benzema",        "Right Center Forward",     116.8, 37.8, "Right Foot", "Volley",        0.517137, true,  1, 0.6),
        s(R, REAL_MADRID, 57, 5722, "Luka Modric",          "Right Center Midfield",    98.4,  45.7, "Right Foot", "Normal",        0.048,    false, 1, 2.4),
        s(R, REAL_MADRID, 63, 3495, "Gareth Bale",          "Right Wing",               110.9, 41.3, "Left Foot",  "Overhead Kick", 0.022605, true,  2, 1.8),
        s(R, REAL_MADRID, 71, 5723, "Marcelo",              "Left Back",                103.8, 30.9, "Left Foot",  "Normal",        0.109,    false, 2, 2.0),
        s(R, REAL_MADRID, 75, 5719, "Isco",                 "Center Attacking Midfield", 108.7, 43.8, "Right Foot", "Volley",       0.074,    false, 2, 1.4),
        s(R, REAL_MADRID, 82, 3495, "Gareth Bale",          "Right Wing",               85.2,  44.6, "Left Foot",  "Normal",        0.013965, true,  0, 4.0),
        s(R, REAL_MADRID, 86, 3509, "Cristiano Ronaldo",    "Left Center Forward",      113.5, 44.1, "Right Foot", "Normal",        0.104151, false, 2, 1.0),
    ]
}

/// Deterministic freeze frame: an opposing keeper `keeper_depth` in front
/// of the goal center (pulled toward the shot line) plus `defenders`
/// opponents spaced along the shot-to-goal segment.
pub fn fixture_freeze_frame(
    location: PitchPoint,
    defenders: usize,
    keeper_depth: f64,
) -> Vec<FreezeFramePlayer> {
    let mut frame = Vec::with_capacity(defenders + 1);
    let keeper_y = 40.0 + (location.y - 40.0) * 0.15;
    frame.push(FreezeFramePlayer {
        location: PitchPoint::new(120.0 - keeper_depth, keeper_y).clamped(),
        teammate: false,
        keeper: true,
        player_id: Some(99_000),
    });
    for k in 0..defenders {
        let t = 0.30 + 0.55 * (k + 1) as f64 / (defenders + 1) as f64;
        let lateral = if k % 2 == 0 { 1.3 } else { -1.3 } * (k / 2 + 1) as f64;
        let x = location.x + (120.0 - location.x) * t;
        let y = location.y + (40.0 - location.y) * t + lateral;
        frame.push(FreezeFramePlayer {
            location: PitchPoint::new(x, y).clamped(),
            teammate: false,
            keeper: false,
            player_id: Some(99_100 + k as i64),
        });
    }
    frame
}

fn event_id(index: usize) -> String {
    format!("m{FINAL_MATCH_ID}-e{index:04}")
}

/// The 28 fixture shots as decoded [`ShotEvent`]s, file order.
pub fn final_match_shots() -> Vec<ShotEvent> {
    table()
        .iter()
        .enumerate()
        .map(|(i, shot)| ShotEvent {
            event_id: event_id(i),
            match_id: FINAL_MATCH_ID,
            minute: shot.minute,
            second: (shot.minute * 7 % 60) as u32,
            player_id: shot.player_id,
            player_name: shot.player.to_string(),
            position_name: shot.position.to_string(),
            team_id: shot.team_id,
            location: PitchPoint::new(shot.x, shot.y),
            body_part: shot.body_part.to_string(),
            technique: shot.technique.to_string(),
            shot_type: "Open Play".to_string(),
            first_time: i % 4 == 1,
            open_goal: false,
            aerial_won: shot.technique == "Overhead Kick",
            under_pressure: i % 3 == 0,
            key_pass_type: None,
            freeze_frame: fixture_freeze_frame(
                PitchPoint::new(shot.x, shot.y),
                shot.defenders,
                shot.keeper_depth,
            ),
            statsbomb_xg: shot.statsbomb_xg,
            is_goal: shot.goal,
        })
        .collect()
}

/// The same 28 shots as raw StatsBomb event JSON.
pub fn final_match_events() -> Vec<Value> {
    final_match_shots()
        .iter()
        .enumerate()
        .map(|(i, shot)| {
            let freeze: Vec<Value> = shot
                .freeze_frame
                .iter()
                .map(|p| {
                    json!({
                        "location": [p.location.x, p.location.y],
                        "teammate": p.teammate,
                        "player": {"id": p.player_id, "name": if p.keeper { "Keeper" } else { "Defender" }},
                        "position": {"id": if p.keeper { 1 } else { 3 },
                                      "name": if p.keeper { "Goalkeeper" } else { "Center Back" }},
                    })
                })
                .collect();
            let mut shot_body = json!({
                "statsbomb_xg": shot.statsbomb_xg,
                "type": {"id": 87, "name": "Open Play"},
                "outcome": if shot.is_goal {
                    json!({"id": 97, "name": "Goal"})
                } else {
                    json!({"id": 100, "name": "Saved"})
                },
                "body_part": {"id": 40, "name": shot.body_part},
                "technique": {"id": 93, "name": shot.technique},
                "freeze_frame": freeze,
            });
            if shot.first_time {
                shot_body["first_time"] = json!(true);
            }
            if shot.aerial_won {
                shot_body["aerial_won"] = json!(true);
            }
            let team_name = if shot.team_id == LIVERPOOL_TEAM_ID {
                LIVERPOOL
            } else {
                REAL_MADRID
            };
            let mut event = json!({
                "id": shot.event_id,
                "index": i + 1,
                "period": if shot.minute <= 45 { 1 } else { 2 },
                "minute": shot.minute,
                "second": shot.second,
                "type": {"id": 16, "name": "Shot"},
                "team": {"id": shot.team_id, "name": team_name},
                "player": {"id": shot.player_id, "name": shot.player_name},
                "position": {"id": 23, "name": shot.position_name},
                "location": [shot.location.x, shot.location.y],
                "shot": shot_body,
            });
            if shot.under_pressure {
                event["under_pressure"] = json!(true);
            }
            event
        })
        .collect()
}

/// Published per-team benchmark totals for the fixture match.
pub const LIVERPOOL_BENCHMARK_TOTAL: f64 = 1.31442;
pub const REAL_MADRID_BENCHMARK_TOTAL: f64 = 1.367858;
