//! Match reports and figure rendering: shot maps, density heatmaps and
//! cumulative xG timelines, all as deterministic SVG.

pub mod canvas;
pub mod heatmap;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{transform, DominantFootMap, EncoderState, FeatureError};
use crate::ingest::{extract_shots, team_names, RawEventFile, ShotEvent};
use crate::models::{ModelArtifact, ModelError};
use crate::pitch::{PitchPoint, PITCH_LENGTH, PITCH_WIDTH};
pub use canvas::{is_well_formed_xml, PitchCanvas, TEAM_COLORS};
pub use heatmap::{DensityField, DEFAULT_CELLS_X, DEFAULT_CELLS_Y, DEFAULT_SIGMA};

/// Industry-standard xG granted per penalty in match totals.
pub const PENALTY_XG: f64 = 0.766;

pub const MARKER_RADIUS_MIN: f64 = 1.0;
pub const MARKER_RADIUS_MAX: f64 = 8.0;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Marker radius, linear in xG between the configured extremes.
pub fn marker_radius(xg: f64) -> f64 {
    MARKER_RADIUS_MIN + (MARKER_RADIUS_MAX - MARKER_RADIUS_MIN) * xg.clamp(0.0, 1.0)
}

/// One marker on a shot map.
#[derive(Debug, Clone, Copy)]
pub struct ShotMapRow {
    pub location: PitchPoint,
    pub xg: f64,
    pub goal: bool,
    /// Plot at the opposite end (for two-team match maps).
    pub mirrored: bool,
}

/// Render one marker per shot; radius grows with xG, goals are filled.
/// Input coordinates are assumed normalized to attack toward x = 120
/// (the StatsBomb event convention); `mirrored` rows are reflected so a
/// match's two teams occupy opposite ends.
pub fn shot_map(rows: &[ShotMapRow], title: &str) -> String {
    let mut canvas = PitchCanvas::new();
    canvas.meta("figure", "shot-map");
    canvas.meta(
        "radius",
        &format!("{MARKER_RADIUS_MIN}..{MARKER_RADIUS_MAX}-linear-in-xg"),
    );
    canvas.overlay(PitchCanvas::text(0.0, -4.0, 4.0, title));
    for row in rows {
        let (x, y) = if row.mirrored {
            (PITCH_LENGTH - row.location.x, PITCH_WIDTH - row.location.y)
        } else {
            (row.location.x, row.location.y)
        };
        let r = marker_radius(row.xg);
        let style = if row.goal {
            format!(
                r##"fill="{}" fill-opacity="0.85" stroke="#7f1d1d" stroke-width="0.25""##,
                canvas::COLOR_GOAL_MARKER
            )
        } else {
            format!(
                r#"fill="{}" fill-opacity="0.35" stroke="{}" stroke-width="0.25""#,
                canvas::COLOR_SHOT_MARKER,
                canvas::COLOR_SHOT_MARKER
            )
        };
        canvas.overlay(PitchCanvas::circle(x, y, r, &style));
    }
    canvas.finish()
}

/// Smoothed shot-density heatmap over the pitch.
pub fn density_heatmap(
    locations: &[PitchPoint],
    cells_x: usize,
    cells_y: usize,
    sigma: f64,
    title: &str,
) -> String {
    let field = DensityField::from_locations(locations, cells_x, cells_y, sigma);
    let mut canvas = PitchCanvas::new();
    canvas.meta("figure", "density-heatmap");
    canvas.meta("grid", &format!("{cells_x}x{cells_y}"));
    canvas.meta("sigma-cells", &format!("{sigma}"));
    canvas.meta("estimator", "histogram-gaussian-reflect");
    field.paint(&mut canvas);
    canvas.overlay(PitchCanvas::text(0.0, -4.0, 4.0, title));
    canvas.finish()
}

/// One row of a match report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchShotRow {
    pub minute: u32,
    pub second: u32,
    pub team_id: i64,
    pub player_name: String,
    pub technique: String,
    pub location: PitchPoint,
    /// Model probability; `None` for penalty add-on rows.
    pub model_xg: Option<f64>,
    pub benchmark_xg: f64,
    pub is_goal: bool,
    pub is_penalty: bool,
}

impl MatchShotRow {
    /// The xG this row contributes to its team total.
    pub fn counted_xg(&self) -> f64 {
        self.model_xg.unwrap_or(PENALTY_XG)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamTotals {
    pub team_id: i64,
    pub team_name: String,
    pub goals: u64,
    pub shots: u64,
    pub accumulated_xg: f64,
    pub benchmark_xg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub match_id: i64,
    pub model_label: String,
    pub include_penalties: bool,
    pub teams: Vec<TeamTotals>,
    /// Kickoff order: sorted by (minute, second).
    pub rows: Vec<MatchShotRow>,
}

impl MatchReport {
    /// Assemble totals from rows. `goals_by_team` lets callers count goals
    /// from shots that are not report rows (e.g. free kicks).
    pub fn from_rows(
        match_id: i64,
        model_label: &str,
        include_penalties: bool,
        names: &BTreeMap<i64, String>,
        mut rows: Vec<MatchShotRow>,
        goals_by_team: &BTreeMap<i64, u64>,
    ) -> Self {
        rows.sort_by_key(|r| (r.minute, r.second));
        let teams = names
            .iter()
            .map(|(&team_id, team_name)| {
                let team_rows = rows.iter().filter(|r| r.team_id == team_id);
                // `+ 0.0` keeps empty sums at +0.0 rather than -0.0.
                TeamTotals {
                    team_id,
                    team_name: team_name.clone(),
                    goals: goals_by_team.get(&team_id).copied().unwrap_or(0),
                    shots: team_rows.clone().count() as u64,
                    accumulated_xg: team_rows.clone().map(MatchShotRow::counted_xg).sum::<f64>()
                        + 0.0,
                    benchmark_xg: team_rows.map(|r| r.benchmark_xg).sum::<f64>() + 0.0,
                }
            })
            .collect();
        Self {
            match_id,
            model_label: model_label.to_string(),
            include_penalties,
            teams,
            rows,
        }
    }
}

/// Score every open-play shot of a match with the model; optionally add
/// the 0.766 penalty constant per penalty as a flagged row. Goals are
/// counted over all decoded shots so the scoreboard stays truthful even
/// for set-piece goals.
pub fn match_report(
    file: &RawEventFile,
    model: &ModelArtifact,
    encoder: &EncoderState,
    feet: &DominantFootMap,
    include_penalties: bool,
    model_label: &str,
) -> Result<MatchReport, ReportError> {
    let extraction = extract_shots(file);
    let names = team_names(file);

    let mut goals_by_team: BTreeMap<i64, u64> = BTreeMap::new();
    for shot in &extraction.shots {
        if shot.is_goal {
            *goals_by_team.entry(shot.team_id).or_insert(0) += 1;
        }
    }

    let open_play: Vec<ShotEvent> = extraction
        .shots
        .iter()
        .filter(|s| s.is_open_play())
        .cloned()
        .collect();
    let matrix = transform(&open_play, encoder, feet);
    let predictions = model.predict_matrix(&matrix)?;

    let mut rows: Vec<MatchShotRow> = open_play
        .iter()
        .zip(&predictions)
        .map(|(shot, pred)| MatchShotRow {
            minute: shot.minute,
            second: shot.second,
            team_id: shot.team_id,
            player_name: shot.player_name.clone(),
            technique: shot.technique.clone(),
            location: shot.location,
            model_xg: Some(pred.probability),
            benchmark_xg: shot.statsbomb_xg,
            is_goal: shot.is_goal,
            is_penalty: false,
        })
        .collect();
    if include_penalties {
        for shot in extraction
            .shots
            .iter()
            .filter(|s| s.shot_type == crate::ingest::SHOT_TYPE_PENALTY)
        {
            rows.push(MatchShotRow {
                minute: shot.minute,
                second: shot.second,
                team_id: shot.team_id,
                player_name: shot.player_name.clone(),
                technique: shot.technique.clone(),
                location: shot.location,
                model_xg: None,
                benchmark_xg: shot.statsbomb_xg,
                is_goal: shot.is_goal,
                is_penalty: true,
            });
        }
    }
    Ok(MatchReport::from_rows(
        file.match_id,
        model_label,
        include_penalties,
        &names,
        rows,
        &goals_by_team,
    ))
}

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

/// Per-team cumulative xG step chart over match minutes, goals annotated.
/// Endpoints equal the report's team totals exactly.
pub fn xg_timeline(report: &MatchReport) -> String {
    let width = 840.0;
    let height = 320.0;
    let pad_left = 56.0;
    let pad_bottom = 36.0;
    let pad_top = 28.0;
    let plot_w = width - pad_left - 16.0;
    let plot_h = height - pad_top - pad_bottom;

    let max_minute = report
        .rows
        .iter()
        .map(|r| r.minute)
        .max()
        .unwrap_or(0)
        .max(90) as f64
        + 2.0;
    let max_xg = report
        .teams
        .iter()
        .map(|t| t.accumulated_xg)
        .fold(0.5, f64::max)
        * 1.15;

    let x_at = |minute: f64| pad_left + plot_w * minute / max_minute;
    let y_at = |xg: f64| pad_top + plot_h * (1.0 - xg / max_xg);

    let mut out = format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" "#,
            r#"width="{w}" height="{h}">"#,
            "\n"
        ),
        w = fmt2(width),
        h = fmt2(height),
    );
    let _ = writeln!(
        out,
        "<!-- xg-meta figure=xg-timeline match={} model={} -->",
        report.match_id, report.model_label
    );
    let _ = writeln!(
        out,
        r##"<rect x="0.00" y="0.00" width="{}" height="{}" fill="#ffffff"/>"##,
        fmt2(width),
        fmt2(height)
    );
    // Axes.
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#444444" stroke-width="1.00"/>"##,
        fmt2(pad_left),
        fmt2(pad_top + plot_h),
        fmt2(pad_left + plot_w),
        fmt2(pad_top + plot_h)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#444444" stroke-width="1.00"/>"##,
        fmt2(pad_left),
        fmt2(pad_top),
        fmt2(pad_left),
        fmt2(pad_top + plot_h)
    );
    for tick in 0..=(max_minute as u32 / 15) {
        let minute = f64::from(tick * 15);
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" font-size="10.00" font-family="monospace" fill="#444444">{}'</text>"##,
            fmt2(x_at(minute) - 6.0),
            fmt2(pad_top + plot_h + 14.0),
            minute as u32
        );
    }

    for (idx, team) in report.teams.iter().enumerate() {
        let color = TEAM_COLORS[idx % TEAM_COLORS.len()];
        let mut points = vec![(0.0_f64, 0.0_f64)];
        let mut running = 0.0;
        for row in report.rows.iter().filter(|r| r.team_id == team.team_id) {
            let t = f64::from(row.minute) + f64::from(row.second) / 60.0;
            points.push((t, running));
            running += row.counted_xg();
            points.push((t, running));
        }
        points.push((max_minute, running));
        let path: Vec<String> = points
            .iter()
            .map(|&(t, xg)| format!("{},{}", fmt2(x_at(t)), fmt2(y_at(xg))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2.00"/>"#,
            path.join(" ")
        );
        // Goal markers on the team's own line.
        let mut running = 0.0;
        for row in report.rows.iter().filter(|r| r.team_id == team.team_id) {
            running += row.counted_xg();
            if row.is_goal {
                let t = f64::from(row.minute) + f64::from(row.second) / 60.0;
                let _ = writeln!(
                    out,
                    r##"<circle cx="{}" cy="{}" r="4.00" fill="{color}" stroke="#222222" stroke-width="0.75"/>"##,
                    fmt2(x_at(t)),
                    fmt2(y_at(running))
                );
                let _ = writeln!(
                    out,
                    r##"<text x="{}" y="{}" font-size="9.00" font-family="monospace" fill="#222222">{} {}'</text>"##,
                    fmt2(x_at(t) + 6.0),
                    fmt2(y_at(running) - 4.0),
                    canvas::escape(&row.player_name),
                    row.minute
                );
            }
        }
        // Legend with final totals.
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11.00" font-family="monospace" fill="{color}">{} {}</text>"#,
            fmt2(pad_left + 8.0),
            fmt2(pad_top + 14.0 + 14.0 * idx as f64),
            canvas::escape(&team.team_name),
            fmt2(team.accumulated_xg)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Aligned-text match report in the published two-table style.
pub fn render_match_text(report: &MatchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "match {} ({} model)", report.match_id, report.model_label);
    let _ = writeln!(
        out,
        "{:<24}{:>7}{:>7}{:>12}{:>14}",
        "Team", "Goals", "Shots", "Model xG", "Benchmark xG"
    );
    for team in &report.teams {
        let _ = writeln!(
            out,
            "{:<24}{:>7}{:>7}{:>12.3}{:>14.3}",
            team.team_name, team.goals, team.shots, team.accumulated_xg, team.benchmark_xg
        );
    }
    if report.include_penalties {
        let _ = writeln!(out, "(penalties counted at {PENALTY_XG} xG each)");
    }
    let _ = writeln!(out, "\ngoals:");
    let _ = writeln!(
        out,
        "{:<24}{:<18}{:>7}{:>12}{:>14}",
        "Player", "Technique", "Min", "Model xG", "Benchmark xG"
    );
    for row in report.rows.iter().filter(|r| r.is_goal) {
        let model_xg = row
            .model_xg
            .map(|v| format!("{v:.6}"))
            .unwrap_or_else(|| "penalty".to_string());
        let _ = writeln!(
            out,
            "{:<24}{:<18}{:>7}{:>12}{:>14.6}",
            row.player_name, row.technique, row.minute, model_xg, row.benchmark_xg
        );
    }
    out
}
