//! Deterministic SVG pitch rendering. Output is plain formatted text with
//! fixed-precision coordinates, so identical inputs give identical bytes.

use crate::pitch::{
    CENTER_CIRCLE_RADIUS, PENALTY_AREA_X, PENALTY_AREA_Y_MAX, PENALTY_AREA_Y_MIN, PENALTY_SPOT,
    PITCH_LENGTH, PITCH_WIDTH, SIX_YARD_X, SIX_YARD_Y_MAX, SIX_YARD_Y_MIN,
};

const MARGIN: f64 = 10.0;
const SCALE: f64 = 7.0;

pub const COLOR_PITCH: &str = "#f4f9f4";
pub const COLOR_LINES: &str = "#5a5a5a";
pub const COLOR_GOAL_MARKER: &str = "#d62728";
pub const COLOR_SHOT_MARKER: &str = "#1f77b4";
pub const TEAM_COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// A 120x80 pitch SVG with ordered layers: underlays (heat fields), the
/// pitch markings, then overlays (markers, labels).
pub struct PitchCanvas {
    meta: Vec<(String, String)>,
    underlays: Vec<String>,
    overlays: Vec<String>,
}

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

impl PitchCanvas {
    pub fn new() -> Self {
        Self {
            meta: Vec::new(),
            underlays: Vec::new(),
            overlays: Vec::new(),
        }
    }

    /// Record a metadata key/value; emitted as a comment after the root tag.
    pub fn meta(&mut self, key: &str, value: &str) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn underlay(&mut self, element: String) {
        self.underlays.push(element);
    }

    pub fn overlay(&mut self, element: String) {
        self.overlays.push(element);
    }

    pub fn circle(cx: f64, cy: f64, r: f64, style: &str) -> String {
        format!(
            r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#,
            fmt2(cx),
            fmt2(cy),
            fmt2(r)
        )
    }

    pub fn rect(x: f64, y: f64, w: f64, h: f64, style: &str) -> String {
        format!(
            r#"<rect x="{}" y="{}" width="{}" height="{}" {style}/>"#,
            fmt2(x),
            fmt2(y),
            fmt2(w),
            fmt2(h)
        )
    }

    pub fn line(x1: f64, y1: f64, x2: f64, y2: f64, style: &str) -> String {
        format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            fmt2(x1),
            fmt2(y1),
            fmt2(x2),
            fmt2(y2)
        )
    }

    pub fn text(x: f64, y: f64, size: f64, content: &str) -> String {
        format!(
            r##"<text x="{}" y="{}" font-size="{}" font-family="monospace" fill="#333333">{}</text>"##,
            fmt2(x),
            fmt2(y),
            fmt2(size),
            escape(content)
        )
    }

    fn markings() -> String {
        let line_style = format!(r#"fill="none" stroke="{COLOR_LINES}" stroke-width="0.30""#);
        let mut parts = vec![
            Self::rect(
                0.0,
                0.0,
                PITCH_LENGTH,
                PITCH_WIDTH,
                &format!(r#"fill="{COLOR_PITCH}" stroke="{COLOR_LINES}" stroke-width="0.30""#),
            ),
            Self::line(60.0, 0.0, 60.0, PITCH_WIDTH, &line_style),
            Self::circle(60.0, 40.0, CENTER_CIRCLE_RADIUS, &line_style),
        ];
        // Penalty areas, six-yard boxes, spots and goals at both ends.
        for attacking in [false, true] {
            let flip = |x: f64| if attacking { x } else { PITCH_LENGTH - x };
            let box_w = PITCH_LENGTH - PENALTY_AREA_X;
            parts.push(Self::rect(
                flip(PENALTY_AREA_X).min(flip(PITCH_LENGTH)),
                PENALTY_AREA_Y_MIN,
                box_w,
                PENALTY_AREA_Y_MAX - PENALTY_AREA_Y_MIN,
                &line_style,
            ));
            let six_w = PITCH_LENGTH - SIX_YARD_X;
            parts.push(Self::rect(
                flip(SIX_YARD_X).min(flip(PITCH_LENGTH)),
                SIX_YARD_Y_MIN,
                six_w,
                SIX_YARD_Y_MAX - SIX_YARD_Y_MIN,
                &line_style,
            ));
            parts.push(Self::circle(flip(PENALTY_SPOT.x), PENALTY_SPOT.y, 0.4, &line_style));
            let goal_x = if attacking { PITCH_LENGTH } else { -2.0 };
            parts.push(Self::rect(
                goal_x,
                36.0,
                2.0,
                8.0,
                &format!(r#"fill="none" stroke="{COLOR_LINES}" stroke-width="0.40""#),
            ));
        }
        parts.join("\n")
    }

    pub fn finish(self) -> String {
        let width = (PITCH_LENGTH + 2.0 * MARGIN) * SCALE;
        let height = (PITCH_WIDTH + 2.0 * MARGIN) * SCALE;
        let mut out = format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" "#,
                r#"viewBox="-{m} -{m} {vw} {vh}" width="{w}" height="{h}">"#,
                "\n"
            ),
            m = fmt2(MARGIN),
            vw = fmt2(PITCH_LENGTH + 2.0 * MARGIN),
            vh = fmt2(PITCH_WIDTH + 2.0 * MARGIN),
            w = fmt2(width),
            h = fmt2(height),
        );
        if !self.meta.is_empty() {
            let pairs: Vec<String> = self
                .meta
                .iter()
                .map(|(k, v)| format!("{k}={}", v.replace("--", "-")))
                .collect();
            out.push_str(&format!("<!-- xg-meta {} -->\n", pairs.join(" ")));
        }
        for element in &self.underlays {
            out.push_str(element);
            out.push('\n');
        }
        out.push_str(&Self::markings());
        out.push('\n');
        for element in &self.overlays {
            out.push_str(element);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}

impl Default for PitchCanvas {
    fn default() -> Self {
        Self::new()
    }
}

pub fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Minimal well-formedness check used by tests: every opened tag closes,
/// the root is `<svg>`, and no stray `<` or `>` appear in text content.
pub fn is_well_formed_xml(svg: &str) -> bool {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = svg.trim();
    while let Some(start) = rest.find('<') {
        if rest[..start].contains('>') {
            return false;
        }
        let Some(end) = rest[start..].find('>') else {
            return false;
        };
        let tag = &rest[start + 1..start + end];
        rest = &rest[start + end + 1..];
        if tag.starts_with("!--") {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some(open) if open == name => {}
                _ => return false,
            }
        } else if !tag.ends_with('/') {
            let name: String = tag.chars().take_while(|c| !c.is_whitespace()).collect();
            stack.push(name);
        }
    }
    stack.is_empty() && !rest.contains('>')
}
