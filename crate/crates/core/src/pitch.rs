//! StatsBomb pitch conventions: 120x80 units, the attacking goal line at
//! x = 120, goal center (120, 40), posts at (120, 36) and (120, 44).

use serde::{Deserialize, Serialize};

pub const PITCH_LENGTH: f64 = 120.0;
pub const PITCH_WIDTH: f64 = 80.0;

pub const GOAL_CENTER: PitchPoint = PitchPoint { x: 120.0, y: 40.0 };
pub const LEFT_POST: PitchPoint = PitchPoint { x: 120.0, y: 36.0 };
pub const RIGHT_POST: PitchPoint = PitchPoint { x: 120.0, y: 44.0 };

pub const PENALTY_AREA_X: f64 = 102.0;
pub const PENALTY_AREA_Y_MIN: f64 = 18.0;
pub const PENALTY_AREA_Y_MAX: f64 = 62.0;
pub const PENALTY_SPOT: PitchPoint = PitchPoint { x: 108.0, y: 40.0 };

pub const SIX_YARD_X: f64 = 114.0;
pub const SIX_YARD_Y_MIN: f64 = 30.0;
pub const SIX_YARD_Y_MAX: f64 = 50.0;

pub const CENTER_CIRCLE_RADIUS: f64 = 10.0;

/// A point in StatsBomb pitch coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PitchPoint {
    pub x: f64,
    pub y: f64,
}

impl PitchPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn in_bounds(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && (0.0..=PITCH_LENGTH).contains(&self.x)
            && (0.0..=PITCH_WIDTH).contains(&self.y)
    }

    pub fn distance_to(&self, other: PitchPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Nearest in-bounds point (non-finite coordinates collapse to 0).
    pub fn clamped(&self) -> PitchPoint {
        let fix = |v: f64, hi: f64| {
            if v.is_finite() {
                v.clamp(0.0, hi)
            } else {
                0.0
            }
        };
        PitchPoint {
            x: fix(self.x, PITCH_LENGTH),
            y: fix(self.y, PITCH_WIDTH),
        }
    }
}

impl From<(f64, f64)> for PitchPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}
