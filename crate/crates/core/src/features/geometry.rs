//! Engineered shot geometry: distance and angle to goal, keeper
//! displacement, obstruction counts inside the shot triangle, and pressure
//! within a radius of the shooter.

use thiserror::Error;

use crate::ingest::FreezeFramePlayer;
use crate::pitch::{
    PitchPoint, GOAL_CENTER, LEFT_POST, PENALTY_AREA_X, PENALTY_AREA_Y_MAX, PENALTY_AREA_Y_MIN,
    RIGHT_POST,
};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("location ({0}, {1}) is outside the 120x80 pitch")]
    OutOfBounds(f64, f64),
    #[error("shot location coincides with the goal center")]
    DegenerateAtGoalCenter,
    #[error("pressure radius must be positive, got {0}")]
    NonPositiveRadius(f64),
}

fn check_bounds(location: PitchPoint) -> Result<(), GeometryError> {
    if location.in_bounds() {
        Ok(())
    } else {
        Err(GeometryError::OutOfBounds(location.x, location.y))
    }
}

/// Euclidean distance from the shot location to the goal center (120, 40).
pub fn distance_to_goal(location: PitchPoint) -> Result<f64, GeometryError> {
    check_bounds(location)?;
    Ok(location.distance_to(GOAL_CENTER))
}

/// Absolute angle between the shot-to-goal-center vector and the
/// perpendicular to the goal line. 0 = straight on.
pub fn angle_to_goal_center(location: PitchPoint) -> Result<f64, GeometryError> {
    check_bounds(location)?;
    let dx = GOAL_CENTER.x - location.x;
    let dy = GOAL_CENTER.y - location.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(GeometryError::DegenerateAtGoalCenter);
    }
    Ok(dy.abs().atan2(dx))
}

/// Distance of the opposing keeper from the goal center; 0 when no keeper
/// is present (the missing-value rule).
pub fn gk_distance_from_goal_center(freeze: &[FreezeFramePlayer]) -> f64 {
    freeze
        .iter()
        .find(|p| p.keeper && !p.teammate)
        .map(|p| p.location.distance_to(GOAL_CENTER))
        .unwrap_or(0.0)
}

/// Barycentric point-in-triangle membership, boundary inclusive.
fn in_triangle(p: PitchPoint, a: PitchPoint, b: PitchPoint, c: PitchPoint) -> bool {
    let det = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
    if det == 0.0 {
        // Degenerate triangle (shot on the goal line): membership means
        // lying on the post-to-post segment through the shot location.
        return on_segment(p, a, b) || on_segment(p, b, c) || on_segment(p, a, c);
    }
    let s = ((b.y - c.y) * (p.x - c.x) + (c.x - b.x) * (p.y - c.y)) / det;
    let t = ((c.y - a.y) * (p.x - c.x) + (a.x - c.x) * (p.y - c.y)) / det;
    s >= 0.0 && t >= 0.0 && s + t <= 1.0
}

fn on_segment(p: PitchPoint, a: PitchPoint, b: PitchPoint) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if cross != 0.0 {
        return false;
    }
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Opponents (outfielders only; the keeper is its own feature) inside the
/// triangle spanned by the shot location and the two posts.
pub fn opponents_in_shot_triangle(location: PitchPoint, freeze: &[FreezeFramePlayer]) -> usize {
    freeze
        .iter()
        .filter(|p| !p.teammate && !p.keeper)
        .filter(|p| in_triangle(p.location, location, LEFT_POST, RIGHT_POST))
        .count()
}

/// Opponents (keeper included) within `radius` of the shooter, closed ball.
pub fn opponents_within_radius(
    location: PitchPoint,
    freeze: &[FreezeFramePlayer],
    radius: f64,
) -> Result<usize, GeometryError> {
    if !(radius > 0.0) {
        return Err(GeometryError::NonPositiveRadius(radius));
    }
    Ok(freeze
        .iter()
        .filter(|p| !p.teammate)
        .filter(|p| p.location.distance_to(location) <= radius)
        .count())
}

/// Inside the attacking penalty area, boundaries inclusive.
pub fn within_penalty_area(location: PitchPoint) -> bool {
    location.x >= PENALTY_AREA_X
        && location.y >= PENALTY_AREA_Y_MIN
        && location.y <= PENALTY_AREA_Y_MAX
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn opponent(x: f64, y: f64) -> FreezeFramePlayer {
        FreezeFramePlayer {
            location: PitchPoint::new(x, y),
            teammate: false,
            keeper: false,
            player_id: None,
        }
    }

    fn keeper(x: f64, y: f64) -> FreezeFramePlayer {
        FreezeFramePlayer {
            keeper: true,
            ..opponent(x, y)
        }
    }

    #[test]
    fn distance_reference_values() {
        assert_eq!(distance_to_goal(PitchPoint::new(120.0, 40.0)).unwrap(), 0.0);
        assert_eq!(distance_to_goal(PitchPoint::new(108.0, 40.0)).unwrap(), 12.0);
        // sqrt(18^2 + 16^2)
        let d = distance_to_goal(PitchPoint::new(102.0, 56.0)).unwrap();
        assert!((d - 580.0_f64.sqrt()).abs() < 1e-12);
        assert!((d - 24.0832).abs() < 1e-4);
        assert_eq!(
            distance_to_goal(PitchPoint::new(-1.0, 40.0)),
            Err(GeometryError::OutOfBounds(-1.0, 40.0))
        );
    }

    #[test]
    fn angle_reference_values() {
        assert_eq!(
            angle_to_goal_center(PitchPoint::new(108.0, 40.0)).unwrap(),
            0.0
        );
        let a = angle_to_goal_center(PitchPoint::new(108.0, 52.0)).unwrap();
        assert!((a - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((a - 0.7854).abs() < 1e-4);
        let mirrored = angle_to_goal_center(PitchPoint::new(108.0, 28.0)).unwrap();
        assert_eq!(a, mirrored);
        assert_eq!(
            angle_to_goal_center(GOAL_CENTER),
            Err(GeometryError::DegenerateAtGoalCenter)
        );
    }

    #[test]
    fn keeper_distance_reference_values() {
        assert_eq!(gk_distance_from_goal_center(&[keeper(120.0, 40.0)]), 0.0);
        let d = gk_distance_from_goal_center(&[keeper(118.0, 42.0)]);
        assert!((d - 8.0_f64.sqrt()).abs() < 1e-12);
        assert!((d - 2.8284).abs() < 1e-4);
        assert_eq!(gk_distance_from_goal_center(&[]), 0.0);
        // Own keeper in frame does not count.
        let own = FreezeFramePlayer {
            teammate: true,
            ..keeper(118.0, 42.0)
        };
        assert_eq!(gk_distance_from_goal_center(&[own]), 0.0);
    }

    #[test]
    fn triangle_counts() {
        let shot = PitchPoint::new(110.0, 40.0);
        assert_eq!(opponents_in_shot_triangle(shot, &[]), 0);
        assert_eq!(
            opponents_in_shot_triangle(shot, &[opponent(115.0, 40.0)]),
            1
        );
        assert_eq!(
            opponents_in_shot_triangle(shot, &[opponent(115.0, 50.0)]),
            0
        );
        // Boundary (the shot location itself) counts as inside.
        assert_eq!(
            opponents_in_shot_triangle(shot, &[opponent(110.0, 40.0)]),
            1
        );
        // Keepers and teammates never count.
        assert_eq!(opponents_in_shot_triangle(shot, &[keeper(115.0, 40.0)]), 0);
        let mate = FreezeFramePlayer {
            teammate: true,
            ..opponent(115.0, 40.0)
        };
        assert_eq!(opponents_in_shot_triangle(shot, &[mate]), 0);
    }

    #[test]
    fn radius_counts() {
        let shot = PitchPoint::new(110.0, 40.0);
        assert_eq!(opponents_within_radius(shot, &[], 5.0).unwrap(), 0);
        // Closed ball: distance exactly r is counted.
        assert_eq!(
            opponents_within_radius(shot, &[opponent(115.0, 40.0)], 5.0).unwrap(),
            1
        );
        assert_eq!(
            opponents_within_radius(
                shot,
                &[opponent(112.0, 40.0), opponent(118.0, 40.0)],
                5.0
            )
            .unwrap(),
            1
        );
        // The keeper is included here, unlike the triangle count.
        assert_eq!(
            opponents_within_radius(shot, &[keeper(112.0, 40.0)], 5.0).unwrap(),
            1
        );
        assert_eq!(
            opponents_within_radius(shot, &[], 0.0),
            Err(GeometryError::NonPositiveRadius(0.0))
        );
    }

    #[test]
    fn penalty_area_boundaries_inclusive() {
        assert!(within_penalty_area(PitchPoint::new(110.0, 40.0)));
        assert!(!within_penalty_area(PitchPoint::new(90.0, 40.0)));
        assert!(within_penalty_area(PitchPoint::new(102.0, 18.0)));
        assert!(within_penalty_area(PitchPoint::new(102.0, 62.0)));
        assert!(!within_penalty_area(PitchPoint::new(101.9, 40.0)));
    }

    /// Independent oracle: cross-product sign test, boundary inclusive.
    fn triangle_oracle(p: PitchPoint, a: PitchPoint, b: PitchPoint, c: PitchPoint) -> bool {
        let cross = |o: PitchPoint, u: PitchPoint, v: PitchPoint| {
            (u.x - o.x) * (v.y - o.y) - (u.y - o.y) * (v.x - o.x)
        };
        let d1 = cross(a, b, p);
        let d2 = cross(b, c, p);
        let d3 = cross(c, a, p);
        let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
        let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
        !(has_neg && has_pos)
    }

    proptest! {
        #[test]
        fn distance_and_angle_mirror_symmetry(x in 0.0..119.9f64, d in 0.0..39.9f64) {
            // 40 +- d rounds, so compare at 1e-12 relative rather than
            // bit-exact.
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
            let up = PitchPoint::new(x, 40.0 + d);
            let down = PitchPoint::new(x, 40.0 - d);
            prop_assert!(close(
                distance_to_goal(up).unwrap(),
                distance_to_goal(down).unwrap()
            ));
            prop_assert!(close(
                angle_to_goal_center(up).unwrap(),
                angle_to_goal_center(down).unwrap()
            ));
        }

        #[test]
        fn central_shots_have_zero_angle(x in 0.0..119.99f64) {
            prop_assert_eq!(angle_to_goal_center(PitchPoint::new(x, 40.0)).unwrap(), 0.0);
        }

        #[test]
        fn triangle_matches_cross_product_oracle(
            sx in 0.0..119.5f64, sy in 0.0..80.0f64,
            px in 0.0..120.0f64, py in 0.0..80.0f64,
        ) {
            let shot = PitchPoint::new(sx, sy);
            let opp = opponent(px, py);
            let counted = opponents_in_shot_triangle(shot, std::slice::from_ref(&opp)) == 1;
            let oracle = triangle_oracle(opp.location, shot, LEFT_POST, RIGHT_POST);
            prop_assert_eq!(counted, oracle);
        }

        #[test]
        fn triangle_never_exceeds_opponent_count(
            sx in 0.0..120.0f64, sy in 0.0..80.0f64,
            players in proptest::collection::vec((0.0..120.0f64, 0.0..80.0f64, proptest::bool::ANY), 0..12),
        ) {
            let freeze: Vec<FreezeFramePlayer> = players
                .iter()
                .map(|&(x, y, teammate)| FreezeFramePlayer {
                    location: PitchPoint::new(x, y),
                    teammate,
                    keeper: false,
                    player_id: None,
                })
                .collect();
            let opponents = freeze.iter().filter(|p| !p.teammate).count();
            let shot = PitchPoint::new(sx, sy);
            prop_assert!(opponents_in_shot_triangle(shot, &freeze) <= opponents);
        }

        #[test]
        fn radius_count_is_monotone(
            r1 in 0.1..30.0f64, extra in 0.0..30.0f64,
            players in proptest::collection::vec((0.0..120.0f64, 0.0..80.0f64), 0..12),
        ) {
            let freeze: Vec<FreezeFramePlayer> =
                players.iter().map(|&(x, y)| opponent(x, y)).collect();
            let shot = PitchPoint::new(100.0, 40.0);
            let small = opponents_within_radius(shot, &freeze, r1).unwrap();
            let large = opponents_within_radius(shot, &freeze, r1 + extra).unwrap();
            prop_assert!(small <= large);
        }
    }
}
