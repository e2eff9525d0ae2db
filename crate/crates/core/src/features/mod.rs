//! Shot feature engineering and design-matrix assembly.

pub mod encode;
pub mod geometry;

pub use encode::{
    fit_encoder, infer_dominant_foot, load_encoder, load_matrix_csv, save_encoder,
    save_matrix_csv, strong_footed, transform, transform_seq, DominantFootMap, EncoderState,
    FeatureConfig, FeatureError, FeatureKind, FeatureMatrix, FeatureSchema, FeatureSet,
    FeatureSpec, Foot, StrongFooted, DEFAULT_PRESSURE_RADIUS,
};
pub use geometry::{
    angle_to_goal_center, distance_to_goal, gk_distance_from_goal_center,
    opponents_in_shot_triangle, opponents_within_radius, within_penalty_area, GeometryError,
};
