//! Numerical thresholds shared across the crate.

/// Minimum pairwise gap, relative to `1 + max|E|`, below which a sample is
/// treated as an exceptional point.
pub const DEGENERACY: f64 = 1e-8;

/// Real parts closer than this (relative) at the base point are a tie.
pub const TIE: f64 = 1e-9;

/// Largest accepted ratio of a band step to the local band separation.
pub const MATCH_RATIO: f64 = 0.5;

/// Width in `k` to which crossing locations are bisected.
pub const CROSSING_WIDTH: f64 = 2.0 * std::f64::consts::PI * 1e-6;

/// Normalized discriminant magnitude accepted as an exceptional point.
pub const EP_DISCRIMINANT: f64 = 1e-10;

/// Allowed distance of an accumulated winding from the nearest integer.
pub const WINDING_RESIDUAL: f64 = 1e-6;
