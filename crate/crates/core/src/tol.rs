//! Shared numerical tolerances.

/// A constraint, max-branch or cone face is treated as active within this gap.
pub const ACTIVE: f64 = 1e-8;

/// Membership of a point in a Minkowski sum / cone.
pub const MEMBERSHIP: f64 = 1e-8;

/// Feasibility slack accepted for projections onto convex pieces.
pub const PROJECTION: f64 = 1e-9;

/// Slack used when certifying that a stored witness satisfies its piece.
pub const WITNESS: f64 = 1e-10;

/// Relative rank cut-off for singular values.
pub const RANK: f64 = 1e-10;

/// Stationarity gap: `dist(∂, −N_S(x)) <= STATIONARY` counts as stationary.
pub const STATIONARY: f64 = 1e-8;

/// Bisection resolution for local moduli.
pub const MODULUS_BISECTION: f64 = 1e-6;

/// Upper end of the modulus bracket.
pub const MODULUS_MAX: f64 = 10.0;

/// Displacement at which Dykstra / alternating projections stop.
pub const DISPLACEMENT: f64 = 1e-12;

/// Default interior margin for `int` tests.
pub const INTERIOR_MARGIN: f64 = 1e-3;

/// Default tail window and ψ slack for the limsup surrogate.
pub const TAIL_WINDOW: usize = 50;
pub const PSI: f64 = 1e-6;

/// Defaults for finite-identification checks.
pub const IDENTIFICATION: f64 = 1e-6;
pub const RHO: f64 = 1e-6;

/// Gradient gap threshold for the gradient-continuity condition.
pub const GRADIENT_GAP: f64 = 1e-6;

/// Sets a point is considered outside of for ψ (distance must exceed this).
pub const OFF_SET: f64 = 1e-10;
