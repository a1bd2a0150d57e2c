//! Every tolerance used by the checkers, in one place.
//!
//! "Scale" below means `max(1, max |values involved|)` unless a check says
//! otherwise.

/// Second differences above `−CONVEXITY_TOL·scale` count as convex.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Second differences (or inequality gaps) above `STRICTNESS_TOL·scale` count
/// as strict; within it, as equality.
pub const STRICTNESS_TOL: f64 = 1e-9;

/// Slack for the spectral-bound inequalities (reduction, Lindqvist, Kirkland,
/// Karlin strict decrease).
pub const INEQUALITY_TOL: f64 = 1e-9;

/// Central-difference step relative to `max(1, m)`.
pub const FD_STEP: f64 = 1e-5;

/// `d spb/dm ≤ spb(A) + DERIVATIVE_SLACK·max(1, |spb(A)|)`.
pub const DERIVATIVE_SLACK: f64 = 1e-6;

/// Analytic vs finite-difference derivative, relative to `max(1, |analytic|)`.
pub const DERIVATIVE_AGREEMENT: f64 = 1e-6;

/// `spb(αM) = α·spb(M)` relative to `max(1, |α·spb(M)|)`.
pub const HOMOGENEITY_TOL: f64 = 1e-10;

/// `ρ(M(α)·cI)` must stay within this of its value at the first grid point.
pub const KARLIN_CONSTANT_TOL: f64 = 1e-10;

/// Oracle agreement for the Perron solver.
pub const ORACLE_AGREEMENT: f64 = 1e-8;

/// Entrywise floor for `e^{tM}` to count as a positive matrix.
pub const SEMIGROUP_POSITIVITY_FLOOR: f64 = -1e-10;

/// Growth-bound estimate vs spectral bound, relative to `max(1, |spb|)`.
pub const GROWTH_BOUND_TOL: f64 = 1e-3;

/// Allowed increase between consecutive growth-bound estimates along an
/// m-sweep with `spb(A) = 0`.
pub const GROWTH_MONOTONE_SLACK: f64 = 2e-3;
