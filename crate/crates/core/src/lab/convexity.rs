//! Sampled convexity certificates from midpoint second differences.
//!
//! Convexity is only certified on the grid: nothing is claimed between
//! sample points.

use crate::error::{Error, Result};
use crate::gallery::{KingmanFamily, LinearFamily};
use crate::lab::sweep::{sweep_kingman_log_rho, sweep_spb_in_beta, SweepResult};
use crate::perron::is_irreducible;
use crate::tolerances::{CONVEXITY_TOL, STRICTNESS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Most negative second difference, or 0 when there is none.
    pub worst_violation: f64,
    /// Grid index of the centre point of the minimal second difference.
    pub witness_index: usize,
    /// Minimum second difference (may be negative).
    pub strictness_margin: f64,
    /// `max(1, max |values|)`; tolerances are relative to it.
    pub scale: f64,
}

impl ConvexityReport {
    /// Every second difference exceeds `STRICTNESS_TOL·scale`.
    pub fn is_strict(&self) -> bool {
        self.strictness_margin > STRICTNESS_TOL * self.scale
    }
}

/// Second differences `v[k−1] − 2v[k] + v[k+1]` on a uniform grid.
pub fn check_midpoint_convexity(s: &SweepResult) -> Result<ConvexityReport> {
    if !s.uniform {
        return Err(Error::NonUniformGrid);
    }
    let scale = s.scale();
    let (witness_index, strictness_margin) = s
        .values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .enumerate()
        .fold((1, f64::INFINITY), |best, (k, d)| if d < best.1 { (k + 1, d) } else { best });
    let worst_violation = strictness_margin.min(0.0);
    Ok(ConvexityReport {
        convex: worst_violation >= -CONVEXITY_TOL * scale,
        worst_violation,
        witness_index,
        strictness_margin,
        scale,
    })
}

/// `log ρ(A(θ))` must be midpoint convex.
pub fn kingman_superconvexity_check(f: &KingmanFamily, theta_grid: &[f64]) -> Result<ConvexityReport> {
    let sweep = sweep_kingman_log_rho(f, theta_grid)?;
    check_midpoint_convexity(&sweep)
}

/// Evidence for or against strict convexity of `β ↦ spb(A + βV)`.
///
/// The expected pattern (strict iff `V` is not a scalar multiple of the
/// identity) is an open conjecture in general; this probe only records what
/// the instance shows.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictConvexityProbe {
    pub report: ConvexityReport,
    pub strict: bool,
    pub scalar_v: bool,
}

impl StrictConvexityProbe {
    /// True when the observation matches the conjectured pattern.
    pub fn matches_conjecture(&self) -> bool {
        self.strict != self.scalar_v
    }
}

pub fn strict_convexity_probe(f: &LinearFamily, beta_grid: &[f64]) -> Result<StrictConvexityProbe> {
    if !is_irreducible(f.a()) {
        return Err(Error::NotIrreducible);
    }
    let sweep = sweep_spb_in_beta(f, beta_grid)?;
    let report = check_midpoint_convexity(&sweep)?;
    let diag = f.v().diagonal();
    Ok(StrictConvexityProbe {
        strict: report.is_strict(),
        scalar_v: diag.iter().all(|&d| d == diag[0]),
        report,
    })
}
