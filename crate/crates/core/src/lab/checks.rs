//! Pass/fail certifiers for the inequalities satisfied by spectral bounds of
//! essentially nonnegative families.
//!
//! Every checker returns a [`CheckOutcome`] whose `margin` is the signed
//! distance to the asserted inequality (nonnegative when it holds) and whose
//! verdict is `margin ≥ −tolerance`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gallery::{KarlinFamily, LinearFamily};
use crate::lab::sweep::{sweep_karlin_in_alpha, SweepResult};
use crate::matrix::SquareMatrix;
use crate::perron::{is_irreducible, perron_vectors, spectral_bound};
use crate::tolerances::{
    DERIVATIVE_AGREEMENT, DERIVATIVE_SLACK, FD_STEP, HOMOGENEITY_TOL, INEQUALITY_TOL,
    KARLIN_CONSTANT_TOL, STRICTNESS_TOL,
};

/// Which side of a strict/equality dichotomy an instance fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Strict,
    Equality,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Strict => "strict",
            Branch::Equality => "equality",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    pub margin: f64,
    pub tolerance: f64,
    /// Parameter values at the worst margin.
    pub witness: Vec<(String, f64)>,
    pub branch: Option<Branch>,
    pub detail: String,
}

impl CheckOutcome {
    pub(crate) fn new(check: &str, margin: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            passed: margin >= -tolerance,
            margin,
            tolerance,
            witness: Vec::new(),
            branch: None,
            detail: String::new(),
        }
    }

    pub(crate) fn witness(mut self, name: &str, value: f64) -> Self {
        self.witness.push((name.to_string(), value));
        self
    }

    pub(crate) fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub(crate) fn branch(mut self, branch: Branch) -> Self {
        self.branch = Some(branch);
        self
    }

    /// `name=value;name=value`, values in shortest round-trip form.
    pub fn witness_string(&self) -> String {
        self.witness
            .iter()
            .map(|(k, v)| format!("{k}={}", compact(*v)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Shortest round-trip form; integers print without a fraction and very
/// small or large magnitudes in exponent form.
fn compact(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Weak reduction inequality and strict/equality dichotomy along an m-sweep.
///
/// For every ordered pair of grid points `m < m + d` the gap
/// `spb(mA+V) + d·spb(A) − spb((m+d)A+V)` must be nonnegative. For each base
/// point the gaps must also be uniformly strict or uniformly zero; a mixture
/// fails, with the smallest strict gap at that base as the (negated) margin.
/// The dichotomy is only sampled at the grid resolution.
pub fn check_monotone_reduction(s: &SweepResult, spb_a: f64) -> CheckOutcome {
    let scale = s.scale().max(spb_a.abs());
    let tol = INEQUALITY_TOL * scale;
    let strict_tol = STRICTNESS_TOL * scale;
    let n = s.len();

    let mut margin = f64::INFINITY;
    let mut witness = (s.grid[0], s.grid[0]);
    let mut mixed_at: Option<(f64, f64)> = None;
    let mut any_strict = false;
    for i in 0..n {
        let (mut strict, mut equal) = (f64::INFINITY, false);
        for j in i + 1..n {
            let d = s.grid[j] - s.grid[i];
            let gap = s.values[i] + d * spb_a - s.values[j];
            if gap < margin {
                margin = gap;
                witness = (s.grid[i], s.grid[j]);
            }
            if gap > strict_tol {
                strict = strict.min(gap);
            } else {
                equal = true;
            }
        }
        any_strict |= strict.is_finite();
        if equal && strict.is_finite() && mixed_at.map_or(true, |(_, g)| strict > g) {
            mixed_at = Some((s.grid[i], strict));
        }
    }

    let regime = if spb_a < -tol {
        "spb(A) < 0: strictly decreasing"
    } else if spb_a <= tol {
        "spb(A) = 0: non-increasing"
    } else {
        "spb(A) > 0: weak inequality only"
    };
    let detail = format!("{regime}; dichotomy sampled on {n} grid points");

    if let Some((base, strict_gap)) = mixed_at {
        return CheckOutcome::new("monotone_reduction", margin.min(-strict_gap), tol)
            .witness("m", base)
            .detail(format!("{detail}; mixed strict/equality pairs at base m"));
    }
    let outcome = CheckOutcome::new("monotone_reduction", margin, tol)
        .witness("m", witness.0)
        .witness("m_plus_d", witness.1)
        .detail(detail);
    outcome.branch(if any_strict { Branch::Strict } else { Branch::Equality })
}

fn spb_at(f: &LinearFamily, m: f64) -> Result<f64> {
    spectral_bound(&f.at_m(m)).map(|d| d.spb).map_err(|e| e.at("m", m))
}

fn fd_step(m: f64) -> f64 {
    (FD_STEP * m.max(1.0)).min(0.5 * m)
}

/// Central finite difference of `m ↦ spb(m·A + V)`.
pub fn finite_difference_derivative(f: &LinearFamily, m: f64) -> Result<f64> {
    let h = fd_step(m);
    Ok((spb_at(f, m + h)? - spb_at(f, m - h)?) / (2.0 * h))
}

fn require_positive_irreducible(f: &LinearFamily, m: f64) -> Result<()> {
    if !(m > 0.0) {
        return Err(Error::InvalidGrid(format!("mixing rate must be positive, got {m}")));
    }
    if !is_irreducible(&f.at_m(m)) {
        return Err(Error::NotIrreducible);
    }
    Ok(())
}

/// `d/dm spb(m·A + V) ≤ spb(A)`, by central differences.
pub fn derivative_bound_check(f: &LinearFamily, m: f64) -> Result<CheckOutcome> {
    require_positive_irreducible(f, m)?;
    let spb_a = spectral_bound(f.a())?.spb;
    let fd = finite_difference_derivative(f, m)?;
    let tol = DERIVATIVE_SLACK * spb_a.abs().max(1.0);
    Ok(CheckOutcome::new("derivative_bound", spb_a - fd, tol)
        .witness("m", m)
        .witness("derivative", fd)
        .witness("spb_A", spb_a))
}

/// `uᵀ·A·v` at `m·A + V`: the derivative of the spectral bound in `m`.
pub fn perron_derivative(f: &LinearFamily, m: f64) -> Result<f64> {
    let (u, v) = perron_vectors(&f.at_m(m))?;
    let av = f.a().mul_vec(&v);
    Ok(u.iter().zip(&av).map(|(a, b)| a * b).sum())
}

/// Analytic `uᵀAv` against the central finite difference.
pub fn derivative_agreement_check(f: &LinearFamily, m: f64) -> Result<CheckOutcome> {
    require_positive_irreducible(f, m)?;
    let analytic = perron_derivative(f, m)?;
    let fd = finite_difference_derivative(f, m)?;
    let scale = analytic.abs().max(1.0);
    Ok(CheckOutcome::new("derivative_agreement", -(analytic - fd).abs() / scale, DERIVATIVE_AGREEMENT)
        .witness("m", m)
        .witness("analytic", analytic)
        .witness("finite_difference", fd))
}

/// `spb(A + D) − spb(A) ≥ u(A)ᵀ·D·v(A)` for irreducible `A` and diagonal `D`.
pub fn lindqvist_check(a: &SquareMatrix, d: &SquareMatrix) -> Result<CheckOutcome> {
    if a.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            actual: d.n(),
        });
    }
    if !d.is_diagonal() {
        return Err(Error::InvalidFamily("D must be diagonal".into()));
    }
    let base = spectral_bound(a)?;
    let (u, v) = match (base.u, base.v) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::NotIrreducible),
    };
    let perturbed = spectral_bound(&(a + d))?.spb;
    let rhs: f64 = (0..a.n()).map(|i| u[i] * d[(i, i)] * v[i]).sum();
    let lhs = perturbed - base.spb;
    let scale = [perturbed, base.spb, rhs].iter().fold(1.0f64, |m, x| m.max(x.abs()));
    Ok(CheckOutcome::new("lindqvist", lhs - rhs, INEQUALITY_TOL * scale)
        .witness("lhs", lhs)
        .witness("rhs", rhs))
}

/// `eᵀ·A·(u∘v) ≥ spb(A)`, with equality exactly when `eᵀA = spb(A)·eᵀ`.
///
/// The check fails when the column sums all equal `spb(A)` but the margin is
/// not zero. The converse is only reported: near the equality case the margin
/// shrinks quadratically in the column-sum deviation, so a sampled margin
/// cannot separate "equal" from "nearly equal".
pub fn kirkland_check(a: &SquareMatrix) -> Result<CheckOutcome> {
    let data = spectral_bound(a)?;
    let (u, v) = match (data.u, data.v) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::NotIrreducible),
    };
    let columns = a.column_sums();
    let lhs: f64 = (0..a.n()).map(|j| columns[j] * u[j] * v[j]).sum();
    let scale = columns
        .iter()
        .chain([&lhs, &data.spb])
        .fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = INEQUALITY_TOL * scale;
    let margin = lhs - data.spb;
    let column_deviation = columns.iter().fold(0.0f64, |m, c| m.max((c - data.spb).abs()));
    let columns_equal = column_deviation <= tol;
    let equality = margin.abs() <= tol;

    let outcome = CheckOutcome::new("kirkland", margin, tol)
        .witness("lhs", lhs)
        .witness("spb", data.spb)
        .witness("column_deviation", column_deviation)
        .branch(if equality { Branch::Equality } else { Branch::Strict });
    if columns_equal && !equality {
        let mut failed = outcome.detail("column sums equal spb(A) but the margin is nonzero");
        failed.passed = false;
        failed.margin = -margin.abs();
        return Ok(failed);
    }
    let detail = match (equality, columns_equal) {
        (true, true) => "equality with eT A = spb eT",
        (true, false) => "near-equality; column sums differ from spb",
        _ => "strict",
    };
    Ok(outcome.detail(detail))
}

/// `ρ(M(α)D)` non-increasing in α; strictly decreasing unless `D = cI`, in
/// which case it must be constant.
pub fn karlin_monotonicity_check(f: &KarlinFamily, alpha_grid: &[f64]) -> Result<CheckOutcome> {
    if !is_irreducible(f.p()) {
        return Err(Error::NotIrreducible);
    }
    let sweep = sweep_karlin_in_alpha(f, alpha_grid)?;
    let values = &sweep.values;
    if f.is_scalar_growth() {
        let (k, drift) = values
            .iter()
            .map(|v| (v - values[0]).abs())
            .enumerate()
            .fold((0, 0.0), |best, (k, d)| if d > best.1 { (k, d) } else { best });
        return Ok(CheckOutcome::new("karlin_monotonicity", -drift, KARLIN_CONSTANT_TOL)
            .witness("alpha", sweep.grid[k])
            .branch(Branch::Equality)
            .detail("D = cI: constant spectral radius"));
    }
    let tol = INEQUALITY_TOL * sweep.scale();
    let (k, drop) = values
        .windows(2)
        .map(|w| w[0] - w[1])
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, d)| if d < best.1 { (k, d) } else { best });
    Ok(CheckOutcome::new("karlin_monotonicity", drop - tol, 0.0)
        .witness("alpha", sweep.grid[k])
        .witness("alpha_next", sweep.grid[k + 1])
        .branch(Branch::Strict)
        .detail("D non-scalar: strictly decreasing spectral radius"))
}

/// `spb(α·(mA + βV)) = α·spb(mA + βV)` for each α. The margin is the worst
/// relative error, negated.
pub fn homogeneity_check(f: &LinearFamily, m: f64, beta: f64, alphas: &[f64]) -> Result<CheckOutcome> {
    let base_matrix = f.eval(m, beta);
    let base = spectral_bound(&base_matrix)?.spb;
    let mut worst = (0.0, alphas.first().copied().unwrap_or(1.0));
    for &alpha in alphas {
        if !(alpha > 0.0) {
            return Err(Error::InvalidGrid(format!("scaling factors must be positive, got {alpha}")));
        }
        let scaled = spectral_bound(&base_matrix.scale(alpha)).map_err(|e| e.at("alpha", alpha))?.spb;
        let expected = alpha * base;
        let err = (scaled - expected).abs() / expected.abs().max(1.0);
        if err > worst.0 {
            worst = (err, alpha);
        }
    }
    Ok(CheckOutcome::new("homogeneity", -worst.0, HOMOGENEITY_TOL)
        .witness("alpha", worst.1)
        .witness("m", m)
        .witness("beta", beta))
}
