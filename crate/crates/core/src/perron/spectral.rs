//! Spectral bound and Perron vectors of essentially nonnegative matrices.
//!
//! For an irreducible input the solver shifts `M` by
//! `s = max(0, −min M[i][i]) + 1`, which makes `M + sI` nonnegative with a
//! positive diagonal and therefore primitive, and power-iterates it with a
//! Rayleigh-quotient estimate. The power-iteration result is then refined by
//! a few steps of shifted inverse iteration at `σ = spb + δ`, which reuses one
//! LU factorization for both the right and the left Perron vector. Reducible
//! inputs are split into strongly connected components; the spectral bound
//! is the maximum over the diagonal blocks and the Perron vectors are
//! reported as absent.

use crate::error::{Error, Result};
use crate::matrix::{dot, max_abs, SquareMatrix};
use crate::perron::lu::Lu;
use crate::perron::scc::SccDecomposition;

/// Spectral bound plus, for irreducible matrices, the Perron vectors.
///
/// `v` is normalized so that `eᵀv = 1` and `u` so that `uᵀv = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub spb: f64,
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
    pub iterations: usize,
    /// Max-norm of `(M − spb·I)v`, or the worst block residual when reducible.
    pub residual: f64,
}

impl SpectralData {
    pub fn has_vectors(&self) -> bool {
        self.u.is_some() && self.v.is_some()
    }
}

/// Stopping rules for the Perron solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative change of successive power-iteration estimates.
    pub estimate_tol: f64,
    /// Residual bound relative to `1 + ‖M‖∞`.
    pub residual_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            estimate_tol: 1e-13,
            residual_tol: 1e-10,
            max_iterations: 200_000,
        }
    }
}

const POLISH_STEPS: usize = 60;

/// True iff every off-diagonal entry is `≥ 0` (exact comparison).
pub fn is_essentially_nonnegative(m: &SquareMatrix) -> bool {
    m.off_diagonal().all(|(_, _, x)| x >= 0.0)
}

/// True iff the off-diagonal sparsity digraph is strongly connected.
/// A `1 × 1` matrix counts as irreducible.
pub fn is_irreducible(m: &SquareMatrix) -> bool {
    SccDecomposition::of(m).is_single()
}

pub fn spectral_bound(m: &SquareMatrix) -> Result<SpectralData> {
    spectral_bound_with(m, &SolverOptions::default())
}

pub fn spectral_bound_with(m: &SquareMatrix, opts: &SolverOptions) -> Result<SpectralData> {
    check_essentially_nonnegative(m)?;
    let scc = SccDecomposition::of(m);
    if scc.is_single() {
        return perron_irreducible(m, opts);
    }

    let mut out = SpectralData {
        spb: f64::NEG_INFINITY,
        u: None,
        v: None,
        iterations: 0,
        residual: 0.0,
    };
    for c in 0..scc.component_count {
        let members = scc.members(c);
        let block = m.submatrix(&members);
        let data = perron_irreducible(&block, opts)?;
        out.spb = out.spb.max(data.spb);
        out.iterations += data.iterations;
        out.residual = out.residual.max(data.residual);
    }
    Ok(out)
}

/// Left and right Perron vectors `(u, v)` with `uᵀv = 1`, `eᵀv = 1`.
pub fn perron_vectors(m: &SquareMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    check_essentially_nonnegative(m)?;
    if !is_irreducible(m) {
        return Err(Error::NotIrreducible);
    }
    let data = perron_irreducible(m, &SolverOptions::default())?;
    Ok((data.u.expect("irreducible"), data.v.expect("irreducible")))
}

fn check_essentially_nonnegative(m: &SquareMatrix) -> Result<()> {
    match m.off_diagonal().find(|&(_, _, x)| x < 0.0) {
        Some((row, col, value)) => Err(Error::NotEssentiallyNonnegative { row, col, value }),
        None => Ok(()),
    }
}

fn perron_irreducible(m: &SquareMatrix, opts: &SolverOptions) -> Result<SpectralData> {
    let n = m.n();
    if n == 1 {
        return Ok(SpectralData {
            spb: m[(0, 0)],
            u: Some(vec![1.0]),
            v: Some(vec![1.0]),
            iterations: 0,
            residual: 0.0,
        });
    }

    let norm = m.norm_inf();
    let residual_bound = opts.residual_tol * (1.0 + norm);
    let shift = (-m.diagonal().into_iter().fold(f64::INFINITY, f64::min)).max(0.0) + 1.0;
    let shifted = m.shift(shift);

    // Power iteration on the primitive matrix M + sI.
    let mut v = vec![1.0 / n as f64; n];
    let mut estimate = f64::NAN;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        let w = shifted.mul_vec(&v);
        let rho = dot(&v, &w) / dot(&v, &v);
        residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - rho * vi).abs())
            .fold(0.0, f64::max);
        // Relative to the shifted estimate: its rounding noise scales with ρ, not ρ − s.
        let settled = (rho - estimate).abs() < opts.estimate_tol * (1.0 + rho.abs());
        estimate = rho;
        let total: f64 = w.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            break;
        }
        v = w.into_iter().map(|x| x / total).collect();
        if settled && residual < residual_bound {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }

    let polished = polish(m, estimate - shift, &v, norm);
    let (u, v, steps) = match polished {
        Some(p) => p,
        None => {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            })
        }
    };
    iterations += steps;

    // Two-sided Rayleigh quotient; u is already scaled to uᵀv = 1.
    let mv = m.mul_vec(&v);
    let spb = dot(&u, &mv);
    let residual = mv
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - spb * b).abs())
        .fold(0.0, f64::max);
    if !(residual <= residual_bound) {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(SpectralData {
        spb,
        u: Some(u),
        v: Some(v),
        iterations,
        residual,
    })
}

/// Shifted inverse iteration at `σ = estimate + δ` for both Perron vectors.
fn polish(
    m: &SquareMatrix,
    estimate: f64,
    v0: &[f64],
    norm: f64,
) -> Option<(Vec<f64>, Vec<f64>, usize)> {
    let n = m.n();
    let mut delta = 1e-7 * (1.0 + norm);
    let lu = loop {
        let sigma = estimate + delta;
        let c = SquareMatrix::scalar(n, sigma).combine(1.0, m, -1.0);
        if let Some(lu) = Lu::factor(&c, 0.0) {
            break lu;
        }
        delta *= 10.0;
        if delta > 1.0 + norm {
            return None;
        }
    };

    let (v, right_steps) = inverse_iterate(v0, |x| lu.solve(x))?;
    let (mut u, left_steps) = inverse_iterate(&vec![1.0 / n as f64; n], |x| lu.solve_transpose(x))?;
    let uv = dot(&u, &v);
    if !(uv > 0.0) {
        return None;
    }
    u.iter_mut().for_each(|x| *x /= uv);
    Some((u, v, right_steps + left_steps))
}

fn inverse_iterate(start: &[f64], solve: impl Fn(&[f64]) -> Vec<f64>) -> Option<(Vec<f64>, usize)> {
    let mut x = start.to_vec();
    let mut last_change = f64::INFINITY;
    for step in 1..=POLISH_STEPS {
        let y = solve(&x);
        let total: f64 = y.iter().sum();
        if total == 0.0 || !total.is_finite() {
            return None;
        }
        let next: Vec<f64> = y.into_iter().map(|a| a / total).collect();
        let change = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        let floor = 8.0 * f64::EPSILON * max_abs(&x);
        if change <= floor || (step > 3 && change >= last_change) {
            return Some((x, step));
        }
        last_change = change;
    }
    Some((x, POLISH_STEPS))
}
