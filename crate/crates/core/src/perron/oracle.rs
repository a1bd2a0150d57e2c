//! Brute-force eigenvalue oracle, independent of the Perron solver.
//!
//! Characteristic polynomial by Faddeev–LeVerrier, roots by Durand–Kerner.
//! Only meant for small matrices: the coefficient recursion loses accuracy
//! quickly with dimension, and clustered roots converge slowly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

pub const ORACLE_MAX_DIM: usize = 8;
const MAX_ITERATIONS: usize = 10_000;
const STEP_TOL: f64 = 1e-12;

/// All eigenvalues of `m` (with multiplicity), `n ≤ 8`.
pub fn eigenvalues_oracle(m: &SquareMatrix) -> Result<Vec<Complex64>> {
    let n = m.n();
    if n > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    let scale = m.max_abs() * n as f64;
    if scale == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let coeffs = characteristic_polynomial(&m.scale(1.0 / scale));
    let roots = durand_kerner(&coeffs)?;
    Ok(roots.into_iter().map(|z| z * scale).collect())
}

/// Largest real part over the oracle's eigenvalues.
pub fn max_real_part(m: &SquareMatrix) -> Result<f64> {
    Ok(eigenvalues_oracle(m)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Coefficients `c[0..=n]` of `det(λI − A) = Σ c[k] λᵏ`, with `c[n] = 1`.
pub fn characteristic_polynomial(a: &SquareMatrix) -> Vec<f64> {
    let n = a.n();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = SquareMatrix::zeros(n);
    for k in 1..=n {
        mk = a.matmul(&mk).shift(c[n + 1 - k]);
        let am = a.matmul(&mk);
        let trace: f64 = (0..n).map(|i| am[(i, i)]).sum();
        c[n - k] = -trace / k as f64;
    }
    c
}

fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn durand_kerner(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    // Perturbed unit-circle starts; the scaled roots lie in the unit disk.
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(1.0 + 0.05 * k as f64 / n as f64, angle)
        })
        .collect();
    let mut step = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        step = 0.0;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                z[i] += Complex64::new(1e-8, 1e-8);
                step = f64::INFINITY;
                continue;
            }
            let delta = eval(coeffs, z[i]) / denom;
            z[i] -= delta;
            step = step.max(delta.norm());
        }
        if step < STEP_TOL {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: step,
    })
}
