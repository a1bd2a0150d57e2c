use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gallery::{karlin_matrix, kingman_family_eval, KarlinFamily, KingmanFamily, LinearFamily};
use crate::perron::spectral_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    /// Mixing rate in `m·A + V`.
    M,
    /// Growth coefficient in `A + β·V`.
    Beta,
    /// Karlin mixing fraction in `M(α)D`.
    Alpha,
    /// Kingman entry parameter.
    Theta,
}

impl Parameter {
    pub fn name(&self) -> &'static str {
        match self {
            Parameter::M => "m",
            Parameter::Beta => "beta",
            Parameter::Alpha => "alpha",
            Parameter::Theta => "theta",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sampled curve `parameter ↦ value` over a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: Parameter,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub family_digest: String,
    pub uniform: bool,
}

impl SweepResult {
    pub fn new(parameter: Parameter, grid: Vec<f64>, values: Vec<f64>, family_digest: String) -> Result<Self> {
        validate_grid(&grid)?;
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        let uniform = is_uniform(&grid);
        Ok(Self {
            parameter,
            grid,
            values,
            family_digest,
            uniform,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `max(1, max |values|)`.
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(1.0, |m, v| m.max(v.abs()))
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => {
            let last = (count - 1) as f64;
            (0..count)
                .map(|k| {
                    if k == count - 1 {
                        stop
                    } else {
                        start + (stop - start) * (k as f64 / last)
                    }
                })
                .collect()
        }
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 points, got {}", grid.len())));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Spacings equal to within rounding of the grid values.
pub(crate) fn is_uniform(grid: &[f64]) -> bool {
    if grid.len() < 2 {
        return true;
    }
    let first = grid[1] - grid[0];
    let magnitude = grid.iter().fold(first.abs(), |m, x| m.max(x.abs()));
    grid.windows(2)
        .all(|w| ((w[1] - w[0]) - first).abs() <= 1e-9 * magnitude)
}

fn sweep(
    parameter: Parameter,
    grid: &[f64],
    digest: String,
    eval: impl Fn(f64) -> Result<f64> + Sync,
) -> Result<SweepResult> {
    validate_grid(grid)?;
    let values = grid
        .par_iter()
        .map(|&x| eval(x).map_err(|e| e.at(parameter.name(), x)))
        .collect::<Result<Vec<f64>>>()?;
    SweepResult::new(parameter, grid.to_vec(), values, digest)
}

/// `spb(m·A + V)` over a grid of positive mixing rates.
pub fn sweep_spb_in_m(f: &LinearFamily, m_grid: &[f64]) -> Result<SweepResult> {
    if let Some(&m) = m_grid.iter().find(|&&m| !(m > 0.0)) {
        return Err(Error::InvalidGrid(format!("mixing rates must be positive, got {m}")));
    }
    sweep(Parameter::M, m_grid, f.digest(), |m| Ok(spectral_bound(&f.at_m(m))?.spb))
}

/// `spb(A + β·V)` over a grid of β.
pub fn sweep_spb_in_beta(f: &LinearFamily, beta_grid: &[f64]) -> Result<SweepResult> {
    sweep(Parameter::Beta, beta_grid, f.digest(), |b| Ok(spectral_bound(&f.at_beta(b))?.spb))
}

/// `ρ(M(α)D)` over a grid in `[0, 1]`.
pub fn sweep_karlin_in_alpha(f: &KarlinFamily, alpha_grid: &[f64]) -> Result<SweepResult> {
    let digest = format!("karlin(n={})", f.p().n());
    sweep(Parameter::Alpha, alpha_grid, digest, |a| Ok(spectral_bound(&karlin_matrix(f, a)?)?.spb))
}

/// `ρ(A(θ))` over a θ grid.
pub fn sweep_kingman_rho(f: &KingmanFamily, theta_grid: &[f64]) -> Result<SweepResult> {
    let digest = format!("kingman(n={})", f.c().n());
    sweep(Parameter::Theta, theta_grid, digest, |t| {
        Ok(spectral_bound(&kingman_family_eval(f, t))?.spb)
    })
}

/// `log ρ(A(θ))` over a θ grid.
pub fn sweep_kingman_log_rho(f: &KingmanFamily, theta_grid: &[f64]) -> Result<SweepResult> {
    let digest = format!("kingman-log(n={})", f.c().n());
    sweep(Parameter::Theta, theta_grid, digest, |t| {
        let rho = spectral_bound(&kingman_family_eval(f, t))?.spb;
        if !(rho > 0.0) {
            return Err(Error::ZeroSpectralRadius { theta: t });
        }
        Ok(rho.ln())
    })
}
