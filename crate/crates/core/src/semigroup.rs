//! Matrix exponential, semigroup positivity and growth-bound estimation.

use crate::error::{Error, Result};
use crate::lab::CheckOutcome;
use crate::matrix::SquareMatrix;
use crate::perron::{eigenvalues_oracle, is_essentially_nonnegative, is_resolvent_positive_at, spectral_bound};
use crate::tolerances::SEMIGROUP_POSITIVITY_FLOOR;

const TAYLOR_TERMS: usize = 16;
const SCALED_NORM: f64 = 0.5;

/// Probe times used when a caller passes no usable grid.
pub const DEFAULT_T_GRID: [f64; 5] = [1e-4, 1e-3, 1e-2, 0.1, 1.0];

/// `e^{tM}` by scaling and squaring with a 16-term Taylor series.
pub fn expm(m: &SquareMatrix, t: f64) -> SquareMatrix {
    let (e, log_scale) = expm_log(m, t);
    e.scale(log_scale.exp())
}

/// `e^{tM} = E·exp(log_scale)` with `‖E‖∞ = 1`, renormalized after every
/// squaring so that large `t` neither overflows nor underflows.
pub fn expm_log(m: &SquareMatrix, t: f64) -> (SquareMatrix, f64) {
    let n = m.n();
    let a = m.scale(t);
    let norm = a.norm_inf();
    let mut squarings = 0u32;
    if norm > SCALED_NORM {
        squarings = (norm / SCALED_NORM).log2().ceil() as u32;
    }
    let a = a.scale(0.5f64.powi(squarings as i32));

    let mut sum = SquareMatrix::identity(n);
    let mut term = SquareMatrix::identity(n);
    for k in 1..=TAYLOR_TERMS {
        term = term.matmul(&a).scale(1.0 / k as f64);
        sum = &sum + &term;
    }

    let mut log_scale = 0.0;
    let (mut e, s) = renormalize(sum);
    log_scale += s;
    for _ in 0..squarings {
        let (next, s) = renormalize(e.matmul(&e));
        e = next;
        log_scale = 2.0 * log_scale + s;
    }
    (e, log_scale)
}

fn renormalize(m: SquareMatrix) -> (SquareMatrix, f64) {
    let norm = m.norm_inf();
    if norm > 0.0 && norm.is_finite() {
        (m.scale(1.0 / norm), norm.ln())
    } else {
        (m, 0.0)
    }
}

/// Positive semigroup ⇔ essentially nonnegative generator, on one instance.
///
/// For an essentially nonnegative `M` every probed `e^{tM}` must be entrywise
/// above `−1e−10` and `M` must be resolvent positive at `spb + 1`. Otherwise
/// some probed `e^{tM}` must have an entry below `−1e−10`; small `t` exposes
/// the negative off-diagonal entry through `e^{tM} ≈ I + tM`. Non-positive
/// times are skipped; with none left the default grid is used.
pub fn positivity_of_semigroup_check(m: &SquareMatrix, t_grid: &[f64]) -> CheckOutcome {
    let mut times: Vec<f64> = t_grid.iter().copied().filter(|t| *t > 0.0 && t.is_finite()).collect();
    if times.is_empty() {
        times = DEFAULT_T_GRID.to_vec();
    }
    let (t_worst, min_entry) = times
        .iter()
        .map(|&t| (t, expm(m, t).min_entry()))
        .fold((times[0], f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });

    let metzler = is_essentially_nonnegative(m);
    if !metzler {
        return CheckOutcome::new("semigroup_positivity", SEMIGROUP_POSITIVITY_FLOOR - min_entry, 0.0)
            .witness("t", t_worst)
            .witness("min_entry", min_entry)
            .detail("not essentially nonnegative: semigroup must leave the cone");
    }
    let outcome = CheckOutcome::new("semigroup_positivity", min_entry, -SEMIGROUP_POSITIVITY_FLOOR)
        .witness("t", t_worst)
        .witness("min_entry", min_entry);
    match spectral_bound(m) {
        Ok(data) if is_resolvent_positive_at(m, data.spb + 1.0) => {
            outcome.detail("essentially nonnegative: positive semigroup and resolvent")
        }
        Ok(data) => {
            let mut failed = outcome
                .witness("xi", data.spb + 1.0)
                .detail("essentially nonnegative but resolvent not positive at spb + 1");
            failed.passed = false;
            failed
        }
        Err(e) => outcome.detail(format!("resolvent cross-check skipped: {e}")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEstimate {
    pub omega: f64,
    pub t_samples: Vec<f64>,
    /// `log ‖e^{tM}‖∞` at each sample.
    pub log_norms: Vec<f64>,
    /// Root-mean-square residual of the linear fit.
    pub fit_residual: f64,
}

/// Slope of `t ↦ log ‖e^{tM}‖∞` over the upper half of `t_max·{1/k, …, 1}`.
///
/// Samples come from repeated multiplication by `e^{(t_max/k)M}` with
/// renormalization, accumulating logs.
pub fn growth_bound_estimate(m: &SquareMatrix, t_max: f64, k: usize) -> Result<GrowthEstimate> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
    }
    if k < 4 {
        return Err(Error::InvalidGrid(format!("need at least 4 samples, got {k}")));
    }
    let dt = t_max / k as f64;
    let (step, step_log) = expm_log(m, dt);
    if !step_log.is_finite() || step.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::OverflowRisk { t: dt });
    }

    let mut t_samples = Vec::with_capacity(k);
    let mut log_norms = Vec::with_capacity(k);
    let mut power = step.clone();
    let mut log_acc = step_log;
    for j in 1..=k {
        if j > 1 {
            let (next, s) = renormalize(power.matmul(&step));
            power = next;
            log_acc += step_log + s;
        }
        let t = if j == k { t_max } else { dt * j as f64 };
        if !log_acc.is_finite() || power.norm_inf() == 0.0 {
            return Err(Error::OverflowRisk { t });
        }
        t_samples.push(t);
        log_norms.push(log_acc);
    }

    let start = k / 2;
    let (omega, fit_residual) = least_squares_slope(&t_samples[start..], &log_norms[start..]);
    Ok(GrowthEstimate {
        omega,
        t_samples,
        log_norms,
        fit_residual,
    })
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (my + slope * (a - mx));
            r * r
        })
        .sum();
    (slope, (rss / n).sqrt())
}

/// Distance from the largest real part of the spectrum to the next one, from
/// the eigenvalue oracle (so limited to small matrices). Infinite for `n = 1`.
pub fn spectral_gap(m: &SquareMatrix) -> Result<f64> {
    let mut re: Vec<f64> = eigenvalues_oracle(m)?.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    Ok(match re.len() {
        0 | 1 => f64::INFINITY,
        _ => re[0] - re[1],
    })
}

/// `max(50, 50/gap)`: long enough for the non-dominant modes to decay by
/// `e^{−25}` over the fitted half of the window.
pub fn growth_horizon(gap: f64) -> f64 {
    if gap > 0.0 {
        (50.0 / gap).max(50.0)
    } else {
        50.0
    }
}
