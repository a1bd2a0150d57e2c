use crate::error::{Error, Result};
use crate::gallery::LinearFamily;
use crate::lab::sweep::{linspace, sweep_spb_in_m};
use crate::perron::spectral_bound;
use crate::tolerances::INEQUALITY_TOL;

const BRACKET_SAMPLES: usize = 17;
const VALUE_TOL: f64 = 1e-10;
const WIDTH_TOL: f64 = 1e-12;

/// Mixing rate `m*` in `[m_lo, m_hi]` with `spb(m*·A + V) = 0`, by bisection.
///
/// The bracket is first sampled to confirm that the spectral bound is
/// monotone on it (sampled, not proven). Bisection stops when
/// `|spb| ≤ 1e−10` or the bracket is narrower than `1e−12·max(1, m)`.
pub fn find_threshold(f: &LinearFamily, m_lo: f64, m_hi: f64) -> Result<f64> {
    if !(m_lo > 0.0) || !(m_hi > m_lo) || !m_hi.is_finite() {
        return Err(Error::InvalidGrid(format!("bad bracket [{m_lo}, {m_hi}]")));
    }
    let probe = sweep_spb_in_m(f, &linspace(m_lo, m_hi, BRACKET_SAMPLES))?;
    let tol = INEQUALITY_TOL * probe.scale();
    let steps: Vec<f64> = probe.values.windows(2).map(|w| w[1] - w[0]).collect();
    let non_increasing = steps.iter().all(|&d| d <= tol);
    let non_decreasing = steps.iter().all(|&d| d >= -tol);
    if !non_increasing && !non_decreasing {
        return Err(Error::NotMonotoneOnBracket { lo: m_lo, hi: m_hi });
    }

    let eval = |m: f64| spectral_bound(&f.at_m(m)).map(|d| d.spb).map_err(|e| e.at("m", m));
    let (mut lo, mut hi) = (m_lo, m_hi);
    let (f_lo, f_hi) = (probe.values[0], probe.values[BRACKET_SAMPLES - 1]);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo: m_lo, hi: m_hi });
    }
    let lo_sign = f_lo.signum();
    loop {
        let mid = 0.5 * (lo + hi);
        let value = eval(mid)?;
        if value.abs() <= VALUE_TOL || hi - lo <= WIDTH_TOL * mid.max(1.0) {
            return Ok(mid);
        }
        if value.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SquareMatrix;

    fn mixing() -> SquareMatrix {
        SquareMatrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap()
    }

    #[test]
    fn closed_form_root() {
        // spb = (−2m − 1 + √(4m² + 9))/2 vanishes at m = 2.
        let f = LinearFamily::with_growth(mixing(), &[1.0, -2.0]).unwrap();
        let m = find_threshold(&f, 0.1, 10.0).unwrap();
        assert!((m - 2.0).abs() < 1e-8, "{m}");
    }

    #[test]
    fn persistent_growth_has_no_root() {
        let f = LinearFamily::with_growth(mixing(), &[1.0, -1.0]).unwrap();
        assert_eq!(
            find_threshold(&f, 0.1, 10.0),
            Err(Error::NoSignChange { lo: 0.1, hi: 10.0 })
        );
    }

    #[test]
    fn scalar_family() {
        let f = LinearFamily::new(SquareMatrix::scalar(2, -1.0), SquareMatrix::identity(2)).unwrap();
        let m = find_threshold(&f, 0.1, 10.0).unwrap();
        assert!((m - 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_monotone_bracket() {
        // spb(A) > 0 with a negative growth site: the curve dips then rises.
        let a = SquareMatrix::from_rows(&[[0.5, 1.0], [1.0, -1.5]]).unwrap();
        let f = LinearFamily::with_growth(a, &[-1.0, 0.2]).unwrap();
        let s = sweep_spb_in_m(&f, &linspace(0.05, 4.0, 17)).unwrap();
        let increasing = s.values.windows(2).any(|w| w[1] > w[0]);
        let decreasing = s.values.windows(2).any(|w| w[1] < w[0]);
        if increasing && decreasing {
            assert_eq!(
                find_threshold(&f, 0.05, 4.0),
                Err(Error::NotMonotoneOnBracket { lo: 0.05, hi: 4.0 })
            );
        }
        assert!(find_threshold(&f, 2.0, 1.0).is_err());
    }
}
