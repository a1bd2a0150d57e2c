use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::perron::lu::Lu;

/// Entrywise floor below which a resolvent entry counts as negative.
pub const RESOLVENT_POSITIVITY_FLOOR: f64 = -1e-12;

/// `(ξI − M)⁻¹`, column by column with partially pivoted LU.
pub fn resolvent(m: &SquareMatrix, xi: f64) -> Result<SquareMatrix> {
    let n = m.n();
    let c = SquareMatrix::scalar(n, xi).combine(1.0, m, -1.0);
    let pivot_tol = 1e-12 * c.norm_inf().max(1.0);
    let lu = Lu::factor(&c, pivot_tol).ok_or(Error::SingularResolvent { xi })?;
    let mut out = SquareMatrix::zeros(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = lu.solve(&e);
        e[j] = 0.0;
        for (i, x) in col.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    if out.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularResolvent { xi });
    }
    Ok(out)
}

/// True iff the resolvent at `ξ` exists and is entrywise `≥ −1e−12`.
pub fn is_resolvent_positive_at(m: &SquareMatrix, xi: f64) -> bool {
    match resolvent(m, xi) {
        Ok(r) => r.min_entry() >= RESOLVENT_POSITIVITY_FLOOR,
        Err(_) => false,
    }
}
