//! Parameterized matrix families: `m·A + β·V`, Karlin's `M(α)D`, and
//! entrywise log-affine (Kingman) families.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::perron::is_essentially_nonnegative;

const STOCHASTIC_TOL: f64 = 1e-12;

/// The pair `(A, V)` behind `m, β ↦ m·A + β·V`.
///
/// `A` is essentially nonnegative (the mixing generator) and `V` is diagonal
/// (the local growth rates).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFamily {
    a: SquareMatrix,
    v: SquareMatrix,
}

impl LinearFamily {
    pub fn new(a: SquareMatrix, v: SquareMatrix) -> Result<Self> {
        if a.n() != v.n() {
            return Err(Error::DimensionMismatch {
                expected: a.n(),
                actual: v.n(),
            });
        }
        if !is_essentially_nonnegative(&a) {
            return Err(Error::InvalidFamily(
                "mixing generator A must be essentially nonnegative".into(),
            ));
        }
        if !v.is_diagonal() {
            return Err(Error::InvalidFamily("V must be diagonal".into()));
        }
        Ok(Self { a, v })
    }

    pub fn with_growth(a: SquareMatrix, growth: &[f64]) -> Result<Self> {
        Self::new(a, SquareMatrix::from_diagonal(growth)?)
    }

    pub fn a(&self) -> &SquareMatrix {
        &self.a
    }

    pub fn v(&self) -> &SquareMatrix {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// `m·A + β·V`.
    pub fn eval(&self, m: f64, beta: f64) -> SquareMatrix {
        self.a.combine(m, &self.v, beta)
    }

    /// `m·A + V`.
    pub fn at_m(&self, m: f64) -> SquareMatrix {
        self.eval(m, 1.0)
    }

    /// `A + β·V`.
    pub fn at_beta(&self, beta: f64) -> SquareMatrix {
        self.eval(1.0, beta)
    }

    /// Same family with `A` replaced by `c·A`.
    pub fn scale_generator(&self, c: f64) -> Self {
        Self {
            a: self.a.scale(c),
            v: self.v.clone(),
        }
    }

    /// Short provenance string for sweep results.
    pub fn digest(&self) -> String {
        format!("linear(n={}, |A|={:.6e}, |V|={:.6e})", self.n(), self.a.norm_inf(), self.v.norm_inf())
    }
}

/// Karlin's dispersal family `M(α)D` with `M(α) = (1−α)I + αP`.
#[derive(Debug, Clone, PartialEq)]
pub struct KarlinFamily {
    p: SquareMatrix,
    d: SquareMatrix,
}

impl KarlinFamily {
    /// `p` must be nonnegative and row-stochastic, `d` diagonal with a
    /// strictly positive diagonal.
    pub fn new(p: SquareMatrix, d: SquareMatrix) -> Result<Self> {
        if p.n() != d.n() {
            return Err(Error::DimensionMismatch {
                expected: p.n(),
                actual: d.n(),
            });
        }
        if p.min_entry() < 0.0 {
            return Err(Error::InvalidFamily("P must be entrywise nonnegative".into()));
        }
        if p.row_sums().iter().any(|s| (s - 1.0).abs() > STOCHASTIC_TOL) {
            return Err(Error::InvalidFamily("P must be row-stochastic".into()));
        }
        if !d.is_diagonal() {
            return Err(Error::InvalidFamily("D must be diagonal".into()));
        }
        if d.diagonal().iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidFamily("D must have a positive diagonal".into()));
        }
        Ok(Self { p, d })
    }

    pub fn with_growth(p: SquareMatrix, growth: &[f64]) -> Result<Self> {
        Self::new(p, SquareMatrix::from_diagonal(growth)?)
    }

    pub fn p(&self) -> &SquareMatrix {
        &self.p
    }

    pub fn d(&self) -> &SquareMatrix {
        &self.d
    }

    /// True when `D = c·I` (exact comparison).
    pub fn is_scalar_growth(&self) -> bool {
        let diag = self.d.diagonal();
        diag.iter().all(|&x| x == diag[0])
    }
}

/// `[(1−α)I + αP]·D` for `α ∈ [0, 1]`.
pub fn karlin_matrix(f: &KarlinFamily, alpha: f64) -> Result<SquareMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let n = f.p.n();
    let mixing = SquareMatrix::identity(n).combine(1.0 - alpha, &f.p, alpha);
    Ok(mixing.matmul(&f.d))
}

/// Rewrites `M(m)D` as `m·A + V` with `A = (P − I)D` and `V = D`.
///
/// Rows of `P − I` sum to zero, so `A·D⁻¹e = 0` with `D⁻¹e > 0` and
/// `spb(A) = 0`.
pub fn karlin_to_linear(f: &KarlinFamily) -> LinearFamily {
    let n = f.p.n();
    let a = f.p.combine(1.0, &SquareMatrix::identity(n), -1.0).matmul(&f.d);
    LinearFamily {
        a,
        v: f.d.clone(),
    }
}

/// Entry rule `A_ij(θ) = c_ij·exp(g_ij·θ)`; `c_ij = 0` means identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct KingmanFamily {
    c: SquareMatrix,
    g: SquareMatrix,
}

impl KingmanFamily {
    pub fn new(c: SquareMatrix, g: SquareMatrix) -> Result<Self> {
        if c.n() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: c.n(),
                actual: g.n(),
            });
        }
        if c.min_entry() < 0.0 {
            return Err(Error::InvalidFamily("Kingman prefactors must be nonnegative".into()));
        }
        Ok(Self { c, g })
    }

    pub fn c(&self) -> &SquareMatrix {
        &self.c
    }

    pub fn g(&self) -> &SquareMatrix {
        &self.g
    }
}

pub fn kingman_family_eval(f: &KingmanFamily, theta: f64) -> SquareMatrix {
    let n = f.c.n();
    SquareMatrix::from_fn(n, |i, j| {
        let c = f.c[(i, j)];
        if c == 0.0 {
            0.0
        } else {
            c * (f.g[(i, j)] * theta).exp()
        }
    })
}
