//! Finite-dimensional surrogates of diffusion, drift–diffusion and nonlocal
//! dispersal operators on an interval.
//!
//! All assemblers produce matrices whose off-diagonal entries are
//! nonnegative by construction (central differences for diffusion, upwinding
//! for drift, nonnegative quadrature weights for kernels).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Absorbing: stencil neighbours outside the domain are dropped.
    Dirichlet,
    /// Reflecting: zero-flux ghost nodes, rows sum to zero.
    Neumann,
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dirichlet" => Ok(Boundary::Dirichlet),
            "neumann" => Ok(Boundary::Neumann),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidGrid(format!("unknown boundary {other:?}"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Dirichlet => "dirichlet",
            Boundary::Neumann => "neumann",
            Boundary::Periodic => "periodic",
        })
    }
}

/// Uniform grid on `[0, L]`.
///
/// Dirichlet and Neumann grids hold the `n` interior nodes `x_i = (i+1)·h`
/// with `h = L/(n+1)`; periodic grids hold `x_i = i·h` with `h = L/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    length: f64,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(n: usize, length: f64, boundary: Boundary) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        Ok(Self {
            n,
            length,
            boundary,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn spacing(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.length / self.n as f64,
            _ => self.length / (self.n + 1) as f64,
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        match self.boundary {
            Boundary::Periodic => i as f64 * self.spacing(),
            _ => (i + 1) as f64 * self.spacing(),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Quadrature weights for the nodes: every node carries weight `h`.
    ///
    /// For periodic grids this is the trapezoid rule on the circle; for the
    /// other grids it is the trapezoid rule on `[0, L]` with the boundary
    /// nodes excluded, since they carry no unknowns.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        vec![self.spacing(); self.n]
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points().into_iter().map(f).collect()
    }
}

/// Assembles a three-point stencil row by row. `weights(i)` gives the
/// nonnegative couplings to the left and right neighbour; each coupling is
/// subtracted from the diagonal, so mass is conserved except where the
/// boundary absorbs it.
fn assemble_stencil(grid: &Grid1D, weights: impl Fn(usize) -> (f64, f64)) -> SquareMatrix {
    let n = grid.n();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        let (left, right) = weights(i);
        for (w, neighbour) in [(left, i.checked_sub(1)), (right, Some(i + 1).filter(|&j| j < n))] {
            if w == 0.0 {
                continue;
            }
            match (neighbour, grid.boundary()) {
                (Some(j), _) => {
                    m[(i, j)] += w;
                    m[(i, i)] -= w;
                }
                (None, Boundary::Dirichlet) => m[(i, i)] -= w,
                (None, Boundary::Neumann) => {}
                (None, Boundary::Periodic) => {
                    let j = if i == 0 { n - 1 } else { 0 };
                    m[(i, j)] += w;
                    m[(i, i)] -= w;
                }
            }
        }
    }
    m
}

/// `(1/h²)·tridiag(1, −2, 1)` with the grid's boundary treatment.
pub fn laplacian_1d(grid: &Grid1D) -> SquareMatrix {
    let h = grid.spacing();
    let c = 1.0 / (h * h);
    assemble_stencil(grid, |_| (c, c))
}

/// Discretizes `a(x)·u'' + b(x)·u' + c(x)·u` with central differences for the
/// diffusion term and first-order upwinding for the drift term.
pub fn elliptic_1d(
    a: impl Fn(f64) -> f64,
    b: impl Fn(f64) -> f64,
    c: impl Fn(f64) -> f64,
    grid: &Grid1D,
) -> Result<SquareMatrix> {
    let h = grid.spacing();
    let xs = grid.points();
    let mut diffusion = Vec::with_capacity(xs.len());
    for &x in &xs {
        let ax = a(x);
        if !(ax > 0.0) || !ax.is_finite() {
            return Err(Error::NonPositiveDiffusion { x, value: ax });
        }
        diffusion.push(ax / (h * h));
    }
    let drift: Vec<f64> = xs.iter().map(|&x| b(x)).collect();
    if drift.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidFamily("drift coefficient is not finite".into()));
    }
    let mut m = assemble_stencil(grid, |i| {
        let d = diffusion[i];
        let bi = drift[i];
        if bi > 0.0 {
            (d, d + bi / h)
        } else if bi < 0.0 {
            (d - bi / h, d)
        } else {
            (d, d)
        }
    });
    for (i, &x) in xs.iter().enumerate() {
        let cx = c(x);
        if !cx.is_finite() {
            return Err(Error::InvalidFamily(format!("reaction coefficient at x = {x} is not finite")));
        }
        m[(i, i)] += cx;
    }
    Ok(m)
}

/// `K·diag(w) + diag(b)`: the nonlocal operator `f ↦ ∫K(·,y)f(y)dy + b·f`
/// with the grid's quadrature weights `w`.
pub fn nonlocal_operator(kernel: &SquareMatrix, b: &[f64], grid: &Grid1D) -> Result<SquareMatrix> {
    let n = grid.n();
    if kernel.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: kernel.n(),
        });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let k = kernel[(i, j)];
            if k < 0.0 {
                return Err(Error::NegativeKernel {
                    row: i,
                    col: j,
                    value: k,
                });
            }
        }
    }
    let w = grid.quadrature_weights();
    let mut m = SquareMatrix::from_fn(n, |i, j| kernel[(i, j)] * w[j]);
    for (i, bi) in b.iter().enumerate() {
        m[(i, i)] += bi;
    }
    Ok(m)
}

/// Samples `K(x_i, y_j)` on the grid. Periodic grids use the wrapped distance
/// when the kernel is given as a function of displacement.
pub fn kernel_samples(grid: &Grid1D, k: impl Fn(f64, f64) -> f64) -> SquareMatrix {
    let xs = grid.points();
    SquareMatrix::from_fn(grid.n(), |i, j| k(xs[i], xs[j]))
}

/// Loss rate that balances a kernel's outflow: `b_i = −Σ_j K_ij w_j`.
/// With it every row of the nonlocal operator sums to zero.
pub fn balancing_loss(kernel: &SquareMatrix, grid: &Grid1D) -> Vec<f64> {
    let w = grid.quadrature_weights();
    (0..grid.n())
        .map(|i| -kernel.row(i).iter().zip(&w).map(|(k, wj)| k * wj).sum::<f64>())
        .collect()
}

/// Named coefficient and kernel profiles used by scenario files:
/// `constant:<value>`, `gaussian:<sigma>`, `linear:<slope>,<intercept>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    Constant(f64),
    Gaussian(f64),
    Linear { slope: f64, intercept: f64 },
}

impl Profile {
    /// As a coefficient: `gaussian` is a unit-height bump centred on the
    /// domain midpoint, `linear` is `slope·x + intercept`.
    pub fn coefficient(&self, x: f64, grid: &Grid1D) -> f64 {
        match *self {
            Profile::Constant(c) => c,
            Profile::Gaussian(sigma) => {
                let d = x - 0.5 * grid.length();
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
            Profile::Linear { slope, intercept } => slope * x + intercept,
        }
    }

    /// As a dispersal kernel of the displacement `|x − y|` (wrapped on
    /// periodic grids): `gaussian` is the normal density with standard
    /// deviation `sigma`, `linear` is `slope·|x − y| + intercept`.
    pub fn kernel(&self, x: f64, y: f64, grid: &Grid1D) -> f64 {
        let mut d = (x - y).abs();
        if grid.boundary() == Boundary::Periodic {
            d = d.min(grid.length() - d);
        }
        match *self {
            Profile::Constant(c) => c,
            Profile::Gaussian(sigma) => {
                (-d * d / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Profile::Linear { slope, intercept } => slope * d + intercept,
        }
    }

    pub fn sample_coefficient(&self, grid: &Grid1D) -> Vec<f64> {
        grid.sample(|x| self.coefficient(x, grid))
    }

    pub fn sample_kernel(&self, grid: &Grid1D) -> SquareMatrix {
        kernel_samples(grid, |x, y| self.kernel(x, y, grid))
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(format!("bad profile {s:?}"));
        let (kind, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        if nums.iter().any(|x| !x.is_finite()) {
            return Err(bad());
        }
        match (kind.trim(), nums.as_slice()) {
            ("constant", [c]) => Ok(Profile::Constant(*c)),
            ("gaussian", [sigma]) if *sigma > 0.0 => Ok(Profile::Gaussian(*sigma)),
            ("linear", [slope, intercept]) => Ok(Profile::Linear {
                slope: *slope,
                intercept: *intercept,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "constant:{c}"),
            Profile::Gaussian(s) => write!(f, "gaussian:{s}"),
            Profile::Linear { slope, intercept } => write!(f, "linear:{slope},{intercept}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perron::{is_essentially_nonnegative, spectral_bound};

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1, 1.0, Boundary::Dirichlet).is_err());
        assert!(Grid1D::new(3, 0.0, Boundary::Dirichlet).is_err());
        let g = Grid1D::new(4, 2.0, Boundary::Periodic).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.points(), vec![0.0, 0.5, 1.0, 1.5]);
        let g = Grid1D::new(3, 1.0, Boundary::Neumann).unwrap();
        assert_eq!(g.points(), vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn dirichlet_stencil() {
        let g = Grid1D::new(3, 1.0, Boundary::Dirichlet).unwrap();
        let l = laplacian_1d(&g);
        let want = SquareMatrix::from_rows(&[[-2.0, 1.0, 0.0], [1.0, -2.0, 1.0], [0.0, 1.0, -2.0]])
            .unwrap()
            .scale(16.0);
        assert_eq!(l, want);
    }

    #[test]
    fn reflecting_and_periodic_rows_sum_to_zero() {
        for boundary in [Boundary::Neumann, Boundary::Periodic] {
            for n in [2, 3, 10, 57] {
                let g = Grid1D::new(n, 1.3, boundary).unwrap();
                let l = laplacian_1d(&g);
                assert!(l.row_sums().iter().all(|&s| s == 0.0), "{boundary} n={n}");
                assert!(is_essentially_nonnegative(&l));
                assert!(spectral_bound(&l).unwrap().spb.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn neumann_corner_entries() {
        let g = Grid1D::new(4, 1.0, Boundary::Neumann).unwrap();
        let l = laplacian_1d(&g);
        let c = 1.0 / (g.spacing() * g.spacing());
        assert!((c - 25.0).abs() < 1e-12);
        assert_eq!(l[(0, 0)], -c);
        assert_eq!(l[(3, 3)], -c);
        assert_eq!(l[(1, 1)], -2.0 * c);
        let g = Grid1D::new(4, 1.0, Boundary::Periodic).unwrap();
        let l = laplacian_1d(&g);
        assert_eq!(l[(0, 3)], 16.0);
        assert_eq!(l[(3, 0)], 16.0);
    }

    #[test]
    fn elliptic_degenerates_to_laplacian() {
        for boundary in [Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic] {
            let g = Grid1D::new(6, 2.0, boundary).unwrap();
            let e = elliptic_1d(|_| 1.0, |_| 0.0, |_| 0.0, &g).unwrap();
            assert_eq!(e, laplacian_1d(&g));
            let v = |x: f64| (3.0 * x).sin();
            let e = elliptic_1d(|_| 1.0, |_| 0.0, v, &g).unwrap();
            let want = &laplacian_1d(&g) + &SquareMatrix::from_diagonal(&g.sample(v)).unwrap();
            assert_eq!(e, want);
        }
    }

    #[test]
    fn strong_drift_stays_essentially_nonnegative() {
        let g = Grid1D::new(4, 1.0, Boundary::Dirichlet).unwrap();
        let e = elliptic_1d(|_| 1.0, |_| 10.0, |_| 0.0, &g).unwrap();
        // h = 0.2: diffusion 25, drift 10/h = 50 goes to the right neighbour.
        for (i, j, x) in e.off_diagonal() {
            assert!(x >= 0.0);
            if j == i + 1 {
                assert!((x - 75.0).abs() < 1e-12);
            } else if i == j + 1 {
                assert!((x - 25.0).abs() < 1e-12);
            } else {
                assert_eq!(x, 0.0);
            }
        }
        let e = elliptic_1d(|_| 0.01, |x| -50.0 * x, |_| 0.0, &g).unwrap();
        assert!(is_essentially_nonnegative(&e));
    }

    #[test]
    fn rejects_non_positive_diffusion() {
        let g = Grid1D::new(4, 1.0, Boundary::Dirichlet).unwrap();
        let err = elliptic_1d(|x| x - 0.5, |_| 0.0, |_| 0.0, &g).unwrap_err();
        assert!(matches!(err, Error::NonPositiveDiffusion { .. }));
    }

    #[test]
    fn nonlocal_examples() {
        let g = Grid1D::new(3, 1.0, Boundary::Dirichlet).unwrap();
        let b = [0.3, -1.0, 2.0];
        let m = nonlocal_operator(&SquareMatrix::zeros(3), &b, &g).unwrap();
        assert_eq!(m, SquareMatrix::from_diagonal(&b).unwrap());

        let ones = SquareMatrix::from_fn(3, |_, _| 1.0);
        let m = nonlocal_operator(&ones, &[0.0; 3], &g).unwrap();
        assert_eq!(m, SquareMatrix::from_fn(3, |_, _| 0.25));

        let mut bad = ones.clone();
        bad[(1, 2)] = -1e-3;
        assert!(matches!(
            nonlocal_operator(&bad, &[0.0; 3], &g),
            Err(Error::NegativeKernel { row: 1, col: 2, .. })
        ));
    }

    #[test]
    fn balanced_kernel_conserves_mass() {
        let g = Grid1D::new(12, 2.0, Boundary::Neumann).unwrap();
        let k = Profile::Gaussian(0.3).sample_kernel(&g);
        let m = nonlocal_operator(&k, &balancing_loss(&k, &g), &g).unwrap();
        assert!(m.row_sums().iter().all(|s| s.abs() < 1e-14));
        assert!(spectral_bound(&m).unwrap().spb.abs() < 1e-12);
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("constant:2.5".parse::<Profile>().unwrap(), Profile::Constant(2.5));
        assert_eq!("gaussian:0.1".parse::<Profile>().unwrap(), Profile::Gaussian(0.1));
        assert_eq!(
            "linear:-1,3".parse::<Profile>().unwrap(),
            Profile::Linear {
                slope: -1.0,
                intercept: 3.0
            }
        );
        assert!("gaussian:0".parse::<Profile>().is_err());
        assert!("linear:1".parse::<Profile>().is_err());
        assert!("cubic:1".parse::<Profile>().is_err());
        let p: Profile = "linear:0.5,-2".parse().unwrap();
        assert_eq!(p.to_string().parse::<Profile>().unwrap(), p);
    }
}
