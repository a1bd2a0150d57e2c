//! Finite-difference diffusion operators on [0, L] and the reduction of the
//! principal eigenvalue under faster diffusion.

use std::f64::consts::PI;

use reduction_lab::gallery::{elliptic_1d, laplacian_1d, random_diagonal, Boundary, Grid1D, LinearFamily};
use reduction_lab::lab::{check_monotone_reduction, linspace, sweep_spb_in_m};
use reduction_lab::perron::spectral_bound;

fn main() -> reduction_lab::Result<()> {
    let dirichlet = Grid1D::new(99, 1.0, Boundary::Dirichlet)?;
    let h = dirichlet.spacing();
    let spb = spectral_bound(&laplacian_1d(&dirichlet))?.spb;
    let exact = -(4.0 / (h * h)) * (PI * h / 2.0).sin().powi(2);
    println!("Dirichlet n = 99: spb = {spb:.10}, exact {exact:.10}, -pi^2 = {:.10}", -PI * PI);

    let neumann = Grid1D::new(100, 1.0, Boundary::Neumann)?;
    let lap = laplacian_1d(&neumann);
    println!("Neumann n = 100: spb = {:.3e}", spectral_bound(&lap)?.spb);

    let v = random_diagonal(100, -1.0, 1.0, 11);
    let family = LinearFamily::new(lap, v)?;
    let sweep = sweep_spb_in_m(&family, &linspace(0.01, 0.5, 8))?;
    for (m, s) in sweep.grid.iter().zip(&sweep.values) {
        println!("  m = {m:.3}  spb(m L + V) = {s:.8}");
    }
    println!("non-increasing: {}", check_monotone_reduction(&sweep, 0.0).passed);

    // Upwinded drift keeps the off-diagonal entries nonnegative.
    let grid = Grid1D::new(50, 2.0, Boundary::Neumann)?;
    let op = elliptic_1d(|x| 1.0 + 0.5 * x, |x| (3.0 * x).sin(), |x| 1.0 - x, &grid)?;
    println!("elliptic: spb = {:.8}, min off-diagonal = {}", spectral_bound(&op)?.spb,
        op.off_diagonal().map(|(_, _, x)| x).fold(f64::INFINITY, f64::min));
    Ok(())
}
