//! Nonlocal dispersal K·diag(w) + diag(b) on a periodic domain. With the
//! loss balancing the kernel mass, total population is conserved and the
//! spectral bound of the dispersal operator is zero.

use reduction_lab::gallery::{balancing_loss, nonlocal_operator, Boundary, Grid1D, LinearFamily, Profile};
use reduction_lab::lab::{check_midpoint_convexity, check_monotone_reduction, linspace, sweep_spb_in_m};
use reduction_lab::perron::spectral_bound;
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    let grid = Grid1D::new(60, 1.0, Boundary::Periodic)?;
    let kernel = Profile::Gaussian(0.08).sample_kernel(&grid);
    let loss = balancing_loss(&kernel, &grid);
    let dispersal = nonlocal_operator(&kernel, &loss, &grid)?;
    println!("spb(dispersal) = {:.3e}", spectral_bound(&dispersal)?.spb);

    // Growth is a bump in the middle of the ring.
    let growth = Profile::Gaussian(0.1).sample_coefficient(&grid);
    let growth: Vec<f64> = growth.iter().map(|g| 2.0 * g - 0.5).collect();
    let family = LinearFamily::new(dispersal, SquareMatrix::from_diagonal(&growth)?)?;
    let sweep = sweep_spb_in_m(&family, &linspace(0.1, 10.0, 12))?;
    for (m, s) in sweep.grid.iter().zip(&sweep.values) {
        println!("  dispersal rate {m:>5.2}: spb = {s:.8}");
    }
    println!("convex: {}", check_midpoint_convexity(&sweep)?.convex);
    println!("decreasing: {}", check_monotone_reduction(&sweep, 0.0).passed);
    Ok(())
}
