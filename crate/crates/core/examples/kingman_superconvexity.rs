//! Kingman: if every entry of A(θ) is log-convex in θ, so is ρ(A(θ)).

use reduction_lab::gallery::{kingman_family_eval, random_kingman, KingmanFamily};
use reduction_lab::lab::{kingman_superconvexity_check, linspace};
use reduction_lab::perron::spectral_bound;
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    // [[e^θ, 1], [1, e^-θ]] has ρ = 2 cosh θ.
    let family = KingmanFamily::new(
        SquareMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]])?,
        SquareMatrix::from_rows(&[[1.0, 0.0], [0.0, -1.0]])?,
    )?;
    for theta in [-1.0, 0.0, 0.5, 2.0] {
        let rho = spectral_bound(&kingman_family_eval(&family, theta))?.spb;
        println!("theta = {theta:>4}: rho = {rho:.12}, 2 cosh = {:.12}", 2.0 * f64::cosh(theta));
    }

    let grid = linspace(-2.0, 2.0, 21);
    let mut worst = f64::INFINITY;
    for seed in 0..20 {
        let report = kingman_superconvexity_check(&random_kingman(4, seed), &grid)?;
        assert!(report.convex);
        worst = worst.min(report.strictness_margin);
    }
    println!("20 random log-affine families: smallest second difference of log rho = {worst:.3e}");
    Ok(())
}
