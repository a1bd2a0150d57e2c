//! Karlin's reduction principle: the growth rate of [(1-α)I + αP]·D falls
//! as α increases, unless D is a multiple of the identity.

use reduction_lab::gallery::{karlin_to_linear, random_stochastic, KarlinFamily};
use reduction_lab::lab::{karlin_monotonicity_check, kirkland_check, linspace, sweep_karlin_in_alpha};
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    let swap = SquareMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]])?;
    let family = KarlinFamily::with_growth(swap, &[2.0, 0.5])?;
    let sweep = sweep_karlin_in_alpha(&family, &[0.0, 0.5, 1.0])?;
    println!("rho at alpha = 0, 0.5, 1: {:?}", sweep.values);

    let grid = linspace(0.0, 1.0, 11);
    let p = random_stochastic(4, 7);
    for growth in [[1.5, 0.8, 1.1, 0.6], [1.2; 4]] {
        let f = KarlinFamily::with_growth(p.clone(), &growth)?;
        let check = karlin_monotonicity_check(&f, &grid)?;
        println!("D = {growth:?}: {} ({})", if check.passed { "pass" } else { "fail" }, check.detail);
    }

    // Written as αA + D with A = (P - I)D, every column of A sums to zero.
    let linear = karlin_to_linear(&family);
    let kirkland = kirkland_check(linear.a())?;
    println!("column sums of A: {:?}, Kirkland branch {:?}", linear.a().column_sums(), kirkland.branch.unwrap());
    Ok(())
}
