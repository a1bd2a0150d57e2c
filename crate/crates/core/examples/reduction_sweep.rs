//! The spectral bound of m·A + V along the mixing rate m: convex, decreasing
//! when spb(A) = 0, with slope at most spb(A).

use reduction_lab::gallery::LinearFamily;
use reduction_lab::lab::{
    check_midpoint_convexity, check_monotone_reduction, derivative_bound_check, linspace, perron_derivative,
    sweep_spb_in_m,
};
use reduction_lab::perron::spectral_bound;
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    // Two patches, migration at rate 1 each way, growth +1 and -1.
    let a = SquareMatrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]])?;
    let family = LinearFamily::with_growth(a, &[1.0, -1.0])?;
    let spb_a = spectral_bound(family.a())?.spb;

    let sweep = sweep_spb_in_m(&family, &linspace(0.1, 5.0, 11))?;
    println!("{:>6} {:>14} {:>14} {:>14}", "m", "spb", "sqrt(m^2+1)-m", "d spb/dm");
    for (&m, &v) in sweep.grid.iter().zip(&sweep.values) {
        let exact = (m * m + 1.0f64).sqrt() - m;
        println!("{m:>6.2} {v:>14.10} {exact:>14.10} {:>14.10}", perron_derivative(&family, m)?);
    }

    let convexity = check_midpoint_convexity(&sweep)?;
    println!("convex: {} (min second difference {:.3e})", convexity.convex, convexity.strictness_margin);
    let reduction = check_monotone_reduction(&sweep, spb_a);
    println!("reduction: {} ({:?} branch, {})", reduction.passed, reduction.branch.unwrap(), reduction.detail);
    let bound = derivative_bound_check(&family, 1.0)?;
    println!("d spb/dm <= spb(A) at m = 1: {} (margin {:.3e})", bound.passed, bound.margin);
    Ok(())
}
