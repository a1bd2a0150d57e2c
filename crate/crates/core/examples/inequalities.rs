//! Lindqvist's and Kirkland's inequalities on random essentially nonnegative
//! matrices.

use reduction_lab::gallery::{random_diagonal, random_ess_nonneg};
use reduction_lab::lab::{kirkland_check, lindqvist_check, CheckOutcome};
use reduction_lab::SquareMatrix;

fn show(o: &CheckOutcome) {
    println!("  {:<9} {} margin {:.3e} {}", o.check, if o.passed { "pass" } else { "FAIL" }, o.margin, o.detail);
}

fn main() -> reduction_lab::Result<()> {
    for seed in 0..5 {
        let a = random_ess_nonneg(4, seed);
        let d = random_diagonal(4, -1.0, 1.0, seed + 100);
        println!("seed {seed}");
        show(&lindqvist_check(&a, &d)?);
        show(&kirkland_check(&a)?);
    }

    // Column sums all equal: Kirkland holds with equality.
    let a = SquareMatrix::from_rows(&[[-1.0, 2.0, 0.5], [0.5, -2.5, 1.0], [1.5, 1.5, -0.5]])?;
    println!("column sums {:?}", a.column_sums());
    show(&kirkland_check(&a)?);
    Ok(())
}
