//! Spectral bound and Perron vectors of an essentially nonnegative matrix,
//! cross-checked against the eigenvalue oracle and the resolvent.

use reduction_lab::perron::{eigenvalues_oracle, is_resolvent_positive_at, resolvent, spectral_bound};
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    let m = SquareMatrix::from_rows(&[[-2.0, 1.0, 0.0], [0.5, -1.0, 2.0], [1.0, 0.0, -3.0]])?;
    let data = spectral_bound(&m)?;
    println!("spb      = {:.15}", data.spb);
    println!("v        = {:?}", data.v.as_ref().unwrap());
    println!("u        = {:?}", data.u.as_ref().unwrap());
    println!("residual = {:.2e} after {} iterations", data.residual, data.iterations);

    for z in eigenvalues_oracle(&m)? {
        println!("  eigenvalue {:+.12} {:+.12}i", z.re, z.im);
    }

    // Above the spectral bound the resolvent is entrywise nonnegative.
    let xi = data.spb + 0.5;
    println!("(xi I - M)^-1 at xi = spb + 0.5:\n{}", resolvent(&m, xi)?.to_text());
    println!("positive at spb + 0.5: {}", is_resolvent_positive_at(&m, xi));

    // Reducible input: the bound is the largest over the diagonal blocks.
    let blocks = SquareMatrix::from_rows(&[[1.0, 5.0], [0.0, 3.0]])?;
    let data = spectral_bound(&blocks)?;
    println!("reducible: spb = {}, vectors present: {}", data.spb, data.has_vectors());
    Ok(())
}
