//! The semigroup e^{tM}: positive exactly when M is essentially nonnegative,
//! and growing at the rate spb(M).

use reduction_lab::gallery::{random_ess_nonneg, random_signed};
use reduction_lab::perron::spectral_bound;
use reduction_lab::semigroup::{
    expm, growth_bound_estimate, growth_horizon, positivity_of_semigroup_check, spectral_gap, DEFAULT_T_GRID,
};
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    let m = SquareMatrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]])?;
    println!("e^M =\n{}", expm(&m, 1.0).to_text());

    for seed in 0..3 {
        let metzler = random_ess_nonneg(5, seed);
        let spb = spectral_bound(&metzler)?.spb;
        let t_max = growth_horizon(spectral_gap(&metzler)?);
        let g = growth_bound_estimate(&metzler, t_max, 64)?;
        println!("seed {seed}: spb = {spb:.9}, omega = {:.9} (t_max = {t_max:.1})", g.omega);

        let ok = positivity_of_semigroup_check(&metzler, &DEFAULT_T_GRID);
        let signed = positivity_of_semigroup_check(&random_signed(5, seed), &DEFAULT_T_GRID);
        println!("  positive semigroup: {}; signed generator leaves the cone: {}", ok.passed, signed.passed);
    }
    Ok(())
}
