//! Seeded matrix generators. Every generator is a pure function of its
//! arguments: the same seed gives the same matrix on every platform.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::gallery::families::KingmanFamily;
use crate::matrix::SquareMatrix;

fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Independent seed for the `stream`-th object derived from `seed`
/// (splitmix64 finalizer).
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Entrywise positive row-stochastic matrix.
pub fn random_stochastic(n: usize, seed: u64) -> SquareMatrix {
    let mut r = rng(seed);
    let mut m = SquareMatrix::from_fn(n, |_, _| 1.0 - r.random::<f64>());
    for i in 0..n {
        let total: f64 = m.row(i).iter().sum();
        for j in 0..n {
            m[(i, j)] /= total;
        }
    }
    m
}

/// Off-diagonals uniform in `[0, 1]`, diagonal uniform in `[−2, 0]`.
pub fn random_ess_nonneg(n: usize, seed: u64) -> SquareMatrix {
    let mut r = rng(seed);
    SquareMatrix::from_fn(n, |i, j| {
        let u: f64 = r.random();
        if i == j {
            -2.0 * u
        } else {
            u
        }
    })
}

/// Diagonal matrix with entries uniform in `[lo, hi]`.
pub fn random_diagonal(n: usize, lo: f64, hi: f64, seed: u64) -> SquareMatrix {
    assert!(lo <= hi, "empty range [{lo}, {hi}]");
    let mut r = rng(seed);
    let diag: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * r.random::<f64>()).collect();
    SquareMatrix::from_diagonal(&diag).expect("finite diagonal")
}

/// Entries uniform in `[−1, 1]` with one off-diagonal entry forced to at most
/// `−0.1`, so the matrix is never essentially nonnegative. Needs `n ≥ 2`.
pub fn random_signed(n: usize, seed: u64) -> SquareMatrix {
    assert!(n >= 2, "need n >= 2 for an off-diagonal entry");
    let mut r = rng(seed);
    let mut m = SquareMatrix::from_fn(n, |_, _| 2.0 * r.random::<f64>() - 1.0);
    let i = r.random_range(0..n);
    let j = (i + r.random_range(1..n)) % n;
    m[(i, j)] = -0.1 - 0.9 * r.random::<f64>();
    m
}

/// Log-affine entry family `c_ij·exp(g_ij·θ)` with roughly a third of the
/// off-diagonal prefactors zero; the diagonal prefactors are positive so the
/// spectral radius never vanishes.
pub fn random_kingman(n: usize, seed: u64) -> KingmanFamily {
    let mut r = rng(seed);
    let c = SquareMatrix::from_fn(n, |i, j| {
        let keep = i == j || r.random::<f64>() >= 1.0 / 3.0;
        let x = 0.1 + 0.9 * r.random::<f64>();
        if keep {
            x
        } else {
            0.0
        }
    });
    let g = SquareMatrix::from_fn(n, |_, _| 2.0 * r.random::<f64>() - 1.0);
    KingmanFamily::new(c, g).expect("nonnegative prefactors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perron::is_essentially_nonnegative;

    #[test]
    fn stochastic_rows() {
        for seed in 0..20 {
            let m = random_stochastic(5, seed);
            assert!(m.min_entry() > 0.0);
            assert!(m.row_sums().iter().all(|s| (s - 1.0).abs() <= 1e-14));
        }
        assert_eq!(random_stochastic(1, 9).as_slice(), &[1.0]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_stochastic(4, 7), random_stochastic(4, 7));
        assert_eq!(random_ess_nonneg(4, 7), random_ess_nonneg(4, 7));
        assert_eq!(random_diagonal(4, -1.0, 1.0, 7), random_diagonal(4, -1.0, 1.0, 7));
        assert_ne!(random_ess_nonneg(4, 7), random_ess_nonneg(4, 8));
        assert_ne!(sub_seed(1, 0), sub_seed(1, 1));
        assert_ne!(sub_seed(0, 1), sub_seed(1, 0));
    }

    #[test]
    fn frozen_stream() {
        // Guards the cross-platform reproducibility contract.
        assert_eq!(
            random_stochastic(2, 42).as_slice(),
            &[0.2142120937366501, 0.7857879062633499, 0.05113445684673074, 0.9488655431532692]
        );
        assert_eq!(
            random_ess_nonneg(2, 42).as_slice(),
            &[-1.6286102902458197, 0.3188210400616611, 0.9838941681774888, -1.4022711962695111]
        );
    }

    #[test]
    fn ranges() {
        for seed in 0..20 {
            let m = random_ess_nonneg(6, seed);
            assert!(is_essentially_nonnegative(&m));
            assert!(m.diagonal().iter().all(|&d| (-2.0..=0.0).contains(&d)));
            assert!(!is_essentially_nonnegative(&random_signed(4, seed)));
            let k = random_kingman(4, seed);
            assert!(k.c().diagonal().iter().all(|&c| c > 0.0));
        }
        assert_eq!(random_diagonal(3, 1.0, 1.0, 5), SquareMatrix::identity(3));
    }
}
