//! Constructors for the operator families studied by the library.

pub mod discretize;
pub mod families;
pub mod random;

pub use discretize::{
    balancing_loss, elliptic_1d, kernel_samples, laplacian_1d, nonlocal_operator, Boundary, Grid1D,
    Profile,
};
pub use families::{
    karlin_matrix, karlin_to_linear, kingman_family_eval, KarlinFamily, KingmanFamily, LinearFamily,
};
pub use random::{
    random_diagonal, random_ess_nonneg, random_kingman, random_signed, random_stochastic, sub_seed,
};
