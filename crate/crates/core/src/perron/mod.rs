//! Dense Perron–Frobenius machinery for essentially nonnegative matrices.

mod lu;
pub mod oracle;
pub mod resolvent;
pub mod scc;
pub mod spectral;

pub use oracle::{eigenvalues_oracle, max_real_part, ORACLE_MAX_DIM};
pub use resolvent::{is_resolvent_positive_at, resolvent};
pub use scc::SccDecomposition;
pub use spectral::{
    is_essentially_nonnegative, is_irreducible, perron_vectors, spectral_bound,
    spectral_bound_with, SolverOptions, SpectralData,
};
