//! Sweeps, convexity certificates, inequality checks and threshold search.

pub mod checks;
pub mod convexity;
pub mod sweep;
pub mod threshold;

pub use checks::{
    check_monotone_reduction, derivative_agreement_check, derivative_bound_check,
    finite_difference_derivative, homogeneity_check, karlin_monotonicity_check, kirkland_check,
    lindqvist_check, perron_derivative, Branch, CheckOutcome,
};
pub use convexity::{
    check_midpoint_convexity, kingman_superconvexity_check, strict_convexity_probe, ConvexityReport,
    StrictConvexityProbe,
};
pub use sweep::{
    linspace, sweep_karlin_in_alpha, sweep_kingman_log_rho, sweep_kingman_rho, sweep_spb_in_beta,
    sweep_spb_in_m, Parameter, SweepResult,
};
pub use threshold::find_threshold;
