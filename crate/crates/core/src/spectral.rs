//! Eigenvalue conditioning under random perturbations, spectral-gap
//! statistics of noisy tridiagonal matrices, and composite-polynomial
//! approximation of step functions (matrix sign and spectral projectors).

mod condition;
mod minami;
mod scheme;
mod shattering;
mod sign;

pub use condition::{kappa_eig, kappa_eig_complex, EigCondition};
pub use minami::{
    fit_log_log, minami_gap_experiment, LogLogFit, MinamiReport, NoiseDistribution,
};
pub use scheme::{CompositionScheme, SchemeMatrixEval, Stage};
pub use shattering::{complex_ginibre, shattering_experiment, ShatteringReport};
pub use sign::{sign_error, SignErrorReport};
