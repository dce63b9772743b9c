//! Column-subset selection and cross approximation: pivoted-QR and
//! pivoted-Cholesky selection, greedy complete-pivoting cross approximation
//! (including the fermionic integration kernel), Nyström residuals,
//! rank-revealing quality measurement, and volume-based trace objectives.

mod brute;
mod cholesky;
mod cpqr;
mod cross;
mod fixtures;
mod mu;
mod nystrom;
mod result;
mod volume;

pub use brute::brute_cssp;
pub use cholesky::{pivoted_cholesky, PivotedCholesky};
pub use cpqr::cpqr_select;
pub use cross::{fermionic_kernel, gecp_cross, CrossApproximation, KernelGrid};
pub use fixtures::{hilbert_matrix, kahan_matrix, rbf_kernel_1d};
pub use mu::{rrqr_mu, MuReport};
pub use nystrom::{nystrom_error, NystromNorm};
pub use result::{CsspNorm, SelectionResult};
pub use volume::{
    equal_diagonal_rotation, trace_cssp_worst_vs_volume, volume_objective, VolumeGap,
};
