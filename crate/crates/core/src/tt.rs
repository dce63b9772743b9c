//! Tensor-train decomposition: dense tensors, matricization, the SVD-based
//! sweep, reconstruction, and quasi-optimality probes.

mod probe;
mod tensor;
mod ttsvd;

pub use probe::{tt_quasi_opt_probe, QuasiOptProbe};
pub use tensor::DenseTensor;
pub use ttsvd::{tt_reconstruct, tt_svd, TtCore, TtCores, TtDecomposition, TtSvdOptions};
