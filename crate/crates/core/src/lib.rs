//! Numerical linear algebra workbench.
//!
//! The crate is organized around a small self-contained dense/sparse kernel
//! (`sparse`, `dense`, `qr`, `svd`, `eig`, `cmatrix`) and a set of study
//! modules built on top of it:
//!
//! - [`pde`]: finite-difference matrix generators on 2D grids and a
//!   diagonal-dominance classifier,
//! - [`solvers`]: reference iterative solvers (CG, randomized coordinate
//!   descent, GMRES, restarted s-step CG, two-grid correction, power method),
//! - [`sketch`]: dimension-reduction operators and subspace embedding
//!   measurements,
//! - [`select`]: column/row subset selection, cross approximation, and
//!   volume-based trace objectives,
//! - [`spectral`]: eigenvector conditioning, gap statistics, and polynomial
//!   iterations for the matrix sign function,
//! - [`tt`]: tensor-train decomposition and quasi-optimality probes,
//! - [`exp`]: the experiment registry behind the command-line runner.
//!
//! All randomness is drawn from counter-based seeded generators so every
//! experiment is reproducible bit-for-bit from `(seed, trial)`.

pub mod cmatrix;
pub mod dense;
pub mod eig;
pub mod error;
pub mod exp;
pub mod io;
pub mod pde;
pub mod qr;
pub mod rng;
pub mod scalar;
pub mod select;
pub mod sketch;
pub mod solvers;
pub mod sparse;
pub mod spectral;
pub mod svd;
pub mod tt;

pub use cmatrix::ComplexMatrix;
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use sparse::SparseMatrix;
