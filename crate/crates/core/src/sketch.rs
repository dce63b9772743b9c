//! Random dimensionality reduction: structured sketch operators, embedding
//! quality measurement, oblivious subspace-injection scans, and the two
//! classic downstream probes (sketch-and-solve least squares and projection
//! based low-rank approximation).

mod embed;
mod fwht;
mod operator;
mod solve;

pub use embed::{measure_embedding, osi_scan, EmbeddingReport, OsiCell, OsiScan};
pub use fwht::{fwht, fwht_in_place};
pub use operator::{
    apply_sketch, make_sketch, FamilyKind, SamplingMode, SketchFamily, SketchOperator,
};
pub use solve::{randomized_svd, sketch_and_solve_ls, RandomizedSvd, SketchSolve};
