//! Iterative solvers (CG, randomized coordinate descent, GMRES), restart
//! dynamics, two-grid contraction measurement, the power method, and the
//! CG-versus-RCD stopping-time experiment.

mod cg;
mod forsythe;
mod gmres;
mod power;
mod rcd;
mod stopping;
mod trace;
mod two_grid;

pub use cg::{cg, cg_complex, relative_residual};
pub use forsythe::{forsythe_iteration, ForsytheRun};
pub use gmres::gmres;
pub use power::{power_method, PowerTrace};
pub use rcd::{rcd, rcd_complex};
pub use stopping::{stopping_time_experiment, StoppingTimes};
pub use trace::{IterOptions, SolveTrace, StopCriterion};
pub use two_grid::{two_grid_contraction, Smoother, TwoGridReport, TwoGridSetup};
