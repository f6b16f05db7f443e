//! Generalized Dantzig selector with a norm-generic linearized ADMM solver and
//! an exact projection onto the k-support dual-norm ball.

pub mod admm;
pub mod error;
pub mod experiments;
pub mod io;
pub mod ksup_prox;
pub mod model;
pub mod norms;
pub mod stats;

pub use admm::{admm_solve, admm_solve_from, estimate_spectral_radius};
pub use error::{GdsError, Result};
pub use model::{
    build_problem, build_problem_with, AdmmConfig, AdmmState, DantzigProblem, LinearModelInstance, MuChoice,
    PsdPolicy, SolveResult,
};
pub use norms::{ksup_dual_norm, ksup_norm, KSupportNorm, L1Norm, Norm};
