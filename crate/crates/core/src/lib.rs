//! Constrained high-index saddle dynamics on the unit sphere `S^{d-1}`.
//!
//! The crate provides
//! - [`energy`]: the landscape contract (`E`, `F = -grad E`, `H w = -hess E w`)
//!   and built-in benchmark surfaces,
//! - [`dynamics`]: the first-order constrained scheme (drift, retraction,
//!   vector transport, Gram-Schmidt) and its time integration,
//! - [`harness`]: reference solutions, error norms, convergence tables and
//!   the scaling studies,
//! - [`export`]: CSV writers and readers for all of the above.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common case of `f64`.

// `!(a < b)` comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod energy;
pub mod error;
pub mod export;
pub mod harness;
pub mod linalg;
pub mod random;
pub mod scalar;

pub use error::{HisdError, Result};
pub use scalar::Scalar;

pub type FourWell64 = energy::FourWellEnergy<f64>;
pub type RosenbrockChain64 = energy::RosenbrockChainEnergy<f64>;
pub type QuadraticSphere64 = energy::QuadraticSphereEnergy<f64>;
pub type SaddleParams64 = dynamics::SaddleParams<f64>;
pub type SolverState64 = dynamics::SolverState<f64>;
pub type StepProbes64 = dynamics::StepProbes<f64>;
pub type Trajectory64 = dynamics::Trajectory<f64>;
pub type ErrorReport64 = harness::ErrorReport<f64>;
pub type ConvergenceTable64 = harness::ConvergenceTable<f64>;

pub type FourWell32 = energy::FourWellEnergy<f32>;
pub type RosenbrockChain32 = energy::RosenbrockChainEnergy<f32>;
pub type QuadraticSphere32 = energy::QuadraticSphereEnergy<f32>;
pub type SaddleParams32 = dynamics::SaddleParams<f32>;
pub type SolverState32 = dynamics::SolverState<f32>;
pub type Trajectory32 = dynamics::Trajectory<f32>;
