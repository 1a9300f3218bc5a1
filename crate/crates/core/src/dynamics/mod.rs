//! The discretized constrained saddle dynamics on `S^{d-1}`: the stepper and
//! its sub-operations, time integration, the unconstrained comparison scheme
//! and the continuous right-hand side.

pub(crate) mod integrate;
mod params;
mod rhs;
mod scheme;
mod state;
mod unconstrained;

pub use integrate::{integrate, Trajectory, STEP_CHECK_SAMPLES, STEP_CHECK_SEED};
pub use params::SaddleParams;
pub use rhs::{continuous_rhs, rhs_unchecked};
pub use scheme::{
    drift_v, drift_x, orthonormalize, retract, step, transport, y_formula, StepProbes,
};
pub use state::{prepare_initial_state, Frame, InvariantDefects, SolverState};
pub use unconstrained::{integrate_unconstrained, step_unconstrained};
