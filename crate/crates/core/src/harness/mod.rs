//! Convergence analysis: reference solutions on nested dyadic grids, error
//! norms, rate tables and the scaling studies built on them.

mod convergence;
mod errors;
mod index_robust;
mod lemmas;
mod oracle;
mod pathway;
mod reference;

pub use convergence::{convergence_study, observed_rate, ConvergenceRow, ConvergenceTable};
pub use errors::{pointwise_errors, ErrorReport};
pub use index_robust::{
    index_robust_study, random_initial_state, IndexRobustReport, IndexRobustRow, IndexRobustSetup,
    Relaxation,
};
pub use lemmas::{lemma_scaling_study, LemmaScalingReport, ProbeScaling, ScalingFit, EXPONENT_FLOOR};
pub use oracle::rk4_oracle;
pub use pathway::{pathway_convergence_study, PathwayReport, PathwayRow};
pub use reference::{grid_stride, is_dyadic, reference_solution, DEFAULT_REFERENCE_TAU};
