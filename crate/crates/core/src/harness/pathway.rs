use rayon::prelude::*;

use crate::dynamics::{integrate, SaddleParams, SolverState, Trajectory};
use crate::energy::EnergyLandscape;
use crate::error::{check_dim, HisdError, Result};
use crate::harness::convergence::check_tau_list;
use crate::harness::grid_stride;
use crate::linalg::distance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PathwayRow<T> {
    pub tau: T,
    /// `max_n |x^tau(t_n) - x^{tau'}(t_n)|` against the next finer step `tau'`
    /// in the list; `None` for the finest.
    pub cauchy_diff: Option<T>,
    /// `|x^tau(T) - target|`
    pub endpoint_distance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathwayReport<T> {
    pub initial: SolverState<T>,
    pub rows: Vec<PathwayRow<T>>,
}

impl<T: Scalar> PathwayReport<T> {
    /// Ratios of consecutive Cauchy differences. About `2` per halving of
    /// `tau` for a first-order scheme.
    pub fn cauchy_ratios(&self) -> Vec<T> {
        let diffs: Vec<T> = self.rows.iter().filter_map(|r| r.cauchy_diff).collect();
        diffs.windows(2).map(|w| w[0] / w[1]).collect()
    }
}

fn cauchy_difference<T: Scalar>(coarse: &Trajectory<T>, fine: &Trajectory<T>) -> Result<T> {
    let stride = grid_stride(coarse.params.tau, fine.params.tau)?;
    let mut worst = T::zero();
    for s in &coarse.states {
        let f = fine.state_at_step(s.n * stride).ok_or_else(|| {
            HisdError::InvalidArgument(format!("finer run lacks step {}", s.n * stride))
        })?;
        worst = worst.max(distance(&s.x, &f.x));
    }
    Ok(worst)
}

/// Integrates each initial state at every step size and reports successive-
/// refinement differences and the distance of the endpoint to `target`.
pub fn pathway_convergence_study<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initials: &[SolverState<T>],
    params: &SaddleParams<T>,
    tau_list: &[T],
    target: &[T],
) -> Result<Vec<PathwayReport<T>>> {
    check_tau_list(tau_list, None)?;
    check_dim(landscape.dimension(), target.len())?;
    for w in tau_list.windows(2) {
        grid_stride(w[0], w[1])?;
    }
    initials
        .iter()
        .map(|initial| {
            let runs: Vec<Trajectory<T>> = tau_list
                .par_iter()
                .map(|&tau| integrate(landscape, initial, &params.clone().with_tau(tau)?, 1))
                .collect::<Result<_>>()?;
            let rows = runs
                .iter()
                .enumerate()
                .map(|(i, run)| {
                    Ok(PathwayRow {
                        tau: run.params.tau,
                        cauchy_diff: runs.get(i + 1).map(|fine| cauchy_difference(run, fine)).transpose()?,
                        endpoint_distance: distance(&run.final_state().x, target),
                    })
                })
                .collect::<Result<_>>()?;
            Ok(PathwayReport {
                initial: initial.clone(),
                rows,
            })
        })
        .collect()
}
