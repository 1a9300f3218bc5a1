use rayon::prelude::*;

use crate::dynamics::{integrate, SaddleParams, SolverState};
use crate::energy::EnergyLandscape;
use crate::error::{HisdError, Result};
use crate::harness::{grid_stride, pointwise_errors, reference_solution, ErrorReport};
use crate::scalar::Scalar;

/// One row of a rate table. Rates compare against the previous (coarser) row.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub errors: ErrorReport<T>,
    pub rate_x: Option<T>,
    pub rate_v: Vec<Option<T>>,
    pub rate_avg: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable<T> {
    pub reference_tau: T,
    pub rows: Vec<ConvergenceRow<T>>,
}

/// Observed order between two runs: `log2(e_coarse / e_fine) / log2(tau_coarse / tau_fine)`.
/// Reduces to `log2(e_coarse / e_fine)` when the step is halved.
pub fn observed_rate<T: Scalar>(e_coarse: T, e_fine: T, tau_coarse: T, tau_fine: T) -> T {
    (e_coarse / e_fine).log2() / (tau_coarse / tau_fine).log2()
}

impl<T: Scalar> ConvergenceTable<T> {
    /// Builds the table from per-step-size reports ordered from coarse to fine.
    pub fn from_reports(reference_tau: T, reports: Vec<ErrorReport<T>>) -> Self {
        let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(reports.len());
        for report in reports {
            let row = match rows.last() {
                None => ConvergenceRow {
                    rate_x: None,
                    rate_v: vec![None; report.err_v.len()],
                    rate_avg: None,
                    errors: report,
                },
                Some(prev) => {
                    let p = &prev.errors;
                    let rate = |a: T, b: T| Some(observed_rate(a, b, p.tau, report.tau));
                    ConvergenceRow {
                        rate_x: rate(p.err_x, report.err_x),
                        rate_v: p.err_v.iter().zip(&report.err_v).map(|(&a, &b)| rate(a, b)).collect(),
                        rate_avg: rate(p.err_v_avg, report.err_v_avg),
                        errors: report,
                    }
                }
            };
            rows.push(row);
        }
        Self { reference_tau, rows }
    }

    pub fn taus(&self) -> Vec<T> {
        self.rows.iter().map(|r| r.errors.tau).collect()
    }

    pub fn rates_x(&self) -> Vec<T> {
        self.rows.iter().filter_map(|r| r.rate_x).collect()
    }
}

pub(crate) fn check_tau_list<T: Scalar>(tau_list: &[T], tau_ref: Option<T>) -> Result<()> {
    if tau_list.is_empty() {
        return Err(HisdError::InvalidArgument("tau list is empty".into()));
    }
    for w in tau_list.windows(2) {
        if !(w[1] < w[0]) {
            return Err(HisdError::InvalidArgument(format!(
                "tau list must be strictly decreasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    if let Some(r) = tau_ref {
        for &tau in tau_list {
            if !(tau > r) {
                return Err(HisdError::InvalidArgument(format!(
                    "tau {} is not coarser than the reference step {}",
                    tau, r
                )));
            }
            grid_stride(tau, r)?;
        }
    }
    Ok(())
}

/// Runs the scheme at every step size in `tau_list` (coarse to fine) and at
/// `tau_ref`, and tabulates the max-over-time errors with observed rates.
/// Runs execute in parallel; the table order is that of `tau_list`.
pub fn convergence_study<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    tau_list: &[T],
    tau_ref: T,
) -> Result<ConvergenceTable<T>> {
    check_tau_list(tau_list, Some(tau_ref))?;
    let (reference, coarse) = rayon::join(
        || reference_solution(landscape, initial, params, tau_ref, tau_list),
        || {
            tau_list
                .par_iter()
                .map(|&tau| integrate(landscape, initial, &params.clone().with_tau(tau)?, 1))
                .collect::<Result<Vec<_>>>()
        },
    );
    let reference = reference?;
    let reports = coarse?
        .iter()
        .map(|run| pointwise_errors(run, &reference))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::from_reports(tau_ref, reports))
}
