use rayon::prelude::*;

use crate::dynamics::{integrate, prepare_initial_state, SaddleParams, SolverState};
use crate::energy::QuadraticSphereEnergy;
use crate::error::{HisdError, Result};
use crate::harness::{pointwise_errors, reference_solution, ErrorReport};
use crate::linalg::dot;
use crate::random::{gaussian_vector, rng, unit_vector};
use crate::scalar::Scalar;

/// Choice of `alpha = beta` per index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relaxation<T> {
    /// `alpha = beta = q0 / k`
    ScaledByIndex { q0: T },
    /// The same `alpha = beta` for every `k`.
    Fixed(T),
}

impl<T: Scalar> Relaxation<T> {
    pub fn for_index(&self, k: usize) -> T {
        match *self {
            Relaxation::ScaledByIndex { q0 } => q0 / T::of(k as f64),
            Relaxation::Fixed(v) => v,
        }
    }
}

/// Sweep over saddle indices on `E = x^T diag(1, ..., d) x / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexRobustSetup<T> {
    pub d: usize,
    pub k_list: Vec<usize>,
    pub relaxation: Relaxation<T>,
    pub tau: T,
    pub tau_ref: T,
    pub horizon: T,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexRobustRow<T> {
    pub k: usize,
    pub alpha: T,
    pub beta: T,
    pub errors: ErrorReport<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexRobustReport<T> {
    pub rows: Vec<IndexRobustRow<T>>,
}

impl<T: Scalar> IndexRobustReport<T> {
    /// `max_k / min_k` of `err_x + err_v_avg`.
    pub fn ratio(&self) -> T {
        let totals = self.rows.iter().map(|r| r.errors.total());
        let max = totals.clone().fold(T::neg_infinity(), T::max);
        let min = totals.fold(T::infinity(), T::min);
        max / min
    }
}

/// Seeded compliant initial data in `R^d`: `x0` is `e_1` reflected through a
/// random hyperplane, and the frame is `k` Gaussian vectors projected and
/// orthonormalized at `x0`. For a fixed seed the frame for `k` is a prefix of
/// the frame for any larger `k`.
pub fn random_initial_state<T: Scalar>(d: usize, k: usize, seed: u64) -> Result<SolverState<T>> {
    if d < 2 || k == 0 || k >= d {
        return Err(HisdError::InvalidArgument(format!("need 1 <= k < d, got k = {k}, d = {d}")));
    }
    let mut r = rng(seed);
    let u: Vec<T> = unit_vector(&mut r, d);
    let two = T::of(2.0);
    let mut x0: Vec<T> = u.iter().map(|&ui| -two * u[0] * ui).collect();
    x0[0] += T::one();
    debug_assert!((dot(&x0, &x0) - T::one()).abs() < T::of(1e-6));
    let frame: Vec<Vec<T>> = (0..k).map(|_| gaussian_vector(&mut r, d)).collect();
    prepare_initial_state(&x0, &frame)
}

/// For each `k`, runs the scheme at `tau` and at `tau_ref` from the seeded
/// initial data and records the errors. Runs execute in parallel; rows follow
/// `k_list`.
pub fn index_robust_study<T: Scalar>(setup: &IndexRobustSetup<T>) -> Result<IndexRobustReport<T>> {
    if setup.k_list.is_empty() {
        return Err(HisdError::InvalidArgument("k list is empty".into()));
    }
    let landscape = QuadraticSphereEnergy::<T>::integer_spectrum(setup.d);
    let rows = setup
        .k_list
        .par_iter()
        .map(|&k| {
            let initial = random_initial_state(setup.d, k, setup.seed)?;
            let relax = setup.relaxation.for_index(k);
            let params = SaddleParams::new(k, relax, relax, setup.tau, setup.horizon)?;
            let reference = reference_solution(&landscape, &initial, &params, setup.tau_ref, &[setup.tau])?;
            let coarse = integrate(&landscape, &initial, &params, 1)?;
            Ok(IndexRobustRow {
                k,
                alpha: relax,
                beta: relax,
                errors: pointwise_errors(&coarse, &reference)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(IndexRobustReport { rows })
}
