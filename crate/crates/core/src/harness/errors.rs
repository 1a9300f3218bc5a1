use crate::dynamics::Trajectory;
use crate::error::{check_dim, HisdError, Result};
use crate::linalg::distance;
use crate::scalar::Scalar;

/// Max-over-time errors of a coarse run against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub tau: T,
    /// `max_n |x(t_n) - x_n|`
    pub err_x: T,
    /// `max_n |v_i(t_n) - v_{i,n}|` for each direction.
    pub err_v: Vec<T>,
    /// `max_n (1/k) sum_i |v_i(t_n) - v_{i,n}|`
    pub err_v_avg: T,
}

impl<T: Scalar> ErrorReport<T> {
    pub fn err_v_sum(&self) -> T {
        self.err_v.iter().copied().sum()
    }

    /// `err_x + err_v_avg`
    pub fn total(&self) -> T {
        self.err_x + self.err_v_avg
    }
}

/// Compares `coarse` with `reference` at every coarse snapshot after `t = 0`.
/// Each coarse time must be present among the reference snapshots.
pub fn pointwise_errors<T: Scalar>(coarse: &Trajectory<T>, reference: &Trajectory<T>) -> Result<ErrorReport<T>> {
    let c0 = coarse
        .states
        .first()
        .ok_or_else(|| HisdError::InvalidArgument("empty coarse trajectory".into()))?;
    let r0 = reference
        .states
        .first()
        .ok_or_else(|| HisdError::InvalidArgument("empty reference trajectory".into()))?;
    check_dim(r0.dimension(), c0.dimension())?;
    if c0.k() != r0.k() {
        return Err(HisdError::InvalidArgument(format!(
            "coarse run has k = {} but reference has k = {}",
            c0.k(),
            r0.k()
        )));
    }
    let k = c0.k();
    let tau_c = coarse.params.tau;
    let tau_r = reference.params.tau;
    let stride = super::grid_stride(tau_c, tau_r)?;

    let mut err_x = T::zero();
    let mut err_v = vec![T::zero(); k];
    let mut err_v_avg = T::zero();
    let kk = T::of(k as f64);
    for (state, &t) in coarse.states.iter().zip(&coarse.times).skip(1) {
        let coarse_step = state.n - c0.n;
        let fine_step = coarse_step * stride;
        let missing = || {
            HisdError::InvalidArgument(format!(
                "reference has no snapshot at t = {} (fine step {fine_step})",
                t
            ))
        };
        let idx = reference.snapshot_index(fine_step).ok_or_else(missing)?;
        let reference_state = &reference.states[idx];
        let t_ref = reference.times[idx];
        if ((t_ref - t).abs()).as_f64() > 1e-14 * t.as_f64().abs().max(1.0) {
            return Err(HisdError::InvalidArgument(format!(
                "time misalignment: coarse t = {t}, reference t = {t_ref}"
            )));
        }
        err_x = err_x.max(distance(&reference_state.x, &state.x));
        let mut avg = T::zero();
        for (i, (vr, vc)) in reference_state.frame.iter().zip(&state.frame).enumerate() {
            let e = distance(vr, vc);
            err_v[i] = err_v[i].max(e);
            avg += e;
        }
        err_v_avg = err_v_avg.max(avg / kk);
    }
    Ok(ErrorReport {
        tau: tau_c,
        err_x,
        err_v,
        err_v_avg,
    })
}
