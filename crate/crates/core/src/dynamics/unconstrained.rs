use crate::dynamics::integrate::{check_initial, time_of, Trajectory};
use crate::dynamics::scheme::{
    evaluate_force, evaluate_hessian_action, gram_schmidt, projected_curvature, reflected_force,
};
use crate::dynamics::state::{frame_orthonormality_defect, Frame, SolverState};
use crate::dynamics::SaddleParams;
use crate::energy::EnergyLandscape;
use crate::error::{check_dim, HisdError, Result};
use crate::linalg::axpy;
use crate::scalar::Scalar;

/// Explicit Euler step of the saddle dynamics without the sphere constraint,
/// followed by Gram-Schmidt on the frame. No retraction and no transport.
pub fn step_unconstrained<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    state: &SolverState<T>,
    params: &SaddleParams<T>,
) -> Result<SolverState<T>> {
    check_dim(landscape.dimension(), state.dimension())?;
    state.check_shape(params)?;
    let n = state.n + 1;
    let f = evaluate_force(landscape, &state.x, n)?;

    let mut x = state.x.clone();
    axpy(params.tau * params.alpha, &reflected_force(None, &state.frame, &f), &mut x);

    let tb = params.tau * params.beta;
    let mut v_tilde: Frame<T> = Vec::with_capacity(state.k());
    for i in 0..state.k() {
        let w = evaluate_hessian_action(landscape, &state.x, &state.frame[i], n, i)?;
        let mut v = state.frame[i].clone();
        axpy(tb, &projected_curvature(None, &state.frame, i, &w), &mut v);
        v_tilde.push(v);
    }
    let frame = gram_schmidt(&v_tilde, params.y_degenerate_tol)?;
    let defect = frame_orthonormality_defect(&frame);
    if defect > params.orthonormality_tol {
        return Err(HisdError::InternalConsistency {
            step: n,
            detail: format!("frame orthonormality defect {:e}", defect.as_f64()),
        });
    }
    Ok(SolverState { n, x, frame })
}

/// Time integration of [`step_unconstrained`]; the returned trajectory
/// carries no probes.
pub fn integrate_unconstrained<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    record_every: usize,
) -> Result<Trajectory<T>> {
    let steps = check_initial(landscape, initial, params, record_every)?;
    let mut times = vec![T::zero()];
    let mut states = vec![initial.clone()];
    let mut current = initial.clone();
    let mut max_defects = initial.defects();
    for n in 1..=steps {
        let next = step_unconstrained(landscape, &current, params)
            .map_err(|e| e.at_time(time_of(n - 1, params.tau).as_f64()))?;
        max_defects = max_defects.merge(next.defects());
        if n % record_every == 0 || n == steps {
            times.push(time_of(n, params.tau));
            states.push(next.clone());
        }
        current = next;
    }
    Ok(Trajectory {
        params: params.clone(),
        record_every,
        times,
        states,
        probes: Vec::new(),
        max_defects,
        operator_bound: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::FourWellEnergy;
    use crate::linalg::dot;

    #[test]
    fn euler_formula() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let s = 0.5f64.sqrt();
        let st = SolverState::new(vec![s, s], vec![vec![-s, s]]).unwrap();
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        let next = step_unconstrained(&e, &st, &p).unwrap();
        let f = e.force(&st.x).unwrap();
        let v = &st.frame[0];
        let vf = dot(v, &f);
        let x_expected: Vec<f64> = (0..2).map(|c| st.x[c] + 0.1 * (f[c] - 2.0 * vf * v[c])).collect();
        for (a, b) in next.x.iter().zip(&x_expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let w = e.hessian_action(&st.x, v).unwrap();
        let vw = dot(v, &w);
        let mut v_expected: Vec<f64> = (0..2).map(|c| v[c] + 0.1 * (w[c] - vw * v[c])).collect();
        let nv = dot(&v_expected, &v_expected).sqrt();
        v_expected.iter_mut().for_each(|c| *c /= nv);
        for (a, b) in next.frame[0].iter().zip(&v_expected) {
            assert!((a - b).abs() < 1e-15);
        }
        // x leaves the sphere without the retraction
        assert!((dot(&next.x, &next.x) - 1.0).abs() > 1e-3);
    }

    #[test]
    fn critical_point_is_fixed() {
        let e = FourWellEnergy::new(5.0, 1.0);
        // origin: F = 0; H = diag(10, 2) has e1 as eigenvector with v^T H v = 10
        // so the projected curvature term (I - v v^T) H v vanishes.
        let st = SolverState::from_parts(0, vec![0.0, 0.0], vec![vec![1.0, 0.0]]).unwrap();
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        let next = step_unconstrained(&e, &st, &p).unwrap();
        assert_eq!(next.x, st.x);
        assert_eq!(next.frame, st.frame);
    }
}
