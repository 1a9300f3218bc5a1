use crate::dynamics::scheme::{projected_curvature, reflected_force};
use crate::dynamics::state::{Frame, SolverState};
use crate::dynamics::SaddleParams;
use crate::energy::EnergyLandscape;
use crate::error::{check_dim, HisdError, Result};
use crate::linalg::{axpy, dot};
use crate::scalar::Scalar;

/// Time derivatives of the continuous constrained dynamics at `(x, V)`:
///
/// ```text
/// dx/dt   = alpha (I - x x^T - 2 sum_j v_j v_j^T) F(x)
/// dv_i/dt = beta (I - x x^T - v_i v_i^T - 2 sum_{j<i} v_j v_j^T) H(x) v_i + beta x (v_i^T F(x))
/// ```
///
/// No constraint checks; intended for integrator stages that leave the
/// constraint set by higher-order terms.
pub fn rhs_unchecked<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    x: &[T],
    frame: &[Vec<T>],
    alpha: T,
    beta: T,
) -> (Vec<T>, Frame<T>) {
    let d = x.len();
    let mut f = vec![T::zero(); d];
    landscape.force_into(x, &mut f);
    let mut dx = reflected_force(Some(x), frame, &f);
    dx.iter_mut().for_each(|c| *c *= alpha);

    let mut w = vec![T::zero(); d];
    let dv = (0..frame.len())
        .map(|i| {
            landscape.hessian_action_into(x, &frame[i], &mut w);
            let mut g = projected_curvature(Some(x), frame, i, &w);
            axpy(dot(&frame[i], &f), x, &mut g);
            g.iter_mut().for_each(|c| *c *= beta);
            g
        })
        .collect();
    (dx, dv)
}

/// Checked right-hand side: `(x, V)` must satisfy the sphere and frame
/// constraints to `1e-6`.
pub fn continuous_rhs<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    x: &[T],
    frame: &[Vec<T>],
    params: &SaddleParams<T>,
) -> Result<(Vec<T>, Frame<T>)> {
    check_dim(landscape.dimension(), x.len())?;
    let state = SolverState::from_parts(0, x.to_vec(), frame.to_vec())?;
    state.check_shape(params)?;
    let tol = T::tolerance(1e-6, 1024.0);
    let defects = state.defects();
    if defects.max_defect() > tol {
        return Err(HisdError::InvalidArgument(format!(
            "point violates the constraint set by {:e}",
            defects.max_defect().as_f64()
        )));
    }
    Ok(rhs_unchecked(landscape, x, frame, params.alpha, params.beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::prepare_initial_state;
    use crate::energy::{FourWellEnergy, QuadraticSphereEnergy, RosenbrockChainEnergy};
    use crate::random::{gaussian_vector, rng};

    #[test]
    fn vanishes_at_exact_saddle() {
        let e = QuadraticSphereEnergy::new(vec![1.0f64, 2.0, 3.0]).unwrap();
        let p = SaddleParams::new(2, 1.0, 1.0, 0.1, 1.0).unwrap();
        let (dx, dv) = continuous_rhs(
            &e,
            &[0.0, 0.0, 1.0],
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
            &p,
        )
        .unwrap();
        assert!(dx.iter().all(|c| c.abs() < 1e-12));
        assert!(dv.iter().flatten().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn rejects_points_off_the_constraint_set() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(continuous_rhs(&e, &[1.0, 0.1], &[vec![0.0, 1.0]], &p).is_err());
        assert!(continuous_rhs(&e, &[1.0, 0.0], &[vec![0.1, 1.0]], &p).is_err());
    }

    #[test]
    fn flow_preserves_the_constraints_to_first_order() {
        // x^T dx/dt = 0 and v_i^T dx/dt + x^T dv_i/dt = (beta - alpha) v_i^T F,
        // which vanishes for alpha = beta.
        let e = RosenbrockChainEnergy::new(2.0, -9.8);
        let q = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let mut r = rng(11);
        for trial in 0..20 {
            let (land, d, k): (&dyn EnergyLandscape<f64>, usize, usize) =
                if trial % 2 == 0 { (&e, 3, 1) } else { (&q, 5, 3) };
            let x0 = gaussian_vector::<f64, _>(&mut r, d);
            let v0: Vec<Vec<f64>> = (0..k).map(|_| gaussian_vector(&mut r, d)).collect();
            let st = prepare_initial_state(&x0, &v0).unwrap();
            let p = SaddleParams::new(k, 1.3, 1.3, 0.1, 1.0).unwrap();
            let (dx, dv) = continuous_rhs(land, &st.x, &st.frame, &p).unwrap();
            let scale = 1.0 + dot(&dx, &dx).sqrt();
            assert!(dot(&st.x, &dx).abs() < 1e-12 * scale);
            for (v, dvi) in st.frame.iter().zip(&dv) {
                let rate = dot(v, &dx) + dot(&st.x, dvi);
                assert!(rate.abs() < 1e-10 * scale, "{rate}");
            }
        }
    }
}
