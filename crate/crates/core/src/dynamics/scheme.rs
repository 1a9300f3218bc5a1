//! One step of the first-order constrained scheme:
//!
//! ```text
//! x~   = x + tau alpha (I - x x^T - 2 sum_j v_j v_j^T) F(x)
//! x'   = x~ / |x~|
//! v~_i = v_i + tau beta (I - x x^T - v_i v_i^T - 2 sum_{j<i} v_j v_j^T) H(x) v_i
//!            + tau beta x (v_i^T F(x))
//! v^_i = v~_i - (v~_i^T x') x'
//! v'_i = Gram-Schmidt(v^_1, ..., v^_k)_i
//! ```
//!
//! All `v~_i` use the previous position and frame. Projectors are applied
//! through inner products only.

use crate::dynamics::state::{frame_orthonormality_defect, Frame, SolverState};
use crate::dynamics::SaddleParams;
use crate::energy::EnergyLandscape;
use crate::error::{check_dim, HisdError, Result};
use crate::linalg::{axpy, dot, is_finite, norm, sub};
use crate::scalar::Scalar;

/// Per-step magnitudes of the intermediate defects of the scheme. Each is
/// `O(tau^2)` for a smooth landscape.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepProbes<T> {
    /// `|1 - |x~||`
    pub retraction_defect: T,
    /// `max_{m<i} |v~_m^T v~_i|`
    pub max_tilde_cross: T,
    /// `max_i ||v~_i|^2 - 1|`
    pub max_tilde_norm_defect: T,
    /// `max_i |v^_i - v~_i|`
    pub max_transport_shift: T,
    /// `max_{m<i} |v^_m^T v^_i|`
    pub max_hat_cross: T,
    /// `max_i ||v^_i|^2 - 1|`
    pub max_hat_norm_defect: T,
    /// `max_i |v_i - v^_i|`
    pub max_gs_shift: T,
}

impl<T: Scalar> StepProbes<T> {
    pub const FIELD_NAMES: [&'static str; 7] = [
        "retraction_defect",
        "max_tilde_cross",
        "max_tilde_norm_defect",
        "max_transport_shift",
        "max_hat_cross",
        "max_hat_norm_defect",
        "max_gs_shift",
    ];

    pub fn values(&self) -> [T; 7] {
        [
            self.retraction_defect,
            self.max_tilde_cross,
            self.max_tilde_norm_defect,
            self.max_transport_shift,
            self.max_hat_cross,
            self.max_hat_norm_defect,
            self.max_gs_shift,
        ]
    }

    pub fn from_values(v: [T; 7]) -> Self {
        Self {
            retraction_defect: v[0],
            max_tilde_cross: v[1],
            max_tilde_norm_defect: v[2],
            max_transport_shift: v[3],
            max_hat_cross: v[4],
            max_hat_norm_defect: v[5],
            max_gs_shift: v[6],
        }
    }

    /// Field-wise maximum.
    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = (self.values(), other.values());
        Self::from_values(std::array::from_fn(|i| a[i].max(b[i])))
    }
}

fn max_cross<T: Scalar>(vs: &[Vec<T>]) -> T {
    let mut worst = T::zero();
    for (i, vi) in vs.iter().enumerate() {
        for vm in &vs[..i] {
            worst = worst.max(dot(vm, vi).abs());
        }
    }
    worst
}

fn max_norm_defect<T: Scalar>(vs: &[Vec<T>]) -> T {
    vs.iter()
        .map(|v| (dot(v, v) - T::one()).abs())
        .fold(T::zero(), T::max)
}

fn max_shift<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(u, v)| norm(&sub(u, v)))
        .fold(T::zero(), T::max)
}

fn step_inputs<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    state: &SolverState<T>,
    params: &SaddleParams<T>,
) -> Result<()> {
    check_dim(landscape.dimension(), state.dimension())?;
    state.check_shape(params)
}

pub(crate) fn evaluate_force<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    x: &[T],
    step: usize,
) -> Result<Vec<T>> {
    let mut f = vec![T::zero(); x.len()];
    landscape.force_into(x, &mut f);
    if !is_finite(&f) {
        return Err(HisdError::NonFinite {
            quantity: "force",
            step,
            eigen_index: None,
        });
    }
    Ok(f)
}

pub(crate) fn evaluate_hessian_action<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    x: &[T],
    v: &[T],
    step: usize,
    eigen_index: usize,
) -> Result<Vec<T>> {
    let mut w = vec![T::zero(); x.len()];
    landscape.hessian_action_into(x, v, &mut w);
    if !is_finite(&w) {
        return Err(HisdError::NonFinite {
            quantity: "Hessian action",
            step,
            eigen_index: Some(eigen_index),
        });
    }
    Ok(w)
}

/// `(I - x x^T - 2 sum_j v_j v_j^T) f`, optionally without the `x x^T` term.
pub(crate) fn reflected_force<T: Scalar>(x: Option<&[T]>, frame: &[Vec<T>], f: &[T]) -> Vec<T> {
    let mut g = f.to_vec();
    if let Some(x) = x {
        axpy(-dot(x, f), x, &mut g);
    }
    let two = T::of(2.0);
    for v in frame {
        axpy(-two * dot(v, f), v, &mut g);
    }
    g
}

/// `(I - x x^T - v_i v_i^T - 2 sum_{j<i} v_j v_j^T) w`, optionally without the
/// `x x^T` term.
pub(crate) fn projected_curvature<T: Scalar>(x: Option<&[T]>, frame: &[Vec<T>], i: usize, w: &[T]) -> Vec<T> {
    let mut g = w.to_vec();
    if let Some(x) = x {
        axpy(-dot(x, w), x, &mut g);
    }
    let vi = &frame[i];
    axpy(-dot(vi, w), vi, &mut g);
    let two = T::of(2.0);
    for vj in &frame[..i] {
        axpy(-two * dot(vj, w), vj, &mut g);
    }
    g
}

fn drift_x_from_force<T: Scalar>(state: &SolverState<T>, f: &[T], params: &SaddleParams<T>) -> Vec<T> {
    let g = reflected_force(Some(&state.x), &state.frame, f);
    let mut x_tilde = state.x.clone();
    axpy(params.tau * params.alpha, &g, &mut x_tilde);
    x_tilde
}

fn drift_v_from<T: Scalar>(state: &SolverState<T>, i: usize, w: &[T], f: &[T], params: &SaddleParams<T>) -> Vec<T> {
    let g = projected_curvature(Some(&state.x), &state.frame, i, w);
    let tb = params.tau * params.beta;
    let mut v_tilde = state.frame[i].clone();
    axpy(tb, &g, &mut v_tilde);
    axpy(tb * dot(&state.frame[i], f), &state.x, &mut v_tilde);
    v_tilde
}

/// Unnormalized position update `x~` (before retraction).
pub fn drift_x<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    state: &SolverState<T>,
    params: &SaddleParams<T>,
) -> Result<Vec<T>> {
    step_inputs(landscape, state, params)?;
    let f = evaluate_force(landscape, &state.x, state.n + 1)?;
    Ok(drift_x_from_force(state, &f, params))
}

/// Unnormalized update `v~_i` of the frame direction with zero-based index `i`.
pub fn drift_v<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    state: &SolverState<T>,
    i: usize,
    params: &SaddleParams<T>,
) -> Result<Vec<T>> {
    step_inputs(landscape, state, params)?;
    if i >= state.k() {
        return Err(HisdError::InvalidArgument(format!(
            "direction index {i} out of range for k = {}",
            state.k()
        )));
    }
    let step = state.n + 1;
    let f = evaluate_force(landscape, &state.x, step)?;
    let w = evaluate_hessian_action(landscape, &state.x, &state.frame[i], step, i)?;
    Ok(drift_v_from(state, i, &w, &f, params))
}

pub(crate) fn retract_with_tol<T: Scalar>(x_tilde: &[T], tol: T, step: usize) -> Result<Vec<T>> {
    let n = norm(x_tilde);
    if !(n > tol) {
        return Err(HisdError::DegenerateRetraction { step, norm: n.as_f64() });
    }
    Ok(x_tilde.iter().map(|&v| v / n).collect())
}

/// Retraction onto the unit sphere, `x~ / |x~|`.
pub fn retract<T: Scalar>(x_tilde: &[T]) -> Result<Vec<T>> {
    retract_with_tol(x_tilde, T::tolerance(1e-12, 16.0), 0)
}

pub(crate) fn project_tangent<T: Scalar>(v: &[T], x: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    axpy(-dot(v, x), x, &mut out);
    out
}

/// Vector transport to the tangent space at the unit vector `x_new`:
/// `v^ = v~ - (v~^T x_new) x_new`.
pub fn transport<T: Scalar>(v_tilde: &[T], x_new: &[T]) -> Result<Vec<T>> {
    check_dim(x_new.len(), v_tilde.len())?;
    Ok(project_tangent(v_tilde, x_new))
}

/// Closed-form Gram-Schmidt normalizer
/// `Y_i = (|v^_i|^2 - sum_{j<i} (v^_i^T v_j)^2)^{1/2}` against already
/// orthonormalized predecessors `v_1..v_{i-1}`. `NaN` if the radicand is negative.
pub fn y_formula<T: Scalar>(v_hat: &[T], predecessors: &[Vec<T>]) -> T {
    let mut s = dot(v_hat, v_hat);
    for vj in predecessors {
        let c = dot(v_hat, vj);
        s -= c * c;
    }
    s.sqrt()
}

/// Classical Gram-Schmidt with residual-norm normalization.
pub(crate) fn gram_schmidt<T: Scalar>(vectors: &[Vec<T>], tol: T) -> Result<Frame<T>> {
    gram_schmidt_checked(vectors, tol, None)
}

fn gram_schmidt_checked<T: Scalar>(vectors: &[Vec<T>], tol: T, verify: Option<T>) -> Result<Frame<T>> {
    let mut out: Frame<T> = Vec::with_capacity(vectors.len());
    for (i, v_hat) in vectors.iter().enumerate() {
        if let Some(first) = vectors.first() {
            check_dim(first.len(), v_hat.len())?;
        }
        let mut r = v_hat.clone();
        for vj in &out {
            axpy(-dot(v_hat, vj), vj, &mut r);
        }
        let rn = norm(&r);
        if !(rn > tol) {
            return Err(HisdError::DegenerateFrame {
                index: i,
                residual: rn.as_f64(),
            });
        }
        if let Some(vtol) = verify {
            let y = y_formula(v_hat, &out);
            if !((rn - y).abs() <= vtol) {
                return Err(HisdError::InternalConsistency {
                    step: 0,
                    detail: format!(
                        "Gram-Schmidt residual {:e} disagrees with Y_{} = {:e}",
                        rn.as_f64(),
                        i + 1,
                        y.as_f64()
                    ),
                });
            }
        }
        r.iter_mut().for_each(|c| *c /= rn);
        out.push(r);
    }
    Ok(out)
}

/// Gram-Schmidt orthonormalization of the transported directions. With
/// `params.verify_gram_schmidt` the residual norms are checked against
/// [`y_formula`] to `1e-8`.
pub fn orthonormalize<T: Scalar>(v_hat: &[Vec<T>], params: &SaddleParams<T>) -> Result<Frame<T>> {
    if v_hat.iter().any(|v| !is_finite(v)) {
        return Err(HisdError::InvalidArgument("non-finite direction passed to Gram-Schmidt".into()));
    }
    let verify = params.verify_gram_schmidt.then(|| T::of(1e-8));
    gram_schmidt_checked(v_hat, params.y_degenerate_tol, verify)
}

/// Advances the state by one step of the constrained scheme and reports the
/// intermediate defects. Uses exactly one force evaluation and `k` Hessian
/// actions.
pub fn step<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    state: &SolverState<T>,
    params: &SaddleParams<T>,
) -> Result<(SolverState<T>, StepProbes<T>)> {
    step_inputs(landscape, state, params)?;
    let n = state.n + 1;
    let f = evaluate_force(landscape, &state.x, n)?;

    let x_tilde = drift_x_from_force(state, &f, params);
    let x_new = retract_with_tol(&x_tilde, params.y_degenerate_tol, n)?;

    let mut v_tilde = Vec::with_capacity(state.k());
    for i in 0..state.k() {
        let w = evaluate_hessian_action(landscape, &state.x, &state.frame[i], n, i)?;
        v_tilde.push(drift_v_from(state, i, &w, &f, params));
    }
    let v_hat: Frame<T> = v_tilde.iter().map(|v| project_tangent(v, &x_new)).collect();
    let frame = orthonormalize(&v_hat, params).map_err(|e| match e {
        HisdError::InternalConsistency { detail, .. } => HisdError::InternalConsistency { step: n, detail },
        other => other,
    })?;

    let probes = StepProbes {
        retraction_defect: (T::one() - norm(&x_tilde)).abs(),
        max_tilde_cross: max_cross(&v_tilde),
        max_tilde_norm_defect: max_norm_defect(&v_tilde),
        max_transport_shift: max_shift(&v_hat, &v_tilde),
        max_hat_cross: max_cross(&v_hat),
        max_hat_norm_defect: max_norm_defect(&v_hat),
        max_gs_shift: max_shift(&frame, &v_hat),
    };

    let next = SolverState { n, x: x_new, frame };
    let defects = next.defects();
    if !defects.within(params) {
        return Err(HisdError::InternalConsistency {
            step: n,
            detail: format!(
                "constraint defects after step: sphere {:e}, tangency {:e}, orthonormality {:e}",
                defects.sphere.as_f64(),
                defects.tangency.as_f64(),
                defects.orthonormality.as_f64()
            ),
        });
    }
    debug_assert!(frame_orthonormality_defect(&next.frame) <= params.orthonormality_tol);
    Ok((next, probes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{FourWellEnergy, QuadraticSphereEnergy};
    use approx::assert_abs_diff_eq;

    fn four_well_start() -> SolverState<f64> {
        let s = 0.5f64.sqrt();
        SolverState::new(vec![s, s], vec![vec![-s, s]]).unwrap()
    }

    fn assert_vec(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn drift_x_hand_example() {
        // F = (7s, -s), x^T F = 3, v^T F = -4, direction = F - 3x + 8v.
        let e = FourWellEnergy::new(5.0, 1.0);
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        let xt = drift_x(&e, &four_well_start(), &p).unwrap();
        let s = 0.5f64.sqrt();
        assert_vec(&xt, &[s - 0.4 * s, s + 0.4 * s], 1e-15);
        assert_vec(&xt, &[0.4242640687119285, 0.9899494936611665], 1e-12);
    }

    #[test]
    fn retract_examples() {
        assert_eq!(retract(&[0.0, 0.0, 2.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        let u = [0.6, 0.0, -0.8];
        assert_vec(&retract(&u).unwrap(), &u, 1e-16);
        // |x~|^2 = 0.18 + 0.98 = 1.16
        let s = 0.5f64.sqrt();
        let r = retract(&[0.6 * s, 1.4 * s]).unwrap();
        assert_vec(&r, &[0.6 * s / 1.16f64.sqrt(), 1.4 * s / 1.16f64.sqrt()], 1e-15);
        assert_vec(&r, &[0.3939192985791677, 0.9191450300180579], 1e-12);
        assert!(matches!(
            retract(&[0.0, 1e-14]),
            Err(HisdError::DegenerateRetraction { .. })
        ));
    }

    #[test]
    fn zero_force_means_zero_drift() {
        let e = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0]).unwrap();
        // x = e1 is a critical point of E on the sphere, and the full force
        // -Dx = -e1 is normal, so the tangential drift vanishes.
        let st = SolverState::new(vec![1.0, 0.0, 0.0], vec![vec![0.0, 1.0, 0.0]]).unwrap();
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        assert_vec(&drift_x(&e, &st, &p).unwrap(), &[1.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn drift_v_eigenvector_is_stationary() {
        let e = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0]).unwrap();
        let st = SolverState::new(vec![1.0, 0.0, 0.0], vec![vec![0.0, 1.0, 0.0]]).unwrap();
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        assert_vec(&drift_v(&e, &st, 0, &p).unwrap(), &[0.0, 1.0, 0.0], 0.0);
        assert!(drift_v(&e, &st, 1, &p).is_err());
    }

    #[test]
    fn drift_v_first_direction_has_no_reflection_sum() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let st = four_well_start();
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        let f = e.force(&st.x).unwrap();
        let w = e.hessian_action(&st.x, &st.frame[0]).unwrap();
        let v = &st.frame[0];
        let x = &st.x;
        let expected: Vec<f64> = (0..2)
            .map(|c| {
                v[c] + 0.1 * (w[c] - dot(x, &w) * x[c] - dot(v, &w) * v[c]) + 0.1 * dot(v, &f) * x[c]
            })
            .collect();
        assert_vec(&drift_v(&e, &st, 0, &p).unwrap(), &expected, 1e-15);
    }

    #[test]
    fn transport_examples() {
        let r = 0.5f64.sqrt();
        let x = [0.0, 0.0, 1.0];
        assert_eq!(transport(&[r, r, 0.0], &x).unwrap(), vec![r, r, 0.0]);
        assert_eq!(transport(&x, &x).unwrap(), vec![0.0, 0.0, 0.0]);
        assert!(transport(&[1.0, 0.0], &x).is_err());
    }

    #[test]
    fn orthonormalize_examples() {
        let p = SaddleParams::new(2, 1.0, 1.0, 0.1, 1.0).unwrap().verified();
        assert_eq!(orthonormalize(&[vec![0.0, 3.0, 0.0]], &p).unwrap(), vec![vec![0.0, 1.0, 0.0]]);
        assert_eq!(
            orthonormalize(&[vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]], &p).unwrap(),
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]
        );
        let c = 0.6;
        let s = 0.8;
        let on = vec![vec![c, s, 0.0], vec![-s, c, 0.0]];
        let out = orthonormalize(&on, &p).unwrap();
        for (a, b) in out.iter().zip(&on) {
            assert_vec(a, b, 1e-14);
        }
        assert!(matches!(
            orthonormalize(&[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]], &p),
            Err(HisdError::DegenerateFrame { index: 1, .. })
        ));
        assert!(orthonormalize(&[vec![f64::NAN, 0.0, 0.0]], &p).is_err());
    }

    #[test]
    fn y_formula_matches_residual_for_orthonormal_predecessors() {
        let prev = vec![vec![1.0, 0.0, 0.0]];
        assert_abs_diff_eq!(y_formula(&[3.0, 4.0, 0.0], &prev), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y_formula(&[3.0, 4.0, 0.0], &[]), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn one_step_chain() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let p = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap().verified();
        let (next, probes) = step(&e, &four_well_start(), &p).unwrap();
        assert_eq!(next.n, 1);
        assert_vec(&next.x, &[0.3939192985791677, 0.9191450300180579], 1e-12);
        assert_abs_diff_eq!(probes.retraction_defect, 1.16f64.sqrt() - 1.0, epsilon = 1e-14);
        assert_eq!(probes.max_tilde_cross, 0.0);
        assert_eq!(probes.max_hat_cross, 0.0);
        assert!(next.defects().max_defect() < 1e-15);
    }

    #[test]
    fn exact_saddle_is_a_fixed_point() {
        // e3 is the index-2 saddle of x^T diag(1,2,3) x / 2 on S^2, with unstable frame (e1, e2).
        let e = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0]).unwrap();
        let st = SolverState::new(
            vec![0.0, 0.0, 1.0],
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        )
        .unwrap();
        let p = SaddleParams::new(2, 1.0, 1.0, 0.1, 1.0).unwrap();
        let (next, probes) = step(&e, &st, &p).unwrap();
        assert_vec(&next.x, &st.x, 1e-12);
        for (a, b) in next.frame.iter().zip(&st.frame) {
            assert_vec(a, b, 1e-12);
        }
        assert!(probes.values().iter().all(|&v| v <= 1e-12));
    }

    #[test]
    fn shape_errors() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let p2 = SaddleParams::new(2, 1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(step(&e, &four_well_start(), &p2).is_err());
        let e3 = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0]).unwrap();
        let p1 = SaddleParams::new(1, 1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            step(&e3, &four_well_start(), &p1),
            Err(HisdError::DimensionMismatch { .. })
        ));
    }
}
