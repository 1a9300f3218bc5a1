use crate::dynamics::{
    integrate::{check_initial, time_of},
    rhs_unchecked, SaddleParams, SolverState, Trajectory,
};
use crate::energy::EnergyLandscape;
use crate::error::Result;
use crate::linalg::{axpy, norm};
use crate::scalar::Scalar;

fn combine<T: Scalar>(base: &[T], h: T, incr: &[T]) -> Vec<T> {
    let mut out = base.to_vec();
    axpy(h, incr, &mut out);
    out
}

/// Classical fourth-order Runge-Kutta on the continuous dynamics with step
/// `params.tau`. After every step the position is renormalized and the frame
/// is projected onto the new tangent space and re-orthonormalized.
///
/// Used only to cross-check Euler reference solutions.
pub fn rk4_oracle<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    record_every: usize,
) -> Result<Trajectory<T>> {
    let steps = check_initial(landscape, initial, params, record_every)?;
    let h = params.tau;
    let half = h / T::of(2.0);
    let sixth = h / T::of(6.0);
    let two = T::of(2.0);
    let (a, b) = (params.alpha, params.beta);

    let mut x = initial.x.clone();
    let mut frame = initial.frame.clone();
    let mut times = vec![T::zero()];
    let mut states = vec![initial.clone()];
    let mut max_defects = initial.defects();

    for n in 1..=steps {
        let (k1x, k1v) = rhs_unchecked(landscape, &x, &frame, a, b);
        let stage = |hh: T, kx: &[T], kv: &[Vec<T>]| {
            let xs = combine(&x, hh, kx);
            let vs: Vec<Vec<T>> = frame.iter().zip(kv).map(|(v, dv)| combine(v, hh, dv)).collect();
            rhs_unchecked(landscape, &xs, &vs, a, b)
        };
        let (k2x, k2v) = stage(half, &k1x, &k1v);
        let (k3x, k3v) = stage(half, &k2x, &k2v);
        let (k4x, k4v) = stage(h, &k3x, &k3v);

        for c in 0..x.len() {
            x[c] += sixth * (k1x[c] + two * k2x[c] + two * k3x[c] + k4x[c]);
        }
        for i in 0..frame.len() {
            for c in 0..x.len() {
                frame[i][c] += sixth * (k1v[i][c] + two * k2v[i][c] + two * k3v[i][c] + k4v[i][c]);
            }
        }

        let nx = norm(&x);
        x.iter_mut().for_each(|c| *c /= nx);
        let projected: Vec<Vec<T>> = frame
            .iter()
            .map(|v| crate::dynamics::transport(v, &x))
            .collect::<Result<_>>()?;
        frame = crate::dynamics::orthonormalize(&projected, params)
            .map_err(|e| e.at_time(time_of(n - 1, h).as_f64()))?;

        let state = SolverState {
            n: initial.n + n,
            x: x.clone(),
            frame: frame.clone(),
        };
        max_defects = max_defects.merge(state.defects());
        if n % record_every == 0 || n == steps {
            times.push(time_of(n, h));
            states.push(state);
        }
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
