use log::warn;

use crate::dynamics::scheme::step;
use crate::dynamics::state::{InvariantDefects, SolverState};
use crate::dynamics::{SaddleParams, StepProbes};
use crate::energy::{estimate_operator_bound, EnergyLandscape};
use crate::error::{check_dim, HisdError, Result};
use crate::random::sphere_samples;
use crate::scalar::Scalar;

/// Random sphere points (besides the initial position) used for the
/// step-size check in [`integrate`].
pub const STEP_CHECK_SAMPLES: usize = 64;
pub const STEP_CHECK_SEED: u64 = 0;

/// Snapshots of one integration plus the per-step probe record.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    pub params: SaddleParams<T>,
    /// Snapshot stride in steps.
    pub record_every: usize,
    /// `t_n` of each snapshot.
    pub times: Vec<T>,
    pub states: Vec<SolverState<T>>,
    /// One record per step (`N` entries); empty for integrators without probes.
    pub probes: Vec<StepProbes<T>>,
    /// Worst constraint defects over every step, not only the snapshots.
    pub max_defects: InvariantDefects<T>,
    /// Sampled `L2` estimate used for the step-size check, when computed.
    pub operator_bound: Option<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn steps(&self) -> usize {
        self.states.last().map_or(0, |s| s.n - self.states[0].n)
    }

    pub fn final_state(&self) -> &SolverState<T> {
        self.states.last().expect("trajectory has at least the initial state")
    }

    /// Index into `states`/`times` of the snapshot taken after exactly `n`
    /// steps, if one was recorded.
    pub fn snapshot_index(&self, n: usize) -> Option<usize> {
        let n0 = self.states.first()?.n;
        let idx = if n == self.steps() {
            self.states.len() - 1
        } else if n.is_multiple_of(self.record_every) {
            n / self.record_every
        } else {
            return None;
        };
        self.states.get(idx).filter(|s| s.n == n0 + n).map(|_| idx)
    }

    /// Snapshot recorded after exactly `n` steps, if any.
    pub fn state_at_step(&self, n: usize) -> Option<&SolverState<T>> {
        self.snapshot_index(n).map(|i| &self.states[i])
    }

    /// Field-wise maximum of the probes over all steps.
    pub fn max_probes(&self) -> StepProbes<T> {
        self.probes
            .iter()
            .fold(StepProbes::default(), |acc, p| acc.max(p))
    }
}

pub(crate) fn time_of<T: Scalar>(n: usize, tau: T) -> T {
    T::of(n as f64) * tau
}

pub(crate) fn check_initial<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    record_every: usize,
) -> Result<usize> {
    params.validate()?;
    let n = params.steps()?;
    if record_every == 0 {
        return Err(HisdError::InvalidArgument("record_every must be positive".into()));
    }
    check_dim(landscape.dimension(), initial.dimension())?;
    initial.check_shape(params)?;
    Ok(n)
}

/// Runs `N = T / tau` steps of the constrained scheme from `initial`,
/// keeping every `record_every`-th state (plus the first and last).
///
/// Logs a warning when `sqrt(2) beta L2 tau > 1 - theta` for the sampled
/// operator bound `L2`.
pub fn integrate<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    record_every: usize,
) -> Result<Trajectory<T>> {
    let steps = check_initial(landscape, initial, params, record_every)?;
    let defects0 = initial.defects();
    if !defects0.within(params) {
        return Err(HisdError::InvalidArgument(format!(
            "initial state violates the constraints (max defect {:e}); use prepare_initial_state",
            defects0.max_defect().as_f64()
        )));
    }

    let mut samples = vec![initial.x.clone()];
    samples.extend(sphere_samples(initial.dimension(), STEP_CHECK_SAMPLES, STEP_CHECK_SEED));
    let bound = estimate_operator_bound(landscape, &samples)?;
    if !params.step_size_admissible(bound) {
        warn!(
            "step size tau = {} violates sqrt(2) beta L2 tau <= 1 - theta (L2 ~ {}, beta = {}, theta = {})",
            params.tau, bound, params.beta, params.theta
        );
    }

    let capacity = steps / record_every + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut probes = Vec::with_capacity(steps);
    times.push(T::zero());
    states.push(initial.clone());

    let mut current = initial.clone();
    let mut max_defects = defects0;
    for n in 1..=steps {
        let (next, p) = step(landscape, &current, params)
            .map_err(|e| e.at_time(time_of(n - 1, params.tau).as_f64()))?;
        max_defects = max_defects.merge(next.defects());
        probes.push(p);
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
        probes,
        max_defects,
        operator_bound: Some(bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::prepare_initial_state;
    use crate::energy::FourWellEnergy;

    fn start() -> SolverState<f64> {
        let s = 0.5f64.sqrt();
        prepare_initial_state(&[s, s], &[vec![-s, s]]).unwrap()
    }

    #[test]
    fn single_step_composition() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let p = SaddleParams::new(1, 1.0, 1.0, 0.25, 0.25).unwrap();
        let tr = integrate(&e, &start(), &p, 1).unwrap();
        assert_eq!(tr.states.len(), 2);
        assert_eq!(tr.probes.len(), 1);
        assert_eq!(tr.times, vec![0.0, 0.25]);
        let (direct, probes) = step(&e, &start(), &p).unwrap();
        assert_eq!(tr.states[1], direct);
        assert_eq!(tr.probes[0], probes);
    }

    #[test]
    fn snapshot_stride_keeps_endpoints() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let p = SaddleParams::new(1, 1.0, 1.0, 1.0 / 16.0, 1.0).unwrap();
        let full = integrate(&e, &start(), &p, 1).unwrap();
        let sparse = integrate(&e, &start(), &p, 5).unwrap();
        assert_eq!(sparse.probes.len(), 16);
        let ns: Vec<usize> = sparse.states.iter().map(|s| s.n).collect();
        assert_eq!(ns, vec![0, 5, 10, 15, 16]);
        assert_eq!(sparse.final_state(), full.final_state());
        assert_eq!(sparse.state_at_step(10), full.state_at_step(10));
        assert!(sparse.state_at_step(3).is_none());
        assert_eq!(sparse.state_at_step(16).unwrap().n, 16);
        assert_eq!(full.times.len(), 17);
        assert_eq!(full.times[16], 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = FourWellEnergy::new(5.0, 1.0);
        let p = SaddleParams::new(1, 1.0, 1.0, 0.3, 1.0).unwrap();
        assert!(integrate(&e, &start(), &p, 1).is_err());
        let p = SaddleParams::new(1, 1.0, 1.0, 0.25, 1.0).unwrap();
        assert!(integrate(&e, &start(), &p, 0).is_err());
        let bad = SolverState::from_parts(0, vec![1.0, 1.0], vec![vec![-1.0, 1.0]]).unwrap();
        assert!(integrate(&e, &bad, &p, 1).is_err());
    }

    #[test]
    fn errors_carry_the_time() {
        struct Blowup;
        impl EnergyLandscape<f64> for Blowup {
            fn dimension(&self) -> usize {
                2
            }
            fn energy_unchecked(&self, _x: &[f64]) -> f64 {
                0.0
            }
            fn force_into(&self, x: &[f64], out: &mut [f64]) {
                // finite at the initial point, NaN once the state moves
                if x[1] > 0.6 {
                    out.copy_from_slice(&[0.0, 1.0]);
                } else {
                    out.fill(f64::NAN);
                }
            }
            fn hessian_action_into(&self, _x: &[f64], _w: &[f64], out: &mut [f64]) {
                out.fill(0.0)
            }
        }
        let p = SaddleParams::new(1, 1.0, 1.0, 0.25, 1.0).unwrap();
        let err = integrate(&Blowup, &start(), &p, 1).unwrap_err();
        assert!(err.is_numerical());
        assert!(matches!(err, HisdError::AtTime { .. }), "{err}");
    }
}
