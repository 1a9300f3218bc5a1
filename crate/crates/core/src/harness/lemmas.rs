use rayon::prelude::*;

use crate::dynamics::{integrate, SaddleParams, SolverState, StepProbes};
use crate::energy::EnergyLandscape;
use crate::error::Result;
use crate::harness::convergence::check_tau_list;
use crate::scalar::Scalar;

/// Fitted exponents below this are flagged.
pub const EXPONENT_FLOOR: f64 = 1.7;

/// Least-squares slope of `log2(max value)` against `log2(tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingFit<T> {
    Exponent(T),
    /// Every sample sits at or below round-off, as happens for structurally
    /// vanishing probes (e.g. cross terms when `k = 1`).
    ExactZero,
}

impl<T: Scalar> ScalingFit<T> {
    pub fn exponent(&self) -> Option<T> {
        match self {
            ScalingFit::Exponent(e) => Some(*e),
            ScalingFit::ExactZero => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeScaling<T> {
    pub probe: &'static str,
    /// `(tau, max_n value)` per step size.
    pub samples: Vec<(T, T)>,
    pub fit: ScalingFit<T>,
}

impl<T: Scalar> ProbeScaling<T> {
    pub fn flagged(&self) -> bool {
        match self.fit {
            ScalingFit::Exponent(e) => !(e >= T::of(EXPONENT_FLOOR)),
            ScalingFit::ExactZero => false,
        }
    }

    /// `value(tau_i) / value(tau_{i+1})` for consecutive step sizes.
    pub fn successive_ratios(&self) -> Vec<T> {
        self.samples.windows(2).map(|w| w[0].1 / w[1].1).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaScalingReport<T> {
    pub probes: Vec<ProbeScaling<T>>,
}

impl<T: Scalar> LemmaScalingReport<T> {
    /// Probe values at or below this count as zero.
    pub fn zero_floor() -> T {
        T::tolerance(1e-13, 512.0)
    }

    pub fn get(&self, name: &str) -> Option<&ProbeScaling<T>> {
        self.probes.iter().find(|p| p.probe == name)
    }

    pub fn flagged(&self) -> Vec<&'static str> {
        self.probes.iter().filter(|p| p.flagged()).map(|p| p.probe).collect()
    }
}

fn fit<T: Scalar>(samples: &[(T, T)]) -> ScalingFit<T> {
    let floor = LemmaScalingReport::<T>::zero_floor();
    if samples.iter().all(|&(_, v)| v <= floor) {
        return ScalingFit::ExactZero;
    }
    let pts: Vec<(T, T)> = samples.iter().map(|&(t, v)| (t.log2(), v.log2())).collect();
    let n = T::of(pts.len() as f64);
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy: T = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: T = pts.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    ScalingFit::Exponent(sxy / sxx)
}

/// For each step size, records the maximum over all steps of each probe and
/// fits its order in `tau`.
pub fn lemma_scaling_study<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    tau_list: &[T],
) -> Result<LemmaScalingReport<T>> {
    check_tau_list(tau_list, None)?;
    let maxima: Vec<(T, StepProbes<T>)> = tau_list
        .par_iter()
        .map(|&tau| {
            let p = params.clone().with_tau(tau)?;
            let steps = p.steps()?;
            let run = integrate(landscape, initial, &p, steps)?;
            Ok((tau, run.max_probes()))
        })
        .collect::<Result<_>>()?;

    let probes = StepProbes::<T>::FIELD_NAMES
        .iter()
        .enumerate()
        .map(|(field, &name)| {
            let samples: Vec<(T, T)> = maxima.iter().map(|(tau, m)| (*tau, m.values()[field])).collect();
            ProbeScaling {
                probe: name,
                fit: fit(&samples),
                samples,
            }
        })
        .collect();
    Ok(LemmaScalingReport { probes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_fit() {
        let s: Vec<(f64, f64)> = (3..7).map(|m| (2f64.powi(-m), 5.0 * 4f64.powi(-m))).collect();
        match fit(&s) {
            ScalingFit::Exponent(e) => assert!((e - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let z = vec![(0.5, 0.0), (0.25, 1e-16)];
        assert_eq!(fit(&z), ScalingFit::ExactZero);
    }

    #[test]
    fn flags_low_order() {
        let p = ProbeScaling {
            probe: "retraction_defect",
            samples: vec![(0.5, 0.5), (0.25, 0.25)],
            fit: ScalingFit::Exponent(1.0),
        };
        assert!(p.flagged());
        assert_eq!(p.successive_ratios(), vec![2.0]);
    }
}
