use crate::energy::EnergyLandscape;
use crate::error::{check_dim, HisdError, Result};
use crate::linalg::{norm, scale};
use crate::scalar::Scalar;

/// Stopping rule for the matrix-free operator-norm estimate.
#[derive(Debug, Clone, Copy)]
pub struct PowerIteration {
    pub iterations: usize,
    pub tolerance: f64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            iterations: 30,
            tolerance: 1e-6,
        }
    }
}

/// Estimates `|H(x)|_2` by power iteration on the Hessian action.
pub fn operator_norm<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    x: &[T],
    config: PowerIteration,
) -> T {
    let d = landscape.dimension();
    // Non-uniform start so it is not orthogonal to a coordinate eigenvector.
    let mut w: Vec<T> = (0..d).map(|i| T::of(1.0 + i as f64 / (d as f64 + 1.0))).collect();
    let n0 = norm(&w);
    scale(T::one() / n0, &mut w);
    let mut hw = vec![T::zero(); d];
    let mut estimate = T::zero();
    let tol = T::of(config.tolerance);
    for _ in 0..config.iterations.max(1) {
        landscape.hessian_action_into(x, &w, &mut hw);
        let next = norm(&hw);
        if next == T::zero() || !next.is_finite() {
            return next;
        }
        let converged = (next - estimate).abs() <= tol * next;
        estimate = next;
        std::mem::swap(&mut w, &mut hw);
        scale(T::one() / next, &mut w);
        if converged {
            break;
        }
    }
    estimate
}

/// Sampled estimate of `L2 >= max_{|x| = 1} (|F(x)| + |H(x)|)`.
///
/// Samples are projected onto the unit sphere before evaluation.
pub fn estimate_operator_bound<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    samples: &[Vec<T>],
) -> Result<T> {
    if samples.is_empty() {
        return Err(HisdError::InvalidArgument("operator bound needs at least one sample".into()));
    }
    let d = landscape.dimension();
    let mut f = vec![T::zero(); d];
    let mut best = T::zero();
    for sample in samples {
        check_dim(d, sample.len())?;
        let n = norm(sample);
        if n == T::zero() || !n.is_finite() {
            return Err(HisdError::InvalidArgument("operator bound sample has zero or non-finite norm".into()));
        }
        let x: Vec<T> = sample.iter().map(|&v| v / n).collect();
        landscape.force_into(&x, &mut f);
        let value = norm(&f) + operator_norm(landscape, &x, PowerIteration::default());
        if value > best {
            best = value;
        }
    }
    Ok(best)
}
