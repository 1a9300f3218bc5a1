use crate::error::{HisdError, Result};
use crate::scalar::Scalar;

/// Parameters of one integration: target index, relaxation, step and horizon,
/// plus the tolerances the stepper enforces.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleParams<T> {
    /// Morse index of the target saddle (number of frame directions).
    pub k: usize,
    pub alpha: T,
    pub beta: T,
    pub tau: T,
    /// Final time `T`.
    pub horizon: T,
    /// Margin in the step-size condition `sqrt(2) beta L2 tau <= 1 - theta`.
    pub theta: T,
    /// Bound on `|1 - |x_n||` after every step.
    pub sphere_tol: T,
    /// Bound on `|v_i^T x|` and `|v_i^T v_j - delta_ij|` after every step.
    pub orthonormality_tol: T,
    /// Norms at or below this are treated as a collapsed retraction or frame.
    pub y_degenerate_tol: T,
    /// Cross-check the residual-norm Gram-Schmidt against the closed-form
    /// normalizer `Y_i` at every step.
    pub verify_gram_schmidt: bool,
}

impl<T: Scalar> SaddleParams<T> {
    pub fn new(k: usize, alpha: T, beta: T, tau: T, horizon: T) -> Result<Self> {
        let p = Self {
            k,
            alpha,
            beta,
            tau,
            horizon,
            theta: T::of(0.1),
            sphere_tol: T::tolerance(1e-12, 64.0),
            orthonormality_tol: T::tolerance(1e-10, 1024.0),
            y_degenerate_tol: T::tolerance(1e-12, 16.0),
            verify_gram_schmidt: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_theta(mut self, theta: T) -> Result<Self> {
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tau(mut self, tau: T) -> Result<Self> {
        self.tau = tau;
        self.validate()?;
        Ok(self)
    }

    pub fn with_relaxation(mut self, alpha: T, beta: T) -> Result<Self> {
        self.alpha = alpha;
        self.beta = beta;
        self.validate()?;
        Ok(self)
    }

    pub fn verified(mut self) -> Self {
        self.verify_gram_schmidt = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HisdError::InvalidArgument(msg));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("tau", self.tau)] {
            if !(v.is_finite() && v > T::zero()) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.horizon.is_finite() && self.horizon >= self.tau) {
            return bad(format!("horizon {} must be at least tau {}", self.horizon, self.tau));
        }
        if !(self.theta > T::zero() && self.theta < T::one()) {
            return bad(format!("theta must lie in (0, 1), got {}", self.theta));
        }
        for (name, v) in [
            ("sphere_tol", self.sphere_tol),
            ("orthonormality_tol", self.orthonormality_tol),
            ("y_degenerate_tol", self.y_degenerate_tol),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    /// Number of steps `N = T / tau`; errors unless this is a positive integer.
    pub fn steps(&self) -> Result<usize> {
        let ratio = (self.horizon / self.tau).as_f64();
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * n.max(1.0) {
            return Err(HisdError::InvalidArgument(format!(
                "horizon / tau = {ratio} is not a positive integer"
            )));
        }
        Ok(n as usize)
    }

    /// Whether `sqrt(2) beta L2 tau <= 1 - theta` holds for the given bound.
    pub fn step_size_admissible(&self, operator_bound: T) -> bool {
        T::of(2.0).sqrt() * self.beta * operator_bound * self.tau <= T::one() - self.theta
    }
}
