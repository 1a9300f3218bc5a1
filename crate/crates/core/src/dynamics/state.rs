use crate::dynamics::scheme::{gram_schmidt, project_tangent, retract_with_tol};
use crate::dynamics::SaddleParams;
use crate::error::{check_dim, HisdError, Result};
use crate::linalg::{dot, norm};
use crate::scalar::Scalar;

/// Ordered tangent frame `v_1, ..., v_k`.
pub type Frame<T> = Vec<Vec<T>>;

/// Position on the sphere and its orthonormal tangent frame after `n` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState<T> {
    pub n: usize,
    pub x: Vec<T>,
    pub frame: Frame<T>,
}

/// Worst violations of the sphere and frame constraints.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InvariantDefects<T> {
    /// `|1 - |x||`
    pub sphere: T,
    /// `max_i |v_i^T x|`
    pub tangency: T,
    /// `max_{i,j} |v_i^T v_j - delta_ij|`
    pub orthonormality: T,
}

impl<T: Scalar> InvariantDefects<T> {
    pub fn merge(self, other: Self) -> Self {
        Self {
            sphere: self.sphere.max(other.sphere),
            tangency: self.tangency.max(other.tangency),
            orthonormality: self.orthonormality.max(other.orthonormality),
        }
    }

    pub fn max_defect(&self) -> T {
        self.sphere.max(self.tangency).max(self.orthonormality)
    }

    pub fn within(&self, params: &SaddleParams<T>) -> bool {
        self.sphere <= params.sphere_tol
            && self.tangency <= params.orthonormality_tol
            && self.orthonormality <= params.orthonormality_tol
    }
}

/// `max_{i,j} |v_i^T v_j - delta_ij|` over a frame.
pub(crate) fn frame_orthonormality_defect<T: Scalar>(frame: &[Vec<T>]) -> T {
    let mut worst = T::zero();
    for (i, vi) in frame.iter().enumerate() {
        for (j, vj) in frame.iter().enumerate().skip(i) {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((dot(vi, vj) - target).abs());
        }
    }
    worst
}

impl<T: Scalar> SolverState<T> {
    /// Builds a step-0 state, rejecting data that violates the constraint set
    /// under default tolerances. Use [`prepare_initial_state`] to repair raw data.
    pub fn new(x: Vec<T>, frame: Frame<T>) -> Result<Self> {
        let state = Self::from_parts(0, x, frame)?;
        let defaults = SaddleParams::new(state.k().max(1), T::one(), T::one(), T::one(), T::one())?;
        let defects = state.defects();
        if !defects.within(&defaults) {
            return Err(HisdError::InvalidArgument(format!(
                "state violates constraints: sphere {:e}, tangency {:e}, orthonormality {:e}",
                defects.sphere.as_f64(),
                defects.tangency.as_f64(),
                defects.orthonormality.as_f64()
            )));
        }
        Ok(state)
    }

    /// Builds a state with only dimension checks.
    pub fn from_parts(n: usize, x: Vec<T>, frame: Frame<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(HisdError::InvalidArgument("position must be non-empty".into()));
        }
        for v in &frame {
            check_dim(x.len(), v.len())?;
        }
        Ok(Self { n, x, frame })
    }

    pub fn dimension(&self) -> usize {
        self.x.len()
    }

    pub fn k(&self) -> usize {
        self.frame.len()
    }

    pub fn defects(&self) -> InvariantDefects<T> {
        InvariantDefects {
            sphere: (T::one() - norm(&self.x)).abs(),
            tangency: self
                .frame
                .iter()
                .map(|v| dot(v, &self.x).abs())
                .fold(T::zero(), T::max),
            orthonormality: frame_orthonormality_defect(&self.frame),
        }
    }

    pub(crate) fn check_shape(&self, params: &SaddleParams<T>) -> Result<()> {
        if self.k() != params.k {
            return Err(HisdError::InvalidArgument(format!(
                "state carries {} frame vectors but k = {}",
                self.k(),
                params.k
            )));
        }
        if params.k >= self.dimension() {
            return Err(HisdError::InvalidArgument(format!(
                "k = {} must be below the dimension {}",
                params.k,
                self.dimension()
            )));
        }
        Ok(())
    }
}

/// Normalizes `x0_raw` onto the sphere and turns `v0_raw` into an orthonormal
/// frame tangent at that point (projection, then Gram-Schmidt).
pub fn prepare_initial_state<T: Scalar>(x0_raw: &[T], v0_raw: &[Vec<T>]) -> Result<SolverState<T>> {
    let init = |e: HisdError| HisdError::Initialization(e.to_string());
    if v0_raw.is_empty() {
        return Err(HisdError::Initialization("initial frame is empty".into()));
    }
    if v0_raw.len() >= x0_raw.len() {
        return Err(HisdError::Initialization(format!(
            "{} frame vectors do not fit in the tangent space of S^{}",
            v0_raw.len(),
            x0_raw.len().saturating_sub(1)
        )));
    }
    if !crate::linalg::is_finite(x0_raw) || v0_raw.iter().any(|v| !crate::linalg::is_finite(v)) {
        return Err(HisdError::Initialization("initial data must be finite".into()));
    }
    let tol = T::tolerance(1e-12, 16.0);
    let x0 = retract_with_tol(x0_raw, tol, 0).map_err(init)?;
    let mut projected = Vec::with_capacity(v0_raw.len());
    for v in v0_raw {
        check_dim(x0.len(), v.len()).map_err(init)?;
        // Relative test so a raw vector nearly parallel to x0 counts as degenerate.
        let scale = norm(v);
        let p = project_tangent(v, &x0);
        if norm(&p) <= T::tolerance(1e-10, 1e4) * scale.max(T::one()) {
            return Err(HisdError::Initialization(
                "initial frame vector is parallel to the initial position".into(),
            ));
        }
        projected.push(p);
    }
    let frame = gram_schmidt(&projected, tol).map_err(init)?;
    Ok(SolverState { n: 0, x: x0, frame })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn compliant_data_is_unchanged() {
        let s = 0.5f64.sqrt();
        let st = prepare_initial_state(&[s, s], &[vec![-s, s]]).unwrap();
        assert_abs_diff_eq!(st.x[0], s, epsilon = 1e-15);
        assert_abs_diff_eq!(st.x[1], s, epsilon = 1e-15);
        assert_abs_diff_eq!(st.frame[0][0], -s, epsilon = 1e-15);
        assert_abs_diff_eq!(st.frame[0][1], s, epsilon = 1e-15);
    }

    #[test]
    fn scaled_position() {
        let st = prepare_initial_state(&[0.0, 0.0, 3.0], &[vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(st.x, vec![0.0, 0.0, 1.0]);
        assert_eq!(st.frame[0], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn non_tangent_frame_is_projected() {
        // x0 = (2,-3,4)/sqrt(29), v = (1,1,0)/sqrt(2): v.x0 = -1/sqrt(58).
        // v - (v.x0) x0 = (1,1,0)/sqrt(2) + (2,-3,4)/(29 sqrt(2)) = (31, 26, 4)/(29 sqrt(2)),
        // whose normalization is (31, 26, 4)/sqrt(1653).
        let r29 = 29f64.sqrt();
        let r2 = 2f64.sqrt();
        let x0 = [2.0 / r29, -3.0 / r29, 4.0 / r29];
        let v = vec![1.0 / r2, 1.0 / r2, 0.0];
        assert_abs_diff_eq!(dot(&v, &x0), -1.0 / 58f64.sqrt(), epsilon = 1e-15);
        let st = prepare_initial_state(&x0, &[v]).unwrap();
        let n = 1653f64.sqrt();
        for (a, b) in st.frame[0].iter().zip([31.0 / n, 26.0 / n, 4.0 / n]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(st.defects().max_defect() < 1e-15);
    }

    #[test]
    fn degenerate_frames_rejected() {
        assert!(matches!(
            prepare_initial_state(&[0.0, 0.0, 1.0], &[vec![0.0, 0.0, 2.0]]),
            Err(HisdError::Initialization(_))
        ));
        assert!(matches!(
            prepare_initial_state(&[0.0, 0.0, 1.0], &[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.5]]),
            Err(HisdError::Initialization(_))
        ));
        assert!(prepare_initial_state(&[0.0, 0.0], &[vec![1.0, 0.0]]).is_err());
        assert!(prepare_initial_state(&[1.0, 0.0], &[vec![0.0, 1.0], vec![1.0, 1.0]]).is_err());
        assert!(prepare_initial_state::<f64>(&[1.0, 0.0], &[]).is_err());
    }

    #[test]
    fn checked_constructor() {
        assert!(SolverState::new(vec![1.0, 0.0, 0.0], vec![vec![0.0, 1.0, 0.0]]).is_ok());
        assert!(SolverState::new(vec![1.0, 0.0, 0.0], vec![vec![0.1, 1.0, 0.0]]).is_err());
        assert!(SolverState::new(vec![1.1, 0.0, 0.0], vec![vec![0.0, 1.0, 0.0]]).is_err());
        assert!(SolverState::new(vec![1.0, 0.0, 0.0], vec![vec![0.0, 1.0]]).is_err());
    }
}
