use crate::energy::EnergyLandscape;
use crate::error::{HisdError, Result};
use crate::scalar::Scalar;

/// `E(x) = x^T D x / 2` with `D = diag(lambda_1 < ... < lambda_d)`.
///
/// On the unit sphere the basis vector `e_{k+1}` is an index-`k` saddle and
/// `(e_1, ..., e_k)` is its exact unstable frame.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSphereEnergy<T> {
    eigenvalues: Vec<T>,
}

impl<T: Scalar> QuadraticSphereEnergy<T> {
    pub fn new(eigenvalues: Vec<T>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(HisdError::InvalidArgument("quadratic energy needs at least one eigenvalue".into()));
        }
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(HisdError::InvalidArgument("eigenvalues must be finite".into()));
        }
        if eigenvalues.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HisdError::InvalidArgument("eigenvalues must be strictly increasing".into()));
        }
        Ok(Self { eigenvalues })
    }

    /// `lambda_i = i` for `i = 1..=d`.
    pub fn integer_spectrum(d: usize) -> Self {
        Self {
            eigenvalues: (1..=d).map(|i| T::of(i as f64)).collect(),
        }
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }
}

impl<T: Scalar> EnergyLandscape<T> for QuadraticSphereEnergy<T> {
    fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    fn energy_unchecked(&self, x: &[T]) -> T {
        T::of(0.5) * self.eigenvalues.iter().zip(x).map(|(&l, &xi)| l * xi * xi).sum::<T>()
    }

    fn force_into(&self, x: &[T], out: &mut [T]) {
        for ((o, &l), &xi) in out.iter_mut().zip(&self.eigenvalues).zip(x) {
            *o = -l * xi;
        }
    }

    fn hessian_action_into(&self, _x: &[T], w: &[T], out: &mut [T]) {
        for ((o, &l), &wi) in out.iter_mut().zip(&self.eigenvalues).zip(w) {
            *o = -l * wi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let e = QuadraticSphereEnergy::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(e.energy(&[1.0, 0.0]).unwrap(), 0.5);
        assert_eq!(e.force(&[0.0, 1.0]).unwrap(), vec![0.0, -2.0]);
        let e3 = QuadraticSphereEnergy::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            e3.hessian_action(&[0.3, -0.2, 7.0], &[1.0, 1.0, 1.0]).unwrap(),
            vec![-1.0, -2.0, -3.0]
        );
    }

    #[test]
    fn validation() {
        assert!(QuadraticSphereEnergy::<f64>::new(vec![]).is_err());
        assert!(QuadraticSphereEnergy::new(vec![1.0, 1.0]).is_err());
        assert!(QuadraticSphereEnergy::new(vec![2.0, 1.0]).is_err());
        assert!(QuadraticSphereEnergy::new(vec![1.0, f64::NAN]).is_err());
        assert_eq!(QuadraticSphereEnergy::<f64>::integer_spectrum(3).eigenvalues(), &[1.0, 2.0, 3.0]);
    }
}
