use crate::energy::EnergyLandscape;
use crate::scalar::Scalar;

/// Planar four-well surface
/// `E(x1, x2) = x1^4 - p x1^2 + x2^4 - x2^2 + q x1^2 x2^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourWellEnergy<T> {
    pub p: T,
    pub q: T,
}

impl<T: Scalar> FourWellEnergy<T> {
    pub fn new(p: T, q: T) -> Self {
        Self { p, q }
    }
}

impl<T: Scalar> EnergyLandscape<T> for FourWellEnergy<T> {
    fn dimension(&self) -> usize {
        2
    }

    fn energy_unchecked(&self, x: &[T]) -> T {
        let (a, b) = (x[0], x[1]);
        let (a2, b2) = (a * a, b * b);
        a2 * a2 - self.p * a2 + b2 * b2 - b2 + self.q * a2 * b2
    }

    fn force_into(&self, x: &[T], out: &mut [T]) {
        let (a, b) = (x[0], x[1]);
        let two = T::of(2.0);
        let four = T::of(4.0);
        out[0] = -(four * a * a * a - two * self.p * a + two * self.q * a * b * b);
        out[1] = -(four * b * b * b - two * b + two * self.q * a * a * b);
    }

    fn hessian_action_into(&self, x: &[T], w: &[T], out: &mut [T]) {
        let (a, b) = (x[0], x[1]);
        let two = T::of(2.0);
        let h11 = T::of(12.0) * a * a - two * self.p + two * self.q * b * b;
        let h12 = T::of(4.0) * self.q * a * b;
        let h22 = T::of(12.0) * b * b - two + two * self.q * a * a;
        out[0] = -(h11 * w[0] + h12 * w[1]);
        out[1] = -(h12 * w[0] + h22 * w[1]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn energy_values() {
        let e = FourWellEnergy::new(5.0, 1.0);
        assert_eq!(e.energy(&[0.0, 0.0]).unwrap(), 0.0);
        let s = 0.5f64.sqrt();
        // 1/4 - 5/2 + 1/4 - 1/2 + 1/4
        assert_abs_diff_eq!(e.energy(&[s, s]).unwrap(), -2.25, epsilon = 1e-14);
    }

    #[test]
    fn force_values() {
        let e = FourWellEnergy::new(5.0, 1.0);
        assert_eq!(e.force(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        let s = 0.5f64.sqrt();
        let f = e.force(&[s, s]).unwrap();
        // dE/dx1 = 4s^3 - 10s + 2s^3 = -7s ; dE/dx2 = 4s^3 - 2s + 2s^3 = s
        assert_abs_diff_eq!(f[0], 7.0 * s, epsilon = 1e-14);
        assert_abs_diff_eq!(f[1], -s, epsilon = 1e-14);
        assert_abs_diff_eq!(f[0], 4.949747468305833, epsilon = 1e-12);
    }

    #[test]
    fn hessian_at_origin() {
        let e = FourWellEnergy::new(5.0, 1.0);
        assert_eq!(e.hessian_action(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), vec![10.0, 0.0]);
        assert_eq!(e.hessian_action(&[0.0, 0.0], &[0.0, 1.0]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let e = FourWellEnergy::new(5.0, 1.0);
        assert!(e.energy(&[0.0, 0.0, 0.0]).is_err());
        assert!(e.force(&[0.0]).is_err());
        assert!(e.hessian_action(&[0.0, 0.0], &[1.0]).is_err());
    }
}
