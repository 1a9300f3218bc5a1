use crate::energy::EnergyLandscape;
use crate::scalar::Scalar;

/// Three-dimensional Rosenbrock-type chain
/// `E = a(s x2 - 3x1^2)^2 + b(s x1 - 1)^2 + a(s x3 - 3x2^2)^2 + b(s x2 - 1)^2`, `s = sqrt(3)`.
///
/// With `a = 2`, `b = -9.8` the point `(1, 1, 1)/sqrt(3)` is an index-1 saddle
/// on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosenbrockChainEnergy<T> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> RosenbrockChainEnergy<T> {
    pub fn new(a: T, b: T) -> Self {
        Self { a, b }
    }
}

impl<T: Scalar> EnergyLandscape<T> for RosenbrockChainEnergy<T> {
    fn dimension(&self) -> usize {
        3
    }

    fn energy_unchecked(&self, x: &[T]) -> T {
        let s = T::of(3.0).sqrt();
        let three = T::of(3.0);
        let r1 = s * x[1] - three * x[0] * x[0];
        let r2 = s * x[0] - T::one();
        let r3 = s * x[2] - three * x[1] * x[1];
        let r4 = s * x[1] - T::one();
        self.a * r1 * r1 + self.b * r2 * r2 + self.a * r3 * r3 + self.b * r4 * r4
    }

    fn force_into(&self, x: &[T], out: &mut [T]) {
        let s = T::of(3.0).sqrt();
        let two = T::of(2.0);
        let three = T::of(3.0);
        let six = T::of(6.0);
        let r1 = s * x[1] - three * x[0] * x[0];
        let r2 = s * x[0] - T::one();
        let r3 = s * x[2] - three * x[1] * x[1];
        let r4 = s * x[1] - T::one();
        out[0] = -(-two * self.a * r1 * six * x[0] + two * self.b * r2 * s);
        out[1] = -(two * self.a * r1 * s - two * self.a * r3 * six * x[1] + two * self.b * r4 * s);
        out[2] = -(two * self.a * r3 * s);
    }

    fn hessian_action_into(&self, x: &[T], w: &[T], out: &mut [T]) {
        let s = T::of(3.0).sqrt();
        let six = T::of(6.0);
        let twelve = T::of(12.0);
        let thirty_six = T::of(36.0);
        let three = T::of(3.0);
        let (a, b) = (self.a, self.b);
        let r1 = s * x[1] - three * x[0] * x[0];
        let r3 = s * x[2] - three * x[1] * x[1];

        let h11 = T::of(2.0) * a * (thirty_six * x[0] * x[0] - six * r1) + six * b;
        let h12 = -twelve * s * a * x[0];
        let h22 = six * a + T::of(2.0) * a * (thirty_six * x[1] * x[1] - six * r3) + six * b;
        let h23 = -twelve * s * a * x[1];
        let h33 = six * a;

        out[0] = -(h11 * w[0] + h12 * w[1]);
        out[1] = -(h12 * w[0] + h22 * w[1] + h23 * w[2]);
        out[2] = -(h23 * w[1] + h33 * w[2]);
    }
}
