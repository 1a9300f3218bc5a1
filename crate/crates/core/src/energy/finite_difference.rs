use crate::energy::EnergyLandscape;
use crate::linalg::norm;
use crate::scalar::Scalar;

/// Wraps a landscape and replaces its Hessian action with a central
/// difference of the force along the normalized direction:
/// `H(x) w ~ (F(x + l u) - F(x - l u)) |w| / (2 l)`, `u = w / |w|`.
#[derive(Debug, Clone)]
pub struct FiniteDifferenceHessian<L, T> {
    inner: L,
    step: T,
}

impl<L, T: Scalar> FiniteDifferenceHessian<L, T> {
    pub const DEFAULT_STEP: f64 = 1e-4;

    pub fn new(inner: L) -> Self {
        Self::with_step(inner, T::of(Self::DEFAULT_STEP))
    }

    pub fn with_step(inner: L, step: T) -> Self {
        Self { inner, step }
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }
}

impl<T: Scalar, L: EnergyLandscape<T>> EnergyLandscape<T> for FiniteDifferenceHessian<L, T> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn energy_unchecked(&self, x: &[T]) -> T {
        self.inner.energy_unchecked(x)
    }

    fn force_into(&self, x: &[T], out: &mut [T]) {
        self.inner.force_into(x, out)
    }

    fn hessian_action_into(&self, x: &[T], w: &[T], out: &mut [T]) {
        let wn = norm(w);
        if wn == T::zero() {
            out.iter_mut().for_each(|o| *o = T::zero());
            return;
        }
        let l = self.step;
        let plus: Vec<T> = x.iter().zip(w).map(|(&xi, &wi)| xi + l * wi / wn).collect();
        let minus: Vec<T> = x.iter().zip(w).map(|(&xi, &wi)| xi - l * wi / wn).collect();
        let mut fm = vec![T::zero(); x.len()];
        self.inner.force_into(&plus, out);
        self.inner.force_into(&minus, &mut fm);
        let c = wn / (T::of(2.0) * l);
        for (o, m) in out.iter_mut().zip(fm) {
            *o = (*o - m) * c;
        }
    }
}
