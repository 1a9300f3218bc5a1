//! Energy landscapes: the `E`, `F = -grad E`, `H w = -hess E w` contract and the
//! built-in benchmark surfaces.

mod bound;
mod finite_difference;
mod four_well;
mod quadratic;
mod rosenbrock;

pub use bound::{estimate_operator_bound, operator_norm, PowerIteration};
pub use finite_difference::FiniteDifferenceHessian;
pub use four_well::FourWellEnergy;
pub use quadratic::QuadraticSphereEnergy;
pub use rosenbrock::RosenbrockChainEnergy;

use crate::error::{check_dim, Result};
use crate::scalar::Scalar;

/// A smooth energy on `R^d` together with its natural force and the action of
/// its negative Hessian.
///
/// Implementors provide the unchecked kernels; callers should go through the
/// checked wrappers (or the free functions below), which validate dimensions.
/// Implementations must be pure: landscapes are shared read-only between
/// worker threads.
pub trait EnergyLandscape<T: Scalar>: Send + Sync {
    fn dimension(&self) -> usize;

    fn energy_unchecked(&self, x: &[T]) -> T;

    /// Writes `F(x) = -grad E(x)` into `out`.
    fn force_into(&self, x: &[T], out: &mut [T]);

    /// Writes `H(x) w = -hess E(x) w` into `out`.
    fn hessian_action_into(&self, x: &[T], w: &[T], out: &mut [T]);

    fn energy(&self, x: &[T]) -> Result<T> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.energy_unchecked(x))
    }

    fn force(&self, x: &[T]) -> Result<Vec<T>> {
        check_dim(self.dimension(), x.len())?;
        let mut out = vec![T::zero(); x.len()];
        self.force_into(x, &mut out);
        Ok(out)
    }

    fn hessian_action(&self, x: &[T], w: &[T]) -> Result<Vec<T>> {
        check_dim(self.dimension(), x.len())?;
        check_dim(self.dimension(), w.len())?;
        let mut out = vec![T::zero(); x.len()];
        self.hessian_action_into(x, w, &mut out);
        Ok(out)
    }
}

impl<T: Scalar, L: EnergyLandscape<T> + ?Sized> EnergyLandscape<T> for &L {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn energy_unchecked(&self, x: &[T]) -> T {
        (**self).energy_unchecked(x)
    }
    fn force_into(&self, x: &[T], out: &mut [T]) {
        (**self).force_into(x, out)
    }
    fn hessian_action_into(&self, x: &[T], w: &[T], out: &mut [T]) {
        (**self).hessian_action_into(x, w, out)
    }
}

impl<T: Scalar, L: EnergyLandscape<T> + ?Sized> EnergyLandscape<T> for Box<L> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn energy_unchecked(&self, x: &[T]) -> T {
        (**self).energy_unchecked(x)
    }
    fn force_into(&self, x: &[T], out: &mut [T]) {
        (**self).force_into(x, out)
    }
    fn hessian_action_into(&self, x: &[T], w: &[T], out: &mut [T]) {
        (**self).hessian_action_into(x, w, out)
    }
}

pub fn evaluate_energy<T: Scalar, L: EnergyLandscape<T> + ?Sized>(landscape: &L, x: &[T]) -> Result<T> {
    landscape.energy(x)
}

pub fn force<T: Scalar, L: EnergyLandscape<T> + ?Sized>(landscape: &L, x: &[T]) -> Result<Vec<T>> {
    landscape.force(x)
}

pub fn hessian_action<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    x: &[T],
    w: &[T],
) -> Result<Vec<T>> {
    landscape.hessian_action(x, w)
}
