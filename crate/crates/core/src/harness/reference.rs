use crate::dynamics::{integrate, SaddleParams, SolverState, Trajectory};
use crate::energy::EnergyLandscape;
use crate::error::{HisdError, Result};
use crate::scalar::Scalar;

/// `2^{-13}`
pub const DEFAULT_REFERENCE_TAU: f64 = 1.0 / 8192.0;

/// True if `tau` is an exact power of two (positive or negative exponent).
pub fn is_dyadic(tau: f64) -> bool {
    const MANTISSA: u64 = (1 << 52) - 1;
    tau.is_normal() && tau > 0.0 && tau.to_bits() & MANTISSA == 0
}

/// Number of fine steps per coarse step; errors unless `coarse / fine` is a
/// positive integer.
pub fn grid_stride<T: Scalar>(coarse: T, fine: T) -> Result<usize> {
    let ratio = (coarse / fine).as_f64();
    let r = ratio.round();
    if !(r >= 1.0) || (ratio - r).abs() > 1e-9 * r {
        return Err(HisdError::InvalidArgument(format!(
            "grid with step {} does not nest inside grid with step {}",
            fine, coarse
        )));
    }
    Ok(r as usize)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Integrates the same scheme at `tau_ref`, keeping a snapshot at every time
/// node of every grid in `coarse_taus`.
pub fn reference_solution<T: Scalar, L: EnergyLandscape<T> + ?Sized>(
    landscape: &L,
    initial: &SolverState<T>,
    params: &SaddleParams<T>,
    tau_ref: T,
    coarse_taus: &[T],
) -> Result<Trajectory<T>> {
    let mut stride = 0;
    for &tau in coarse_taus {
        stride = gcd(stride, grid_stride(tau, tau_ref)?);
    }
    let fine = params.clone().with_tau(tau_ref)?;
    integrate(landscape, initial, &fine, stride.max(1))
}
