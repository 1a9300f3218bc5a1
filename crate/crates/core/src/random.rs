//! Seeded sampling on spheres. Every random quantity in the crate flows from
//! a `ChaCha8Rng` seeded with a caller-supplied integer, so runs are
//! reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::norm;
use crate::scalar::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<T> {
    (0..d)
        .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

/// Uniformly distributed point on `S^{d-1}`.
pub fn unit_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<T> {
    loop {
        let mut v = gaussian_vector::<T, _>(rng, d);
        let n = norm(&v);
        if n > T::zero() {
            v.iter_mut().for_each(|x| *x /= n);
            return v;
        }
    }
}

/// `count` uniform points on `S^{d-1}`. The first `m` points of a longer
/// request equal the points of a request of size `m` with the same seed.
pub fn sphere_samples<T: Scalar>(d: usize, count: usize, seed: u64) -> Vec<Vec<T>> {
    let mut r = rng(seed);
    (0..count).map(|_| unit_vector(&mut r, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_unit_and_nested() {
        let a = sphere_samples::<f64>(5, 10, 7);
        let b = sphere_samples::<f64>(5, 4, 7);
        assert_eq!(&a[..4], &b[..]);
        for s in &a {
            assert!((norm(s) - 1.0).abs() < 1e-14);
        }
        assert_ne!(sphere_samples::<f64>(5, 1, 8), b[..1].to_vec());
    }
}
