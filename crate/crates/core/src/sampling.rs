//! Seeded random sampling.
//!
//! Rationals have numerators in `[-100, 100]` and denominators in
//! `[1, 100]`. Parallel consumers derive one ChaCha stream per task index
//! so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Rational, Scalar};

pub const RATIONAL_BOUND: i64 = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(-RATIONAL_BOUND..=RATIONAL_BOUND);
    let d = rng.gen_range(1..=RATIONAL_BOUND);
    Rational::from_ratio(n, d)
}

/// Strictly positive rational.
pub fn positive_rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(1..=RATIONAL_BOUND);
    let d = rng.gen_range(1..=RATIONAL_BOUND);
    Rational::from_ratio(n, d)
}

pub fn rational_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational(rng)).collect()
}

pub fn scalar_vector<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> Vec<S> {
    (0..n).map(|_| S::from_rational(&rational(rng))).collect()
}

/// Uniform direction on the unit sphere.
pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| stream(7, 3).gen()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = stream(7, 3).gen();
        let y: u64 = stream(7, 4).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn rationals_are_bounded() {
        let mut r = rng(1);
        for _ in 0..200 {
            let q = rational(&mut r);
            assert!(q.numer().magnitude() <= &100u32.into());
            assert!(q.denom() <= &100.into());
        }
        let u = unit_vector(&mut r, 5);
        assert!((u.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
