use alloc::vec::Vec;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::Domain;
use crate::error::{Error, Result};
use crate::tensor::ChartPoint;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Rejection budget per requested point.
const ATTEMPTS_PER_POINT: usize = 200;

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` in-domain points from a Halton sequence with a seeded random shift
/// (Cranley-Patterson rotation), mapped into the domain box and filtered by
/// its predicate. Fewer than `n` points are returned only if the rejection
/// budget runs out; none at all is an error.
pub fn sample_points(domain: &Domain, n: usize, seed: u64) -> Result<Vec<ChartPoint>> {
    let dim = domain.dim();
    if dim > PRIMES.len() {
        return Err(Error::Unsupported(alloc::format!("sampling supports up to {} dimensions", PRIMES.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| unit(&mut rng)).collect();
    let (lo, hi) = (domain.lower(), domain.upper());
    let mut out = Vec::with_capacity(n);
    let mut x = alloc::vec![0.0; dim];
    for i in 1..=(n * ATTEMPTS_PER_POINT) as u64 {
        if out.len() == n {
            break;
        }
        for a in 0..dim {
            let u = radical_inverse(i, PRIMES[a]) + shift[a];
            let u = u - libm::floor(u);
            x[a] = lo[a] + (hi[a] - lo[a]) * u;
        }
        if domain.admits(&x) {
            out.push(ChartPoint::new(x.clone())?);
        }
    }
    if out.is_empty() && n > 0 {
        return Err(Error::EmptySample);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;

    fn boxed(pred: crate::catalog::Predicate) -> Domain {
        Domain::new(alloc::vec![-1.0, 0.0], alloc::vec![1.0, 2.0], 0.1, pred).unwrap()
    }

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(5, 3), 2.0 / 3.0 + 1.0 / 9.0);
    }

    #[test]
    fn points_respect_box_and_predicate() {
        let d = boxed(Arc::new(|x: &[f64]| x[0] > 0.0));
        let pts = sample_points(&d, 40, 7).unwrap();
        assert_eq!(pts.len(), 40);
        for p in &pts {
            assert!(d.contains(p));
        }
    }

    #[test]
    fn seed_determines_sample() {
        let d = boxed(Arc::new(|_: &[f64]| true));
        let a = sample_points(&d, 10, 42).unwrap();
        let b = sample_points(&d, 10, 42).unwrap();
        let c = sample_points(&d, 10, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn empty_domain_is_an_error() {
        let d = boxed(Arc::new(|_: &[f64]| false));
        assert_eq!(sample_points(&d, 5, 1), Err(Error::EmptySample));
    }
}
