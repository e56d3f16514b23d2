//! Deterministic sample generation over box domains: regular/Halton grids
//! plus seeded uniform draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::metric::{BoxDomain, Point};

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Evenly spaced (1-D, endpoints included) or Halton (n-D) points.
    Grid,
    /// Seeded uniform draws.
    Random,
    /// Half grid, half random.
    #[default]
    Mixed,
}

/// `n` evenly spaced values over `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

/// Low-discrepancy grid: a closed linspace in one dimension, the Halton
/// sequence (skipping the origin) in higher ones.
pub fn grid(domain: &BoxDomain, n: usize) -> Vec<Point> {
    let bounds = domain.bounds();
    if bounds.len() == 1 {
        let (lo, hi) = bounds[0];
        return linspace(lo, hi, n).into_iter().map(Point::scalar).collect();
    }
    (1..=n as u64)
        .map(|i| {
            let coords = bounds
                .iter()
                .enumerate()
                .map(|(d, &(lo, hi))| lo + (hi - lo) * radical_inverse(i, PRIMES[d % PRIMES.len()]))
                .collect();
            Point::new(coords).expect("finite box")
        })
        .collect()
}

pub fn random(domain: &BoxDomain, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let coords = domain
                .bounds()
                .iter()
                .map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..=hi) })
                .collect();
            Point::new(coords).expect("finite box")
        })
        .collect()
}

pub fn sample(domain: &BoxDomain, n: usize, mode: SamplingMode, seed: u64) -> Vec<Point> {
    match mode {
        SamplingMode::Grid => grid(domain, n),
        SamplingMode::Random => random(domain, n, seed),
        SamplingMode::Mixed => {
            let n_grid = n.div_ceil(2);
            let mut out = grid(domain, n_grid);
            out.extend(random(domain, n - n_grid, seed));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let xs = linspace(0.1, 1.0, 50);
        assert_eq!(xs.len(), 50);
        assert_eq!(xs[0], 0.1);
        assert_eq!(xs[49], 1.0);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn halton_stays_in_box() {
        let b = BoxDomain::new(vec![(-5.0, 5.0), (0.0, 1.0)]).unwrap();
        let pts = grid(&b, 64);
        assert!(pts.iter().all(|p| b.contains(p)));
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }

    #[test]
    fn seeded_draws_repeat() {
        let b = BoxDomain::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(random(&b, 10, 7), random(&b, 10, 7));
        assert_ne!(random(&b, 10, 7), random(&b, 10, 8));
        assert_eq!(sample(&b, 11, SamplingMode::Mixed, 1).len(), 11);
    }
}
