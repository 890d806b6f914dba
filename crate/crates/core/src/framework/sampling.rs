//! Reproducible sample generation for the verifiers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::Point;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID_PER_AXIS: usize = 101;
pub const DEFAULT_RANDOM_PAIRS: usize = 100;

/// The single seeded generator all sampling flows through.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn grid_pairs(lo: f64, hi: f64, per_axis: usize) -> Vec<(f64, f64)> {
    let axis = linspace(lo, hi, per_axis);
    axis.iter()
        .flat_map(|&x| axis.iter().map(move |&y| (x, y)))
        .collect()
}

pub fn random_pairs(rng: &mut impl Rng, lo: f64, hi: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|_| (rng.random_range(lo..=hi), rng.random_range(lo..=hi)))
        .collect()
}

pub fn grid_triples(lo: f64, hi: f64, per_axis: usize) -> Vec<(f64, f64, f64)> {
    let axis = linspace(lo, hi, per_axis);
    let mut out = Vec::with_capacity(per_axis.pow(3));
    for &x in &axis {
        for &z in &axis {
            for &y in &axis {
                out.push((x, z, y));
            }
        }
    }
    out
}

/// Uniform grid of pairs plus seeded random pairs over a square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSample {
    pub lo: f64,
    pub hi: f64,
    pub grid_per_axis: usize,
    pub random: usize,
    pub seed: u64,
}

impl PairSample {
    pub fn square(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            grid_per_axis: DEFAULT_GRID_PER_AXIS,
            random: DEFAULT_RANDOM_PAIRS,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let mut out = grid_pairs(self.lo, self.hi, self.grid_per_axis);
        out.extend(random_pairs(&mut rng(self.seed), self.lo, self.hi, self.random));
        out
    }

    pub fn point_pairs(&self) -> Vec<(Point, Point)> {
        to_point_pairs(&self.pairs())
    }
}

pub fn to_point_pairs(pairs: &[(f64, f64)]) -> Vec<(Point, Point)> {
    pairs
        .iter()
        .map(|&(x, y)| (Point::Scalar(x), Point::Scalar(y)))
        .collect()
}

/// Pairs of strictly positive reals for the `(t, s)` arguments of a
/// simulation function: a grid over `(0, hi]^2` plus random pairs.
pub fn positive_pairs(hi: f64, per_axis: usize, random: usize, seed: u64) -> Vec<(f64, f64)> {
    let step = hi / per_axis as f64;
    let mut out = grid_pairs(step, hi, per_axis);
    let mut g = rng(seed);
    out.extend((0..random).map(|_| {
        (
            g.random_range(f64::EPSILON..=hi),
            g.random_range(f64::EPSILON..=hi),
        )
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.0, 1.0, 101);
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 1.0);
        assert_eq!(v[50], 0.5);
    }

    #[test]
    fn sample_is_reproducible() {
        let s = PairSample::square(0.0, 3.0);
        assert_eq!(s.pairs(), s.pairs());
        assert_eq!(s.pairs().len(), 101 * 101 + 100);
        assert_ne!(s.pairs(), s.with_seed(7).pairs());
        assert!(s.pairs().iter().all(|&(x, y)| (0.0..=3.0).contains(&x) && (0.0..=3.0).contains(&y)));
    }

    #[test]
    fn positive_pairs_are_positive() {
        assert!(positive_pairs(1.0, 10, 100, 1).iter().all(|&(t, s)| t > 0.0 && s > 0.0));
    }
}
