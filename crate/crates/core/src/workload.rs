//! Seeded dataset generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::interval::{intervals_from_triples, WeightedInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    /// Endpoints and weights drawn i.i.d. on a thousandths lattice in `[0, 1000)`.
    Uniform,
    /// `n` concentric intervals `[i, 2n - i]` with distinct shuffled weights.
    Nested,
    /// Endpoints from a small pool and only four weight values, so both
    /// endpoints and weights repeat heavily.
    Clustered,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [Distribution::Uniform, Distribution::Nested, Distribution::Clustered];
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Uniform => "uniform",
            Distribution::Nested => "nested",
            Distribution::Clustered => "clustered",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown distribution {0:?} (expected uniform, nested or clustered)")]
pub struct UnknownDistribution(pub String);

impl FromStr for Distribution {
    type Err = UnknownDistribution;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "nested" => Ok(Distribution::Nested),
            "clustered" => Ok(Distribution::Clustered),
            other => Err(UnknownDistribution(other.to_string())),
        }
    }
}

fn thousandths(rng: &mut ChaCha8Rng, below: u32) -> f64 {
    rng.gen_range(0..below * 1000) as f64 / 1000.0
}

pub fn generate(dist: Distribution, n: usize, seed: u64) -> Vec<WeightedInterval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match dist {
        Distribution::Uniform => intervals_from_triples(
            (0..n)
                .map(|_| {
                    let a = thousandths(&mut rng, 1000);
                    let b = thousandths(&mut rng, 1000);
                    (a.min(b), a.max(b), thousandths(&mut rng, 1000))
                })
                .collect::<Vec<_>>(),
        ),
        Distribution::Nested => {
            let mut weights: Vec<u64> = (1..=n as u64).collect();
            weights.shuffle(&mut rng);
            intervals_from_triples(
                (0..n).map(|i| (i as f64, (2 * n - i) as f64, weights[i] as f64)),
            )
        }
        Distribution::Clustered => {
            let pool: Vec<f64> = (0..(n / 8).max(2)).map(|_| rng.gen_range(0..100) as f64).collect();
            intervals_from_triples(
                (0..n)
                    .map(|_| {
                        let a = *pool.choose(&mut rng).unwrap();
                        let b = *pool.choose(&mut rng).unwrap();
                        (a.min(b), a.max(b), rng.gen_range(1..=4) as f64)
                    })
                    .collect::<Vec<_>>(),
            )
        }
    }
}

/// True if two intervals share a weight.
pub fn has_duplicate_weights(intervals: &[WeightedInterval]) -> bool {
    let mut w: Vec<f64> = intervals.iter().map(|iv| iv.w).collect();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    w.windows(2).any(|p| p[0] == p[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_pattern() {
        let ivs = generate(Distribution::Nested, 3, 9);
        let spans: Vec<(f64, f64)> = ivs.iter().map(|iv| (iv.s, iv.e)).collect();
        assert_eq!(spans, [(0.0, 6.0), (1.0, 5.0), (2.0, 4.0)]);
        assert!(!has_duplicate_weights(&ivs));
    }

    #[test]
    fn deterministic_and_sized() {
        for dist in Distribution::ALL {
            assert!(generate(dist, 0, 1).is_empty());
            let a = generate(dist, 100, 42);
            assert_eq!(a.len(), 100);
            assert_eq!(a, generate(dist, 100, 42));
            assert!(a.iter().all(|iv| iv.s <= iv.e));
        }
        assert!(has_duplicate_weights(&generate(Distribution::Clustered, 100, 3)));
    }

    #[test]
    fn names_round_trip() {
        for dist in Distribution::ALL {
            assert_eq!(dist.to_string().parse::<Distribution>().unwrap(), dist);
        }
        assert!("zipf".parse::<Distribution>().is_err());
    }
}
