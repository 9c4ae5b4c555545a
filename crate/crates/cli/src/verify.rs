use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topk_core::{topk_bruteforce, WeightedInterval};

use crate::backend::{panic_message, Candidate};

/// The first disagreement found, reduced to the smallest failing `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub backend: String,
    pub q: f64,
    pub k: usize,
    pub expected: Vec<u32>,
    pub got: Result<Vec<u32>, String>,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: q={} k={} expected {:?}, ", self.backend, self.q, self.k, self.expected)?;
        match &self.got {
            Ok(ids) => write!(f, "got {ids:?}"),
            Err(msg) => write!(f, "invariant failure: {msg}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub queries: usize,
    pub failure: Option<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Seeded queries mixing exact endpoints, gap midpoints, points outside the
/// hull and uniform draws; `k` cycles through `1, 3, 17, n + 5` and random
/// values up to `n + 5`.
pub fn query_plan(intervals: &[WeightedInterval], count: usize, seed: u64) -> Vec<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ends: Vec<f64> = intervals.iter().flat_map(|iv| [iv.s, iv.e]).collect();
    ends.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ends.dedup();
    let n = intervals.len();
    let ks = [1, 3, 17, n + 5];
    (0..count)
        .map(|i| {
            let q = if ends.is_empty() {
                rng.gen_range(-1.0..1.0)
            } else {
                let lo = ends[0];
                let hi = ends[ends.len() - 1];
                match i % 5 {
                    0 | 1 => ends[rng.gen_range(0..ends.len())],
                    2 if ends.len() > 1 => {
                        let j = rng.gen_range(0..ends.len() - 1);
                        ends[j] + (ends[j + 1] - ends[j]) / 2.0
                    }
                    3 => {
                        if rng.gen_bool(0.5) {
                            lo - 1.0
                        } else {
                            hi + 1.0
                        }
                    }
                    _ => rng.gen_range(lo - 1.0..=hi + 1.0),
                }
            };
            let k = if i % 5 == 4 { rng.gen_range(1..=n + 5) } else { ks[i % 4] };
            (q, k)
        })
        .collect()
}

fn ids(v: &[WeightedInterval]) -> Vec<u32> {
    v.iter().map(|iv| iv.id).collect()
}

fn check(candidate: &dyn Candidate, intervals: &[WeightedInterval], q: f64, k: usize) -> Option<Failure> {
    let expected = topk_bruteforce(intervals, q, k);
    let got = match catch_unwind(AssertUnwindSafe(|| candidate.answer(q, k))) {
        Ok(Ok((out, _))) if out == expected => return None,
        Ok(Ok((out, _))) => Ok(ids(&out)),
        Ok(Err(msg)) => Err(msg),
        Err(e) => Err(panic_message(&e)),
    };
    Some(Failure {
        backend: candidate.name().to_string(),
        q,
        k,
        expected: ids(&expected),
        got,
    })
}

/// Runs every query through every candidate and the oracle. Stops at the
/// first mismatch and shrinks its `k`.
pub fn verify(
    intervals: &[WeightedInterval],
    candidates: &[&dyn Candidate],
    queries: &[(f64, usize)],
) -> VerifyReport {
    for &(q, k) in queries {
        for &c in candidates {
            if let Some(failure) = check(c, intervals, q, k) {
                let minimal = (1..k)
                    .find_map(|smaller| check(c, intervals, q, smaller))
                    .unwrap_or(failure);
                return VerifyReport {
                    queries: queries.len(),
                    failure: Some(minimal),
                };
            }
        }
    }
    VerifyReport {
        queries: queries.len(),
        failure: None,
    }
}
