use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use topk_core::WeightedInterval;

use crate::backend::{Backend, Candidate, Counters};

/// One CSV row: counters aggregated over all queries for a `(backend, n, k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub backend: String,
    pub n: usize,
    pub k: usize,
    pub queries: usize,
    pub mean_cells_visited: f64,
    pub max_cells_visited: usize,
    pub mean_heap_ops: f64,
    pub max_heap_ops: usize,
    pub max_heap_size: usize,
    pub mean_locate_comparisons: f64,
    pub mean_reported: f64,
    /// Informative only.
    pub ns_per_query: f64,
}

/// Query points drawn uniformly over the endpoint hull.
fn bench_points(intervals: &[WeightedInterval], count: usize, seed: u64) -> Vec<f64> {
    let lo = intervals.iter().map(|iv| iv.s).fold(f64::INFINITY, f64::min);
    let hi = intervals.iter().map(|iv| iv.e).fold(f64::NEG_INFINITY, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| if lo < hi { rng.gen_range(lo..=hi) } else { lo })
        .collect()
}

/// An empty dataset yields one row per `k` with zero queries.
pub fn bench(
    intervals: &[WeightedInterval],
    backend: Backend,
    ks: &[usize],
    queries: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, String> {
    let candidate = backend.build(intervals)?;
    let count = if intervals.is_empty() { 0 } else { queries };
    let points = bench_points(intervals, count, seed);
    ks.iter()
        .map(|&k| run_row(candidate.as_ref(), backend, intervals.len(), k, &points))
        .collect()
}

fn run_row(
    candidate: &dyn Candidate,
    backend: Backend,
    n: usize,
    k: usize,
    points: &[f64],
) -> Result<BenchRow, String> {
    let mut all = Vec::with_capacity(points.len());
    let mut reported = 0usize;
    let start = Instant::now();
    for &q in points {
        let (out, c) = candidate.answer(q, k)?;
        reported += out.len();
        all.push(c);
    }
    let elapsed = start.elapsed().as_nanos() as f64;

    let count = points.len();
    let mean = |f: fn(&Counters) -> usize| {
        if count == 0 {
            0.0
        } else {
            all.iter().map(f).sum::<usize>() as f64 / count as f64
        }
    };
    let max = |f: fn(&Counters) -> usize| all.iter().map(f).max().unwrap_or(0);
    Ok(BenchRow {
        backend: backend.name().to_string(),
        n,
        k,
        queries: count,
        mean_cells_visited: mean(|c| c.cells_visited),
        max_cells_visited: max(|c| c.cells_visited),
        mean_heap_ops: mean(|c| c.heap_ops),
        max_heap_ops: max(|c| c.heap_ops),
        max_heap_size: max(|c| c.max_heap_size),
        mean_locate_comparisons: mean(|c| c.locate_comparisons),
        mean_reported: if count == 0 { 0.0 } else { reported as f64 / count as f64 },
        ns_per_query: if count == 0 { 0.0 } else { elapsed / count as f64 },
    })
}
