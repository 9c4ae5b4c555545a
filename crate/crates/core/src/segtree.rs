//! Segment tree whose canonical sets are kept in descending weight order,
//! queried by merging the canonical arrays along one root-to-leaf path with a
//! max-heap.
//!
//! Leaves are single grid coordinates (odd gap coordinates included), so a
//! query strictly between two endpoints still lands on a real leaf. Nodes are
//! stored implicitly: root is `1`, the children of `v` are `2v` and `2v + 1`,
//! and node `v` covering `[lo, hi)` splits at `(lo + hi) / 2`.
//!
//! Intervals are inserted heaviest first, so each canonical array comes out
//! sorted without any per-node sort. The per-node arrays live in one flat
//! buffer indexed by `offsets`.
//!
//! The heap never holds more than one entry per path node, so with a plain
//! binary heap every pop/push costs `O(log log n)`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::num::NonZeroUsize;

use crate::interval::{IntervalId, WeightKey, WeightedInterval};
use crate::rank::{Grid, GridPoint, GridQuery, RankMap};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub heap_pushes: usize,
    pub heap_pops: usize,
    pub max_heap_size: usize,
    /// Nodes on the root-to-leaf path, empty or not.
    pub path_length: usize,
}

/// Scan state for one node of the search path.
#[derive(Clone, Copy, Debug)]
struct PathCursor {
    node: u32,
    position: u32,
}

#[derive(Debug)]
struct HeapEntry {
    key: WeightKey,
    cursor: PathCursor,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

#[derive(Clone, Debug)]
pub struct SegTree {
    intervals: Vec<WeightedInterval>,
    rank_map: RankMap,
    /// `offsets[v]..offsets[v + 1]` is the canonical array of node `v`.
    offsets: Vec<u32>,
    canonical: Vec<IntervalId>,
}

impl SegTree {
    pub fn build(intervals: &[WeightedInterval]) -> Self {
        let rank_map = RankMap::build(intervals);
        let width = rank_map.grid_width();
        let node_slots = if width == 0 { 1 } else { 4 * width as usize };

        let mut order: Vec<&WeightedInterval> = intervals.iter().collect();
        order.sort_by_key(|iv| Reverse(iv.key()));
        let ranges: Vec<(IntervalId, Grid, Grid)> = order
            .iter()
            .map(|iv| (iv.id, rank_map.map_endpoint(iv.s), rank_map.map_endpoint(iv.e)))
            .collect();

        // Two passes over the canonical decomposition: sizes, then fill.
        let mut counts = vec![0u32; node_slots + 1];
        if width > 0 {
            for &(_, lo, hi) in &ranges {
                for_each_canonical(width, lo, hi + 1, |v| counts[v] += 1);
            }
        }
        let mut offsets = Vec::with_capacity(node_slots + 1);
        let mut acc = 0u32;
        for c in &counts {
            offsets.push(acc);
            acc += c;
        }
        let mut fill = offsets.clone();
        let mut canonical = vec![0 as IntervalId; acc as usize];
        if width > 0 {
            for &(id, lo, hi) in &ranges {
                for_each_canonical(width, lo, hi + 1, |v| {
                    canonical[fill[v] as usize] = id;
                    fill[v] += 1;
                });
            }
        }

        let mut by_id = intervals.to_vec();
        by_id.sort_by_key(|iv| iv.id);
        let tree = SegTree {
            intervals: by_id,
            rank_map,
            offsets,
            canonical,
        };
        assert!(
            tree.stored_ids() <= tree.space_bound(),
            "segment tree stores {} ids, bound is {}",
            tree.stored_ids(),
            tree.space_bound()
        );
        if cfg!(debug_assertions) {
            if let Err(msg) = tree.audit() {
                panic!("segment tree invariant violated: {msg}");
            }
        }
        tree
    }

    pub fn rank_map(&self) -> &RankMap {
        &self.rank_map
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total number of ids over all canonical arrays.
    pub fn stored_ids(&self) -> usize {
        self.canonical.len()
    }

    /// `2 n ceil(log2(grid_width))`.
    pub fn space_bound(&self) -> usize {
        2 * self.intervals.len() * ceil_log2(self.rank_map.grid_width()) as usize
    }

    /// Upper bound on the search-path length, `2 ceil(log2(grid_width)) + 1`.
    pub fn path_bound(&self) -> usize {
        2 * ceil_log2(self.rank_map.grid_width()) as usize + 1
    }

    fn node_ids(&self, v: usize) -> &[IntervalId] {
        &self.canonical[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    fn key_of(&self, id: IntervalId) -> WeightKey {
        self.intervals[id as usize].key()
    }

    /// Node indices from the root down to the leaf holding `x0`.
    pub fn search_path(&self, x0: Grid) -> Vec<usize> {
        let width = self.rank_map.grid_width();
        let mut path = Vec::new();
        if x0 >= width {
            return path;
        }
        let (mut v, mut lo, mut hi) = (1usize, 0, width);
        loop {
            path.push(v);
            if hi - lo == 1 {
                return path;
            }
            let mid = lo + (hi - lo) / 2;
            if x0 < mid {
                v *= 2;
                hi = mid;
            } else {
                v = 2 * v + 1;
                lo = mid;
            }
        }
    }

    /// Union of the canonical sets along the search path of `x0`.
    pub fn path_canonical_ids(&self, x0: Grid) -> Vec<IntervalId> {
        self.search_path(x0)
            .into_iter()
            .flat_map(|v| self.node_ids(v).iter().copied())
            .collect()
    }

    pub fn query(&self, q: f64, k: usize) -> (Vec<WeightedInterval>, QueryStats) {
        match NonZeroUsize::new(k) {
            Some(k) => self.query_grid(GridQuery {
                x0: self.rank_map.map_query(q),
                k,
            }),
            None => (Vec::new(), QueryStats::default()),
        }
    }

    pub fn query_grid(&self, query: GridQuery) -> (Vec<WeightedInterval>, QueryStats) {
        let mut stats = QueryStats::default();
        let x0 = match query.x0 {
            GridPoint::At(x) => x,
            _ => return (Vec::new(), stats),
        };
        let k = query.k.get();

        let path = self.search_path(x0);
        stats.path_length = path.len();
        let seeds: Vec<HeapEntry> = path
            .iter()
            .filter_map(|&v| {
                self.node_ids(v).first().map(|&id| HeapEntry {
                    key: self.key_of(id),
                    cursor: PathCursor {
                        node: v as u32,
                        position: 0,
                    },
                })
            })
            .collect();
        stats.heap_pushes = seeds.len();
        let mut heap = BinaryHeap::from(seeds);
        stats.max_heap_size = heap.len();

        let mut out = Vec::with_capacity(k.min(self.intervals.len()));
        while out.len() < k {
            let Some(top) = heap.pop() else { break };
            stats.heap_pops += 1;
            out.push(self.intervals[top.key.id as usize]);

            let PathCursor { node, position } = top.cursor;
            let next = position + 1;
            if let Some(&id) = self.node_ids(node as usize).get(next as usize) {
                heap.push(HeapEntry {
                    key: self.key_of(id),
                    cursor: PathCursor {
                        node,
                        position: next,
                    },
                });
                stats.heap_pushes += 1;
                stats.max_heap_size = stats.max_heap_size.max(heap.len());
            }
        }
        (out, stats)
    }

    /// Rechecks the structural invariants: canonical sets match the standard
    /// decomposition, every canonical array is strictly descending, and the
    /// space bound holds.
    pub fn audit(&self) -> Result<(), String> {
        if self.stored_ids() > self.space_bound() {
            return Err(format!(
                "{} stored ids exceed bound {}",
                self.stored_ids(),
                self.space_bound()
            ));
        }
        let width = self.rank_map.grid_width();
        if width == 0 {
            return if self.canonical.is_empty() {
                Ok(())
            } else {
                Err("empty tree stores ids".into())
            };
        }
        let mut expected: Vec<Vec<IntervalId>> = vec![Vec::new(); self.offsets.len() - 1];
        for iv in &self.intervals {
            let lo = self.rank_map.map_endpoint(iv.s);
            let hi = self.rank_map.map_endpoint(iv.e);
            for_each_canonical(width, lo, hi + 1, |v| expected[v].push(iv.id));
        }
        for (v, want) in expected.iter_mut().enumerate() {
            let got = self.node_ids(v);
            if let Some(pair) = got.windows(2).find(|p| self.key_of(p[0]) <= self.key_of(p[1])) {
                return Err(format!("node {v} not descending at ids {} {}", pair[0], pair[1]));
            }
            let mut have = got.to_vec();
            have.sort_unstable();
            want.sort_unstable();
            if &have != want {
                return Err(format!("node {v} holds {have:?}, expected {want:?}"));
            }
        }
        Ok(())
    }
}

/// Calls `f` on every node whose slab lies inside `[lo, hi)` while its
/// parent's slab does not.
fn for_each_canonical(width: Grid, lo: Grid, hi: Grid, mut f: impl FnMut(usize)) {
    fn go(v: usize, node_lo: Grid, node_hi: Grid, lo: Grid, hi: Grid, f: &mut impl FnMut(usize)) {
        if hi <= node_lo || node_hi <= lo {
            return;
        }
        if lo <= node_lo && node_hi <= hi {
            f(v);
            return;
        }
        let mid = node_lo + (node_hi - node_lo) / 2;
        go(2 * v, node_lo, mid, lo, hi, f);
        go(2 * v + 1, mid, node_hi, lo, hi, f);
    }
    go(1, 0, width, lo, hi, &mut f);
}

pub(crate) fn ceil_log2(x: Grid) -> u32 {
    if x <= 1 {
        0
    } else {
        32 - (x - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::intervals_from_triples;
    use crate::oracle::topk_bruteforce;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ids(v: &[WeightedInterval]) -> Vec<u32> {
        v.iter().map(|iv| iv.id).collect()
    }

    fn random_intervals(rng: &mut ChaCha8Rng, n: usize, span: i32, weights: i32) -> Vec<WeightedInterval> {
        intervals_from_triples((0..n).map(|_| {
            let a = rng.gen_range(0..span) as f64;
            let b = rng.gen_range(0..span) as f64;
            (a.min(b), a.max(b), rng.gen_range(0..weights) as f64)
        }))
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u32> = [0, 1, 2, 3, 4, 5, 8, 9, 1024, 1025].iter().map(|&x| ceil_log2(x)).collect();
        assert_eq!(got, [0, 0, 1, 2, 2, 3, 3, 4, 10, 11]);
    }

    #[test]
    fn empty_tree() {
        let t = SegTree::build(&[]);
        assert_eq!(t.rank_map().grid_width(), 0);
        assert_eq!(t.stored_ids(), 0);
        assert!(t.query(0.0, 3).0.is_empty());
        assert!(t.query(-1e9, 1).0.is_empty());
    }

    #[test]
    fn single_interval_bound() {
        let ivs = intervals_from_triples([(1.0, 2.0, 1.0)]);
        let t = SegTree::build(&ivs);
        assert_eq!(t.rank_map().grid_width(), 4);
        assert!(t.stored_ids() <= 2 * 2);
        // grid range [0, 2] splits into [0, 2) and [2, 3)
        assert_eq!(t.stored_ids(), 2);
        for x in 0..3 {
            assert_eq!(t.path_canonical_ids(x), [0]);
        }
        assert!(t.path_canonical_ids(3).is_empty());
    }

    #[test]
    fn three_interval_example() {
        let ivs = intervals_from_triples([(1.0, 5.0, 10.0), (2.0, 6.0, 20.0), (4.0, 9.0, 5.0)]);
        let t = SegTree::build(&ivs);
        assert_eq!(ids(&t.query(4.0, 2).0), [1, 0]);
        assert_eq!(ids(&t.query(4.0, 10).0), [1, 0, 2]);
        assert!(t.query(0.5, 5).0.is_empty());
        assert!(t.query(9.5, 5).0.is_empty());
        let (_, stats) = t.query(4.0, 2);
        assert_eq!(stats.heap_pops, 2);
    }

    #[test]
    fn k_zero_reports_nothing() {
        let ivs = intervals_from_triples([(1.0, 5.0, 10.0)]);
        assert!(SegTree::build(&ivs).query(3.0, 0).0.is_empty());
    }

    #[test]
    fn canonical_arrays_descending_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..20 {
            let ivs = random_intervals(&mut rng, 64, 40, 6);
            let t = SegTree::build(&ivs);
            t.audit().unwrap();
            for v in 0..t.offsets.len() - 1 {
                let keys: Vec<_> = t.node_ids(v).iter().map(|&id| t.key_of(id)).collect();
                assert!(keys.windows(2).all(|p| p[0] > p[1]));
            }
        }
    }

    #[test]
    fn matches_oracle_on_random_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        let ivs = random_intervals(&mut rng, 200, 100, 30);
        let t = SegTree::build(&ivs);
        for _ in 0..50 {
            let q = rng.gen_range(-5..210) as f64 / 2.0;
            let k = rng.gen_range(1..40);
            let (got, stats) = t.query(q, k);
            assert_eq!(got, topk_bruteforce(&ivs, q, k), "q={q} k={k}");
            assert!(stats.max_heap_size <= stats.path_length);
            assert!(stats.path_length <= t.path_bound());
            assert!(stats.heap_pops <= k);
            assert!(stats.heap_pushes <= stats.heap_pops + stats.path_length);
        }
    }

    #[test]
    fn duplicates_are_all_reported() {
        let ivs = intervals_from_triples([(0.0, 1.0, 3.0), (0.0, 1.0, 3.0), (0.0, 1.0, 3.0)]);
        let t = SegTree::build(&ivs);
        assert_eq!(ids(&t.query(0.5, 5).0), [0, 1, 2]);
    }

    #[test]
    fn path_sets_equal_stabbed_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=64 {
            let ivs = random_intervals(&mut rng, n, 30, 5);
            let t = SegTree::build(&ivs);
            let rm = t.rank_map();
            for x in 0..rm.grid_width() {
                let mut got = t.path_canonical_ids(x);
                got.sort_unstable();
                let want: Vec<u32> = ivs
                    .iter()
                    .filter(|iv| rm.map_endpoint(iv.s) <= x && x <= rm.map_endpoint(iv.e))
                    .map(|iv| iv.id)
                    .collect();
                assert_eq!(got, want, "n={n} x={x}");
            }
        }
    }
}
