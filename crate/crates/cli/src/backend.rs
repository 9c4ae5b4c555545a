use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::ValueEnum;
use topk_core::hive::WALK_CAP;
use topk_core::{Hive, SegTree, WeightedInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Segtree,
    Hive,
    HiveTable,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Segtree, Backend::Hive, Backend::HiveTable];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Segtree => "segtree",
            Backend::Hive => "hive",
            Backend::HiveTable => "hive-table",
        }
    }

    /// Builds the backend; a failed build-time invariant becomes `Err`.
    pub fn build(self, intervals: &[WeightedInterval]) -> Result<Box<dyn Candidate>, String> {
        catch_unwind(AssertUnwindSafe(|| -> Box<dyn Candidate> {
            match self {
                Backend::Segtree => Box::new(SegTree::build(intervals)),
                Backend::Hive => Box::new(HiveCandidate {
                    hive: Hive::build(intervals),
                    name: "hive",
                }),
                Backend::HiveTable => Box::new(HiveCandidate {
                    hive: Hive::with_lookup_table(intervals),
                    name: "hive-table",
                }),
            }
        }))
        .map_err(|e| format!("{} build failed: {}", self.name(), panic_message(&e)))
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = e.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

/// Operation counters of one query, whichever backend produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub cells_visited: usize,
    pub locate_comparisons: usize,
    pub heap_ops: usize,
    pub max_heap_size: usize,
}

/// A structure under test.
pub trait Candidate {
    fn name(&self) -> &str;

    /// Answers a query, or describes the runtime invariant it broke.
    fn answer(&self, q: f64, k: usize) -> Result<(Vec<WeightedInterval>, Counters), String>;
}

impl Candidate for SegTree {
    fn name(&self) -> &str {
        "segtree"
    }

    fn answer(&self, q: f64, k: usize) -> Result<(Vec<WeightedInterval>, Counters), String> {
        let (out, st) = self.query(q, k);
        if st.max_heap_size > st.path_length || st.path_length > self.path_bound() {
            return Err(format!(
                "heap size {} / path length {} exceed bound {}",
                st.max_heap_size,
                st.path_length,
                self.path_bound()
            ));
        }
        if st.heap_pops > k || st.heap_pushes > st.heap_pops + st.path_length {
            return Err(format!("heap pops {} / pushes {} out of bounds", st.heap_pops, st.heap_pushes));
        }
        Ok((
            out,
            Counters {
                heap_ops: st.heap_pops + st.heap_pushes,
                max_heap_size: st.max_heap_size,
                ..Counters::default()
            },
        ))
    }
}

struct HiveCandidate {
    hive: Hive,
    name: &'static str,
}

impl Candidate for HiveCandidate {
    fn name(&self) -> &str {
        self.name
    }

    fn answer(&self, q: f64, k: usize) -> Result<(Vec<WeightedInterval>, Counters), String> {
        let (out, st) = self.hive.query(q, k);
        if st.cells_visited > WALK_CAP * (out.len() + 1) {
            return Err(format!("walk visited {} cells for {} reports", st.cells_visited, out.len()));
        }
        if self.hive.has_lookup_table() && st.locate_comparisons != 0 {
            return Err("table lookup fell back to binary search".into());
        }
        Ok((
            out,
            Counters {
                cells_visited: st.cells_visited,
                locate_comparisons: st.locate_comparisons,
                ..Counters::default()
            },
        ))
    }
}
