//! Coordinate compression onto an even/odd integer grid.
//!
//! Every distinct endpoint value gets an even grid coordinate (`2 * rank`),
//! and the open gap between two consecutive endpoints gets the odd coordinate
//! in between. With this encoding a closed interval `[s, e]` is stabbed by
//! `q` exactly when `grid(s) <= grid(q) <= grid(e)`, so both backends only
//! ever deal with integer ranges.

use std::num::NonZeroUsize;

use crate::interval::{IntervalId, WeightKey, WeightedInterval};

/// Grid coordinate.
pub type Grid = u32;

/// Position of a query value relative to the compressed endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridPoint {
    /// Strictly below every endpoint.
    BeforeAll,
    At(Grid),
    /// Strictly above every endpoint.
    AfterAll,
}

impl GridPoint {
    /// The grid coordinate, or `None` for the two sentinels (which stab nothing).
    pub fn coord(self) -> Option<Grid> {
        match self {
            GridPoint::At(x) => Some(x),
            _ => None,
        }
    }
}

/// A query already mapped onto the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridQuery {
    pub x0: GridPoint,
    pub k: NonZeroUsize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RankMap {
    sorted_endpoints: Vec<f64>,
}

impl RankMap {
    /// Collects every `s` and `e`, sorts and deduplicates them.
    pub fn build(intervals: &[WeightedInterval]) -> Self {
        let mut values: Vec<f64> = intervals.iter().flat_map(|iv| [iv.s, iv.e]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("NaN endpoint"));
        // -0.0 and 0.0 are the same endpoint
        values.dedup_by(|a, b| a == b);
        RankMap {
            sorted_endpoints: values,
        }
    }

    pub fn sorted_endpoints(&self) -> &[f64] {
        &self.sorted_endpoints
    }

    /// `2 * (number of distinct endpoints)`; every valid grid coordinate is below it.
    pub fn grid_width(&self) -> Grid {
        (2 * self.sorted_endpoints.len()) as Grid
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_endpoints.is_empty()
    }

    /// Grid coordinate of an endpoint value.
    ///
    /// Panics if `v` is not one of the endpoints this map was built from.
    pub fn map_endpoint(&self, v: f64) -> Grid {
        let idx = self.lower_bound(v);
        assert!(
            idx < self.sorted_endpoints.len() && self.sorted_endpoints[idx] == v,
            "{v} is not an endpoint of this rank map"
        );
        (2 * idx) as Grid
    }

    pub fn map_query(&self, q: f64) -> GridPoint {
        let idx = self.lower_bound(q);
        let len = self.sorted_endpoints.len();
        if idx < len && self.sorted_endpoints[idx] == q {
            GridPoint::At((2 * idx) as Grid)
        } else if idx == 0 {
            GridPoint::BeforeAll
        } else if idx == len {
            GridPoint::AfterAll
        } else {
            GridPoint::At((2 * idx - 1) as Grid)
        }
    }

    fn lower_bound(&self, v: f64) -> usize {
        self.sorted_endpoints.partition_point(|&x| x < v)
    }
}

/// An interval seen as the horizontal segment `[x_lo, x_hi] x ykey` on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HSegment {
    pub x_lo: Grid,
    pub x_hi: Grid,
    pub ykey: WeightKey,
    pub interval_id: IntervalId,
}

impl HSegment {
    #[inline]
    pub fn covers(&self, x: Grid) -> bool {
        self.x_lo <= x && x <= self.x_hi
    }
}

/// One segment per interval, in input order.
pub fn to_segments(intervals: &[WeightedInterval], rm: &RankMap) -> Vec<HSegment> {
    intervals
        .iter()
        .map(|iv| HSegment {
            x_lo: rm.map_endpoint(iv.s),
            x_hi: rm.map_endpoint(iv.e),
            ykey: iv.key(),
            interval_id: iv.id,
        })
        .collect()
}
