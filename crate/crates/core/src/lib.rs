//! Top-k weighted interval stabbing.
//!
//! Given a static set of closed intervals `[s, e]` with real weights, report
//! for a query point `q` the `k` heaviest intervals containing `q`, heaviest
//! first. Equal weights are ordered by ascending interval id.
//!
//! Two backends answer the same queries:
//!
//! * [`SegTree`]: a segment tree with weight-sorted canonical arrays, merged
//!   along the search path with a heap bounded by the path length.
//!   `O(n log n)` space, `O(log n + k log log n)` query.
//! * [`Hive`]: a combed rectangular subdivision of the plane in which each
//!   interval is the horizontal segment `[s, e] x w`; a query locates the
//!   cell above everything at `x = q` and walks down. `O(n)` space,
//!   `O(log n + k)` query, or `O(k)` with the rank-space lookup table.
//!
//! [`topk_bruteforce`] is the reference both are tested against.

pub mod error;
pub mod hive;
pub mod interval;
pub mod io;
pub mod oracle;
pub mod rank;
pub mod segtree;
pub mod workload;

pub use error::{HiveError, ParseError};
pub use hive::{BottomEdge, Cell, CellId, Ceiling, Floor, Hive, TopSlab, WalkStats};
pub use interval::{intervals_from_triples, IntervalId, WeightKey, WeightedInterval};
pub use oracle::topk_bruteforce;
pub use rank::{to_segments, Grid, GridPoint, GridQuery, HSegment, RankMap};
pub use segtree::{QueryStats, SegTree};
pub use workload::Distribution;
