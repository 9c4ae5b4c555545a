//! Combed rectangular subdivision over the intervals seen as horizontal
//! segments (`[s, e] x w`), answering top-k stabbing by locating the cell
//! that contains `(x0, +inf)` and walking straight down.
//!
//! Construction works on grid columns rather than real coordinates. The
//! plane is cut into columns `-inf..0, 0, 1, .., W-1..+inf`; inside a column
//! the active segments are stacked by [`WeightKey`], so every gap between two
//! vertically consecutive segments (or SKY / GROUND) is a slot. A cell is a
//! run of consecutive columns over which the same pair `(top, bottom)` stays
//! adjacent; the cell boundaries are exactly the vertical walls shot up and
//! down from segment endpoints.
//!
//! Combing then processes segments from the lowest to the highest. For a
//! segment `S`, the walls that hit it from below split its underside into
//! runs; every second one of those walls is carried up through `S` and splits
//! the cell sitting on top of `S`. The new wall in turn hits the segment above
//! from below and is considered again when that segment is processed. After
//! combing, the bottom side of every cell faces at most two cells, so the
//! downward walk does constant work per reported segment. Each segment passes
//! on at most half of what reaches it, so the total number of walls stays
//! within twice the uncombed count.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::num::NonZeroUsize;

use crate::error::HiveError;
use crate::interval::{IntervalId, WeightedInterval};
use crate::rank::{to_segments, Grid, GridPoint, GridQuery, HSegment, RankMap};

/// Maximum number of bottom edges of any cell.
pub const DEGREE_CAP: usize = 4;
/// Cells are bounded by `SIZE_CAP * n + 4`.
pub const SIZE_CAP: usize = 12;
/// A walk visits at most `WALK_CAP * (reported + 1)` cells.
pub const WALK_CAP: usize = 6;

/// Left end of the leftmost cells.
pub const NEG_INF: i64 = i64::MIN;
/// Right end of the rightmost cells.
pub const POS_INF: i64 = i64::MAX;

pub type CellId = u32;

const NONE: u32 = u32::MAX;

/// What bounds a cell from above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ceiling {
    Sky,
    Segment(IntervalId),
}

/// What lies under one bottom edge of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Floor {
    Ground,
    Segment(IntervalId),
}

/// A cell: the rectangle `[x_lo, x_hi) x (floor, top)`, in grid units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub x_lo: i64,
    pub x_hi: i64,
    pub top: Ceiling,
    first_edge: u32,
    edge_count: u32,
}

/// A piece `[x_lo, x_hi)` of a cell's bottom side and the cell across it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BottomEdge {
    pub x_lo: i64,
    pub x_hi: i64,
    pub floor: Floor,
    /// `None` exactly when `floor` is GROUND.
    pub below: Option<CellId>,
}

impl BottomEdge {
    #[inline]
    fn contains(&self, x: i64) -> bool {
        self.x_lo <= x && x < self.x_hi
    }
}

/// One entry of the top-cell index: the top cell starting at `x_lo`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TopSlab {
    pub x_lo: i64,
    pub x_hi: i64,
    pub cell: CellId,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub cells_visited: usize,
    pub locate_comparisons: usize,
    pub table_reads: usize,
}

impl WalkStats {
    fn merge(self, other: WalkStats) -> WalkStats {
        WalkStats {
            cells_visited: self.cells_visited + other.cells_visited,
            locate_comparisons: self.locate_comparisons + other.locate_comparisons,
            table_reads: self.table_reads + other.table_reads,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Hive {
    intervals: Vec<WeightedInterval>,
    rank_map: RankMap,
    segments: Vec<HSegment>,
    cells: Vec<Cell>,
    edges: Vec<BottomEdge>,
    top_slabs: Vec<TopSlab>,
    lookup: Option<Vec<CellId>>,
}

impl Hive {
    /// Builds the subdivision without the rank-space lookup table.
    pub fn build(intervals: &[WeightedInterval]) -> Self {
        Self::build_with(intervals, false)
    }

    /// Builds the subdivision plus a table mapping every grid coordinate to
    /// its top cell, so that locating costs one array read.
    pub fn with_lookup_table(intervals: &[WeightedInterval]) -> Self {
        Self::build_with(intervals, true)
    }

    pub fn build_with(intervals: &[WeightedInterval], lookup_table: bool) -> Self {
        let mut by_id = intervals.to_vec();
        by_id.sort_by_key(|iv| iv.id);
        assert!(
            by_id.iter().enumerate().all(|(i, iv)| iv.id as usize == i),
            "interval ids must be dense 0..n"
        );
        let rank_map = RankMap::build(&by_id);
        let segments = to_segments(&by_id, &rank_map);

        let mut builder = Builder::new(&segments, rank_map.grid_width());
        builder.sweep();
        builder.comb();
        let (cells, edges, sky_chain) = builder.finish();

        let top_slabs: Vec<TopSlab> = sky_chain
            .into_iter()
            .map(|c| TopSlab {
                x_lo: cells[c as usize].x_lo,
                x_hi: cells[c as usize].x_hi,
                cell: c,
            })
            .collect();

        let mut hive = Hive {
            intervals: by_id,
            rank_map,
            segments,
            cells,
            edges,
            top_slabs,
            lookup: None,
        };
        if lookup_table {
            let table = (0..hive.rank_map.grid_width())
                .map(|x| hive.locate_top(GridPoint::At(x)).0)
                .collect();
            hive.lookup = Some(table);
        }
        if let Err(msg) = hive.validate() {
            panic!("hive invariant violated: {msg}");
        }
        hive
    }

    pub fn rank_map(&self) -> &RankMap {
        &self.rank_map
    }

    pub fn segments(&self) -> &[HSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id as usize]
    }

    pub fn bottom_edges(&self, id: CellId) -> &[BottomEdge] {
        let c = &self.cells[id as usize];
        &self.edges[c.first_edge as usize..(c.first_edge + c.edge_count) as usize]
    }

    pub fn top_slabs(&self) -> &[TopSlab] {
        &self.top_slabs
    }

    pub fn has_lookup_table(&self) -> bool {
        self.lookup.is_some()
    }

    /// Largest bottom-edge count over all cells.
    pub fn max_degree(&self) -> usize {
        self.cells.iter().map(|c| c.edge_count as usize).max().unwrap_or(0)
    }

    /// `SIZE_CAP * n + 4`.
    pub fn cell_bound(&self) -> usize {
        SIZE_CAP * self.intervals.len() + 4
    }

    /// Column used to locate a grid point among cells; sentinels fall into
    /// the outermost cells.
    fn column(&self, x0: GridPoint) -> i64 {
        match x0 {
            GridPoint::BeforeAll => -1,
            GridPoint::At(x) => x as i64,
            GridPoint::AfterAll => self.rank_map.grid_width() as i64,
        }
    }

    /// Binary search of the top slabs for the one containing `x0`.
    pub fn locate_top(&self, x0: GridPoint) -> (CellId, WalkStats) {
        let x = self.column(x0);
        let mut stats = WalkStats::default();
        // last slab with x_lo <= x; slab 0 starts at -inf
        let (mut lo, mut hi) = (0usize, self.top_slabs.len());
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            stats.locate_comparisons += 1;
            if self.top_slabs[mid].x_lo <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (self.top_slabs[lo].cell, stats)
    }

    /// Single table read; requires a hive built with the lookup table.
    pub fn locate_top_table(&self, x0: Grid) -> Result<(CellId, WalkStats), HiveError> {
        let table = self.lookup.as_ref().ok_or(HiveError::TableNotBuilt)?;
        let cell = *table.get(x0 as usize).ok_or(HiveError::OutOfTable {
            x: x0,
            width: table.len() as u32,
        })?;
        Ok((
            cell,
            WalkStats {
                table_reads: 1,
                ..WalkStats::default()
            },
        ))
    }

    /// Walks down the vertical line through `x0` from `start`, reporting the
    /// first `k` segments crossed.
    pub fn walk_down(&self, start: CellId, x0: GridPoint, k: usize) -> (Vec<WeightedInterval>, WalkStats) {
        let x = self.column(x0);
        let mut stats = WalkStats {
            cells_visited: 1,
            ..WalkStats::default()
        };
        let mut out = Vec::new();
        let mut cur = start;
        while out.len() < k {
            let edge = self
                .bottom_edges(cur)
                .iter()
                .find(|e| e.contains(x))
                .expect("walk left the cell's x-range");
            match (edge.floor, edge.below) {
                (Floor::Segment(id), Some(next)) => {
                    out.push(self.intervals[id as usize]);
                    if out.len() == k {
                        break;
                    }
                    cur = next;
                    stats.cells_visited += 1;
                }
                _ => break,
            }
        }
        (out, stats)
    }

    pub fn query(&self, q: f64, k: usize) -> (Vec<WeightedInterval>, WalkStats) {
        match NonZeroUsize::new(k) {
            Some(k) => self.query_grid(GridQuery {
                x0: self.rank_map.map_query(q),
                k,
            }),
            None => (Vec::new(), WalkStats::default()),
        }
    }

    /// Locates with the table when one was built, by binary search otherwise.
    pub fn query_grid(&self, query: GridQuery) -> (Vec<WeightedInterval>, WalkStats) {
        let x = match query.x0 {
            GridPoint::At(x) => x,
            _ => return (Vec::new(), WalkStats::default()),
        };
        let (start, located) = match self.locate_top_table(x) {
            Ok(hit) => hit,
            Err(_) => self.locate_top(query.x0),
        };
        let (out, walked) = self.walk_down(start, query.x0, query.k.get());
        (out, located.merge(walked))
    }

    /// Segment ids crossed top to bottom along grid column `x`.
    pub fn crossings(&self, x: Grid) -> Vec<IntervalId> {
        let (start, _) = self.locate_top(GridPoint::At(x));
        self.walk_down(start, GridPoint::At(x), usize::MAX)
            .0
            .iter()
            .map(|iv| iv.id)
            .collect()
    }

    /// Structural checks run after every build: size and degree caps, bottom
    /// edges tiling each cell, link consistency, the top-slab partition and
    /// the lookup table.
    pub fn validate(&self) -> Result<(), String> {
        if self.cells.len() > self.cell_bound() {
            return Err(format!(
                "{} cells exceed bound {}",
                self.cells.len(),
                self.cell_bound()
            ));
        }
        for (id, cell) in self.cells.iter().enumerate() {
            let edges = self.bottom_edges(id as CellId);
            if edges.is_empty() || edges.len() > DEGREE_CAP {
                return Err(format!("cell {id} has {} bottom edges", edges.len()));
            }
            if cell.x_lo >= cell.x_hi {
                return Err(format!("cell {id} is empty"));
            }
            if edges[0].x_lo != cell.x_lo || edges[edges.len() - 1].x_hi != cell.x_hi {
                return Err(format!("bottom edges of cell {id} do not span it"));
            }
            for pair in edges.windows(2) {
                if pair[0].x_hi != pair[1].x_lo || pair[0].floor != pair[1].floor {
                    return Err(format!("bottom edges of cell {id} are not one contiguous floor"));
                }
            }
            for e in edges {
                if e.x_lo >= e.x_hi {
                    return Err(format!("cell {id} has an empty bottom edge"));
                }
                match (e.floor, e.below) {
                    (Floor::Ground, None) => {}
                    (Floor::Segment(seg), Some(below)) => {
                        let b = self.cell(below);
                        if b.top != Ceiling::Segment(seg) {
                            return Err(format!("link {id}->{below} does not cross segment {seg}"));
                        }
                        if !(b.x_lo <= e.x_lo && e.x_hi <= b.x_hi) {
                            return Err(format!("cell {below} does not contain edge of cell {id}"));
                        }
                        let s = &self.segments[seg as usize];
                        if !(s.x_lo as i64 <= e.x_lo && e.x_hi <= s.x_hi as i64 + 1) {
                            return Err(format!("edge of cell {id} overhangs segment {seg}"));
                        }
                        if let Ceiling::Segment(t) = cell.top {
                            if self.segments[t as usize].ykey <= s.ykey {
                                return Err(format!("cell {id} has its top below its floor"));
                            }
                        }
                    }
                    _ => return Err(format!("cell {id} has a malformed bottom edge")),
                }
            }
        }

        let slabs = &self.top_slabs;
        if slabs.is_empty() || slabs[0].x_lo != NEG_INF || slabs[slabs.len() - 1].x_hi != POS_INF {
            return Err("top slabs do not cover the line".into());
        }
        for pair in slabs.windows(2) {
            if pair[0].x_hi != pair[1].x_lo {
                return Err("top slabs are not contiguous".into());
            }
        }
        for slab in slabs {
            if self.cell(slab.cell).top != Ceiling::Sky {
                return Err(format!("top slab cell {} is not under the sky", slab.cell));
            }
        }
        let sky_cells = self.cells.iter().filter(|c| c.top == Ceiling::Sky).count();
        if sky_cells != slabs.len() {
            return Err("top slabs miss some sky cells".into());
        }

        if let Some(table) = &self.lookup {
            if table.len() != self.rank_map.grid_width() as usize {
                return Err("lookup table has the wrong length".into());
            }
            for (x, &cell) in table.iter().enumerate() {
                if cell != self.locate_top(GridPoint::At(x as Grid)).0 {
                    return Err(format!("lookup table disagrees at x = {x}"));
                }
            }
        }
        Ok(())
    }

    /// Writes one line per cell:
    /// `cell <id> <x_lo> <x_hi> top=<seg|SKY> bottom=(<lo>..<hi>,<seg|GROUND>)...`
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, cell) in self.cells.iter().enumerate() {
            write!(
                out,
                "cell {id} {} {} top={} bottom=",
                Bound(cell.x_lo),
                Bound(cell.x_hi),
                cell.top
            )
            .unwrap();
            for e in self.bottom_edges(id as CellId) {
                write!(out, "({}..{},{})", Bound(e.x_lo), Bound(e.x_hi), e.floor).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

struct Bound(i64);

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NEG_INF => f.write_str("-inf"),
            POS_INF => f.write_str("+inf"),
            x => write!(f, "{x}"),
        }
    }
}

impl fmt::Display for Ceiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ceiling::Sky => f.write_str("SKY"),
            Ceiling::Segment(id) => write!(f, "{id}"),
        }
    }
}

impl fmt::Display for Floor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Floor::Ground => f.write_str("GROUND"),
            Floor::Segment(id) => write!(f, "{id}"),
        }
    }
}

/// Cell under construction. Columns are shifted by one so that column 0 is
/// everything left of grid 0 and column `W` is grid `W - 1`, the gap right
/// of the last endpoint, which extends to `+inf`.
#[derive(Clone, Copy, Debug)]
struct RawCell {
    /// Levels: 0 is SKY, `1..=n` are segments top-down, `n + 1` is GROUND.
    top: u32,
    bottom: u32,
    lo: u32,
    hi: u32,
    /// Next cell to the right with the same top.
    next_same_top: u32,
    /// Next cell to the right with the same bottom.
    next_same_bottom: u32,
}

struct Builder<'a> {
    segments: &'a [HSegment],
    width: Grid,
    /// `level_seg[l]` is the interval id of the segment at level `l`.
    level_seg: Vec<IntervalId>,
    seg_level: Vec<u32>,
    cells: Vec<RawCell>,
    head_below: Vec<u32>,
    tail_below: Vec<u32>,
    head_above: Vec<u32>,
    tail_above: Vec<u32>,
}

impl<'a> Builder<'a> {
    fn new(segments: &'a [HSegment], width: Grid) -> Self {
        let n = segments.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&a, &b| segments[b as usize].ykey.cmp(&segments[a as usize].ykey));
        let mut level_seg = vec![NONE; n + 2];
        let mut seg_level = vec![0; n];
        for (i, &seg) in order.iter().enumerate() {
            level_seg[i + 1] = seg;
            seg_level[seg as usize] = i as u32 + 1;
        }
        Builder {
            segments,
            width,
            level_seg,
            seg_level,
            cells: Vec::with_capacity(3 * n + 2),
            head_below: vec![NONE; n + 2],
            tail_below: vec![NONE; n + 2],
            head_above: vec![NONE; n + 2],
            tail_above: vec![NONE; n + 2],
        }
    }

    fn ground(&self) -> u32 {
        self.segments.len() as u32 + 1
    }

    fn open(&mut self, top: u32, bottom: u32, lo: u32) -> u32 {
        let id = self.cells.len() as u32;
        self.cells.push(RawCell {
            top,
            bottom,
            lo,
            hi: NONE,
            next_same_top: NONE,
            next_same_bottom: NONE,
        });
        let t = top as usize;
        if self.tail_below[t] == NONE {
            self.head_below[t] = id;
        } else {
            self.cells[self.tail_below[t] as usize].next_same_top = id;
        }
        self.tail_below[t] = id;
        let b = bottom as usize;
        if self.tail_above[b] == NONE {
            self.head_above[b] = id;
        } else {
            self.cells[self.tail_above[b] as usize].next_same_bottom = id;
        }
        self.tail_above[b] = id;
        id
    }

    /// Vertical decomposition: one cell per maximal run of an adjacent pair.
    fn sweep(&mut self) {
        let ground = self.ground();
        // (boundary, is_insert, level); removals first at a boundary
        let mut events: Vec<(u32, bool, u32)> = Vec::with_capacity(2 * self.segments.len());
        for (i, s) in self.segments.iter().enumerate() {
            let level = self.seg_level[i];
            events.push((s.x_lo + 1, true, level));
            events.push((s.x_hi + 2, false, level));
        }
        events.sort_unstable();

        let mut active: BTreeSet<u32> = [0, ground].into_iter().collect();
        let mut open_cell = vec![NONE; ground as usize + 1];
        open_cell[0] = self.open(0, ground, 0);

        let mut dirty: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < events.len() {
            let p = events[i].0;
            let j = i + events[i..].iter().take_while(|e| e.0 == p).count();
            dirty.clear();
            for &(_, insert, level) in &events[i..j] {
                dirty.push(*active.range(..level).next_back().unwrap());
                if !insert {
                    dirty.push(level);
                }
            }
            for &(_, insert, level) in &events[i..j] {
                if insert {
                    active.insert(level);
                } else {
                    active.remove(&level);
                }
            }
            for &(_, insert, level) in &events[i..j] {
                dirty.push(*active.range(..level).next_back().unwrap());
                if insert {
                    dirty.push(level);
                }
            }
            dirty.sort_unstable();
            dirty.dedup();
            for &u in &dirty {
                let succ = if active.contains(&u) {
                    active.range(u + 1..).next().copied()
                } else {
                    None
                };
                let oc = open_cell[u as usize];
                if oc != NONE && Some(self.cells[oc as usize].bottom) != succ {
                    self.cells[oc as usize].hi = p;
                    open_cell[u as usize] = NONE;
                }
                if let Some(below) = succ {
                    if open_cell[u as usize] == NONE {
                        open_cell[u as usize] = self.open(u, below, p);
                    }
                }
            }
            i = j;
        }

        let end = self.width + 1;
        for oc in open_cell {
            if oc != NONE {
                self.cells[oc as usize].hi = end;
            }
        }
        debug_assert_eq!(active.len(), 2);
    }

    /// Carries every second wall under each segment up through it, lowest
    /// segment first.
    fn comb(&mut self) {
        let mut walls: Vec<u32> = Vec::new();
        for level in (1..=self.segments.len() as u32).rev() {
            walls.clear();
            let mut c = self.head_below[level as usize];
            let mut index = 0usize;
            while c != NONE {
                let cell = self.cells[c as usize];
                // interior walls are the left sides of all but the first cell
                if index > 0 && index.is_multiple_of(2) {
                    walls.push(cell.lo);
                }
                index += 1;
                c = cell.next_same_top;
            }
            if walls.is_empty() {
                continue;
            }

            let mut cur = self.head_above[level as usize];
            for &p in &walls {
                while self.cells[cur as usize].hi <= p {
                    cur = self.cells[cur as usize].next_same_bottom;
                }
                let cell = self.cells[cur as usize];
                if cell.lo == p {
                    continue;
                }
                let id = self.cells.len() as u32;
                self.cells.push(RawCell {
                    top: cell.top,
                    bottom: cell.bottom,
                    lo: p,
                    hi: cell.hi,
                    next_same_top: cell.next_same_top,
                    next_same_bottom: cell.next_same_bottom,
                });
                let left = &mut self.cells[cur as usize];
                left.hi = p;
                left.next_same_top = id;
                left.next_same_bottom = id;
                cur = id;
            }
        }
    }

    fn public_x(&self, col: u32, is_hi: bool) -> i64 {
        if col == 0 {
            NEG_INF
        } else if is_hi && col == self.width + 1 {
            POS_INF
        } else {
            col as i64 - 1
        }
    }

    fn ceiling(&self, level: u32) -> Ceiling {
        if level == 0 {
            Ceiling::Sky
        } else {
            Ceiling::Segment(self.level_seg[level as usize])
        }
    }

    /// Produces the final cells with bottom edges and links, plus the sky
    /// cells from left to right.
    fn finish(self) -> (Vec<Cell>, Vec<BottomEdge>, Vec<CellId>) {
        let ground = self.ground();
        let mut cells: Vec<Cell> = self
            .cells
            .iter()
            .map(|c| Cell {
                x_lo: self.public_x(c.lo, false),
                x_hi: self.public_x(c.hi, true),
                top: self.ceiling(c.top),
                first_edge: 0,
                edge_count: 0,
            })
            .collect();
        let mut edges: Vec<BottomEdge> = Vec::with_capacity(2 * cells.len());

        for level in 1..=ground {
            let mut above = self.head_above[level as usize];
            let mut below = if level == ground {
                NONE
            } else {
                self.head_below[level as usize]
            };
            while above != NONE {
                let a = self.cells[above as usize];
                cells[above as usize].first_edge = edges.len() as u32;
                if level == ground {
                    edges.push(BottomEdge {
                        x_lo: self.public_x(a.lo, false),
                        x_hi: self.public_x(a.hi, true),
                        floor: Floor::Ground,
                        below: None,
                    });
                } else {
                    let floor = Floor::Segment(self.level_seg[level as usize]);
                    loop {
                        let b = self.cells[below as usize];
                        let lo = a.lo.max(b.lo);
                        let hi = a.hi.min(b.hi);
                        edges.push(BottomEdge {
                            x_lo: self.public_x(lo, false),
                            x_hi: self.public_x(hi, true),
                            floor,
                            below: Some(below),
                        });
                        if b.hi > a.hi {
                            break;
                        }
                        below = b.next_same_top;
                        if b.hi == a.hi {
                            break;
                        }
                    }
                }
                cells[above as usize].edge_count =
                    edges.len() as u32 - cells[above as usize].first_edge;
                above = a.next_same_bottom;
            }
        }

        let mut sky = Vec::new();
        let mut c = self.head_below[0];
        while c != NONE {
            sky.push(c);
            c = self.cells[c as usize].next_same_top;
        }
        (cells, edges, sky)
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

    fn example3() -> Vec<WeightedInterval> {
        intervals_from_triples([(1.0, 5.0, 10.0), (2.0, 6.0, 20.0), (4.0, 9.0, 5.0)])
    }

    #[test]
    fn empty_hive_is_one_cell() {
        let h = Hive::with_lookup_table(&[]);
        assert_eq!(h.cells().len(), 1);
        let c = h.cell(0);
        assert_eq!((c.x_lo, c.x_hi, c.top), (NEG_INF, POS_INF, Ceiling::Sky));
        assert_eq!(h.bottom_edges(0)[0].floor, Floor::Ground);
        assert_eq!(h.top_slabs().len(), 1);
        for x0 in [GridPoint::BeforeAll, GridPoint::AfterAll] {
            assert_eq!(h.locate_top(x0).0, 0);
            let (out, stats) = h.walk_down(0, x0, 3);
            assert!(out.is_empty());
            assert_eq!(stats.cells_visited, 1);
        }
        assert!(h.query(1.0, 4).0.is_empty());
    }

    #[test]
    fn single_segment_geometry() {
        let h = Hive::with_lookup_table(&intervals_from_triples([(0.0, 4.0, 1.0)]));
        // left outer, above, below, right outer
        assert_eq!(h.cells().len(), 4);
        assert_eq!(
            h.dump(),
            "cell 0 -inf 0 top=SKY bottom=(-inf..0,GROUND)\n\
             cell 1 0 3 top=SKY bottom=(0..3,0)\n\
             cell 2 0 3 top=0 bottom=(0..3,GROUND)\n\
             cell 3 3 +inf top=SKY bottom=(3..+inf,GROUND)\n"
        );
        // 2.0 lies in the gap between the endpoints, grid 1
        let above = h.locate_top(GridPoint::At(1)).0;
        assert_eq!(above, 1);
        assert_eq!(h.locate_top_table(0).unwrap().0, 1);
        assert_eq!(ids(&h.query(2.0, 1).0), [0]);
        assert_eq!(ids(&h.query(4.0, 1).0), [0]);
        assert!(h.query(4.5, 1).0.is_empty());
    }

    #[test]
    fn three_interval_example() {
        let h = Hive::build(&example3());
        assert_eq!(ids(&h.query(4.0, 2).0), [1, 0]);
        assert_eq!(ids(&h.query(4.0, 10).0), [1, 0, 2]);
        assert!(h.query(0.5, 3).0.is_empty());
        assert!(h.query(10.0, 3).0.is_empty());
    }

    #[test]
    fn table_requires_build_flag() {
        let h = Hive::build(&example3());
        assert!(matches!(h.locate_top_table(0), Err(HiveError::TableNotBuilt)));
        let t = Hive::with_lookup_table(&example3());
        assert!(matches!(t.locate_top_table(99), Err(HiveError::OutOfTable { .. })));
    }

    #[test]
    fn point_intervals_are_reportable() {
        let ivs = intervals_from_triples([(3.0, 3.0, 7.0), (1.0, 5.0, 2.0), (3.0, 3.0, 9.0)]);
        let h = Hive::build(&ivs);
        assert_eq!(ids(&h.query(3.0, 5).0), [2, 0, 1]);
        assert_eq!(ids(&h.query(3.1, 5).0), [1]);
    }

    #[test]
    fn nested_intervals_stack() {
        let n = 50;
        let ivs = intervals_from_triples((0..n).map(|i| (i as f64, (2 * n - i) as f64, i as f64)));
        let h = Hive::build(&ivs);
        let (out, stats) = h.query(n as f64, 5);
        assert_eq!(ids(&out), [49, 48, 47, 46, 45]);
        assert!(stats.cells_visited <= WALK_CAP * 6);
        assert!(h.max_degree() <= 2);
    }

    #[test]
    fn comb_bounds_degree_on_a_wide_segment() {
        // one heavy segment over many short light ones
        let mut triples = vec![(0.0, 1000.0, 100.0)];
        triples.extend((0..200).map(|i| (1.0 + 4.0 * i as f64, 3.0 + 4.0 * i as f64, 1.0)));
        let ivs = intervals_from_triples(triples);
        let h = Hive::build(&ivs);
        assert!(h.max_degree() <= 2, "degree {}", h.max_degree());
        assert!(h.cells().len() <= h.cell_bound());
        let (out, _) = h.query(2.0, 5);
        assert_eq!(ids(&out), [0, 1]);
    }

    #[test]
    fn vertical_order_matches_oracle_on_every_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in (0..=256).step_by(17) {
            let ivs = random_intervals(&mut rng, n, 3 * n as i32 + 2, 8);
            let h = Hive::build(&ivs);
            let rm = h.rank_map();
            for x in 0..rm.grid_width() {
                let mut want: Vec<_> = ivs
                    .iter()
                    .filter(|iv| rm.map_endpoint(iv.s) <= x && x <= rm.map_endpoint(iv.e))
                    .collect();
                want.sort_by_key(|iv| std::cmp::Reverse(iv.key()));
                let want: Vec<u32> = want.iter().map(|iv| iv.id).collect();
                assert_eq!(h.crossings(x), want, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn locate_agrees_with_linear_scan_and_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 10, 100, 300] {
            let ivs = random_intervals(&mut rng, n, 2 * n as i32, 4);
            let h = Hive::with_lookup_table(&ivs);
            let slabs = h.top_slabs();
            let bound = (slabs.len() as f64).log2().ceil() as usize + 1;
            for x in 0..h.rank_map().grid_width() {
                let xi = x as i64;
                let scan = slabs.iter().find(|s| s.x_lo <= xi && xi < s.x_hi).unwrap().cell;
                let (cell, stats) = h.locate_top(GridPoint::At(x));
                assert_eq!(cell, scan);
                assert!(stats.locate_comparisons <= bound);
                let (t, tstats) = h.locate_top_table(x).unwrap();
                assert_eq!(t, cell);
                assert_eq!(tstats.table_reads, 1);
            }
            assert_eq!(h.locate_top(GridPoint::BeforeAll).0, slabs[0].cell);
            assert_eq!(h.locate_top(GridPoint::AfterAll).0, slabs[slabs.len() - 1].cell);
        }
    }

    #[test]
    fn random_queries_match_oracle_and_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        for _ in 0..40 {
            let n = rng.gen_range(0..300);
            let ivs = random_intervals(&mut rng, n, n as i32 + 5, 10);
            let plain = Hive::build(&ivs);
            let table = Hive::with_lookup_table(&ivs);
            assert!(plain.cells().len() <= plain.cell_bound());
            assert!(plain.max_degree() <= DEGREE_CAP);
            for _ in 0..100 {
                let q = rng.gen_range(-4..2 * n as i32 + 14) as f64 / 2.0;
                let k = rng.gen_range(1..20);
                let want = topk_bruteforce(&ivs, q, k);
                for h in [&plain, &table] {
                    let (got, stats) = h.query(q, k);
                    assert_eq!(got, want, "q={q} k={k}");
                    assert!(stats.cells_visited <= WALK_CAP * (got.len() + 1));
                }
            }
        }
    }
}
