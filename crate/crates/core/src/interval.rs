use std::cmp::Ordering;

/// Dense identifier of an interval within one dataset (`0..n`).
pub type IntervalId = u32;

/// A closed interval `[s, e]` carrying a real weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedInterval {
    pub id: IntervalId,
    pub s: f64,
    pub e: f64,
    pub w: f64,
}

impl WeightedInterval {
    /// Panics if any coordinate is NaN or if `s > e`.
    pub fn new(id: IntervalId, s: f64, e: f64, w: f64) -> Self {
        assert!(
            !s.is_nan() && !e.is_nan() && !w.is_nan(),
            "interval {id} has a NaN coordinate"
        );
        assert!(s <= e, "interval {id} has s = {s} > e = {e}");
        WeightedInterval { id, s, e, w }
    }

    /// `s <= q <= e`.
    #[inline]
    pub fn stabbed_by(&self, q: f64) -> bool {
        self.s <= q && q <= self.e
    }

    #[inline]
    pub fn key(&self) -> WeightKey {
        WeightKey::new(self.w, self.id)
    }
}

/// Builds intervals from `(s, e, w)` triples, assigning ids by position.
pub fn intervals_from_triples<I>(triples: I) -> Vec<WeightedInterval>
where
    I: IntoIterator<Item = (f64, f64, f64)>,
{
    triples
        .into_iter()
        .enumerate()
        .map(|(i, (s, e, w))| WeightedInterval::new(i as IntervalId, s, e, w))
        .collect()
}

/// Ordering key for reporting: heavier first, ties go to the smaller id.
///
/// `a > b` iff `a.w > b.w`, or the weights are equal and `a.id < b.id`.
/// Within one dataset no two intervals compare equal, so this is the
/// vertical order of the corresponding horizontal segments.
#[derive(Clone, Copy, Debug)]
pub struct WeightKey {
    pub w: f64,
    pub id: IntervalId,
}

impl WeightKey {
    #[inline]
    pub fn new(w: f64, id: IntervalId) -> Self {
        debug_assert!(!w.is_nan());
        WeightKey { w, id }
    }
}

impl PartialEq for WeightKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for WeightKey {}

impl PartialOrd for WeightKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeightKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // NaN weights are rejected at construction.
        self.w
            .partial_cmp(&other.w)
            .expect("NaN weight")
            .then_with(|| other.id.cmp(&self.id))
    }
}
