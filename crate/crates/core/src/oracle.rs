//! Brute-force top-k stabbing, used as ground truth by tests and `verify`.

use std::cmp::Reverse;

use crate::interval::WeightedInterval;

/// Filters the stabbed intervals, sorts them heaviest first and keeps `k`.
pub fn topk_bruteforce(intervals: &[WeightedInterval], q: f64, k: usize) -> Vec<WeightedInterval> {
    let mut hits: Vec<WeightedInterval> =
        intervals.iter().filter(|iv| iv.stabbed_by(q)).copied().collect();
    hits.sort_by_key(|iv| Reverse(iv.key()));
    hits.truncate(k);
    hits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::intervals_from_triples;
    use proptest::prelude::*;

    fn ids(v: &[WeightedInterval]) -> Vec<u32> {
        v.iter().map(|iv| iv.id).collect()
    }

    #[test]
    fn hand_examples() {
        let ivs = intervals_from_triples([(1.0, 5.0, 10.0), (2.0, 6.0, 20.0), (4.0, 9.0, 5.0)]);
        assert_eq!(ids(&topk_bruteforce(&ivs, 4.0, 2)), [1, 0]);
        assert!(topk_bruteforce(&ivs, 10.0, 3).is_empty());
        assert_eq!(ids(&topk_bruteforce(&ivs, 4.0, 10)), [1, 0, 2]);

        let tied = intervals_from_triples([(1.0, 3.0, 5.0), (2.0, 4.0, 5.0)]);
        assert_eq!(ids(&topk_bruteforce(&tied, 2.5, 1)), [0]);
    }

    proptest! {
        #[test]
        fn output_contract(
            raw in prop::collection::vec((0i32..30, 0i32..10, 0i32..4), 0..30),
            q in -2i32..45,
            k in 1usize..12,
        ) {
            let ivs = intervals_from_triples(
                raw.into_iter().map(|(s, len, w)| (s as f64, (s + len) as f64, w as f64)),
            );
            let q = q as f64;
            let out = topk_bruteforce(&ivs, q, k);
            let stabbed = ivs.iter().filter(|iv| iv.stabbed_by(q)).count();
            prop_assert_eq!(out.len(), k.min(stabbed));
            for pair in out.windows(2) {
                prop_assert!(pair[0].key() > pair[1].key());
            }
            for iv in &out {
                prop_assert!(iv.stabbed_by(q));
            }
            if out.len() == k {
                let last = out[k - 1].key();
                for iv in ivs.iter().filter(|iv| iv.stabbed_by(q)) {
                    if !out.iter().any(|o| o.id == iv.id) {
                        prop_assert!(iv.key() < last);
                    }
                }
            }
        }
    }
}
