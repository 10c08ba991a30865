//! Candidate witness pairs for the fast evaluation algorithm.
//!
//! Two generators whose union always contains the dilation-realizing pair:
//! high-dilation witnesses are mutually near (k-nearest-neighbor pairs),
//! low-dilation witnesses sit at similar distances from the center
//! (rank-window pairs in the distance-sorted order).

use crate::error::Result;
use crate::eval::knn::all_knn;
use crate::eval::EvalConstants;
use crate::geometry::{distance, Point, PointSet};

/// Deduplicated unordered index pairs, stored as `(i, j)` with `i < j`
/// in lexicographic order.
#[derive(Debug, Clone, Default)]
pub struct CandidatePairList {
    pairs: Vec<(usize, usize)>,
}

impl CandidatePairList {
    fn from_encoded(mut enc: Vec<u64>) -> Self {
        enc.sort_unstable();
        enc.dedup();
        CandidatePairList {
            pairs: enc
                .into_iter()
                .map(|e| ((e >> 32) as usize, (e & 0xffff_ffff) as usize))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.pairs.binary_search(&key).is_ok()
    }

    /// Union of two candidate lists.
    pub fn union(&self, other: &CandidatePairList) -> CandidatePairList {
        let mut enc: Vec<u64> = self
            .pairs
            .iter()
            .chain(other.pairs.iter())
            .map(|&(i, j)| encode(i, j))
            .collect();
        enc.sort_unstable();
        enc.dedup();
        CandidatePairList::from_encoded(enc)
    }
}

#[inline]
fn encode(i: usize, j: usize) -> u64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    ((a as u64) << 32) | b as u64
}

/// Pairs of every point with each of its `knn_k` nearest neighbors.
/// Contains the witness whenever the dilation is at least the gamma
/// threshold and `knn_k` is large enough for the dimension.
pub fn candidates_high(set: &PointSet, consts: &EvalConstants) -> Result<CandidatePairList> {
    let n = set.len();
    if n < 2 {
        return Ok(CandidatePairList::default());
    }
    let neighbors = all_knn(set, consts.knn_k)?;
    let mut enc = Vec::with_capacity(n * consts.knn_k.min(n - 1));
    for (i, nbrs) in neighbors.iter().enumerate() {
        for &j in nbrs {
            enc.push(encode(i, j));
        }
    }
    Ok(CandidatePairList::from_encoded(enc))
}

/// Indices of `set` sorted by distance from `center` ascending,
/// ties by index.
pub fn distance_ranks(set: &PointSet, center: &Point) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = set
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| (distance(p, center), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order.into_iter().map(|(_, i)| i).collect()
}

/// Pairs of points within `rank_window_l` positions of each other in the
/// distance-sorted order about `center`. Contains the witness whenever the
/// dilation is at most the gamma threshold and the window is wide enough.
pub fn candidates_low(
    set: &PointSet,
    center: &Point,
    consts: &EvalConstants,
) -> Result<CandidatePairList> {
    let n = set.len();
    if n < 2 {
        return Ok(CandidatePairList::default());
    }
    let ranks = distance_ranks(set, center);
    let l = consts.rank_window_l;
    let mut enc = Vec::with_capacity(n * l);
    for s in 0..n {
        for t in s + 1..=(s + l).min(n - 1) {
            enc.push(encode(ranks[s], ranks[t]));
        }
    }
    Ok(CandidatePairList::from_encoded(enc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_brute, EvalConstants};
    use crate::geometry::Point;

    fn consts(k: usize, l: usize) -> EvalConstants {
        EvalConstants::custom(4.0, k, l).unwrap()
    }

    #[test]
    fn high_two_points_single_pair() {
        let set = PointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(3.0, 1.0)]).unwrap();
        let c = candidates_high(&set, &consts(4, 4)).unwrap();
        assert_eq!(c.pairs(), &[(0, 1)]);
    }

    #[test]
    fn high_square_edges_only() {
        let set = PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ])
        .unwrap();
        let c = candidates_high(&set, &consts(2, 1)).unwrap();
        assert_eq!(c.pairs(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn low_window_one_adjacent_radii() {
        let set = PointSet::new(vec![
            Point::xy(1.0, 0.0),
            Point::xy(2.0, 0.0),
            Point::xy(4.0, 0.0),
            Point::xy(8.0, 0.0),
        ])
        .unwrap();
        let c = candidates_low(&set, &Point::xy(0.0, 0.0), &consts(1, 1)).unwrap();
        assert_eq!(c.pairs(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn low_window_covers_all_for_tiny_sets() {
        let set = PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(0.5, 2.0),
            Point::xy(-1.0, 0.5),
        ])
        .unwrap();
        let c = candidates_low(&set, &Point::xy(0.2, 0.2), &consts(1, 2)).unwrap();
        assert_eq!(c.pairs(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn count_bound_holds() {
        let mut state = 0xa0761d6478bd642fu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let set = PointSet::new(
            (0..200).map(|_| Point::xy(next(), next())).collect(),
        )
        .unwrap();
        let cs = consts(8, 6);
        let c = candidates_high(&set, &cs)
            .unwrap()
            .union(&candidates_low(&set, &Point::xy(0.5, 0.5), &cs).unwrap());
        assert!(c.len() <= (cs.knn_k + 2 * cs.rank_window_l) * set.len());
    }

    #[test]
    fn witness_lands_in_the_right_generator() {
        let mut state = 0xe7037ed1a0b428dbu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for trial in 0..40 {
            let set = PointSet::new(
                (0..64).map(|_| Point::xy(next(), next())).collect(),
            )
            .unwrap();
            let cs = consts(16, 16);

            // Far-away center forces a high dilation; witness must be a
            // k-nearest-neighbor pair.
            let far = Point::xy(50.0 + next(), 50.0 + next());
            let rep = evaluate_brute(&set, &far).unwrap();
            let (i, j) = rep.witness.unwrap();
            assert!(rep.dilation > 4.0);
            let high = candidates_high(&set, &cs).unwrap();
            assert!(high.contains(i, j), "trial {trial}: witness ({i},{j}) missing");

            // Centroid keeps the dilation moderate on spread-out sets;
            // witness must be a rank-window pair.
            let spread = PointSet::new(
                (0..24)
                    .map(|q| {
                        let ang = q as f64 * 0.7 + next() * 0.1;
                        let rad = 1.0 + q as f64 * 0.5;
                        Point::xy(rad * ang.cos(), rad * ang.sin())
                    })
                    .collect(),
            )
            .unwrap();
            let c = spread.centroid();
            let rep = evaluate_brute(&spread, &c).unwrap();
            let (i, j) = rep.witness.unwrap();
            let low = candidates_low(&spread, &c, &cs).unwrap();
            assert!(low.contains(i, j), "trial {trial}: low witness missing");
        }
    }
}
