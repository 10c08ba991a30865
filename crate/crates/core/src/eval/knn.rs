//! Exact all-points k-nearest-neighbors with a kd-tree.
//!
//! Distance ties are broken by the smaller original index, so batch results
//! are fully deterministic. Pruning compares squared axis offsets against
//! the current k-th best squared distance; a subtree is skipped only when
//! every point in it is strictly worse, which keeps the search exact.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

const LEAF_SIZE: usize = 16;

#[derive(Debug)]
enum Node {
    Split { axis: usize, value: f64, right: usize },
    Leaf { start: usize, len: usize },
}

/// Flat kd-tree over a point set; points are copied into contiguous
/// storage in tree order.
pub struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    orig: Vec<u32>,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    d2: f64,
    idx: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2
            .total_cmp(&other.d2)
            .then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl KdTree {
    pub fn build(set: &PointSet) -> Self {
        let n = set.len();
        let dim = set.dim();
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut tree = KdTree {
            dim,
            coords: Vec::with_capacity(n * dim),
            orig: Vec::with_capacity(n),
            nodes: Vec::new(),
        };
        if n > 0 {
            tree.build_node(set, &mut order);
        }
        tree
    }

    fn build_node(&mut self, set: &PointSet, order: &mut [u32]) -> usize {
        let pos = self.nodes.len();
        if order.len() <= LEAF_SIZE {
            let start = self.orig.len();
            for &i in order.iter() {
                self.orig.push(i);
                self.coords.extend_from_slice(set.point(i as usize).coords());
            }
            self.nodes.push(Node::Leaf { start, len: order.len() });
            return pos;
        }
        // Split on the widest axis at the median point.
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for &i in order.iter() {
            for (a, &c) in set.point(i as usize).coords().iter().enumerate() {
                lo[a] = lo[a].min(c);
                hi[a] = hi[a].max(c);
            }
        }
        let axis = (0..self.dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap();
        let mid = order.len() / 2;
        order.select_nth_unstable_by(mid, |&a, &b| {
            set.point(a as usize).coords()[axis]
                .total_cmp(&set.point(b as usize).coords()[axis])
                .then(a.cmp(&b))
        });
        let value = set.point(order[mid] as usize).coords()[axis];
        self.nodes.push(Node::Split { axis, value, right: usize::MAX });
        let (left, right) = order.split_at_mut(mid);
        let left_child = self.build_node(set, left);
        debug_assert_eq!(left_child, pos + 1);
        let right_child = self.build_node(set, right);
        match &mut self.nodes[pos] {
            Node::Split { right, .. } => *right = right_child,
            Node::Leaf { .. } => unreachable!(),
        }
        pos
    }

    /// The `k` nearest neighbors of `query`, excluding `skip` itself,
    /// ordered by (distance, index) ascending.
    pub fn knn(&self, query: &[f64], k: usize, skip: Option<u32>) -> Vec<u32> {
        if k == 0 || self.orig.is_empty() {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        let mut off = vec![0.0; self.dim];
        self.search(0, query, skip, k, &mut heap, &mut off, 0.0);
        let mut out = heap.into_sorted_vec();
        out.truncate(k);
        out.into_iter().map(|c| c.idx).collect()
    }

    fn search(
        &self,
        node: usize,
        query: &[f64],
        skip: Option<u32>,
        k: usize,
        heap: &mut BinaryHeap<Candidate>,
        off: &mut [f64],
        rd: f64,
    ) {
        match &self.nodes[node] {
            Node::Leaf { start, len } => {
                for i in *start..*start + *len {
                    let idx = self.orig[i];
                    if skip == Some(idx) {
                        continue;
                    }
                    let base = i * self.dim;
                    let mut d2 = 0.0;
                    for (a, &q) in query.iter().enumerate() {
                        let d = self.coords[base + a] - q;
                        d2 += d * d;
                    }
                    let cand = Candidate { d2, idx };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().unwrap() {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split { axis, value, right } => {
                let delta = query[*axis] - value;
                let (near, far) = if delta < 0.0 {
                    (node + 1, *right)
                } else {
                    (*right, node + 1)
                };
                self.search(near, query, skip, k, heap, off, rd);
                let old = off[*axis];
                let new_rd = rd - old * old + delta * delta;
                // Equality must recurse: an equally distant point with a
                // smaller index can still displace the current worst.
                if heap.len() < k || new_rd <= heap.peek().unwrap().d2 {
                    off[*axis] = delta;
                    self.search(far, query, skip, k, heap, off, new_rd);
                    off[*axis] = old;
                }
            }
        }
    }
}

/// For each point of `set`, the indices of its `k` exactly-nearest
/// neighbors (ties by smaller index). `k` is clamped to `n - 1`.
pub fn all_knn(set: &PointSet, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = set.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if k < 1 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let k = k.min(n - 1);
    if k == 0 {
        return Ok(vec![Vec::new(); n]);
    }
    let tree = KdTree::build(set);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let nbrs = tree.knn(set.point(i).coords(), k, Some(i as u32));
        out.push(nbrs.into_iter().map(|v| v as usize).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distance, Point, PointSet};

    fn brute_knn(set: &PointSet, i: usize, k: usize) -> Vec<usize> {
        let mut all: Vec<(f64, usize)> = (0..set.len())
            .filter(|&j| j != i)
            .map(|j| (distance(set.point(i), set.point(j)), j))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all.into_iter().take(k).map(|(_, j)| j).collect()
    }

    #[test]
    fn collinear_tie_breaks_to_smaller_index() {
        let set = PointSet::new(
            (0..4).map(|i| Point::xy(i as f64, 0.0)).collect(),
        )
        .unwrap();
        let nn = all_knn(&set, 1).unwrap();
        assert_eq!(nn, vec![vec![1], vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn square_corners_two_neighbors() {
        let set = PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ])
        .unwrap();
        let nn = all_knn(&set, 2).unwrap();
        assert_eq!(nn[0], vec![1, 3]);
        assert_eq!(nn[1], vec![0, 2]);
        assert_eq!(nn[2], vec![1, 3]);
        assert_eq!(nn[3], vec![0, 2]);
    }

    #[test]
    fn k_clamped_to_n_minus_1() {
        let set = PointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)]).unwrap();
        let nn = all_knn(&set, 10).unwrap();
        assert_eq!(nn, vec![vec![1], vec![0]]);
    }

    #[test]
    fn random_matches_brute_force() {
        let mut state = 0x6a09e667f3bcc909u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for dim in [2usize, 3] {
            let pts: Vec<Point> = (0..256)
                .map(|_| Point::new((0..dim).map(|_| next()).collect()).unwrap())
                .collect();
            let set = PointSet::new(pts).unwrap();
            let nn = all_knn(&set, 8).unwrap();
            for i in 0..set.len() {
                assert_eq!(nn[i], brute_knn(&set, i, 8), "point {i} dim {dim}");
            }
        }
    }

    #[test]
    fn grid_with_many_ties_matches_brute_force() {
        let mut pts = Vec::new();
        for x in 0..8 {
            for y in 0..8 {
                pts.push(Point::xy(x as f64, y as f64));
            }
        }
        let set = PointSet::new(pts).unwrap();
        let nn = all_knn(&set, 5).unwrap();
        for i in 0..set.len() {
            assert_eq!(nn[i], brute_knn(&set, i, 5), "point {i}");
        }
    }
}
