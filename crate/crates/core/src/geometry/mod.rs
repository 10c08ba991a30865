//! Geometric primitives: points, distances, pair dilation, ellipses, conics.

mod conic;
mod ellipse;
pub(crate) mod roots;

pub use conic::{conic_intersections, ellipse_to_conic, Conic};
pub use ellipse::{ellipse_from_pair, Ellipse};

use crate::error::{Error, Result};

/// An immutable point in `R^d`, `d >= 2`, with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Point { coords })
    }

    /// Shorthand for a 2-D point.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(vec![x, y]).expect("finite 2-D point")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }
}

/// Euclidean distance between two points of the same dimension.
pub fn distance(a: &Point, b: &Point) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    dist_slices(&a.coords, &b.coords)
}

pub(crate) fn dist_slices(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += d * d;
    }
    s.sqrt()
}

/// Checked variant of [`distance`] that rejects mismatched dimensions.
pub fn try_distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(distance(a, b))
}

/// Dilation between leaves `a` and `b` through center `c`:
/// `(|ac| + |cb|) / |ab|`. At least 1 by the triangle inequality,
/// exactly 1 iff `c` lies on the segment `ab`.
///
/// `a` and `b` must be strictly distinct; the quantity is undefined
/// otherwise.
pub fn pair_dilation(a: &Point, b: &Point, c: &Point) -> Result<f64> {
    if a.dim() != b.dim() || a.dim() != c.dim() {
        return Err(Error::DimensionMismatch(a.dim(), c.dim()));
    }
    let ab = distance(a, b);
    if ab == 0.0 {
        return Err(Error::UndefinedDilation);
    }
    Ok((distance(a, c) + distance(c, b)) / ab)
}

/// Unchecked hot-path form of [`pair_dilation`] over raw coordinate slices.
///
/// Callers guarantee distinct endpoints and equal dimensions. The arithmetic
/// (left distance + right distance, then divide) is fixed so that every code
/// path scoring the same ordered pair produces bit-identical values.
#[inline]
pub(crate) fn pair_dilation_raw(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    (dist_slices(a, c) + dist_slices(c, b)) / dist_slices(a, b)
}

/// An ordered list of pairwise-distinct points sharing one dimension:
/// the leaf set of a star.
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<Point>,
    dim: usize,
}

impl PointSet {
    /// Builds a set from at least one point, validating shared dimension
    /// and exact pairwise distinctness.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.dim(),
            None => return Err(Error::TooFewPoints { need: 1, got: 0 }),
        };
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
        }
        // Exact duplicate detection on coordinate bit patterns.
        let mut keys: Vec<(Vec<u64>, usize)> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.coords.iter().map(|c| c.to_bits()).collect(), i))
            .collect();
        keys.sort();
        for w in keys.windows(2) {
            if w[0].0 == w[1].0 {
                let (i, j) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                return Err(Error::CoincidentPoints(i, j));
            }
        }
        Ok(PointSet { points, dim })
    }

    /// An empty set with an explicit dimension.
    pub fn empty(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        Ok(PointSet { points: Vec::new(), dim })
    }

    /// Internal constructor for subsets of an already-validated set.
    pub(crate) fn from_validated(points: Vec<Point>, dim: usize) -> Self {
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        PointSet { points, dim }
    }

    /// The subset at the given indices, preserving order.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        PointSet::from_validated(points, self.dim)
    }

    /// All points except the one at `skip`.
    pub fn without(&self, skip: usize) -> PointSet {
        let points = self
            .points
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, p)| p.clone())
            .collect();
        PointSet::from_validated(points, self.dim)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Coordinate-wise mean of the set. Panics on an empty set.
    pub fn centroid(&self) -> Point {
        assert!(!self.points.is_empty(), "centroid of an empty set");
        let mut acc = vec![0.0; self.dim];
        for p in &self.points {
            for (a, c) in acc.iter_mut().zip(p.coords()) {
                *a += c;
            }
        }
        let n = self.points.len() as f64;
        for a in acc.iter_mut() {
            *a /= n;
        }
        Point::new(acc).expect("finite centroid")
    }
}
