//! Ellipses as level sets of the pair-dilation constraint.
//!
//! For a leaf pair `(v_i, v_j)` the function
//! `f(x) = (|v_i x| + |x v_j|) / |v_i v_j|` has elliptical level sets: the
//! set `f <= lambda` is exactly the ellipsoid with foci `v_i`, `v_j` and
//! constant distance-sum `lambda * |v_i v_j|`.

use super::{distance, Point};
use crate::error::{Error, Result};

/// The level set `{x : (|ax| + |xb|)/|ab| <= lambda}` of one pair constraint.
#[derive(Debug, Clone)]
pub struct Ellipse {
    focus_a: Point,
    focus_b: Point,
    /// Constant distance-sum `lambda * |ab|`.
    sum_bound: f64,
    /// The dilation level `lambda >= 1`.
    dilation_level: f64,
}

/// Builds the dilation level set for the pair `(v_i, v_j)` at level `lambda`.
pub fn ellipse_from_pair(v_i: &Point, v_j: &Point, lambda: f64) -> Result<Ellipse> {
    if v_i.dim() != v_j.dim() {
        return Err(Error::DimensionMismatch(v_i.dim(), v_j.dim()));
    }
    let focal_dist = distance(v_i, v_j);
    if focal_dist == 0.0 {
        return Err(Error::CoincidentFoci);
    }
    if !(lambda >= 1.0) {
        return Err(Error::EmptyLevelSet(lambda));
    }
    Ok(Ellipse {
        focus_a: v_i.clone(),
        focus_b: v_j.clone(),
        sum_bound: lambda * focal_dist,
        dilation_level: lambda,
    })
}

impl Ellipse {
    pub fn focus_a(&self) -> &Point {
        &self.focus_a
    }

    pub fn focus_b(&self) -> &Point {
        &self.focus_b
    }

    pub fn sum_bound(&self) -> f64 {
        self.sum_bound
    }

    pub fn dilation_level(&self) -> f64 {
        self.dilation_level
    }

    /// Distance between the foci.
    pub fn focal_distance(&self) -> f64 {
        distance(&self.focus_a, &self.focus_b)
    }

    /// Midpoint of the foci.
    pub fn center(&self) -> Point {
        let coords = self
            .focus_a
            .coords()
            .iter()
            .zip(self.focus_b.coords())
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        Point::new(coords).expect("finite center")
    }

    pub fn semi_major(&self) -> f64 {
        0.5 * self.sum_bound
    }

    /// `(|ab|/2) * sqrt(lambda^2 - 1)`; zero for the degenerate segment at
    /// `lambda = 1`.
    pub fn semi_minor(&self) -> f64 {
        let half_ab = 0.5 * self.focal_distance();
        let l2 = self.dilation_level * self.dilation_level - 1.0;
        half_ab * l2.max(0.0).sqrt()
    }

    /// Sum of distances from `p` to the two foci.
    pub fn distance_sum(&self, p: &Point) -> f64 {
        distance(p, &self.focus_a) + distance(p, &self.focus_b)
    }

    /// Inclusive containment: `|pa| + |pb| <= sum_bound`.
    pub fn contains(&self, p: &Point) -> bool {
        self.distance_sum(p) <= self.sum_bound
    }

    /// Containment with a relative boundary tolerance (positive widens).
    pub fn contains_with_tol(&self, p: &Point, rel_tol: f64) -> bool {
        self.distance_sum(p) <= self.sum_bound * (1.0 + rel_tol)
    }

    /// Distance along the ray `r + t*(cos theta, sin theta)` from a strictly
    /// interior `r` to the ellipse boundary (2-D only).
    ///
    /// Well-defined and single-valued: the boundary is convex and `r` is
    /// inside, so the forward ray crosses it exactly once.
    pub fn radial_distance(&self, r: &Point, theta: f64) -> Result<f64> {
        if self.focus_a.dim() != 2 {
            return Err(Error::UnsupportedDimension { expected: 2, got: self.focus_a.dim() });
        }
        if r.dim() != 2 {
            return Err(Error::DimensionMismatch(2, r.dim()));
        }
        let conic = super::Conic::from_ellipse(self)?;
        conic.ray_exit(r.x(), r.y(), theta)
    }
}
