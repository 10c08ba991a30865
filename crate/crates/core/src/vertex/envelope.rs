//! Arc rings: the boundary of an ellipse intersection as angular arcs.
//!
//! Every ellipse is star-shaped about an interior reference point `r`, so
//! the intersection boundary is the pointwise minimum over ellipses of the
//! boundary distance from `r` as a function of angle (the lower radial
//! envelope). The envelope is built by divide and conquer: halve the
//! ellipse list, build each sub-envelope, and merge the two arc sequences
//! in one linear sweep, splitting arcs at the angles where the two current
//! ellipse boundaries cross. Two ellipse boundaries cross at most four
//! times, which bounds the alternation structure of the sequence (a
//! Davenport-Schinzel sequence of order four).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{conic_intersections, Conic, Ellipse, Point};
use crate::EPS_GEOM;

/// Angular arc endpoints closer than this are merged.
const EPS_ANGLE: f64 = 1e-12;

const TAU: f64 = std::f64::consts::TAU;

/// One arc of the envelope: the ellipse forming the boundary over
/// `[theta_lo, theta_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub ellipse_id: usize,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

/// The intersection region of a set of ellipses about an interior
/// reference point: an ordered arc sequence tiling `[0, 2pi]` exactly.
#[derive(Debug, Clone)]
pub struct ArcRing {
    ref_point: Point,
    arcs: Vec<Arc>,
    ellipses: Vec<Ellipse>,
    conics: Vec<Conic>,
}

impl ArcRing {
    pub fn ref_point(&self) -> &Point {
        &self.ref_point
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn ellipses(&self) -> &[Ellipse] {
        &self.ellipses
    }

    /// Envelope radius at `theta`: the distance from the reference point
    /// to the intersection boundary in that direction.
    pub fn envelope_radius(&self, theta: f64) -> f64 {
        let theta = normalize_angle(theta);
        let arc = self.arc_at(theta);
        self.conics[arc.ellipse_id]
            .ray_exit(self.ref_point.x(), self.ref_point.y(), theta)
            .expect("reference point validated interior at construction")
    }

    fn arc_at(&self, theta: f64) -> &Arc {
        // First arc whose upper angle reaches theta; the arcs tile [0, 2pi].
        let i = self.arcs.partition_point(|a| a.theta_hi < theta);
        &self.arcs[i.min(self.arcs.len() - 1)]
    }

    /// Membership query by binary search on the angle of `p` about the
    /// reference point.
    ///
    /// The boundary band is kept: points within the relative geometric
    /// tolerance of the envelope count as inside, so pruning with this
    /// predicate never discards a boundary-tied candidate.
    pub fn contains(&self, p: &Point) -> bool {
        let (dx, dy) = (p.x() - self.ref_point.x(), p.y() - self.ref_point.y());
        let dist = (dx * dx + dy * dy).sqrt();
        if dist == 0.0 {
            return true;
        }
        let theta = normalize_angle(dy.atan2(dx));
        let radius = {
            let arc = self.arc_at(theta);
            self.conics[arc.ellipse_id]
                .ray_exit(self.ref_point.x(), self.ref_point.y(), theta)
                .expect("reference point validated interior at construction")
        };
        dist <= radius + EPS_GEOM * radius.max(1.0)
    }
}

fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    t
}

/// Builds the arc ring of the intersection of `ellipses` about `r`.
///
/// `r` must be strictly inside every ellipse. Ellipses that provably
/// cannot touch the envelope (their nearest boundary lies beyond another
/// ellipse's farthest) are dropped before the merge; the envelope is
/// unchanged by construction.
pub fn build_arc_ring(ellipses: Vec<Ellipse>, r: &Point) -> Result<ArcRing> {
    if ellipses.is_empty() {
        return Err(Error::InvalidInput("no ellipses".into()));
    }
    if r.dim() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: r.dim() });
    }
    let conics: Vec<Conic> = ellipses
        .iter()
        .map(Conic::from_ellipse)
        .collect::<Result<_>>()?;
    // Interiority check doubles as validation for ray_exit.
    for c in &conics {
        c.ray_exit(r.x(), r.y(), 0.0)?;
    }

    // Radial bounds: boundary distance from r lies in [low, up] where
    // low = (sum_bound - focal sums at r)/2 and up = semi-major + |r - center|.
    let mut ups = Vec::with_capacity(ellipses.len());
    let mut lows = Vec::with_capacity(ellipses.len());
    for e in &ellipses {
        lows.push(0.5 * (e.sum_bound() - e.distance_sum(r)));
        ups.push(e.semi_major() + crate::geometry::distance(r, &e.center()));
    }
    let cap = ups.iter().fold(f64::INFINITY, |m, &u| m.min(u));
    let survivors: Vec<usize> = (0..ellipses.len())
        .filter(|&i| lows[i] <= cap * (1.0 + 1e-12))
        .collect();
    debug_assert!(!survivors.is_empty());

    let mut builder = Builder {
        r: (r.x(), r.y()),
        conics: &conics,
        crossings: HashMap::new(),
    };
    let arcs = builder.build(&survivors)?;
    Ok(ArcRing { ref_point: r.clone(), arcs, ellipses, conics })
}

struct Builder<'a> {
    r: (f64, f64),
    conics: &'a [Conic],
    crossings: HashMap<(usize, usize), Vec<f64>>,
}

impl Builder<'_> {
    fn build(&mut self, ids: &[usize]) -> Result<Vec<Arc>> {
        if ids.len() == 1 {
            return Ok(vec![Arc { ellipse_id: ids[0], theta_lo: 0.0, theta_hi: TAU }]);
        }
        let (left, right) = ids.split_at(ids.len() / 2);
        let a = self.build(left)?;
        let b = self.build(right)?;
        self.merge(&a, &b)
    }

    fn radial(&self, id: usize, theta: f64) -> f64 {
        self.conics[id]
            .ray_exit(self.r.0, self.r.1, theta)
            .expect("interiority validated before the merge")
    }

    /// Angles (about r) where the boundaries of two ellipses cross.
    fn crossing_angles(&mut self, i: usize, j: usize) -> &[f64] {
        let key = (i.min(j), i.max(j));
        if !self.crossings.contains_key(&key) {
            let pts = conic_intersections(&self.conics[key.0], &self.conics[key.1])
                .unwrap_or_default();
            let mut angles: Vec<f64> = pts
                .iter()
                .map(|p| normalize_angle((p.y() - self.r.1).atan2(p.x() - self.r.0)))
                .collect();
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|a, b| (*a - *b).abs() <= EPS_ANGLE);
            self.crossings.insert(key, angles);
        }
        &self.crossings[&key]
    }

    /// Linear sweep merging two arc sequences into the pointwise minimum.
    fn merge(&mut self, a: &[Arc], b: &[Arc]) -> Result<Vec<Arc>> {
        let mut out: Vec<Arc> = Vec::with_capacity(a.len() + b.len());
        let (mut ia, mut ib) = (0usize, 0usize);
        let mut phi = 0.0f64;
        while phi < TAU && ia < a.len() && ib < b.len() {
            let (ea, eb) = (a[ia].ellipse_id, b[ib].ellipse_id);
            let end = a[ia].theta_hi.min(b[ib].theta_hi);
            if end > phi + EPS_ANGLE {
                if ea == eb {
                    push_arc(&mut out, ea, phi, end);
                } else {
                    // Split the overlap at the crossing angles inside it.
                    let mut cuts: Vec<f64> = self
                        .crossing_angles(ea, eb)
                        .iter()
                        .copied()
                        .filter(|&t| t > phi + EPS_ANGLE && t < end - EPS_ANGLE)
                        .collect();
                    cuts.push(end);
                    let mut lo = phi;
                    for hi in cuts {
                        let mid = 0.5 * (lo + hi);
                        let (ra, rb) = (self.radial(ea, mid), self.radial(eb, mid));
                        let winner = if ra < rb || (ra == rb && ea < eb) { ea } else { eb };
                        push_arc(&mut out, winner, lo, hi);
                        lo = hi;
                    }
                }
            }
            phi = end;
            if a[ia].theta_hi <= end + EPS_ANGLE {
                ia += 1;
            }
            if b[ib].theta_hi <= end + EPS_ANGLE {
                ib += 1;
            }
        }
        // Exact tiling: pin the endpoints.
        if let Some(first) = out.first_mut() {
            first.theta_lo = 0.0;
        }
        if let Some(last) = out.last_mut() {
            last.theta_hi = TAU;
        }
        debug_assert!(tiles_exactly(&out));
        Ok(out)
    }
}

fn push_arc(out: &mut Vec<Arc>, id: usize, lo: f64, hi: f64) {
    if hi <= lo + EPS_ANGLE {
        // Degenerate sliver: extend the previous arc instead.
        if let Some(prev) = out.last_mut() {
            prev.theta_hi = hi.max(prev.theta_hi);
        }
        return;
    }
    if let Some(prev) = out.last_mut() {
        if prev.ellipse_id == id {
            prev.theta_hi = hi;
            return;
        }
        prev.theta_hi = lo;
    }
    out.push(Arc { ellipse_id: id, theta_lo: lo, theta_hi: hi });
}

fn tiles_exactly(arcs: &[Arc]) -> bool {
    if arcs.is_empty() {
        return false;
    }
    if arcs[0].theta_lo != 0.0 || arcs[arcs.len() - 1].theta_hi != TAU {
        return false;
    }
    arcs.windows(2).all(|w| w[0].theta_hi == w[1].theta_lo)
        && arcs.iter().all(|a| a.theta_lo < a.theta_hi)
}
