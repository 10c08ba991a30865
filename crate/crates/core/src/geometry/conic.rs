//! Implicit conics (2-D) and conic-conic intersection.
//!
//! An [`Ellipse`] converts to the implicit quadratic
//! `A x^2 + B xy + C y^2 + D x + E y + F = 0`, negative inside. Two ellipse
//! boundaries cross in at most four points; intersections are found by
//! eliminating `y` with the quadratic resultant (a quartic in `x`), finding
//! its real roots, and polishing each candidate with a damped 2-D Newton
//! iteration on the pair of implicit equations.

use super::roots::{quadratic_real_roots, real_roots_upto4};
use super::{Ellipse, Point};
use crate::error::{Error, Result};
use crate::{EPS_GEOM, EPS_ROOT};

/// Coefficients of `A x^2 + B xy + C y^2 + D x + E y + F = 0`,
/// normalized to unit max-magnitude with the quadratic part positive
/// where it came from an ellipse.
#[derive(Debug, Clone, Copy)]
pub struct Conic {
    c: [f64; 6],
}

impl Conic {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        let all = [a, b, c, d, e, f];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        let max = all.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if [a, b, c].iter().all(|v| v.abs() <= 1e-300) || max == 0.0 {
            return Err(Error::InvalidInput(
                "conic quadratic part is identically zero".into(),
            ));
        }
        Ok(Conic { c: all.map(|v| v / max) })
    }

    /// Implicit form of an ellipse boundary (2-D only), negative inside.
    pub fn from_ellipse(e: &Ellipse) -> Result<Self> {
        if e.focus_a().dim() != 2 {
            return Err(Error::UnsupportedDimension { expected: 2, got: e.focus_a().dim() });
        }
        let m = e.center();
        let (mx, my) = (m.x(), m.y());
        let fd = e.focal_distance();
        let (ux, uy) = (
            (e.focus_b().x() - e.focus_a().x()) / fd,
            (e.focus_b().y() - e.focus_a().y()) / fd,
        );
        let a2 = e.semi_major() * e.semi_major();
        let b2 = e.semi_minor() * e.semi_minor();
        // b^2 x'^2 + a^2 y'^2 - a^2 b^2 in the frame (u, u_perp) about m.
        let ca = b2 * ux * ux + a2 * uy * uy;
        let cb = 2.0 * ux * uy * (b2 - a2);
        let cc = b2 * uy * uy + a2 * ux * ux;
        let cd = -2.0 * ca * mx - cb * my;
        let ce = -cb * mx - 2.0 * cc * my;
        let cf = ca * mx * mx + cb * mx * my + cc * my * my - a2 * b2;
        Conic::new(ca, cb, cc, cd, ce, cf)
    }

    pub fn coefficients(&self) -> [f64; 6] {
        self.c
    }

    /// Value of the implicit quadratic at `(x, y)`.
    pub fn eval_xy(&self, x: f64, y: f64) -> f64 {
        let [a, b, c, d, e, f] = self.c;
        a * x * x + b * x * y + c * y * y + d * x + e * y + f
    }

    pub fn eval(&self, p: &Point) -> f64 {
        self.eval_xy(p.x(), p.y())
    }

    /// Sum of absolute term magnitudes at `(x, y)`; the natural scale for
    /// judging residuals of [`Conic::eval_xy`].
    pub fn scale_at(&self, x: f64, y: f64) -> f64 {
        let [a, b, c, d, e, f] = self.c;
        let s = (a * x * x).abs()
            + (b * x * y).abs()
            + (c * y * y).abs()
            + (d * x).abs()
            + (e * y).abs()
            + f.abs();
        s.max(f64::MIN_POSITIVE)
    }

    fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d, e, _] = self.c;
        (2.0 * a * x + b * y + d, b * x + 2.0 * c * y + e)
    }

    /// Coefficients as a quadratic in `y`: `c2 y^2 + c1(x) y + c0(x)`.
    fn as_poly_in_y(&self, x: f64) -> (f64, f64, f64) {
        let [a, b, c, d, e, f] = self.c;
        (c, b * x + e, a * x * x + d * x + f)
    }

    /// Distance along the ray `r + t (cos theta, sin theta)` to the conic
    /// boundary, for a bounded conic (positive-definite quadratic part)
    /// evaluated strictly negative at `r`.
    pub(crate) fn ray_exit(&self, rx: f64, ry: f64, theta: f64) -> Result<f64> {
        let (ux, uy) = (theta.cos(), theta.sin());
        let [a, b, c, d, e, _f] = self.c;
        let alpha = a * ux * ux + b * ux * uy + c * uy * uy;
        let beta =
            2.0 * a * rx * ux + b * (rx * uy + ry * ux) + 2.0 * c * ry * uy + d * ux + e * uy;
        let gamma = self.eval_xy(rx, ry);
        if gamma >= -EPS_GEOM * self.scale_at(rx, ry) || alpha <= 0.0 {
            return Err(Error::NotInterior);
        }
        let disc = (beta * beta - 4.0 * alpha * gamma).max(0.0).sqrt();
        Ok(if beta <= 0.0 {
            (disc - beta) / (2.0 * alpha)
        } else {
            -2.0 * gamma / (beta + disc)
        })
    }

    /// Swaps the roles of x and y.
    fn transposed(&self) -> Conic {
        let [a, b, c, d, e, f] = self.c;
        Conic { c: [c, b, a, e, d, f] }
    }
}

/// Converts an ellipse level set to its implicit conic (2-D only).
pub fn ellipse_to_conic(e: &Ellipse) -> Result<Conic> {
    Conic::from_ellipse(e)
}

/// All real intersection points of two conic boundaries, at most four,
/// with multiplicities collapsed to distinct points.
///
/// Near-identical conics are rejected as [`Error::DegenerateConicPair`];
/// their "intersection" is an entire shared component, not a point set.
pub fn conic_intersections(c1: &Conic, c2: &Conic) -> Result<Vec<Point>> {
    // Same zero set (up to sign) means the resultant vanishes identically.
    let same = |s: f64| -> bool {
        c1.c.iter()
            .zip(c2.c.iter())
            .all(|(a, b)| (a - s * b).abs() <= 1e-12)
    };
    if same(1.0) || same(-1.0) {
        return Err(Error::DegenerateConicPair);
    }

    // Eliminate whichever variable keeps both quadratics genuinely quadratic.
    if c1.c[2].abs() < 1e-8 || c2.c[2].abs() < 1e-8 {
        let pts = conic_intersections(&c1.transposed(), &c2.transposed())?;
        return Ok(pts
            .into_iter()
            .map(|p| Point::xy(p.y(), p.x()))
            .collect());
    }

    let quartic = resultant_in_x(c1, c2);
    let max_coef = quartic.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_coef <= 1e-13 {
        return Err(Error::DegenerateConicPair);
    }
    let quartic: Vec<f64> = quartic.iter().map(|v| v / max_coef).collect();

    // Loose stationary tolerance: tangencies and vertical double roots
    // surface as candidates; the 2-D Newton polish arbitrates.
    let xs = real_roots_upto4(&quartic, 1e-6);

    let mut found: Vec<(f64, f64)> = Vec::new();
    for &x in &xs {
        for &(cy2, cy1, cy0) in &[c1.as_poly_in_y(x), c2.as_poly_in_y(x)] {
            for y in quadratic_real_roots(cy2, cy1, cy0) {
                if let Some((px, py)) = polish_intersection(c1, c2, x, y) {
                    found.push((px, py));
                }
            }
        }
    }

    // Collapse duplicates within the root tolerance.
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut distinct: Vec<(f64, f64)> = Vec::new();
    'outer: for cand in found {
        for kept in &distinct {
            let scale = 1.0 + kept.0.abs().max(kept.1.abs());
            if (cand.0 - kept.0).abs() <= EPS_ROOT * scale
                && (cand.1 - kept.1).abs() <= EPS_ROOT * scale
            {
                continue 'outer;
            }
        }
        distinct.push(cand);
    }
    if distinct.len() > 4 {
        return Err(Error::DegenerateConicPair);
    }
    Ok(distinct.into_iter().map(|(x, y)| Point::xy(x, y)).collect())
}

/// Resultant of the two conics as quadratics in `y`, a quartic in `x`
/// (ascending coefficients).
fn resultant_in_x(c1: &Conic, c2: &Conic) -> [f64; 5] {
    let [a1, b1, cc1, d1, e1, f1] = c1.c;
    let [a2, b2, cc2, d2, e2, f2] = c2.c;
    // P(x) = C1*(A2 x^2 + D2 x + F2) - C2*(A1 x^2 + D1 x + F1)
    let p2 = cc1 * a2 - cc2 * a1;
    let p1 = cc1 * d2 - cc2 * d1;
    let p0 = cc1 * f2 - cc2 * f1;
    // Q(x) = C1*(B2 x + E2) - C2*(B1 x + E1)
    let q1 = cc1 * b2 - cc2 * b1;
    let q0 = cc1 * e2 - cc2 * e1;
    // R(x) = (B1 x + E1)(A2 x^2 + D2 x + F2) - (B2 x + E2)(A1 x^2 + D1 x + F1)
    let r3 = b1 * a2 - b2 * a1;
    let r2 = b1 * d2 + e1 * a2 - b2 * d1 - e2 * a1;
    let r1 = b1 * f2 + e1 * d2 - b2 * f1 - e2 * d1;
    let r0 = e1 * f2 - e2 * f1;
    // Res = P^2 - Q*R
    [
        p0 * p0 - q0 * r0,
        2.0 * p0 * p1 - (q0 * r1 + q1 * r0),
        p1 * p1 + 2.0 * p0 * p2 - (q0 * r2 + q1 * r1),
        2.0 * p1 * p2 - (q0 * r3 + q1 * r2),
        p2 * p2 - q1 * r3,
    ]
}

/// Damped 2-D Newton on the pair of implicit equations; returns the point
/// when both residuals fall below the acceptance scale.
fn polish_intersection(c1: &Conic, c2: &Conic, mut x: f64, mut y: f64) -> Option<(f64, f64)> {
    let resid = |x: f64, y: f64| -> f64 {
        let r1 = c1.eval_xy(x, y).abs() / c1.scale_at(x, y);
        let r2 = c2.eval_xy(x, y).abs() / c2.scale_at(x, y);
        r1.max(r2)
    };
    let mut r = resid(x, y);
    for _ in 0..40 {
        if r <= 1e-14 {
            break;
        }
        let f1 = c1.eval_xy(x, y);
        let f2 = c2.eval_xy(x, y);
        let (j11, j12) = c1.gradient(x, y);
        let (j21, j22) = c2.gradient(x, y);
        let det = j11 * j22 - j12 * j21;
        if det.abs() <= 1e-300 {
            break;
        }
        let dx = (f1 * j22 - f2 * j12) / det;
        let dy = (f2 * j11 - f1 * j21) / det;
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let (nx, ny) = (x - step * dx, y - step * dy);
            let nr = resid(nx, ny);
            if nr < r {
                x = nx;
                y = ny;
                r = nr;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    // Accept an order of magnitude inside the documented tolerance.
    if r <= 0.1 * EPS_GEOM {
        Some((x, y))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ellipse_from_pair;

    fn circle(cx: f64, cy: f64, r: f64) -> Conic {
        // (x-cx)^2 + (y-cy)^2 - r^2
        Conic::new(1.0, 0.0, 1.0, -2.0 * cx, -2.0 * cy, cx * cx + cy * cy - r * r).unwrap()
    }

    #[test]
    fn ellipse_to_conic_axis_aligned() {
        // foci (+-1, 0), lambda = 2: x^2/4 + y^2/3 = 1 up to scaling.
        let e = ellipse_from_pair(&Point::xy(-1.0, 0.0), &Point::xy(1.0, 0.0), 2.0).unwrap();
        let q = Conic::from_ellipse(&e).unwrap();
        let [a, b, c, d, ee, _f] = q.coefficients();
        assert!((a / c - 0.75).abs() < 1e-12);
        assert!(b.abs() < 1e-12 && d.abs() < 1e-12 && ee.abs() < 1e-12);
        assert!(q.eval(&Point::xy(0.0, 0.0)) < 0.0);
        assert!(q.eval(&Point::xy(2.0, 0.0)).abs() < 1e-12);
        assert!(q.eval(&Point::xy(0.0, 3f64.sqrt())).abs() < 1e-12);

        // foci (0,0),(0,2), lambda = 1.5: axis-aligned, centered (0,1).
        let e = ellipse_from_pair(&Point::xy(0.0, 0.0), &Point::xy(0.0, 2.0), 1.5).unwrap();
        let q = Conic::from_ellipse(&e).unwrap();
        let [_, b, _, d, _, _] = q.coefficients();
        assert!(b.abs() < 1e-12 && d.abs() < 1e-12);
        assert!(q.eval(&Point::xy(0.0, 1.0)) < 0.0);
        assert!(q.eval(&Point::xy(0.0, 2.5)).abs() < 1e-9);
    }

    #[test]
    fn conic_sign_matches_containment() {
        let mut state = 0xd1b54a32d192ed03u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let fa = Point::xy(next() * 4.0 - 2.0, next() * 4.0 - 2.0);
            let fb = Point::xy(next() * 4.0 - 2.0, next() * 4.0 - 2.0);
            if super::super::distance(&fa, &fb) < 1e-2 {
                continue;
            }
            let e = ellipse_from_pair(&fa, &fb, 1.05 + 2.0 * next()).unwrap();
            let q = Conic::from_ellipse(&e).unwrap();
            for _ in 0..1000 {
                let p = Point::xy(next() * 12.0 - 6.0, next() * 12.0 - 6.0);
                let v = q.eval(&p);
                // Skip the razor-thin boundary band where FP sign is moot.
                if v.abs() <= 1e-11 * q.scale_at(p.x(), p.y()) {
                    continue;
                }
                assert_eq!(v < 0.0, e.contains(&p), "at {:?}", p.coords());
            }
        }
    }

    #[test]
    fn congruent_circles_cross_twice() {
        let pts = conic_intersections(&circle(0.0, 0.0, 1.0), &circle(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(pts.len(), 2);
        let want = 0.75f64.sqrt();
        for p in &pts {
            assert!((p.x() - 0.5).abs() < 1e-9);
            assert!((p.y().abs() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn concentric_circles_disjoint() {
        let pts = conic_intersections(&circle(0.0, 0.0, 1.0), &circle(0.0, 0.0, 2.0)).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn identical_conics_rejected() {
        let c = circle(0.3, -0.2, 1.7);
        assert!(matches!(
            conic_intersections(&c, &c),
            Err(Error::DegenerateConicPair)
        ));
    }

    #[test]
    fn random_pairs_match_boundary_scan() {
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut tested = 0;
        for _ in 0..120 {
            let mk = |next: &mut dyn FnMut() -> f64| {
                let fa = Point::xy(next() * 3.0 - 1.5, next() * 3.0 - 1.5);
                let fb = Point::xy(next() * 3.0 - 1.5, next() * 3.0 - 1.5);
                if super::super::distance(&fa, &fb) < 5e-2 {
                    return None;
                }
                Some(ellipse_from_pair(&fa, &fb, 1.1 + 1.5 * next()).unwrap())
            };
            let (Some(e1), Some(e2)) = (mk(&mut next), mk(&mut next)) else {
                continue;
            };
            let q1 = Conic::from_ellipse(&e1).unwrap();
            let q2 = Conic::from_ellipse(&e2).unwrap();
            let pts = conic_intersections(&q1, &q2).unwrap();
            assert!(pts.len() <= 4);
            for p in &pts {
                for q in [&q1, &q2] {
                    let r = q.eval(p).abs() / q.scale_at(p.x(), p.y());
                    assert!(r <= 1e-9, "residual {r}");
                }
            }

            // Boundary-sampling oracle: walk e1's boundary, count sign
            // changes of q2. Skip grazing instances where a sample sits on
            // the q2 boundary.
            let m = e1.center();
            let fd = e1.focal_distance();
            let (ux, uy) = (
                (e1.focus_b().x() - e1.focus_a().x()) / fd,
                (e1.focus_b().y() - e1.focus_a().y()) / fd,
            );
            let (sa, sb) = (e1.semi_major(), e1.semi_minor());
            let nsamp = 4096;
            let mut signs = Vec::with_capacity(nsamp);
            let mut grazing = false;
            for i in 0..nsamp {
                let t = i as f64 / nsamp as f64 * std::f64::consts::TAU;
                let (lx, ly) = (sa * t.cos(), sb * t.sin());
                let x = m.x() + lx * ux - ly * uy;
                let y = m.y() + lx * uy + ly * ux;
                let v = q2.eval_xy(x, y);
                if v.abs() <= 1e-7 * q2.scale_at(x, y) {
                    grazing = true;
                    break;
                }
                signs.push(v > 0.0);
            }
            if grazing {
                continue;
            }
            let mut changes = 0;
            for i in 0..nsamp {
                if signs[i] != signs[(i + 1) % nsamp] {
                    changes += 1;
                }
            }
            assert_eq!(changes, pts.len(), "sign changes vs intersections");
            tested += 1;
        }
        assert!(tested >= 40, "too few clean instances: {tested}");
    }
}
