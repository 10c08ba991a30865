//! Selecting the ellipses that bound the improvement region.
//!
//! The set of centers strictly better than the current dilation is the
//! interior of the intersection of all pair level sets at that level.
//! Only a near-linear subset of the quadratically many ellipses can touch
//! the boundary of that intersection:
//!
//! * when the level is high, pairs of mutual k-nearest neighbors;
//! * when the level is at most the gamma threshold, pairs within a widened
//!   distance-rank window about the unconstrained optimum, pairs through
//!   the two annuli whose radius matches the current center's offset from
//!   that optimum, and pairs through the handful of points closer to the
//!   optimum than that offset.
//!
//! The second family is generated only when the level is at most the
//!   gamma threshold: that is the regime in which its occupancy bounds
//!   hold, and the first family alone bounds the region above it.

use crate::error::{Error, Result};
use crate::eval::{all_knn, distance_ranks, EvalConstants};
use crate::geometry::{distance, ellipse_from_pair, Ellipse, Point, PointSet};

/// Overall pair budget per point before giving up on the sparse region.
const REGION_CAP_PER_POINT: usize = 256;

/// Outcome of ellipse selection: either the sparse bounding family, or a
/// signal that the caller should prune with direct membership tests.
#[derive(Debug)]
pub enum RegionSelection {
    Ellipses(Vec<Ellipse>),
    /// A generator exceeded its occupancy cap; the sparse family could be
    /// incomplete, so membership must fall back to direct evaluation.
    CapExceeded,
}

/// Annulus exponent of `p` about `center` with radius ratio `rho`:
/// `floor(log_rho |p center|)`, with exact shell radii assigned to their
/// own exponent.
pub fn annulus_index(p: &Point, center: &Point, rho: f64) -> Result<i64> {
    if !(rho > 1.0) {
        return Err(Error::InvalidInput("annulus ratio must exceed 1".into()));
    }
    let r = distance(p, center);
    if r == 0.0 {
        return Err(Error::UndefinedAnnulusIndex);
    }
    Ok(annulus_index_of_radius(r, rho))
}

fn annulus_index_of_radius(r: f64, rho: f64) -> i64 {
    let t = r.ln() / rho.ln();
    let snapped = t.round();
    if (t - snapped).abs() <= 1e-12 * t.abs().max(1.0) {
        snapped as i64
    } else {
        t.floor() as i64
    }
}

/// Annulus ratio derived from a dilation value, floored near 1.
pub fn rho_for_dilation(dilation: f64) -> f64 {
    let d = dilation.max(1.0 + 1e-6);
    ((d + 1.0) / (d - 1.0)).sqrt() + 1e-6
}

/// Annulus ratio used for the region construction, fixed from the gamma
/// threshold.
pub fn rho_for_gamma(gamma_threshold: f64) -> f64 {
    ((gamma_threshold + 1.0) / (gamma_threshold - 1.0)).sqrt() + 0.1
}

/// Selects the ellipse family bounding `{p : dilation at p < level}`.
///
/// `current` is the center whose dilation set the level; `opt` is the
/// unconstrained optimum used as the annulus origin and later as the arc
/// ring reference point.
pub fn select_region_ellipses(
    set: &PointSet,
    current: &Point,
    level: f64,
    opt: &Point,
    consts: &EvalConstants,
) -> Result<RegionSelection> {
    if set.dim() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: set.dim() });
    }
    if !(level > 1.0) {
        return Err(Error::InvalidInput("region level must exceed 1".into()));
    }
    let n = set.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }

    let mut enc: Vec<u64> = Vec::new();
    let push = |enc: &mut Vec<u64>, i: usize, j: usize| {
        if i != j {
            let (a, b) = (i.min(j) as u64, i.max(j) as u64);
            enc.push((a << 32) | b);
        }
    };

    // High family: every point with its k nearest neighbors.
    let neighbors = all_knn(set, consts.knn_k)?;
    for (i, nbrs) in neighbors.iter().enumerate() {
        for &j in nbrs {
            push(&mut enc, i, j);
        }
    }

    // Widened rank windows about the optimum.
    let ranks = distance_ranks(set, opt);
    let window = 2 * consts.rank_window_l;
    for s in 0..n {
        for t in s + 1..=(s + window).min(n - 1) {
            push(&mut enc, ranks[s], ranks[t]);
        }
    }

    // Annulus-based families, valid (and provably sparse) only in the
    // low-dilation regime.
    if level <= consts.gamma_threshold {
        let rho = rho_for_gamma(consts.gamma_threshold);
        let x = distance(current, opt);
        if x > 0.0 {
            let i0 = annulus_index_of_radius(x, rho);
            let mut in_annuli = Vec::new();
            let mut nearer = Vec::new();
            for (q, p) in set.points().iter().enumerate() {
                let r = distance(p, opt);
                if r == 0.0 {
                    nearer.push(q);
                    continue;
                }
                let idx = annulus_index_of_radius(r, rho);
                if idx == i0 || idx == i0 + 1 {
                    in_annuli.push(q);
                }
                if r < x {
                    nearer.push(q);
                }
            }
            if nearer.len() > 4 * consts.knn_k {
                return Ok(RegionSelection::CapExceeded);
            }
            for a in 0..n {
                for &q in in_annuli.iter().chain(nearer.iter()) {
                    push(&mut enc, a, q);
                }
            }
        }
    }

    enc.sort_unstable();
    enc.dedup();
    if enc.len() > REGION_CAP_PER_POINT * n {
        return Ok(RegionSelection::CapExceeded);
    }

    let ellipses = enc
        .into_iter()
        .map(|e| {
            let (i, j) = ((e >> 32) as usize, (e & 0xffff_ffff) as usize);
            ellipse_from_pair(set.point(i), set.point(j), level)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionSelection::Ellipses(ellipses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn annulus_index_examples() {
        let c = Point::xy(0.0, 0.0);
        assert_eq!(annulus_index(&Point::xy(5.0, 0.0), &c, 2.0).unwrap(), 2);
        assert_eq!(annulus_index(&Point::xy(1.0, 0.0), &c, 2.0).unwrap(), 0);
        assert_eq!(annulus_index(&Point::xy(0.3, 0.0), &c, 2.0).unwrap(), -2);
        // Exact shell boundaries take their own exponent.
        assert_eq!(annulus_index(&Point::xy(4.0, 0.0), &c, 2.0).unwrap(), 2);
        assert!(matches!(
            annulus_index(&c, &c, 2.0),
            Err(Error::UndefinedAnnulusIndex)
        ));
    }

    #[test]
    fn rho_formulas() {
        // Gamma = 4: sqrt(5/3) + 0.1.
        assert!((rho_for_gamma(4.0) - ((5.0f64 / 3.0).sqrt() + 0.1)).abs() < 1e-12);
        let r = rho_for_dilation(3.0);
        assert!((r - (2.0f64.sqrt() + 1e-6)).abs() < 1e-12);
        // Clamped near 1.
        assert!(rho_for_dilation(1.0).is_finite());
    }

    #[test]
    fn tiny_set_saturates_to_all_pairs() {
        let set = PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(0.0, 1.0),
        ])
        .unwrap();
        let consts = EvalConstants::fast();
        let sel = select_region_ellipses(
            &set,
            &Point::xy(0.0, 0.0),
            2.0,
            &Point::xy(0.4, 0.4),
            &consts,
        )
        .unwrap();
        match sel {
            RegionSelection::Ellipses(es) => assert_eq!(es.len(), 3),
            RegionSelection::CapExceeded => panic!("tiny set must not cap out"),
        }
    }

    #[test]
    fn square_includes_worst_pair_ellipse() {
        // Center at a corner: the dilation 1 + sqrt(2) is realized by the
        // two corners adjacent to the opposite one; that pair is a knn pair
        // so its ellipse must be selected.
        let set = PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ])
        .unwrap();
        let consts = EvalConstants::fast();
        let level = 1.0 + 2f64.sqrt();
        let sel = select_region_ellipses(
            &set,
            &Point::xy(0.0, 0.0),
            level,
            &Point::xy(0.5, 0.5),
            &consts,
        )
        .unwrap();
        let RegionSelection::Ellipses(es) = sel else {
            panic!("unexpected cap");
        };
        let has = es.iter().any(|e| {
            let fa = e.focus_a().coords();
            let fb = e.focus_b().coords();
            (fa == [1.0, 0.0] && fb == [1.0, 1.0]) || (fa == [1.0, 1.0] && fb == [1.0, 0.0])
        });
        assert!(has, "missing the witness-pair ellipse");
    }

    #[test]
    fn selected_intersection_matches_all_pairs_at_probes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let consts = EvalConstants::fast();
        for trial in 0..10 {
            let n = 12 + (trial * 5) % 40;
            let set = PointSet::new(
                (0..n)
                    .map(|_| Point::xy(rng.gen::<f64>(), rng.gen::<f64>()))
                    .collect(),
            )
            .unwrap();
            // Use a vertex as the current center and the centroid as a
            // stand-in optimum.
            let current = set.point(0).clone();
            let leaves = set.without(0);
            let level = crate::eval::evaluate_brute(&leaves, &current)
                .unwrap()
                .dilation;
            let opt = set.centroid();
            let sel =
                select_region_ellipses(&set, &current, level, &opt, &consts).unwrap();
            let RegionSelection::Ellipses(es) = sel else {
                continue;
            };
            for _ in 0..1000 {
                let p = Point::xy(rng.gen::<f64>() * 3.0 - 1.0, rng.gen::<f64>() * 3.0 - 1.0);
                let sel_in = es.iter().all(|e| e.contains(&p));
                let mut all_in = true;
                let mut boundary_band = false;
                'pairs: for i in 0..n {
                    for j in i + 1..n {
                        let f = crate::geometry::pair_dilation(set.point(i), set.point(j), &p)
                            .unwrap();
                        if (f - level).abs() <= 1e-9 * level {
                            boundary_band = true;
                            break 'pairs;
                        }
                        if f > level {
                            all_in = false;
                            break 'pairs;
                        }
                    }
                }
                if boundary_band {
                    continue;
                }
                assert_eq!(
                    sel_in, all_in,
                    "trial {trial}: sparse family disagrees with all pairs at {:?}",
                    p.coords()
                );
            }
        }
    }
}
