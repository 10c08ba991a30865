//! Dilation-minimizing star center anywhere in `R^d`.
//!
//! The objective `max_{i<j} (|v_i x| + |x v_j|)/|v_i v_j|` is quasiconvex
//! (its level sets are intersections of ellipsoids), so the optimum can be
//! located two ways:
//!
//! * [`solve_bisection`] — the oracle: bisect the level and test each level
//!   for feasibility with a convex subsolver over all pair constraints.
//! * [`solve_chan`] — the fast path: a randomized partition scheme that
//!   only ever touches the instance through the near-linear evaluation
//!   algorithm used as a decision procedure.

pub mod chan;
pub mod feasibility;

pub use feasibility::{feasibility_min, ConstraintSet};

use crate::error::{Error, Result};
use crate::eval::{evaluate_fast, EvalConstants};
use crate::geometry::{Point, PointSet};

/// Numerical controls for the center solvers.
#[derive(Debug, Clone, Copy)]
pub struct QcpConfig {
    /// Relative tolerance on the optimal level.
    pub eps_opt: f64,
    /// Absolute tolerance of the convex feasibility subsolver.
    pub eps_feas: f64,
    /// Subproblems at or below this size are solved by bisection directly.
    pub base_case_size: usize,
    /// Seed for all randomized choices.
    pub rng_seed: u64,
}

impl QcpConfig {
    pub fn new(eps_opt: f64, eps_feas: f64, base_case_size: usize, rng_seed: u64) -> Result<Self> {
        if !(eps_opt > 0.0) || !(eps_feas > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if base_case_size < 4 {
            return Err(Error::InvalidInput("base case size must be at least 4".into()));
        }
        Ok(QcpConfig { eps_opt, eps_feas, base_case_size, rng_seed })
    }

    pub fn with_seed(seed: u64) -> Self {
        QcpConfig { rng_seed: seed, ..QcpConfig::default() }
    }
}

impl Default for QcpConfig {
    fn default() -> Self {
        QcpConfig { eps_opt: 1e-9, eps_feas: 1e-10, base_case_size: 9, rng_seed: 0 }
    }
}

/// Which solver produced an [`OptResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterMethod {
    Bisection,
    Chan,
}

impl CenterMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CenterMethod::Bisection => "bisection",
            CenterMethod::Chan => "chan",
        }
    }
}

/// Result of an unconstrained center optimization.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub center: Point,
    pub dilation: f64,
    pub witness: Option<(usize, usize)>,
    pub method: CenterMethod,
    /// Bisection steps, or decision calls for the randomized solver.
    pub iterations: usize,
    pub seed: u64,
    /// True when the randomized solver exhausted its pass budget and the
    /// answer came from the bisection fallback.
    pub fell_back: bool,
}

/// The star dilation with center `x`: the quasiconvex objective.
pub fn objective(set: &PointSet, x: &Point, consts: &EvalConstants) -> Result<f64> {
    if set.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: set.len() });
    }
    Ok(evaluate_fast(set, x, consts)?.dilation)
}

/// Decision procedure: is the objective at `x` at most `lambda`?
pub fn decision(set: &PointSet, x: &Point, lambda: f64, consts: &EvalConstants) -> Result<bool> {
    Ok(objective(set, x, consts)? <= lambda)
}

/// Oracle solver: bisection on the level, convex feasibility at each step.
///
/// The search interval starts at `[1, objective(centroid)]`; each feasible
/// probe tightens the upper end and keeps the feasible point, so the final
/// point is within `(1 + eps_opt)` of the optimal level.
pub fn solve_bisection(set: &PointSet, cfg: &QcpConfig, consts: &EvalConstants) -> Result<OptResult> {
    let n = set.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let constraints = ConstraintSet::all_pairs(set)?;
    let centroid = set.centroid();
    let mut lambda_hi = objective(set, &centroid, consts)?;
    let mut lambda_lo = 1.0;
    let mut x_best = centroid;
    let mut iterations = 0usize;

    while lambda_hi - lambda_lo > cfg.eps_opt * lambda_lo && iterations < 200 {
        let mid = 0.5 * (lambda_hi + lambda_lo);
        let (x, h) = feasibility_min(&constraints, mid, cfg.eps_feas, Some(&x_best))?;
        if h <= cfg.eps_feas {
            lambda_hi = mid;
            x_best = x;
        } else {
            lambda_lo = mid;
        }
        iterations += 1;
    }

    let report = evaluate_fast(set, &x_best, consts)?;
    Ok(OptResult {
        center: x_best,
        dilation: report.dilation,
        witness: report.witness,
        method: CenterMethod::Bisection,
        iterations,
        seed: cfg.rng_seed,
        fell_back: false,
    })
}

/// Randomized fast path; see [`chan`] for the partition scheme.
pub fn solve_chan(set: &PointSet, cfg: &QcpConfig, consts: &EvalConstants) -> Result<OptResult> {
    chan::solve(set, cfg, consts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn unit_square() -> PointSet {
        PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ])
        .unwrap()
    }

    fn triangle() -> PointSet {
        PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn objective_square_center() {
        let v = unit_square();
        let d = objective(&v, &Point::xy(0.5, 0.5), &EvalConstants::fast()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn objective_on_segment_is_one() {
        let v = PointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)]).unwrap();
        let d = objective(&v, &Point::xy(0.5, 0.0), &EvalConstants::fast()).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn objective_matches_brute_pair_loop() {
        let mut state = 0xbf58476d1ce4e5b9u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let set = PointSet::new(
                (0..32).map(|_| Point::xy(next(), next())).collect(),
            )
            .unwrap();
            let x = Point::xy(next() * 2.0 - 0.5, next() * 2.0 - 0.5);
            let fast = objective(&set, &x, &EvalConstants::fast()).unwrap();
            let mut brute = f64::NEG_INFINITY;
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    brute = brute.max(
                        crate::geometry::pair_dilation(set.point(i), set.point(j), &x).unwrap(),
                    );
                }
            }
            assert_eq!(fast.to_bits(), brute.to_bits());
        }
    }

    #[test]
    fn decision_square() {
        let v = unit_square();
        let c = EvalConstants::fast();
        assert!(decision(&v, &Point::xy(0.5, 0.5), 1.5, &c).unwrap());
        assert!(!decision(&v, &Point::xy(0.5, 0.5), 1.4, &c).unwrap());
    }

    #[test]
    fn bisection_two_points() {
        let v = PointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(2.0, 0.0)]).unwrap();
        let r = solve_bisection(&v, &QcpConfig::default(), &EvalConstants::fast()).unwrap();
        assert!((r.dilation - 1.0).abs() < 1e-9);
        // Optimal set is the whole segment; the centroid is on it.
        assert!((r.center.y()).abs() < 1e-9);
    }

    #[test]
    fn bisection_equilateral_triangle() {
        let r = solve_bisection(&triangle(), &QcpConfig::default(), &EvalConstants::fast())
            .unwrap();
        let want = 2.0 / 3f64.sqrt();
        assert!((r.dilation - want).abs() < 1e-6, "dilation {}", r.dilation);
        let centroid = triangle().centroid();
        assert!(
            crate::geometry::distance(&r.center, &centroid) < 1e-5,
            "center {:?}",
            r.center.coords()
        );
    }

    #[test]
    fn bisection_unit_square() {
        let r = solve_bisection(&unit_square(), &QcpConfig::default(), &EvalConstants::fast())
            .unwrap();
        assert!((r.dilation - 2f64.sqrt()).abs() < 1e-6);
        assert!((r.center.x() - 0.5).abs() < 1e-5 && (r.center.y() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn bisection_monotone_in_tolerance() {
        let v = triangle();
        let consts = EvalConstants::fast();
        let coarse = solve_bisection(
            &v,
            &QcpConfig { eps_opt: 1e-4, ..QcpConfig::default() },
            &consts,
        )
        .unwrap();
        let fine = solve_bisection(
            &v,
            &QcpConfig { eps_opt: 1e-10, ..QcpConfig::default() },
            &consts,
        )
        .unwrap();
        assert!(fine.dilation <= coarse.dilation + 1e-4 * coarse.dilation);
    }

    #[test]
    fn level_sets_are_convex_along_segments() {
        // Quasiconvexity witness: points below a level stay below it on
        // the connecting segment.
        let mut state = 0x8cb92ba72f3d8dd7u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let v = PointSet::new((0..24).map(|_| Point::xy(next(), next())).collect()).unwrap();
        let consts = EvalConstants::fast();
        let opt = solve_bisection(&v, &QcpConfig::default(), &consts).unwrap();
        for _ in 0..10 {
            let lambda = opt.dilation * (1.0 + next());
            let mut inside = Vec::new();
            while inside.len() < 2 {
                let p = Point::xy(next() * 2.0 - 0.5, next() * 2.0 - 0.5);
                if objective(&v, &p, &consts).unwrap() <= lambda {
                    inside.push(p);
                }
            }
            for t in 1..20 {
                let t = t as f64 / 20.0;
                let q = Point::xy(
                    inside[0].x() * (1.0 - t) + inside[1].x() * t,
                    inside[0].y() * (1.0 - t) + inside[1].y() * t,
                );
                let val = objective(&v, &q, &consts).unwrap();
                assert!(val <= lambda + 1e-10, "segment point above level: {val} > {lambda}");
            }
        }
    }
}
