//! Randomized partition solver for the unconstrained center.
//!
//! The instance is only ever touched through the fast evaluation
//! algorithm, used as a decision procedure: "does the incumbent center
//! satisfy every pair constraint of this subset at its level?". Each
//! round splits the working set into three random thirds round-robin and
//! forms the three pairwise unions `P_i` (each two thirds of the set), so
//! every leaf pair survives into at least one `P_i`. Subsets that violate
//! the incumbent are re-solved recursively, seeded with that incumbent.
//!
//! A subset optimum can sit strictly below the full optimum when the
//! handful of pairs that determine it straddle all three color classes,
//! so a single partition cannot always certify. Two additions close the
//! gap while keeping the expected work near-linear:
//!
//! * every pass re-draws the random coloring, and
//! * the witness pair of each violated decision joins a small support set
//!   that is appended to every subsequent subproblem, steering the
//!   subproblems toward containing the determining pairs outright.
//!
//! A pass whose three decisions all hold certifies the incumbent: its
//! point satisfies every pair constraint at the incumbent level, and the
//! level never exceeds the full optimum. The incumbent level is therefore
//! non-decreasing and converges to the optimum from below. If the pass
//! budget runs out the solver falls back to bisection and flags it.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{solve_bisection, CenterMethod, OptResult, QcpConfig};
use crate::error::Result;
use crate::eval::{evaluate_fast, EvalConstants};
use crate::geometry::{Point, PointSet};

const ROOT_PASS_CAP: usize = 64;
const CHILD_PASS_CAP: usize = 8;

struct Ctx<'a> {
    set: &'a PointSet,
    cfg: &'a QcpConfig,
    consts: &'a EvalConstants,
    rng: ChaCha8Rng,
    decision_calls: usize,
    fell_back: bool,
}

#[derive(Clone)]
struct Incumbent {
    lambda: f64,
    x: Point,
}

pub fn solve(set: &PointSet, cfg: &QcpConfig, consts: &EvalConstants) -> Result<OptResult> {
    if set.len() < 2 {
        return Err(crate::error::Error::TooFewPoints { need: 2, got: set.len() });
    }
    let mut ctx = Ctx {
        set,
        cfg,
        consts,
        rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
        decision_calls: 0,
        fell_back: false,
    };
    let indices: Vec<usize> = (0..set.len()).collect();
    let incumbent = solve_rec(&mut ctx, &indices, None, 0)?;
    let report = evaluate_fast(set, &incumbent.x, consts)?;
    Ok(OptResult {
        center: incumbent.x,
        dilation: report.dilation,
        witness: report.witness,
        method: CenterMethod::Chan,
        iterations: ctx.decision_calls,
        seed: cfg.rng_seed,
        fell_back: ctx.fell_back,
    })
}

fn bisect_subset(ctx: &mut Ctx, indices: &[usize]) -> Result<Incumbent> {
    let sub = ctx.set.subset(indices);
    let r = solve_bisection(&sub, ctx.cfg, ctx.consts)?;
    Ok(Incumbent { lambda: r.dilation, x: r.center })
}

fn solve_rec(
    ctx: &mut Ctx,
    indices: &[usize],
    inherited: Option<Incumbent>,
    depth: usize,
) -> Result<Incumbent> {
    let m = indices.len();
    if m <= ctx.cfg.base_case_size {
        return bisect_subset(ctx, indices);
    }

    let support_cap = (m / 8).max(4);
    let mut support: Vec<usize> = Vec::new();
    let mut incumbent = inherited;
    let pass_cap = if depth == 0 { ROOT_PASS_CAP } else { CHILD_PASS_CAP };
    let slack = 1.0 + 4.0 * ctx.cfg.eps_opt;

    for _pass in 0..pass_cap {
        // Fresh random three-coloring; P_i drops color class i.
        let mut perm = indices.to_vec();
        perm.shuffle(&mut ctx.rng);
        let mut order = [0usize, 1, 2];
        order.shuffle(&mut ctx.rng);

        let mut clean = true;
        for &color in &order {
            let part: Vec<usize> = perm
                .iter()
                .enumerate()
                .filter(|(pos, _)| pos % 3 != color)
                .map(|(_, &v)| v)
                .collect();
            let subset = merged(&part, &support);

            match incumbent.clone() {
                None => {
                    incumbent = Some(descend(ctx, &subset, None, depth, m)?);
                    clean = false;
                }
                Some(inc) => {
                    let sub = ctx.set.subset(&subset);
                    let rep = evaluate_fast(&sub, &inc.x, ctx.consts)?;
                    ctx.decision_calls += 1;
                    if rep.dilation > inc.lambda * slack {
                        clean = false;
                        if let Some((wi, wj)) = rep.witness {
                            push_support(&mut support, subset[wi], support_cap);
                            push_support(&mut support, subset[wj], support_cap);
                        }
                        let widened = merged(&part, &support);
                        let child = descend(ctx, &widened, Some(inc.clone()), depth, m)?;
                        incumbent = Some(Incumbent {
                            lambda: child.lambda.max(inc.lambda),
                            x: child.x,
                        });
                    }
                }
            }
        }
        if clean {
            if let Some(inc) = incumbent {
                return Ok(inc);
            }
        }
    }

    // Pass budget exhausted. The root must produce a certified answer;
    // interior nodes return their best effort and let the parent re-check.
    match (depth, incumbent) {
        (0, _) => {
            ctx.fell_back = true;
            bisect_subset(ctx, indices)
        }
        (_, Some(inc)) => Ok(inc),
        (_, None) => bisect_subset(ctx, indices),
    }
}

fn descend(
    ctx: &mut Ctx,
    subset: &[usize],
    inherited: Option<Incumbent>,
    depth: usize,
    parent_size: usize,
) -> Result<Incumbent> {
    if subset.len() >= parent_size {
        // The support stopped the subproblem from shrinking; cut to the
        // direct solver rather than recursing in place.
        bisect_subset(ctx, subset)
    } else {
        solve_rec(ctx, subset, inherited, depth + 1)
    }
}

fn merged(part: &[usize], support: &[usize]) -> Vec<usize> {
    let mut v = Vec::with_capacity(part.len() + support.len());
    v.extend_from_slice(part);
    v.extend_from_slice(support);
    v.sort_unstable();
    v.dedup();
    v
}

fn push_support(support: &mut Vec<usize>, idx: usize, cap: usize) {
    if support.len() < cap && !support.contains(&idx) {
        support.push(idx);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::EvalConstants;

    fn chacha_points(n: usize, dim: usize, seed: u64) -> PointSet {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointSet::new(
            (0..n)
                .map(|_| Point::new((0..dim).map(|_| rng.gen::<f64>()).collect()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_matches_bisection() {
        let v = PointSet::new(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap();
        let r = solve(&v, &QcpConfig::default(), &EvalConstants::fast()).unwrap();
        assert!((r.dilation - 2.0 / 3f64.sqrt()).abs() < 1e-6);
        assert_eq!(r.method, CenterMethod::Chan);
    }

    #[test]
    fn unit_square_finds_global_optimum() {
        // The four side pairs that determine the square's optimum never
        // share a partition class, so this instance specifically exercises
        // the support-set escape hatch (at sizes above the base case).
        let mut pts = vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ];
        // Pad with distant satellites that do not move the optimum much.
        for i in 0..12 {
            let ang = i as f64 * 0.5;
            pts.push(Point::xy(
                0.5 + 0.45 * ang.cos(),
                0.5 + 0.45 * ang.sin(),
            ));
        }
        let v = PointSet::new(pts).unwrap();
        let cfg = QcpConfig::default();
        let consts = EvalConstants::fast();
        let bis = solve_bisection(&v, &cfg, &consts).unwrap();
        let chan = solve(&v, &cfg, &consts).unwrap();
        assert!(
            (chan.dilation - bis.dilation).abs() <= 1e-6 * bis.dilation,
            "chan {} vs bisection {}",
            chan.dilation,
            bis.dilation
        );
    }

    #[test]
    fn random_instances_match_bisection() {
        let cfg = QcpConfig::default();
        let consts = EvalConstants::fast();
        for seed in 0..15u64 {
            let n = 10 + (seed as usize * 7) % 60;
            let v = chacha_points(n, 2, 1000 + seed);
            let bis = solve_bisection(&v, &cfg, &consts).unwrap();
            let chan = solve(&v, &QcpConfig::with_seed(seed), &consts).unwrap();
            assert!(
                (chan.dilation - bis.dilation).abs() <= 1e-6 * bis.dilation,
                "seed {seed}: chan {} vs bisection {}",
                chan.dilation,
                bis.dilation
            );
        }
    }

    #[test]
    fn base_case_is_bisection_exactly() {
        let v = chacha_points(8, 2, 42);
        let cfg = QcpConfig::default();
        let consts = EvalConstants::fast();
        let bis = solve_bisection(&v, &cfg, &consts).unwrap();
        let chan = solve(&v, &cfg, &consts).unwrap();
        assert_eq!(bis.dilation.to_bits(), chan.dilation.to_bits());
        assert_eq!(chan.iterations, 0, "no decisions below the base case");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let v = chacha_points(40, 2, 7);
        let consts = EvalConstants::fast();
        let a = solve(&v, &QcpConfig::with_seed(3), &consts).unwrap();
        let b = solve(&v, &QcpConfig::with_seed(3), &consts).unwrap();
        assert_eq!(a.dilation.to_bits(), b.dilation.to_bits());
        assert_eq!(a.center.coords(), b.center.coords());
        assert_eq!(a.iterations, b.iterations);
    }
}
