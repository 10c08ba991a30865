//! Dilation-minimizing center among the input points (2-D).
//!
//! The fast path draws random candidate centers, and after each draw
//! prunes every candidate that cannot beat the best dilation seen: the
//! improvement region is an intersection of ellipses, represented as an
//! [`ArcRing`] about the unconstrained optimum for logarithmic membership
//! queries. Each surviving candidate is strictly better than all drawn
//! ones, so the loop needs logarithmically many draws in expectation.

pub mod envelope;
pub mod region;

pub use envelope::{build_arc_ring, Arc, ArcRing};
pub use region::{annulus_index, rho_for_dilation, rho_for_gamma, select_region_ellipses, RegionSelection};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::center::{solve_chan, QcpConfig};
use crate::error::{Error, Result};
use crate::eval::{evaluate_brute, evaluate_fast, EvalConstants};
use crate::geometry::{Point, PointSet};

/// Result of the constrained (center-among-vertices) optimization.
#[derive(Debug, Clone)]
pub struct ConstrainedResult {
    pub center_index: usize,
    pub dilation: f64,
    pub loop_iterations: usize,
    /// Surviving candidate count after each pruning step.
    pub pruned_counts: Vec<usize>,
    /// True when the iteration cap forced the direct fallback.
    pub fell_back: bool,
    /// Iterations that pruned by direct evaluation because the sparse
    /// ellipse family capped out.
    pub brute_membership_iterations: usize,
    pub seed: u64,
}

fn validate(set: &PointSet) -> Result<()> {
    if set.dim() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: set.dim() });
    }
    if set.len() < 3 {
        return Err(Error::TooFewPoints { need: 3, got: set.len() });
    }
    Ok(())
}

/// Star dilation when vertex `idx` serves as the center for the rest.
fn dilation_at_vertex(set: &PointSet, idx: usize, consts: &EvalConstants) -> Result<f64> {
    let leaves = set.without(idx);
    Ok(evaluate_fast(&leaves, set.point(idx), consts)?.dilation)
}

/// Oracle: evaluate every vertex as the center, lexicographic tie-break.
pub fn solve_constrained_brute(set: &PointSet) -> Result<ConstrainedResult> {
    if set.len() < 3 {
        return Err(Error::TooFewPoints { need: 3, got: set.len() });
    }
    let mut best_idx = 0usize;
    let mut best = f64::INFINITY;
    for idx in 0..set.len() {
        let leaves = set.without(idx);
        let d = evaluate_brute(&leaves, set.point(idx))?.dilation;
        if d < best {
            best = d;
            best_idx = idx;
        }
    }
    Ok(ConstrainedResult {
        center_index: best_idx,
        dilation: best,
        loop_iterations: set.len(),
        pruned_counts: Vec::new(),
        fell_back: false,
        brute_membership_iterations: 0,
        seed: 0,
    })
}

/// Randomized pruning solver.
///
/// Loop: draw a random remaining candidate, evaluate it, stop if the
/// unconstrained optimum shows no strictly better center can exist, else
/// prune the candidate set to the improvement region. Pruning keeps
/// boundary ties, so the exact optimum value is never lost; the returned
/// dilation matches the brute oracle.
pub fn solve_constrained(
    set: &PointSet,
    cfg: &QcpConfig,
    consts: &EvalConstants,
    rng_seed: u64,
) -> Result<ConstrainedResult> {
    validate(set)?;
    let n = set.len();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let iter_cap = 8 * (n as f64).log2().ceil() as usize + 8;

    let mut candidates: Vec<usize> = (0..n).collect();
    let mut best: Option<(usize, f64)> = None;
    let mut opt: Option<(Point, f64)> = None;
    let mut pruned_counts = Vec::new();
    let mut loop_iterations = 0usize;
    let mut brute_membership_iterations = 0usize;

    loop {
        let Some(&(best_idx, best_dil)) = best.as_ref() else {
            // First draw below.
            if candidates.is_empty() {
                return Err(Error::InvalidInput("no candidates".into()));
            }
            let pos = rng.gen_range(0..candidates.len());
            let c_idx = candidates.swap_remove(pos);
            let d = dilation_at_vertex(set, c_idx, consts)?;
            best = Some((c_idx, d));
            loop_iterations += 1;
            continue;
        };

        if candidates.is_empty() {
            return Ok(ConstrainedResult {
                center_index: best_idx,
                dilation: best_dil,
                loop_iterations,
                pruned_counts,
                fell_back: false,
                brute_membership_iterations,
                seed: rng_seed,
            });
        }

        // The unconstrained optimum lower-bounds every candidate; once it
        // cannot strictly beat the incumbent, the incumbent is optimal.
        if opt.is_none() {
            let sub_cfg = QcpConfig { rng_seed: rng.gen(), ..*cfg };
            let r = solve_chan(set, &sub_cfg, consts)?;
            let value = evaluate_fast(set, &r.center, consts)?.dilation;
            opt = Some((r.center, value));
        }
        let (opt_point, opt_value) = opt.as_ref().unwrap();
        if *opt_value >= best_dil * (1.0 - 1e-9) {
            return Ok(ConstrainedResult {
                center_index: best_idx,
                dilation: best_dil,
                loop_iterations,
                pruned_counts,
                fell_back: false,
                brute_membership_iterations,
                seed: rng_seed,
            });
        }

        if loop_iterations >= iter_cap {
            // Direct fallback over the surviving candidates; pruning is
            // conservative, so the optimum is among them or already drawn.
            let mut fb_idx = best_idx;
            let mut fb = best_dil;
            for &p in &candidates {
                let d = dilation_at_vertex(set, p, consts)?;
                if d < fb || (d == fb && p < fb_idx) {
                    fb = d;
                    fb_idx = p;
                }
            }
            return Ok(ConstrainedResult {
                center_index: fb_idx,
                dilation: fb,
                loop_iterations,
                pruned_counts,
                fell_back: true,
                brute_membership_iterations,
                seed: rng_seed,
            });
        }

        // Prune candidates that cannot beat the incumbent level.
        let selection =
            select_region_ellipses(set, set.point(best_idx), best_dil, opt_point, consts)?;
        let prune_direct = |candidates: &mut Vec<usize>| -> Result<()> {
            let level = best_dil * (1.0 + crate::EPS_GEOM);
            let mut kept = Vec::with_capacity(candidates.len());
            for &p in candidates.iter() {
                if dilation_at_vertex(set, p, consts)? <= level {
                    kept.push(p);
                }
            }
            *candidates = kept;
            Ok(())
        };
        match selection {
            RegionSelection::CapExceeded => {
                brute_membership_iterations += 1;
                prune_direct(&mut candidates)?;
            }
            RegionSelection::Ellipses(ellipses) => {
                match build_arc_ring(ellipses, opt_point) {
                    Ok(ring) => {
                        candidates.retain(|&p| ring.contains(set.point(p)));
                    }
                    Err(Error::NotInterior) => {
                        // The optimum hugs the current level set too closely
                        // for a radial parameterization; prune directly.
                        brute_membership_iterations += 1;
                        prune_direct(&mut candidates)?;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        pruned_counts.push(candidates.len());

        // Draw the next candidate.
        if candidates.is_empty() {
            return Ok(ConstrainedResult {
                center_index: best_idx,
                dilation: best_dil,
                loop_iterations,
                pruned_counts,
                fell_back: false,
                brute_membership_iterations,
                seed: rng_seed,
            });
        }
        let pos = rng.gen_range(0..candidates.len());
        let c_idx = candidates.swap_remove(pos);
        let d = dilation_at_vertex(set, c_idx, consts)?;
        loop_iterations += 1;
        if d < best_dil {
            best = Some((c_idx, d));
        }
    }
}
