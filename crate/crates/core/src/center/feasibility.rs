//! Convex feasibility for a family of distance-sum constraints.
//!
//! For a level `lambda`, each leaf pair `(a, b)` with weight `w = |ab|`
//! contributes `g(x) = |ax| + |xb| - lambda * w`; the level sets intersect
//! iff `h(x) = max g(x)` attains a nonpositive minimum. `h` is convex, so
//! a smoothed quasi-Newton descent converges from any start; the smoothing
//! parameter is driven below the requested tolerance so the returned value
//! brackets the true minimum to within `eps_feas`.

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};

/// Flattened pair constraints: per pair the two foci and the weight.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    dim: usize,
    foci: Vec<f64>,
    weights: Vec<f64>,
}

impl ConstraintSet {
    pub fn new(pairs: &[(Point, Point, f64)]) -> Result<Self> {
        let dim = match pairs.first() {
            Some((a, _, _)) => a.dim(),
            None => return Err(Error::InvalidInput("no constraints".into())),
        };
        let mut foci = Vec::with_capacity(pairs.len() * 2 * dim);
        let mut weights = Vec::with_capacity(pairs.len());
        for (a, b, w) in pairs {
            if a.dim() != dim || b.dim() != dim {
                return Err(Error::DimensionMismatch(dim, a.dim().max(b.dim())));
            }
            if !(*w > 0.0) {
                return Err(Error::InvalidInput("nonpositive pair weight".into()));
            }
            foci.extend_from_slice(a.coords());
            foci.extend_from_slice(b.coords());
            weights.push(*w);
        }
        Ok(ConstraintSet { dim, foci, weights })
    }

    /// One constraint per unordered leaf pair of `set`.
    pub fn all_pairs(set: &PointSet) -> Result<Self> {
        let n = set.len();
        if n < 2 {
            return Err(Error::TooFewPoints { need: 2, got: n });
        }
        let dim = set.dim();
        let m = n * (n - 1) / 2;
        let mut foci = Vec::with_capacity(m * 2 * dim);
        let mut weights = Vec::with_capacity(m);
        for i in 0..n {
            for j in i + 1..n {
                foci.extend_from_slice(set.point(i).coords());
                foci.extend_from_slice(set.point(j).coords());
                weights.push(crate::geometry::distance(set.point(i), set.point(j)));
            }
        }
        Ok(ConstraintSet { dim, foci, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn focus_pair(&self, i: usize) -> (&[f64], &[f64]) {
        let base = i * 2 * self.dim;
        (
            &self.foci[base..base + self.dim],
            &self.foci[base + self.dim..base + 2 * self.dim],
        )
    }

    /// `max_i g_i(x)` for the given level.
    pub fn max_violation(&self, x: &[f64], lambda: f64) -> f64 {
        let mut h = f64::NEG_INFINITY;
        for i in 0..self.len() {
            let (a, b) = self.focus_pair(i);
            let g = dist(x, a) + dist(x, b) - lambda * self.weights[i];
            h = h.max(g);
        }
        h
    }

    /// Smoothed max and its gradient; `scratch` must hold `dim` values.
    fn smooth_eval(&self, x: &[f64], lambda: f64, mu: f64, grad: &mut [f64]) -> f64 {
        let m = self.len();
        // First pass: raw max for the log-sum-exp shift.
        let mut hmax = f64::NEG_INFINITY;
        for i in 0..m {
            let (a, b) = self.focus_pair(i);
            let g = dist(x, a) + dist(x, b) - lambda * self.weights[i];
            if g > hmax {
                hmax = g;
            }
        }
        grad.fill(0.0);
        let mut sum = 0.0;
        for i in 0..m {
            let (a, b) = self.focus_pair(i);
            let (da, db) = (dist(x, a), dist(x, b));
            let g = da + db - lambda * self.weights[i];
            let w = ((g - hmax) / mu).exp();
            if w <= 0.0 {
                continue;
            }
            sum += w;
            for k in 0..self.dim {
                let mut gk = 0.0;
                if da > 0.0 {
                    gk += (x[k] - a[k]) / da;
                }
                if db > 0.0 {
                    gk += (x[k] - b[k]) / db;
                }
                grad[k] += w * gk;
            }
        }
        for k in 0..self.dim {
            grad[k] /= sum;
        }
        hmax + mu * sum.ln()
    }

    /// Midpoint of constraint `i`'s foci (the ellipse center).
    fn midpoint(&self, i: usize) -> Vec<f64> {
        let (a, b) = self.focus_pair(i);
        a.iter().zip(b).map(|(u, v)| 0.5 * (u + v)).collect()
    }

    /// Centers of the two constraints most violated at `x`.
    fn most_violated_centers(&self, x: &[f64], lambda: f64) -> Vec<Vec<f64>> {
        let mut scored: Vec<(f64, usize)> = (0..self.len())
            .map(|i| {
                let (a, b) = self.focus_pair(i);
                (dist(x, a) + dist(x, b) - lambda * self.weights[i], i)
            })
            .collect();
        scored.sort_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)));
        scored.iter().take(2).map(|&(_, i)| self.midpoint(i)).collect()
    }

    /// Mean of all foci.
    fn foci_centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        let npts = (self.foci.len() / self.dim) as f64;
        for chunk in self.foci.chunks(self.dim) {
            for (ck, v) in c.iter_mut().zip(chunk) {
                *ck += v;
            }
        }
        for ck in c.iter_mut() {
            *ck /= npts;
        }
        c
    }

    /// Spatial extent of the foci cloud, used to scale smoothing.
    fn extent(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for chunk in self.foci.chunks(self.dim) {
            for k in 0..self.dim {
                lo[k] = lo[k].min(chunk[k]);
                hi[k] = hi[k].max(chunk[k]);
            }
        }
        lo.iter()
            .zip(&hi)
            .map(|(l, h)| h - l)
            .fold(0.0f64, f64::max)
            .max(1e-12)
    }
}

#[inline]
fn dist(x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for (a, b) in x.iter().zip(y) {
        let d = a - b;
        s += d * d;
    }
    s.sqrt()
}

/// Iteration budget across all smoothing stages.
const MAX_EVALS: usize = 10_000;

/// Approximately minimizes `h(x) = max_i (|a_i x| + |x b_i| - lambda w_i)`.
///
/// Returns `(x*, h(x*))` with `h(x*) <= min h + eps_feas`; the level-set
/// intersection is nonempty iff the returned value is nonpositive within
/// `eps_feas`. `warm` seeds the search, typically with the feasible point
/// from an adjacent level.
pub fn feasibility_min(
    constraints: &ConstraintSet,
    lambda: f64,
    eps_feas: f64,
    warm: Option<&Point>,
) -> Result<(Point, f64)> {
    if constraints.is_empty() {
        return Err(Error::InvalidInput("no constraints".into()));
    }
    if !(lambda >= 1.0) {
        return Err(Error::EmptyLevelSet(lambda));
    }
    let dim = constraints.dim();

    // Multi-start: foci centroid, the two most-violated ellipse centers,
    // and the caller's warm start; begin from the best of them.
    let centroid = constraints.foci_centroid();
    let mut starts = vec![centroid.clone()];
    starts.extend(constraints.most_violated_centers(&centroid, lambda));
    if let Some(w) = warm {
        if w.dim() == dim {
            starts.push(w.coords().to_vec());
        }
    }
    let mut x = starts[0].clone();
    let mut best_h = constraints.max_violation(&x, lambda);
    for s in &starts[1..] {
        let h = constraints.max_violation(s, lambda);
        if h < best_h {
            best_h = h;
            x = s.clone();
        }
    }

    let scale = constraints.extent();
    let m_ln = ((constraints.len() + 1) as f64).ln();
    let mu_final = (eps_feas / (2.0 * m_ln)).max(1e-15 * scale);
    let mut mus = Vec::new();
    let mut mu = (1e-3 * scale).max(mu_final);
    loop {
        mus.push(mu);
        if mu <= mu_final {
            break;
        }
        mu = (mu * 1e-2).max(mu_final);
    }

    // Descend the smoothing schedule, stopping as soon as the sign of the
    // minimum is certain: the smoothed value overestimates the raw max by
    // at most mu * ln m, so a raw value at or below zero certifies
    // feasibility and a smoothed minimum well above the bias certifies
    // infeasibility.
    let mut evals = 0usize;
    let mut stalled = false;
    for (stage, &mu) in mus.iter().enumerate() {
        stalled = bfgs_stage(constraints, lambda, mu, &mut x, &mut evals, MAX_EVALS)?;
        let h = constraints.max_violation(&x, lambda);
        if h <= 0.0 || h > 3.0 * mu * m_ln + eps_feas {
            return Ok((Point::new(x)?, h));
        }
        if evals >= MAX_EVALS && stage + 1 < mus.len() {
            return Err(Error::SolverStalled(format!(
                "evaluation budget exhausted mid-schedule at h = {h:.3e}, lambda = {lambda}"
            )));
        }
    }
    let h = constraints.max_violation(&x, lambda);
    if stalled && h > 1e-6 * scale {
        return Err(Error::SolverStalled(format!(
            "no descent progress at h = {h:.3e}, lambda = {lambda}"
        )));
    }
    Ok((Point::new(x)?, h))
}

/// One BFGS descent on the smoothed objective at fixed `mu`.
///
/// Stops when the objective stops improving at the resolution the current
/// smoothing supports. Returns true when no meaningful progress was made.
fn bfgs_stage(
    constraints: &ConstraintSet,
    lambda: f64,
    mu: f64,
    x: &mut Vec<f64>,
    evals: &mut usize,
    max_evals: usize,
) -> Result<bool> {
    let dim = constraints.dim();
    let mut hinv = identity(dim);
    let mut grad = vec![0.0; dim];
    let mut f = constraints.smooth_eval(x, lambda, mu, &mut grad);
    *evals += 1;
    let f_start = f;
    let ftol = (0.02 * mu).max(1e-16 * (1.0 + f.abs()));
    let mut flat_steps = 0;

    for _ in 0..120 {
        if *evals >= max_evals {
            break;
        }
        let gnorm = norm(&grad);
        if gnorm <= 1e-13 {
            break;
        }
        // Descent direction -H g.
        let mut dir = vec![0.0; dim];
        for r in 0..dim {
            for c in 0..dim {
                dir[r] -= hinv[r * dim + c] * grad[c];
            }
        }
        let mut slope: f64 = dir.iter().zip(&grad).map(|(d, g)| d * g).sum();
        if slope >= 0.0 {
            // Restart on a non-descent direction.
            hinv = identity(dim);
            for (d, g) in dir.iter_mut().zip(&grad) {
                *d = -g;
            }
            slope = -gnorm * gnorm;
        }

        // Armijo backtracking.
        let mut step = 1.0;
        let mut new_x;
        let mut new_f;
        let mut new_grad = vec![0.0; dim];
        let mut line_search_failed = false;
        loop {
            new_x = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect::<Vec<_>>();
            new_f = constraints.smooth_eval(&new_x, lambda, mu, &mut new_grad);
            *evals += 1;
            if new_f <= f + 1e-4 * step * slope || *evals >= max_evals {
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                line_search_failed = true;
                break;
            }
        }
        if line_search_failed {
            break;
        }

        let s: Vec<f64> = new_x.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-14 * norm(&s) * norm(&y) {
            bfgs_update(&mut hinv, &s, &y, sy, dim);
        }
        let drop = f - new_f;
        *x = new_x;
        f = new_f;
        grad = new_grad;
        if drop <= ftol {
            flat_steps += 1;
            if flat_steps >= 2 {
                break;
            }
        } else {
            flat_steps = 0;
        }
    }
    Ok(f >= f_start - ftol)
}

fn identity(dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = 1.0;
    }
    m
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// H <- (I - r s y^T) H (I - r y s^T) + r s s^T with r = 1/(s.y).
fn bfgs_update(hinv: &mut [f64], s: &[f64], y: &[f64], sy: f64, dim: usize) {
    let rho = 1.0 / sy;
    // t = H y
    let mut t = vec![0.0; dim];
    for r in 0..dim {
        for c in 0..dim {
            t[r] += hinv[r * dim + c] * y[c];
        }
    }
    let yty: f64 = y.iter().zip(&t).map(|(a, b)| a * b).sum();
    for r in 0..dim {
        for c in 0..dim {
            hinv[r * dim + c] += -rho * (s[r] * t[c] + t[r] * s[c])
                + rho * rho * yty * s[r] * s[c]
                + rho * s[r] * s[c];
        }
    }
}
