//! Real roots of low-degree polynomials by derivative bracketing.
//!
//! Roots a..re isolated between consecutive stationary points (found
//! recursively) and polished by bisection with Newton acceleration, so
//! every simple real root inside the Cauchy bound is found. Stationary
//! points where the polynomial nearly vanishes are reported as collapsed
//! (double) roots under a caller-supplied relative tolerance.

/// Evaluates an ascending-coefficient polynomial at `x` (Horner).
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Sum of absolute term magnitudes at `x`; a conditioning scale for
/// residual tests.
pub fn poly_scale(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0f64;
    let mut xp = 1.0;
    for &c in coeffs {
        acc += (c * xp).abs();
        xp *= x;
    }
    acc.max(f64::MIN_POSITIVE)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

/// All real roots of a polynomial of degree <= 4, ascending coefficients.
///
/// `stat_tol` is the relative tolerance under which a stationary point
/// with a near-zero value counts as a (double) root; pass a small value
/// (e.g. 1e-9) for strict roots or a larger one to harvest near-tangency
/// candidates for downstream polishing.
pub fn real_roots_upto4(coeffs: &[f64], stat_tol: f64) -> Vec<f64> {
    assert!(coeffs.len() <= 5, "degree at most 4");
    // Trim to the true degree, treating relatively tiny leaders as zero.
    let max_abs = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max_abs == 0.0 {
        return Vec::new();
    }
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].abs() <= 1e-13 * max_abs {
        deg -= 1;
    }
    let c = &coeffs[..=deg];
    match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => quadratic_real_roots(c[2], c[1], c[0]),
        _ => bracketed_roots(c, stat_tol),
    }
}

/// Real roots of `a x^2 + b x + c`, numerically stable form.
pub fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + sq.copysign(if b == 0.0 { 1.0 } else { b }));
    let mut roots = Vec::with_capacity(2);
    if q != 0.0 {
        roots.push(q / a);
        roots.push(c / q);
    } else {
        // b == 0 and disc == 0 (or c == 0): symmetric or zero roots.
        roots.push(-0.5 * sq / a - 0.5 * b / a);
        roots.push(0.5 * sq / a - 0.5 * b / a);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Degree 3 or 4: isolate roots between stationary points, then polish.
fn bracketed_roots(c: &[f64], stat_tol: f64) -> Vec<f64> {
    let deg = c.len() - 1;
    let lead = c[deg];
    // Cauchy bound on root magnitude.
    let bound = 1.0 + c[..deg].iter().fold(0.0f64, |m, ci| m.max((ci / lead).abs()));

    let mut stationary = real_roots_upto4(&derivative(c), 1e-9);
    stationary.retain(|s| s.is_finite() && s.abs() <= bound);
    stationary.sort_by(f64::total_cmp);

    let mut grid = Vec::with_capacity(stationary.len() + 2);
    grid.push(-bound);
    grid.extend_from_slice(&stationary);
    grid.push(bound);

    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let (flo, fhi) = (poly_eval(c, lo), poly_eval(c, hi));
        if flo == 0.0 {
            roots.push(lo);
        }
        if flo * fhi < 0.0 {
            roots.push(refine_root(c, lo, hi, flo));
        }
    }
    let fend = poly_eval(c, bound);
    if fend == 0.0 {
        roots.push(bound);
    }
    // Stationary points sitting on the axis are double roots (or collapsed
    // near-tangencies under a loose tolerance).
    for &s in &stationary {
        let v = poly_eval(c, s);
        if v.abs() <= stat_tol * poly_scale(c, s) {
            roots.push(s);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())));
    roots
}

/// Bisection with Newton acceleration inside a sign-change bracket.
fn refine_root(c: &[f64], mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let dc = derivative(c);
    let mut sign_lo = flo.is_sign_negative();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..120 {
        let f = poly_eval(c, x);
        if f == 0.0 {
            return x;
        }
        if f.is_sign_negative() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
        // Prefer a Newton step when it stays inside the bracket.
        let d = poly_eval(&dc, x);
        let newton = x - f / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        // Keep the invariant sign_lo == sign(f(lo)).
        sign_lo = poly_eval(c, lo).is_sign_negative();
    }
    x
}
