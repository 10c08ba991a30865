//! Deterministic instance generators for tests and benchmarks.

use std::collections::HashSet;
use std::str::FromStr;

use dilation_core::vertex::rho_for_gamma;
use dilation_core::{Error, Point, PointSet, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Transverse noise amplitude of the collinear generator.
pub const COLLINEAR_JITTER: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Uniform in the unit cube.
    Uniform,
    /// ceil(sqrt(n)) tight Gaussian blobs; stresses the nearest-neighbor
    /// generator.
    Clustered,
    /// A jittered line segment.
    Collinear,
    /// Points on exponentially spaced shells; stresses the annulus
    /// machinery.
    Annular,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Uniform, Kind::Clustered, Kind::Collinear, Kind::Annular];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Uniform => "uniform",
            Kind::Clustered => "clustered",
            Kind::Collinear => "collinear",
            Kind::Annular => "annular",
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Kind::Uniform),
            "clustered" => Ok(Kind::Clustered),
            "collinear" => Ok(Kind::Collinear),
            "annular" => Ok(Kind::Annular),
            other => Err(format!("unknown kind '{other}'")),
        }
    }
}

/// Two independent standard normals from two uniforms.
fn box_muller(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let mut v = Vec::with_capacity(dim);
        while v.len() < dim {
            let (a, b) = box_muller(rng);
            v.push(a);
            if v.len() < dim {
                v.push(b);
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            return v;
        }
    }
}

/// Generates `n` pairwise-distinct points in dimension `dim`,
/// deterministic for a fixed `(kind, n, dim, seed)`.
pub fn generate(kind: Kind, n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    if n < 1 {
        return Err(Error::TooFewPoints { need: 1, got: n });
    }
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(n);
    let mut points: Vec<Point> = Vec::with_capacity(n);

    // Shared setup per kind.
    let nblobs = (n as f64).sqrt().ceil() as usize;
    let blob_centers: Vec<Vec<f64>> = (0..nblobs)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let blob_sigma = 0.25 / nblobs as f64;
    let line_origin: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let line_dir = unit_vector(&mut rng, dim);
    let shells = ((n as f64 + 1.0).ln().ceil() as usize).max(3);
    let rho = rho_for_gamma(4.0);

    let mut index = 0usize;
    let mut attempts = 0usize;
    while points.len() < n {
        attempts += 1;
        if attempts > 100 * n + 1000 {
            return Err(Error::InvalidInput(
                "generator failed to produce distinct points".into(),
            ));
        }
        let coords: Vec<f64> = match kind {
            Kind::Uniform => (0..dim).map(|_| rng.gen::<f64>()).collect(),
            Kind::Clustered => {
                let c = &blob_centers[index % nblobs];
                let mut v = Vec::with_capacity(dim);
                while v.len() < dim {
                    let (a, b) = box_muller(&mut rng);
                    v.push(a);
                    if v.len() < dim {
                        v.push(b);
                    }
                }
                c.iter().zip(&v).map(|(ck, nk)| ck + blob_sigma * nk).collect()
            }
            Kind::Collinear => {
                let t = if n == 1 { 0.5 } else { index as f64 / (n - 1) as f64 }
                    + rng.gen::<f64>() * 1e-6;
                let amp = COLLINEAR_JITTER / (dim as f64).sqrt();
                line_origin
                    .iter()
                    .zip(&line_dir)
                    .map(|(o, u)| o + (t - 0.5) * u + (rng.gen::<f64>() * 2.0 - 1.0) * amp)
                    .collect()
            }
            Kind::Annular => {
                let shell = index % shells;
                let radius = 0.05 * rho.powi(shell as i32);
                let u = unit_vector(&mut rng, dim);
                u.iter().map(|uk| 0.5 + radius * uk).collect()
            }
        };
        let key: Vec<u64> = coords.iter().map(|c| c.to_bits()).collect();
        if !seen.insert(key) {
            continue;
        }
        points.push(Point::new(coords)?);
        index += 1;
    }
    PointSet::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = generate(Kind::Uniform, 4, 2, 7).unwrap();
        let b = generate(Kind::Uniform, 4, 2, 7).unwrap();
        for (p, q) in a.points().iter().zip(b.points()) {
            assert_eq!(p.coords(), q.coords());
        }
        let c = generate(Kind::Uniform, 4, 2, 8).unwrap();
        assert!(a.points().iter().zip(c.points()).any(|(p, q)| p.coords() != q.coords()));
    }

    #[test]
    fn collinear_stays_within_jitter() {
        let set = generate(Kind::Collinear, 3, 2, 0).unwrap();
        // Residual of the middle point against the line through the
        // endpoints stays within the jitter scale.
        let a = set.point(0).coords();
        let b = set.point(2).coords();
        let p = set.point(1).coords();
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = (dx * dx + dy * dy).sqrt();
        let cross = ((p[0] - a[0]) * dy - (p[1] - a[1]) * dx).abs() / len;
        assert!(cross <= 4.0 * COLLINEAR_JITTER, "residual {cross}");
    }

    #[test]
    fn annular_shell_ratios_match_rho() {
        let set = generate(Kind::Annular, 100, 2, 1).unwrap();
        let mut radii: Vec<f64> = set
            .points()
            .iter()
            .map(|p| {
                let dx = p.x() - 0.5;
                let dy = p.y() - 0.5;
                (dx * dx + dy * dy).sqrt()
            })
            .collect();
        radii.sort_by(f64::total_cmp);
        // Cluster into shells: new shell when the radius jumps by > 10%.
        let mut shell_means = vec![];
        let mut acc = vec![radii[0]];
        for &r in &radii[1..] {
            if r > acc.last().unwrap() * 1.1 {
                shell_means.push(acc.iter().sum::<f64>() / acc.len() as f64);
                acc.clear();
            }
            acc.push(r);
        }
        shell_means.push(acc.iter().sum::<f64>() / acc.len() as f64);
        let rho = rho_for_gamma(4.0);
        assert!(shell_means.len() >= 3);
        for w in shell_means.windows(2) {
            let ratio = w[1] / w[0];
            assert!((ratio - rho).abs() < 0.1 * rho, "ratio {ratio} vs rho {rho}");
        }
    }

    #[test]
    fn clustered_and_3d_are_valid() {
        let set = generate(Kind::Clustered, 64, 3, 5).unwrap();
        assert_eq!(set.len(), 64);
        assert_eq!(set.dim(), 3);
    }
}
