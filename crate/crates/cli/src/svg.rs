//! Static SVG figures: the star, and optionally the improvement region
//! (pair ellipses plus the arc-ring envelope) at a given level.

use dilation_core::center::ConstraintSet;
use dilation_core::{
    build_arc_ring, ellipse_from_pair, feasibility_min, Ellipse, Error, Point, PointSet, Result,
};

#[derive(Debug, Clone, serde::Serialize)]
pub struct RenderInfo {
    pub n: usize,
    pub edges: usize,
    pub markers: usize,
    pub region_requested: bool,
    pub region_drawn: bool,
    pub arc_count: usize,
}

/// Renders leaves, star edges, and center marker; with `region_level`,
/// overlays all pair ellipses at that level and the envelope of their
/// intersection. Returns the SVG text plus element counts.
///
/// When the level is below the optimal dilation the region is empty; the
/// figure is still produced, with a warning flag instead of an envelope.
pub fn render(
    set: &PointSet,
    center: Option<&Point>,
    region_level: Option<f64>,
) -> Result<(String, RenderInfo)> {
    if set.dim() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: set.dim() });
    }

    // Bounding box over leaves and center.
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut expand = |p: &Point| {
        x0 = x0.min(p.x());
        y0 = y0.min(p.y());
        x1 = x1.max(p.x());
        y1 = y1.max(p.y());
    };
    for p in set.points() {
        expand(p);
    }
    if let Some(c) = center {
        expand(c);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = 0.12 * span;
    let (vx, vy, vw, vh) = (x0 - margin, y0 - margin, (x1 - x0) + 2.0 * margin, (y1 - y0) + 2.0 * margin);
    let stroke = 0.004 * span;
    let marker_r = 0.012 * span;

    let mut body = String::new();
    let mut edges = 0usize;
    let mut markers = 0usize;

    // Region overlay first so the star draws on top.
    let mut region_drawn = false;
    let mut arc_count = 0usize;
    if let Some(level) = region_level {
        let ellipses = all_pair_ellipses(set, level)?;
        for e in &ellipses {
            body.push_str(&ellipse_element(e, stroke));
        }
        match region_reference(set, level) {
            Some(r) => {
                let ring = build_arc_ring(ellipses, &r)?;
                arc_count = ring.arc_count();
                body.push_str(&envelope_polyline(&ring, stroke));
                region_drawn = true;
            }
            None => {
                eprintln!("warning: region level {level} is below the optimum; region is empty");
            }
        }
    }

    if let Some(c) = center {
        for p in set.points() {
            body.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#9aa0a6\" stroke-width=\"{stroke}\"/>\n",
                c.x(), c.y(), p.x(), p.y()
            ));
            edges += 1;
        }
    }
    for p in set.points() {
        body.push_str(&format!(
            "  <circle class=\"leaf\" cx=\"{}\" cy=\"{}\" r=\"{marker_r}\" fill=\"#1a73e8\"/>\n",
            p.x(), p.y()
        ));
        markers += 1;
    }
    if let Some(c) = center {
        body.push_str(&format!(
            "  <circle class=\"center\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#d93025\"/>\n",
            c.x(), c.y(), 1.4 * marker_r
        ));
        markers += 1;
    }

    let svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx} {vy} {vw} {vh}\">\n{body}</svg>\n"
    );
    let info = RenderInfo {
        n: set.len(),
        edges,
        markers,
        region_requested: region_level.is_some(),
        region_drawn,
        arc_count,
    };
    Ok((svg, info))
}

fn all_pair_ellipses(set: &PointSet, level: f64) -> Result<Vec<Ellipse>> {
    if set.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: set.len() });
    }
    if set.len() > 64 {
        return Err(Error::InvalidInput(
            "region rendering draws all pair ellipses; use at most 64 points".into(),
        ));
    }
    let mut out = Vec::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            out.push(ellipse_from_pair(set.point(i), set.point(j), level)?);
        }
    }
    Ok(out)
}

/// A point strictly inside every level ellipse, when one exists.
fn region_reference(set: &PointSet, level: f64) -> Option<Point> {
    let constraints = ConstraintSet::all_pairs(set).ok()?;
    let (x, h) = feasibility_min(&constraints, level, 1e-10, None).ok()?;
    if h < 0.0 {
        Some(x)
    } else {
        None
    }
}

fn ellipse_element(e: &Ellipse, stroke: f64) -> String {
    let c = e.center();
    let fd = e.focal_distance();
    let angle_deg = ((e.focus_b().y() - e.focus_a().y()) / fd)
        .atan2((e.focus_b().x() - e.focus_a().x()) / fd)
        .to_degrees();
    format!(
        "  <ellipse cx=\"0\" cy=\"0\" rx=\"{}\" ry=\"{}\" transform=\"translate({} {}) rotate({angle_deg})\" fill=\"none\" stroke=\"#c5a6e8\" stroke-width=\"{stroke}\"/>\n",
        e.semi_major(), e.semi_minor(), c.x(), c.y()
    )
}

fn envelope_polyline(ring: &dilation_core::ArcRing, stroke: f64) -> String {
    let r = ring.ref_point();
    let mut pts = String::new();
    for arc in ring.arcs() {
        let steps = (((arc.theta_hi - arc.theta_lo) / 0.02).ceil() as usize).clamp(4, 512);
        for s in 0..=steps {
            let theta = arc.theta_lo + (arc.theta_hi - arc.theta_lo) * s as f64 / steps as f64;
            let rad = ring.envelope_radius(theta);
            let (x, y) = (r.x() + rad * theta.cos(), r.y() + rad * theta.sin());
            pts.push_str(&format!("{x},{y} "));
        }
    }
    format!(
        "  <polyline class=\"envelope\" points=\"{}\" fill=\"none\" stroke=\"#188038\" stroke-width=\"{}\"/>\n",
        pts.trim_end(),
        1.5 * stroke
    )
}

/// Sampled consistency check used by tests: the drawn envelope equals the
/// direct minimum of the radial boundaries.
pub fn envelope_matches_direct_min(set: &PointSet, level: f64, samples: usize) -> Result<bool> {
    let ellipses = all_pair_ellipses(set, level)?;
    let Some(r) = region_reference(set, level) else {
        return Ok(false);
    };
    let ring = build_arc_ring(ellipses.clone(), &r)?;
    for s in 0..samples {
        let theta = s as f64 / samples as f64 * std::f64::consts::TAU;
        let env = ring.envelope_radius(theta);
        let direct = ellipses
            .iter()
            .map(|e| e.radial_distance(&r, theta).unwrap())
            .fold(f64::INFINITY, f64::min);
        if (env - direct).abs() > 1e-9 * direct.max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}
