//! Exact dilation of Euclidean stars and dilation-minimizing center search.
//!
//! A star is a graph with a single internal vertex (the center) joined to
//! every leaf. The dilation between two leaves `a`, `b` through center `c`
//! is `(|ac| + |cb|) / |ab|`; the star's dilation is the maximum over all
//! leaf pairs. This crate provides:
//!
//! * [`eval`] — exact evaluation of a star's dilation: a quadratic
//!   brute-force oracle and a near-linear candidate-pair algorithm that
//!   combines all-points k-nearest-neighbors with distance-rank windows.
//! * [`center`] — the dilation-minimizing center anywhere in `R^d`, via a
//!   bisection oracle over the convex pair constraints and a randomized
//!   partition solver that only needs the evaluation routine as a decision
//!   procedure.
//! * [`vertex`] — the dilation-minimizing center among the input points in
//!   the plane, via randomized pruning with an ellipse-intersection region
//!   represented as an angular arc ring.
//! * [`geometry`] — the shared primitives: points, pair dilation, ellipses
//!   as dilation level sets, implicit conics, and conic intersection.

pub mod center;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod vertex;

pub use center::{
    decision, feasibility_min, objective, solve_bisection, solve_chan, CenterMethod, ConstraintSet,
    OptResult, QcpConfig,
};
pub use error::{Error, Result};
pub use eval::{
    all_knn, derive_constants, evaluate_brute, evaluate_fast, DerivedConstants, DilationReport,
    EvalConstants, Profile,
};
pub use vertex::{
    annulus_index, build_arc_ring, select_region_ellipses, solve_constrained,
    solve_constrained_brute, Arc, ArcRing, ConstrainedResult, RegionSelection,
};
pub use geometry::{
    conic_intersections, distance, ellipse_from_pair, ellipse_to_conic, pair_dilation, Conic,
    Ellipse, Point, PointSet,
};

/// Relative tolerance for boundary comparisons in geometric predicates.
pub const EPS_GEOM: f64 = 1e-9;

/// Roots (in parameter space) closer than this are collapsed to one.
pub const EPS_ROOT: f64 = 1e-7;
