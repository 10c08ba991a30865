//! Command-line toolkit around the star dilation library: point file I/O,
//! deterministic instance generation, SVG figures, and benchmarks.

pub mod bench;
pub mod gen;
pub mod io;
pub mod output;
pub mod svg;
