//! Wall-clock benchmark harness with log-log slope fitting.

use std::str::FromStr;
use std::time::Instant;

use dilation_core::{
    evaluate_brute, evaluate_fast, solve_chan, solve_constrained, EvalConstants, QcpConfig, Result,
};
use serde::Serialize;

use crate::gen::{generate, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Eval,
    EvalBrute,
    Center,
    Vertex,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Eval => "eval",
            Suite::EvalBrute => "eval-brute",
            Suite::Center => "center",
            Suite::Vertex => "vertex",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "eval" => Ok(Suite::Eval),
            "eval-brute" => Ok(Suite::EvalBrute),
            "center" => Ok(Suite::Center),
            "vertex" => Ok(Suite::Vertex),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub median_ns: u128,
    pub runs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_iterations: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub suite: String,
    pub rows: Vec<BenchRow>,
    pub loglog_slope: f64,
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

pub fn run_bench(suite: Suite, sizes: &[usize], seeds: usize, consts: &EvalConstants) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut times = Vec::with_capacity(seeds);
        let mut iteration_sum = 0.0f64;
        let mut iteration_runs = 0usize;
        for seed in 0..seeds as u64 {
            let set = generate(Kind::Uniform, n, 2, 10_000 + seed)?;
            let centroid = set.centroid();
            let start = Instant::now();
            match suite {
                Suite::Eval => {
                    let rep = evaluate_fast(&set, &centroid, consts)?;
                    std::hint::black_box(rep.dilation);
                }
                Suite::EvalBrute => {
                    let rep = evaluate_brute(&set, &centroid)?;
                    std::hint::black_box(rep.dilation);
                }
                Suite::Center => {
                    let r = solve_chan(&set, &QcpConfig::with_seed(seed), consts)?;
                    std::hint::black_box(r.dilation);
                }
                Suite::Vertex => {
                    let r = solve_constrained(&set, &QcpConfig::with_seed(seed), consts, seed)?;
                    iteration_sum += r.loop_iterations as f64;
                    iteration_runs += 1;
                    std::hint::black_box(r.dilation);
                }
            }
            times.push(start.elapsed().as_nanos());
        }
        times.sort_unstable();
        rows.push(BenchRow {
            n,
            median_ns: times[times.len() / 2],
            runs: seeds,
            mean_iterations: (iteration_runs > 0)
                .then(|| iteration_sum / iteration_runs as f64),
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n as f64, r.median_ns as f64))
        .collect();
    Ok(BenchReport {
        suite: suite.as_str().to_string(),
        rows,
        loglog_slope: loglog_slope(&pts),
    })
}
