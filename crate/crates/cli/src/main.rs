//! `dilation` — star dilation evaluation and center optimization.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dilation_core::{
    evaluate_brute, evaluate_fast, solve_bisection, solve_chan, solve_constrained,
    solve_constrained_brute, EvalConstants, PointSet, Profile, QcpConfig,
};

use dilation_cli::bench::{run_bench, Suite};
use dilation_cli::gen::{generate, Kind};
use dilation_cli::io::{format_points, parse_center, parse_points};
use dilation_cli::output::*;
use dilation_cli::svg;

#[derive(Parser)]
#[command(
    name = "dilation",
    about = "Exact star dilation and dilation-minimizing centers",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Fast,
    Safe,
}

impl ProfileArg {
    fn to_profile(self) -> Profile {
        match self {
            ProfileArg::Fast => Profile::Fast,
            ProfileArg::Safe => Profile::Safe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMethod {
    Fast,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum CenterMethodArg {
    Chan,
    Bisect,
}

#[derive(Args)]
struct SeedArg {
    /// Seed for randomized choices; DILATION_SEED is the fallback.
    #[arg(long)]
    seed: Option<u64>,
}

impl SeedArg {
    fn resolve(&self) -> u64 {
        self.seed
            .or_else(|| std::env::var("DILATION_SEED").ok().and_then(|s| s.parse().ok()))
            .unwrap_or(0)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the dilation of the star with the given center.
    Eval {
        file: PathBuf,
        /// Center coordinates, e.g. "0.5,0.5".
        #[arg(long)]
        center: String,
        #[arg(long, value_enum, default_value_t = EvalMethod::Fast)]
        method: EvalMethod,
        #[arg(long, value_enum, default_value_t = ProfileArg::Fast)]
        profile: ProfileArg,
    },
    /// Find the dilation-minimizing center anywhere in space.
    Center {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CenterMethodArg::Chan)]
        method: CenterMethodArg,
        /// Relative tolerance on the optimal dilation.
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = ProfileArg::Fast)]
        profile: ProfileArg,
    },
    /// Find the dilation-minimizing center among the input points (2-D).
    Vertex {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = EvalMethod::Fast)]
        method: EvalMethod,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = ProfileArg::Fast)]
        profile: ProfileArg,
    },
    /// Generate a deterministic point set.
    Gen {
        /// uniform | clustered | collinear | annular
        #[arg(long)]
        kind: Kind,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw the star, optionally with the improvement region at a level.
    Render {
        file: PathBuf,
        #[arg(long)]
        center: Option<String>,
        #[arg(long, default_value = "out.svg")]
        svg: PathBuf,
        /// Dilation level for the region overlay.
        #[arg(long)]
        region: Option<f64>,
    },
    /// Time a suite over instance sizes and fit the log-log slope.
    Bench {
        /// eval | eval-brute | center | vertex
        #[arg(long)]
        suite: Suite,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        seeds: usize,
        #[arg(long, value_enum, default_value_t = ProfileArg::Fast)]
        profile: ProfileArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(obj) => {
            println!("{}", serde_json::to_string(&obj).expect("error object serializes"));
            eprintln!("error: {}", obj.error.message);
            ExitCode::from(1)
        }
    }
}

fn fail(kind: &str, e: impl ToString) -> ErrorObject {
    ErrorObject::new(kind, e.to_string())
}

fn load(file: &PathBuf) -> Result<PointSet, ErrorObject> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| fail("io", format!("{}: {e}", file.display())))?;
    parse_points(&text).map_err(|e| fail("parse", e))
}

fn constants(profile: ProfileArg, dim: usize) -> Result<EvalConstants, ErrorObject> {
    EvalConstants::for_profile(profile.to_profile(), dim).map_err(|e| fail("constants", e))
}

fn emit<T: serde::Serialize>(payload: &T, summary: String) -> Result<(), ErrorObject> {
    println!(
        "{}",
        serde_json::to_string(payload).map_err(|e| fail("serialize", e))?
    );
    eprintln!("{summary}");
    Ok(())
}

fn run(cmd: Cmd) -> Result<(), ErrorObject> {
    match cmd {
        Cmd::Eval { file, center, method, profile } => {
            let set = load(&file)?;
            let c = parse_center(&center).map_err(|e| fail("usage", e))?;
            if c.dim() != set.dim() {
                return Err(fail(
                    "usage",
                    format!("center has dimension {}, points have {}", c.dim(), set.dim()),
                ));
            }
            let consts = constants(profile, set.dim())?;
            let start = Instant::now();
            let (rep, method_name) = match method {
                EvalMethod::Fast => (
                    evaluate_fast(&set, &c, &consts).map_err(|e| fail("eval", e))?,
                    "fast",
                ),
                EvalMethod::Brute => {
                    (evaluate_brute(&set, &c).map_err(|e| fail("eval", e))?, "brute")
                }
            };
            let out = EvalOutput {
                dilation: rep.dilation,
                witness: rep.witness,
                n: set.len(),
                method: method_name,
                profile: consts.profile.as_str(),
                time_ns: start.elapsed().as_nanos(),
            };
            emit(&out, format!("dilation {:.9} over {} leaves", out.dilation, out.n))
        }
        Cmd::Center { file, method, eps, seed, profile } => {
            let set = load(&file)?;
            if set.len() < 2 {
                return Err(fail("usage", "center optimization needs at least 2 points"));
            }
            let consts = constants(profile, set.dim())?;
            let mut cfg = QcpConfig::with_seed(seed.resolve());
            if let Some(e) = eps {
                cfg = QcpConfig::new(e, cfg.eps_feas, cfg.base_case_size, cfg.rng_seed)
                    .map_err(|e| fail("usage", e))?;
            }
            let start = Instant::now();
            let r = match method {
                CenterMethodArg::Chan => solve_chan(&set, &cfg, &consts),
                CenterMethodArg::Bisect => solve_bisection(&set, &cfg, &consts),
            }
            .map_err(|e| fail("solve", e))?;
            let out = CenterOutput {
                center: r.center.coords().to_vec(),
                dilation: r.dilation,
                witness: r.witness,
                method: r.method.as_str(),
                iterations: r.iterations,
                seed: r.seed,
                fell_back: r.fell_back,
                time_ns: start.elapsed().as_nanos(),
            };
            emit(
                &out,
                format!("optimal dilation {:.9} at {:?}", out.dilation, out.center),
            )
        }
        Cmd::Vertex { file, method, seed, profile } => {
            let set = load(&file)?;
            let consts = constants(profile, set.dim())?;
            let seed = seed.resolve();
            let start = Instant::now();
            let r = match method {
                EvalMethod::Fast => {
                    solve_constrained(&set, &QcpConfig::with_seed(seed), &consts, seed)
                }
                EvalMethod::Brute => solve_constrained_brute(&set),
            }
            .map_err(|e| fail("solve", e))?;
            let out = VertexOutput {
                center_index: r.center_index,
                center: set.point(r.center_index).coords().to_vec(),
                dilation: r.dilation,
                iterations: r.loop_iterations,
                seed,
                fell_back: r.fell_back,
                time_ns: start.elapsed().as_nanos(),
            };
            emit(
                &out,
                format!(
                    "best vertex center is index {} with dilation {:.9}",
                    out.center_index, out.dilation
                ),
            )
        }
        Cmd::Gen { kind, n, dim, seed, out } => {
            let seed = seed.resolve();
            let set = generate(kind, n, dim, seed).map_err(|e| fail("gen", e))?;
            let text = format_points(&set);
            match &out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
                    let payload = GenOutput {
                        kind: kind.as_str(),
                        n,
                        dim,
                        seed,
                        path: Some(path.display().to_string()),
                    };
                    emit(&payload, format!("wrote {n} points to {}", path.display()))
                }
                None => {
                    print!("{text}");
                    eprintln!("generated {n} points ({}, d={dim}, seed {seed})", kind.as_str());
                    Ok(())
                }
            }
        }
        Cmd::Render { file, center, svg: svg_path, region } => {
            let set = load(&file)?;
            let c = center
                .map(|t| parse_center(&t))
                .transpose()
                .map_err(|e| fail("usage", e))?;
            let start = Instant::now();
            let (svg_text, info) =
                svg::render(&set, c.as_ref(), region).map_err(|e| fail("render", e))?;
            std::fs::write(&svg_path, svg_text)
                .map_err(|e| fail("io", format!("{}: {e}", svg_path.display())))?;
            let out = RenderOutput {
                svg_path: svg_path.display().to_string(),
                info,
                time_ns: start.elapsed().as_nanos(),
            };
            emit(&out, format!("wrote {}", svg_path.display()))
        }
        Cmd::Bench { suite, sizes, seeds, profile } => {
            if sizes.is_empty() {
                return Err(fail("usage", "at least one size is required"));
            }
            let consts = constants(profile, 2)?;
            let report = run_bench(suite, &sizes, seeds.max(1), &consts)
                .map_err(|e| fail("bench", e))?;
            emit(
                &report,
                format!(
                    "suite {} log-log slope {:.3}",
                    report.suite, report.loglog_slope
                ),
            )
        }
    }
}
