//! Command-line front end. The binary is a thin wrapper over [`run`].
//!
//! Exit codes: 0 ok, 2 input error, 3 inconsistent projections,
//! 4 inconclusive search, 5 no convergence, 6 unstable invariant.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config_geometry::{lift_configuration, PlanarConfiguration, PrismProblem, SixTuple};
use crate::curves::{builtin_curve, PeriodicCurve};
use crate::diagram::{project_diagram, random_generic_diagram, ClosedPolygon, KnotDiagram};
use crate::error::{Error, Result};
use crate::invariants::{a2_of_curve, classify_polygon, A2_DIRECTIONS, CLASSIFY_DIRECTIONS};
use crate::render::{render_svg, RenderOptions};
use crate::search::{
    default_space, find_inscribed_trefoils, scan_planar_events, solve_prism_in, trace_prism_manifold, SearchBudget, SolveOptions, Target,
    TraceOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_NO_CONVERGENCE: i32 = 5;
pub const EXIT_UNSTABLE: i32 = 6;

/// Seed tuple for `prism` and `trace` when none is given.
pub const DEFAULT_SEED_TUPLE: [f64; 6] = [0.01, 0.18, 0.33, 0.52, 0.66, 0.84];

#[derive(Parser, Debug)]
#[command(name = "hexaknot", version, about = "Inscribed hexagonal trefoils on closed space curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance override `NAME=VALUE` (also accepted as `--tol.NAME VALUE`).
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Knot type of a closed polygon (JSON or CSV vertex list).
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = CLASSIFY_DIRECTIONS)]
        directions: usize,
        /// Also write the first projection as diagram JSON.
        #[arg(long)]
        diagram_out: Option<PathBuf>,
    },
    /// Random search for inscribed trefoil hexagons; finds as NDJSON.
    Search {
        /// Builtin curve name or curve JSON file.
        curve: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value = "any")]
        target: Target,
        /// Gaussian neighbours tried around each find.
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Solve for six points with concurrent diagonals.
    Prism {
        curve: String,
        /// Six comma-separated parameters.
        #[arg(long)]
        seed_tuple: Option<String>,
    },
    /// Follow the prism solution curve and report planar events.
    Trace {
        curve: String,
        #[arg(long)]
        seed_tuple: Option<String>,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Quadratic Conway coefficient of a curve.
    A2 {
        curve: String,
        #[arg(long, default_value_t = 96)]
        resolution: usize,
        #[arg(long, default_value_t = A2_DIRECTIONS)]
        directions: usize,
    },
    /// SVG of a diagram, polygon or lifted planar configuration JSON.
    Render { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub solve: f64,
    pub angle: f64,
    pub flag: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { solve: 1e-10, angle: 1e-6, flag: 1e-2 }
    }
}

impl Tolerances {
    pub fn parse(overrides: &[String]) -> Result<Self> {
        let mut t = Tolerances::default();
        for o in overrides {
            let (name, value) = o.split_once('=').ok_or_else(|| Error::InvalidArgument(format!("tolerance `{o}` is not NAME=VALUE")))?;
            let v: f64 = value.parse().map_err(|_| Error::InvalidArgument(format!("tolerance `{name}` has non-numeric value `{value}`")))?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("tolerance `{name}` must be positive")));
            }
            match name {
                "solve" => t.solve = v,
                "angle" => t.angle = v,
                "flag" => t.flag = v,
                _ => return Err(Error::InvalidArgument(format!("unknown tolerance `{name}` (solve, angle, flag)"))),
            }
        }
        Ok(t)
    }
}

/// Rewrites `--tol.NAME VALUE` and `--tol.NAME=VALUE` into `--tol NAME=VALUE`.
pub fn normalize_args<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if let Some(rest) = a.strip_prefix("--tol.") {
            out.push("--tol".to_string());
            if rest.contains('=') {
                out.push(rest.to_string());
            } else {
                let v = it.next().unwrap_or_default();
                out.push(format!("{rest}={v}"));
            }
        } else {
            out.push(a);
        }
    }
    out
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InconsistentProjections(_) | Error::GenericityExhausted(_) => EXIT_INCONSISTENT,
        Error::NoConvergence { .. } | Error::OrderingCollapse(..) | Error::TangentDegenerate(_) => EXIT_NO_CONVERGENCE,
        Error::UnstableInvariant(_) => EXIT_UNSTABLE,
        _ => EXIT_INPUT,
    }
}

pub fn load_curve(name: &str) -> Result<PeriodicCurve> {
    match builtin_curve(name) {
        Ok(c) => Ok(c),
        Err(Error::UnknownCurve(_)) if Path::new(name).exists() => {
            let c = PeriodicCurve::from_json(&std::fs::read_to_string(name)?)?;
            c.validate()?;
            Ok(c)
        }
        Err(e) => Err(e),
    }
}

pub fn load_polygon(path: &Path) -> Result<ClosedPolygon> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        ClosedPolygon::from_json(&text)
    } else {
        ClosedPolygon::from_csv(&text)
    }
}

fn parse_tuple(s: Option<&str>) -> Result<[f64; 6]> {
    let Some(s) = s else { return Ok(DEFAULT_SEED_TUPLE) };
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad parameter `{x}` in seed tuple"))))
        .collect::<Result<_>>()?;
    let t: [f64; 6] = v.try_into().map_err(|v: Vec<f64>| Error::InvalidTuple(format!("expected 6 parameters, got {}", v.len())))?;
    SixTuple::new(t)?;
    Ok(t)
}

/// Inputs accepted by `render`.
#[derive(Deserialize, Serialize, Debug)]
#[serde(untagged)]
pub enum RenderInput {
    Diagram(KnotDiagram),
    Lift { points: [[f64; 3]; 6], heights: [f64; 6] },
    Polygon(Vec<[f64; 3]>),
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

fn emit(global: &GlobalArgs, io: &mut Io, text: &str) -> Result<()> {
    match &global.out {
        Some(p) => std::fs::write(p, text)?,
        None => io.stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I: IntoIterator<Item = String>>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let mut io = Io { stdout, stderr };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("HEXA_THREADS") {
        let n: usize = v.parse().map_err(|_| Error::InvalidArgument(format!("HEXA_THREADS=`{v}` is not a count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<i32> {
    let g = &cli.global;
    let tol = Tolerances::parse(&g.tol)?;
    match &cli.command {
        Command::Classify { file, directions, diagram_out } => {
            let poly = load_polygon(file)?;
            let report = classify_polygon(&poly, (*directions).max(1), g.seed)?;
            if let Some(p) = diagram_out {
                let d = random_generic_diagram(&poly, &mut ChaCha8Rng::seed_from_u64(g.seed))?;
                std::fs::write(p, to_json(&d))?;
            }
            let text = if g.json {
                to_json(&report)
            } else {
                let mut s = format!("class: {}\n", report.class);
                for (i, d) in report.directions.iter().enumerate() {
                    s += &format!(
                        "direction {}: crossings {}, writhe {}, jones {}, v2 {}, v3 {}\n",
                        i + 1,
                        d.crossings,
                        d.writhe,
                        d.jones,
                        d.v2,
                        d.v3
                    );
                }
                s
            };
            emit(g, io, &text)?;
            Ok(EXIT_OK)
        }
        Command::Search { curve, budget, target, refine } => {
            let c = load_curve(curve)?;
            let budget = SearchBudget { max_samples: *budget, seed: g.seed, refinement_steps: *refine, target: *target };
            let start = Instant::now();
            let report = thread_pool()?.install(|| find_inscribed_trefoils(&c, &budget))?;
            let mut nd = String::new();
            for f in &report.finds {
                nd += &serde_json::to_string(f).expect("serializable");
                nd.push('\n');
            }
            emit(g, io, &nd)?;
            let secs = start.elapsed().as_secs_f64();
            let s = &report.stats;
            if g.json {
                let summary = serde_json::json!({
                    "stats": s, "target_met": report.target_met, "budget_exhausted": report.budget_exhausted, "seconds": secs,
                });
                writeln!(io.stderr, "{summary}")?;
            } else {
                writeln!(
                    io.stderr,
                    "{} left, {} right in {} samples ({} prescreen hits, {} rejected, {} skipped); {:.2} s; {}",
                    s.left,
                    s.right,
                    s.samples,
                    s.prescreen_hits,
                    s.rejected,
                    s.skipped,
                    secs,
                    if report.target_met { "target met" } else { "inconclusive: budget exhausted" }
                )?;
            }
            Ok(if report.target_met { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Command::Prism { curve, seed_tuple } => {
            let c = load_curve(curve)?;
            let seed = parse_tuple(seed_tuple.as_deref())?;
            let problem = PrismProblem { curve: &c, space: default_space(&c) };
            let (config, stats) = solve_prism_in(&problem, &seed, &SolveOptions { tol: tol.solve, ..SolveOptions::default() })?;
            let text = if g.json {
                to_json(&serde_json::json!({ "configuration": config, "iterations": stats.iterations, "history": stats.history }))
            } else {
                let t: Vec<String> = config.tuple.t.iter().map(|x| format!("{x:.12}")).collect();
                format!(
                    "t: ({})\nresidual: {:.3e}\napex: {:?}\niterations: {}\n{}",
                    t.join(", "),
                    config.residual,
                    config.apex,
                    stats.iterations,
                    if config.degenerate { "degenerate: the six points span fewer than 3 dimensions\n" } else { "" }
                )
            };
            emit(g, io, &text)?;
            Ok(EXIT_OK)
        }
        Command::Trace { curve, seed_tuple, steps, step } => {
            let c = load_curve(curve)?;
            let seed = parse_tuple(seed_tuple.as_deref())?;
            let problem = PrismProblem { curve: &c, space: default_space(&c) };
            let opts = TraceOptions { step: *step, max_steps: *steps, tol: tol.solve, flag_tol: tol.flag, ..TraceOptions::default() };
            let trace = trace_prism_manifold(&problem, &seed, &opts)?;
            let scan = scan_planar_events(&trace, tol.angle);
            let text = if g.json {
                to_json(&serde_json::json!({ "trace": trace, "planar_events": scan }))
            } else {
                let mut classes: Vec<String> = trace.points.iter().filter_map(|p| p.class.map(|c| c.to_string())).collect();
                classes.dedup();
                let mut s = format!(
                    "points: {}\nstop: {:?}\narc length: {:.6}\nclasses along the trace: {}\nplanar events: {}\n",
                    trace.points.len(),
                    trace.stop,
                    trace.points.last().map(|p| p.arc).unwrap_or(0.0),
                    classes.join(" -> "),
                    scan.events.len()
                );
                for e in &scan.events {
                    let ty = e.config_type.map(|t| t.number().to_string()).unwrap_or_else(|| "?".into());
                    s += &format!("  at point {}: type {}, bad {:?}, theta {:.3e}\n", e.index, ty, e.bad, e.theta);
                }
                if scan.two_plane_condition {
                    s += "two-plane condition met\n";
                }
                s
            };
            emit(g, io, &text)?;
            Ok(EXIT_OK)
        }
        Command::A2 { curve, resolution, directions } => {
            let c = load_curve(curve)?;
            let a2 = a2_of_curve(&c, *resolution, None, *directions, g.seed)?;
            let text = if g.json {
                to_json(&serde_json::json!({ "curve": c.label, "a2": a2, "resolution": resolution, "directions": directions }))
            } else {
                format!("{a2}\n")
            };
            emit(g, io, &text)?;
            Ok(EXIT_OK)
        }
        Command::Render { input } => {
            let text = std::fs::read_to_string(input)?;
            let parsed: RenderInput = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
            let (diagram, labels) = match parsed {
                RenderInput::Diagram(d) => (d, vec![]),
                RenderInput::Polygon(v) => {
                    let poly = ClosedPolygon::new(v.iter().map(|p| Vector3::new(p[0], p[1], p[2])).collect())?;
                    (random_generic_diagram(&poly, &mut ChaCha8Rng::seed_from_u64(g.seed))?, vec![])
                }
                RenderInput::Lift { points, heights } => {
                    let cfg = PlanarConfiguration::from_points(points.map(|p| Vector3::new(p[0], p[1], p[2])))?;
                    let lifted = lift_configuration(&cfg, &heights)?;
                    let labels = heights.iter().enumerate().map(|(i, f)| format!("{} (f={f:+.3})", i + 1)).collect();
                    (project_diagram(&lifted, &cfg.plane.normal)?, labels)
                }
            };
            let svg = render_svg(&diagram, &RenderOptions { vertex_labels: labels, title: None });
            emit(g, io, &svg)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_flags_are_rewritten() {
        let a = normalize_args(["x", "--tol.solve", "1e-8", "--tol.angle=1e-3"].map(String::from));
        assert_eq!(a, ["x", "--tol", "solve=1e-8", "--tol", "angle=1e-3"]);
        let t = Tolerances::parse(&a[2..].iter().step_by(2).cloned().collect::<Vec<_>>()).unwrap();
        assert_eq!((t.solve, t.angle), (1e-8, 1e-3));
        assert!(Tolerances::parse(&["bogus=1".into()]).is_err());
        assert!(Tolerances::parse(&["solve=-1".into()]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_INPUT);
        assert_eq!(exit_code(&Error::InconsistentProjections("x".into())), EXIT_INCONSISTENT);
        assert_eq!(exit_code(&Error::NoConvergence { iterations: 1, residual: 1.0 }), EXIT_NO_CONVERGENCE);
        assert_eq!(exit_code(&Error::UnstableInvariant("x".into())), EXIT_UNSTABLE);
    }

    #[test]
    fn seed_tuple_parsing() {
        assert_eq!(parse_tuple(None).unwrap(), DEFAULT_SEED_TUPLE);
        assert!(parse_tuple(Some("0.1,0.2")).is_err());
        assert!(parse_tuple(Some("0.1,0.2,0.3,0.4,0.5,x")).is_err());
    }
}
