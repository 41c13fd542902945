//! `matchstick`: validate, measure, build and draw matchstick graphs.
//!
//! Output is one JSON document per line, except `render`. Exit codes:
//! 0 success, 1 invalid input graph or polygon, 2 usage error,
//! 3 a theorem-level invariant failed.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matchstick_core::combinatorics::{check_harborth, claim_trace, face_census};
use matchstick_core::components::decompose;
use matchstick_core::extremal::{build_extremal, build_hexagon_patch, random_lattice_subgraph};
use matchstick_core::graph::{boundary, connectivity, validate, MatchstickGraph, ValidGraph, DEFAULT_TOL};
use matchstick_core::io::{graph_from_json, graph_to_json, render_svg};
use matchstick_core::isoperimetry::{
    check_classic, check_hexagonal, convexify_rearrangement, hexagonal_chain, DirectionSet, Polygon, DEFAULT_ANGLE_TOL,
};
use matchstick_core::lattice::harborth_bound;
use matchstick_core::oracle::{max_area_rearrangement, max_edges_lattice};
use matchstick_core::Error;

#[derive(Parser)]
#[command(name = "matchstick", version, about = "Matchstick graphs, the Harborth bound and its isoperimetric lemmas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check unit lengths, crossings and (optionally) the penny condition.
    Validate {
        file: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        penny: bool,
    },
    /// Face census and edge bound of a 2-connected graph.
    Stats {
        file: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// The maximum edge count 3n - ceil(sqrt(12n - 3)).
    Bound { n: u64 },
    /// Emit a lattice graph as JSON.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Lattice components, b_* and coverage bounds.
    Decompose {
        file: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Isoperimetric inequality for a polygon.
    Iso {
        kind: IsoKind,
        file: String,
        /// Angle of one hexagon side, radians.
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        #[arg(long, default_value_t = DEFAULT_ANGLE_TOL)]
        angle_tol: f64,
        /// Also print every step of the proof chain (hex only).
        #[arg(long)]
        chain: bool,
    },
    /// Evaluate every inequality of the induction step on a graph.
    Trace {
        file: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Exhaustive searches.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Draw a graph as SVG.
    Render {
        file: String,
        #[arg(short, long)]
        output: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// n vertices with the maximum number of edges.
    Extremal { n: usize },
    /// All lattice points within k steps of the origin.
    Hexagon { k: u32 },
    /// A random connected lattice point set.
    Random {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        two_connected: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IsoKind {
    Classic,
    Hex,
}

#[derive(Subcommand)]
enum OracleKind {
    /// Maximum edges over connected lattice sets of n points (n <= 12).
    MaxEdges { n: usize },
    /// Maximum area over simple rearrangements of a polygon's edges (<= 8 edges).
    Rearrange { file: String },
}

enum Failure {
    Invalid(String),
    Usage(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Inconsistent(_) => Failure::Inconsistent(msg),
            Error::InvalidGraph(_)
            | Error::InvalidPolygon(_)
            | Error::NotConnected
            | Error::NotTwoConnected
            | Error::PennyViolation(..)
            | Error::DegeneratePair => Failure::Invalid(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Inconsistent(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) => m.clone(),
            Failure::Inconsistent(m) => format!("internal inconsistency: {m}"),
        }
    }
}

type Out = Result<(), Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    let r = if path == "-" {
        io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    Ok(s)
}

fn read_graph(path: &str) -> Result<MatchstickGraph, Failure> {
    graph_from_json(&read_input(path)?).map_err(|e| match e {
        Error::Json(j) => Failure::Invalid(format!("malformed graph JSON: {j}")),
        other => other.into(),
    })
}

fn read_valid(path: &str, tol: f64) -> Result<ValidGraph, Failure> {
    let g = read_graph(path)?;
    let report = validate(&g, tol, false);
    if !report.ok {
        return Err(Failure::Invalid(format!(
            "graph is not a matchstick graph: {}",
            serde_json::to_string(&report.violations).unwrap_or_default()
        )));
    }
    Ok(ValidGraph::new(g, tol, false)?)
}

fn read_polygon(path: &str) -> Result<Polygon, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Failure::Invalid(format!("bad polygon: {e}")))
}

fn emit(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("values serialize"));
}

fn with(mut v: Value, key: &str, extra: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert(key.to_string(), extra);
    }
    v
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Validate { file, tol, penny } => {
            let g = read_graph(&file)?;
            let report = validate(&g, tol, penny);
            emit(&report);
            if !report.ok {
                return Err(Failure::Invalid(format!("{} violations", report.violations.len())));
            }
        }
        Command::Stats { file, tol } => {
            let g = read_valid(&file, tol)?;
            let census = face_census(&g)?;
            census.check_identities()?;
            let h = check_harborth(&g)?;
            emit(&with(json!(census), "harborth", json!(h)));
        }
        Command::Bound { n } => emit(&harborth_bound(n)?),
        Command::Build { kind } => {
            let g = match kind {
                BuildKind::Extremal { n } => build_extremal(n)?,
                BuildKind::Hexagon { k } => build_hexagon_patch(k),
                BuildKind::Random { n, seed, two_connected } => random_lattice_subgraph(n, seed, two_connected)?,
            };
            println!("{}", graph_to_json(&g)?);
        }
        Command::Decompose { file, tol } => emit(&decompose(&read_valid(&file, tol)?)?),
        Command::Iso { kind, file, theta0, angle_tol, chain } => {
            let p = read_polygon(&file)?;
            match kind {
                IsoKind::Classic => emit(&check_classic(&p)?),
                IsoKind::Hex => {
                    let d = DirectionSet::new(theta0);
                    emit(&with(json!(check_hexagonal(&p, &d, angle_tol)?), "theta0", json!(theta0)));
                    if chain {
                        emit(&hexagonal_chain(&p, &d, angle_tol)?);
                    }
                }
            }
        }
        Command::Trace { file, tol } => emit(&claim_trace(&read_valid(&file, tol)?)?),
        Command::Oracle { kind } => match kind {
            OracleKind::MaxEdges { n } => {
                let r = max_edges_lattice(n)?;
                emit(&json!({
                    "n": r.n,
                    "max_e": r.max_e,
                    "bound": harborth_bound(n as u64)?,
                    "witness_points": r.witness.points,
                    "animals": r.animals,
                }));
            }
            OracleKind::Rearrange { file } => {
                let p = read_polygon(&file)?;
                let best = max_area_rearrangement(&p)?;
                emit(&json!({
                    "edges": p.len(),
                    "area": p.area(),
                    "convex_area": convexify_rearrangement(&p).area(),
                    "max_area": best,
                }));
            }
        },
        Command::Render { file, output, tol } => {
            let g = read_graph(&file)?;
            let svg = match ValidGraph::new(g.clone(), tol, false) {
                Ok(vg) => {
                    let rep = decompose(&vg).ok();
                    let cycle = connectivity(&g).two_connected.then(|| boundary(&vg).ok()).flatten().map(|(c, _)| c);
                    render_svg(&g, rep.as_ref(), cycle.as_deref())
                }
                Err(_) => render_svg(&g, None, None),
            };
            fs::write(&output, svg).map_err(|e| Failure::Usage(format!("cannot write {output}: {e}")))?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("MATCHSTICK_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("MATCHSTICK_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("matchstick: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
