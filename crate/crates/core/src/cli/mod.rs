//! The `circumdiv` command line.
//!
//! Every subcommand reads JSON files, writes one document (JSON by default)
//! and exits with `0` on success, `2` when the answer to a yes/no question is
//! "no" (the document then carries the witness), and `1` on errors, which are
//! reported as `{"error": {"code", "message"}}`.

pub mod demo;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::circumradius::{ball_core_set, circumradius_seeded, core_set};
use crate::diversity::{check_axioms_with, CheckMode, FiniteDiversity};
use crate::embed::{
    ball_embed_decide, diameter_embed, negative_type_check, symmetric_embed, symmetric_embeddable,
};
use crate::error::{Error, Result};
use crate::geomkit::{Kernel, Point, PointSet};
use crate::tolerance::{self, Tolerance};

use svg::{render_svg, Scene};

#[derive(Debug, Parser)]
#[command(name = "circumdiv", version, about = "Generalized circumradius and finite diversity tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Absolute comparison tolerance (default 1e-7).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Seed for randomized steps; decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value = "0x5EED", value_parser = parse_seed)]
    pub seed: u64,

    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Log to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Circumradius and witness center of a point set.
    Radius {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Exhaustive core set search.
    Coreset {
        #[arg(long)]
        points: PathBuf,
        /// Kernel file; omit with --ball-bound.
        #[arg(long, required_unless_present = "ball_bound")]
        kernel: Option<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        /// Euclidean ball with the dimension-free size bound.
        #[arg(long)]
        ball_bound: bool,
    },
    /// Check the diversity axioms on a table.
    Axioms {
        #[arg(long)]
        diversity: PathBuf,
        /// List every violation instead of stopping at the first.
        #[arg(long)]
        full: bool,
    },
    /// Ratio criterion and product embedding for symmetric tables.
    EmbedSymmetric {
        #[arg(long)]
        diversity: PathBuf,
    },
    /// Fréchet embedding of a diameter diversity into the unit cube kernel.
    EmbedDiameter {
        #[arg(long)]
        diversity: PathBuf,
    },
    /// Decide embeddability into the Euclidean ball diversity of R^dim.
    EmbedBall {
        #[arg(long)]
        diversity: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Negative-type test of a table with at most 6 labels.
    Negtype {
        #[arg(long)]
        diversity: PathBuf,
    },
    /// Built-in worked examples.
    Demo {
        #[arg(value_enum)]
        which: DemoName,
    },
    /// SVG of a planar point set with its covering kernel copy.
    Render {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    L1Counterexample,
    Nonconvex,
    Figure1,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
}

enum Doc {
    Json(Value),
    Svg(String),
}

/// Runs a parsed command and renders its document; never panics on bad input.
pub fn run(cli: &Cli) -> Outcome {
    if let Some(abs) = cli.tolerance {
        if !(abs >= 0.0) || !abs.is_finite() {
            return error_outcome(&Error::Parse(format!("bad tolerance {abs}")), cli);
        }
        tolerance::set_global(Tolerance::new(abs, tolerance::DEFAULT_REL));
    }
    match execute(cli) {
        Ok((code, doc)) => match finish(doc, cli) {
            Ok(body) => Outcome { code, body },
            Err(e) => error_outcome(&e, cli),
        },
        Err(e) => error_outcome(&e, cli),
    }
}

fn error_outcome(e: &Error, cli: &Cli) -> Outcome {
    log::error!("{e}");
    let doc = json!({
        "error": { "code": e.code(), "message": e.to_string() },
        "seed": cli.seed,
    });
    let body = match cli.format {
        Format::Text => to_text(&doc),
        _ => pretty(&doc),
    };
    Outcome { code: 1, body }
}

fn finish(doc: Doc, cli: &Cli) -> Result<String> {
    match (doc, cli.format) {
        (Doc::Svg(s), _) => Ok(s),
        (Doc::Json(v), Format::Json) => Ok(pretty(&with_seed(v, cli.seed))),
        (Doc::Json(v), Format::Text) => Ok(to_text(&with_seed(v, cli.seed))),
        (Doc::Json(_), Format::Svg) => Err(Error::PreconditionUnmet(
            "svg output is available for radius, render and the nonconvex/figure1 demos".into(),
        )),
    }
}

fn with_seed(v: Value, seed: u64) -> Value {
    match v {
        Value::Object(mut m) => {
            m.insert("seed".into(), json!(seed));
            Value::Object(m)
        }
        other => json!({ "result": other, "seed": seed }),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn to_text(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", serde_json::to_string(v).expect("json value serializes")))
            .collect(),
        other => format!("{other}\n"),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A point set file: `{"points": [...], "labels": [...]}` or a bare array of rows.
fn read_points(path: &Path) -> Result<PointSet> {
    let v: Value = read_json(path)?;
    let parsed = if v.is_array() {
        serde_json::from_value::<Vec<Point>>(v).map(PointSet::new)
    } else {
        serde_json::from_value::<PointSet>(v).map(Ok)
    };
    parsed.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
}

fn read_kernel(path: &Path) -> Result<Kernel> {
    read_json(path)
}

fn read_diversity(path: &Path) -> Result<FiniteDiversity> {
    read_json(path)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("result types serialize")
}

fn execute(cli: &Cli) -> Result<(i32, Doc)> {
    let seed = cli.seed;
    let svg_wanted = cli.format == Format::Svg;
    match &cli.command {
        Command::Radius { points, kernel } | Command::Render { points, kernel } => {
            let set = read_points(points)?;
            let kernel = read_kernel(kernel)?;
            let sol = circumradius_seeded(&set, &kernel, seed)?;
            log::info!("radius {} with {} points", sol.radius, set.len());
            if svg_wanted || matches!(cli.command, Command::Render { .. }) {
                let scene = Scene {
                    points: set,
                    kernel,
                    solutions: vec![sol],
                    seed,
                };
                return Ok((0, Doc::Svg(render_svg(&scene)?)));
            }
            Ok((0, Doc::Json(json!({ "radius": sol.radius, "center": sol.center }))))
        }
        Command::Coreset {
            points,
            kernel,
            epsilon,
            ball_bound,
        } => {
            let set = read_points(points)?;
            let result = match kernel {
                Some(k) if !*ball_bound => core_set(&set, &read_kernel(k)?, *epsilon)?,
                _ => ball_core_set(&set, *epsilon)?,
            };
            Ok((0, Doc::Json(to_value(&result))))
        }
        Command::Axioms { diversity, full } => {
            let delta = read_diversity(diversity)?;
            let mode = if *full {
                CheckMode::FullReport
            } else {
                CheckMode::FirstViolation
            };
            let report = check_axioms_with(&delta, mode);
            let code = if report.is_diversity { 0 } else { 2 };
            Ok((code, Doc::Json(to_value(&report))))
        }
        Command::EmbedSymmetric { diversity } => {
            let delta = read_diversity(diversity)?;
            let criterion = symmetric_embeddable(&delta)?;
            if let Some(w) = &criterion.witness {
                let mut doc = to_value(w);
                doc["embeddable"] = json!(false);
                return Ok((2, Doc::Json(doc)));
            }
            let embedding = symmetric_embed(&delta)?;
            Ok((
                0,
                Doc::Json(json!({ "embeddable": true, "ratios": criterion.ratios, "embedding": embedding })),
            ))
        }
        Command::EmbedDiameter { diversity } => {
            let delta = read_diversity(diversity)?;
            match diameter_embed(&delta) {
                Ok(e) => Ok((0, Doc::Json(json!({ "embeddable": true, "embedding": e })))),
                Err(Error::NotDiameter { subset }) => Ok((
                    2,
                    Doc::Json(json!({ "embeddable": false, "reason": "not_diameter", "subset": subset })),
                )),
                Err(e) => Err(e),
            }
        }
        Command::EmbedBall { diversity, dim } => {
            let delta = read_diversity(diversity)?;
            let decision = ball_embed_decide(&delta, *dim)?;
            for w in &decision.warnings {
                log::warn!("{w}");
            }
            let code = if decision.embeddable { 0 } else { 2 };
            Ok((code, Doc::Json(to_value(&decision))))
        }
        Command::Negtype { diversity } => {
            let delta = read_diversity(diversity)?;
            let report = negative_type_check(&delta)?;
            let code = if report.is_negative_type { 0 } else { 2 };
            Ok((code, Doc::Json(to_value(&report))))
        }
        Command::Demo { which } => demo_doc(*which, cli),
    }
}

fn demo_doc(which: DemoName, cli: &Cli) -> Result<(i32, Doc)> {
    let seed = cli.seed;
    match which {
        DemoName::L1Counterexample => {
            let r = demo::l1_counterexample(seed)?;
            Ok((0, Doc::Json(to_value(&r))))
        }
        DemoName::Nonconvex => {
            let r = demo::nonconvex(seed)?;
            if cli.format == Format::Svg {
                let scene = nonconvex_scene(&r, seed)?;
                return Ok((0, Doc::Svg(render_svg(&scene)?)));
            }
            Ok((0, Doc::Json(to_value(&r))))
        }
        DemoName::Figure1 => {
            let (r, mut scene) = demo::figure1()?;
            if cli.format == Format::Svg {
                scene.seed = seed;
                return Ok((0, Doc::Svg(render_svg(&scene)?)));
            }
            Ok((0, Doc::Json(to_value(&r))))
        }
    }
}

/// `A ∪ B ∪ B'` with `K` drawn at its covering position.
fn nonconvex_scene(r: &demo::NonConvexReport, seed: u64) -> Result<Scene> {
    let union = r.a.union(&r.b)?.union(&r.b_prime)?;
    let sol = circumradius_seeded(&r.a.union(&r.b)?, &r.k, seed)?;
    Ok(Scene {
        points: union,
        kernel: r.k.clone(),
        solutions: vec![sol],
        seed,
    })
}

/// Entry point shared by the binary: parses `args`, caps the thread pool from
/// `CIRCUMDIV_THREADS`, runs, and writes the document.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.verbose);
    init_threads();
    let outcome = run(&cli);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.body) {
                eprintln!("cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{}", outcome.body),
    }
    outcome.code
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn init_threads() {
    if let Some(n) = std::env::var("CIRCUMDIV_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("circumdiv").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn seed_parsing() {
        assert_eq!(parse_seed("0x5EED"), Ok(0x5EED));
        assert_eq!(parse_seed("42"), Ok(42));
        assert!(parse_seed("x").is_err());
    }

    #[test]
    fn demo_documents() {
        let o = outcome(&["demo", "l1-counterexample"]);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.body).unwrap();
        assert_eq!(v["max_individual"], json!(1.0));
        assert_eq!(v["violates_condition"], json!(true));
        assert_eq!(v["seed"], json!(0x5EED));
        assert!((v["min_union_value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn missing_file_is_an_error_document() {
        let o = outcome(&["radius", "--points", "/nonexistent.json", "--kernel", "/nonexistent.json"]);
        assert_eq!(o.code, 1);
        let v: Value = serde_json::from_str(&o.body).unwrap();
        assert_eq!(v["error"]["code"], "io_error");
    }

    #[test]
    fn text_format() {
        let o = outcome(&["demo", "figure1", "--format", "text"]);
        assert!(o.body.contains("ordering_holds: true"));
        assert!(o.body.contains("seed: 24301"));
    }

    #[test]
    fn svg_only_where_supported() {
        assert!(outcome(&["demo", "figure1", "--format", "svg"]).body.starts_with("<svg"));
        assert_eq!(outcome(&["demo", "l1-counterexample", "--format", "svg"]).code, 1);
    }
}
