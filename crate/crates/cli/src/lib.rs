//! The `casson` command-line tool.
//!
//! Exit status: 0 on success, 1 for unparsable input or arguments, 2 for
//! input that parses but is not a valid knot (or not in general position),
//! 3 when two methods disagree on a valid knot.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use casson::casson::{arf, check_bound, even_bound_advisory, Method};
use casson::fixtures;
use casson::geomint::{v2_mc_terms, v2_mc_with, McEstimate, McOptions};
use casson::moves::{apply, is_realizable, random_realizable, random_site, MoveMix};
use casson::polyknot::PolyKnot;
use casson::{v2_gauss, Shape};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub mod batch;
pub mod input;
pub mod report;

use input::{evaluate_all, InputKind, Loaded, MethodOutcome};
use report::Format;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("methods disagree: {0}")]
    Disagreement(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Disagreement(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "casson", version, about = "The Casson knot invariant v2, computed several independent ways")]
pub struct Cli {
    /// Seed for every random choice (general-position perturbations, move
    /// walks, Monte Carlo samples).
    #[arg(long, global = true, env = "CASSON_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct KnotArgs {
    /// Gauss code such as `O1+U2+O3+U1+O2+U3+`; an empty string is the unknot.
    #[arg(long)]
    pub gauss: Option<String>,
    /// Planar-diagram code such as `X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]`.
    #[arg(long)]
    pub pd: Option<String>,
    /// Braid word such as `s1 -s2 s1 -s2`.
    #[arg(long)]
    pub braid: Option<String>,
    /// Odd n >= 3, for the (n, 2) torus knot.
    #[arg(long, allow_hyphen_values = true)]
    pub torus: Option<String>,
    /// Polygonal knot as a JSON file.
    #[arg(long)]
    pub knot: Option<PathBuf>,
    /// Tangle word file.
    #[arg(long)]
    pub tangle: Option<PathBuf>,
}

impl KnotArgs {
    fn load(&self, seed: u64) -> Result<Loaded, CliError> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())));
        let (kind, payload) = if let Some(s) = &self.gauss {
            (InputKind::Gauss, s.clone())
        } else if let Some(s) = &self.pd {
            (InputKind::Pd, s.clone())
        } else if let Some(s) = &self.braid {
            (InputKind::Braid, s.clone())
        } else if let Some(s) = &self.torus {
            (InputKind::Torus, s.clone())
        } else if let Some(p) = &self.knot {
            (InputKind::Polyknot, read(p)?)
        } else if let Some(p) = &self.tangle {
            (InputKind::Tangle, read(p)?)
        } else {
            return Err(CliError::Parse("no knot given".into()));
        };
        Loaded::parse(kind, &payload, seed)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// `all` or a comma-separated list of method names.
fn parse_methods(text: &str) -> Result<Vec<Method>, String> {
    if text == "all" {
        return Ok(Method::ALL.to_vec());
    }
    text.split(',').map(|m| m.trim().parse::<Method>()).collect()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute v2.
    V2 {
        #[command(flatten)]
        knot: KnotArgs,
        /// gauss, sym, skein, morse, natangle, a comma-separated list, or all.
        #[arg(long, default_value = "gauss", value_parser = parse_methods)]
        method: std::vec::Vec<Method>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compute the Arf invariant.
    Arf {
        #[command(flatten)]
        knot: KnotArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare |v2| with the crossing-number bound.
    Bound {
        #[command(flatten)]
        knot: KnotArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generate a random realizable diagram.
    Gen {
        #[arg(long, default_value_t = 6)]
        letters: usize,
        #[arg(long, default_value_t = 10)]
        moves: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply random Reidemeister and base-point moves, checking v2 and Arf.
    MovesCheck {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, default_value_t = 50)]
        moves: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate of v2 from the integral formula.
    Integrate {
        /// Polygonal knot as a JSON file; a closed knot is cut open first.
        #[arg(long)]
        knot: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Also report the four terms with their standard errors.
        #[arg(long)]
        report_variance: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate every row of a CSV table with columns name,kind,payload.
    Batch {
        table: PathBuf,
        #[arg(long, default_value = "all", value_parser = parse_methods)]
        method: std::vec::Vec<Method>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n").map_err(|e| CliError::Io(e.to_string()))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct V2Output<'a> {
    kind: InputKind,
    crossings: usize,
    results: &'a [MethodOutcome],
    agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct IntegrateOutput {
    #[serde(flatten)]
    estimate: McEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<[McEstimate; 4]>,
}

fn v2(knot: &KnotArgs, methods: &[Method], out: &OutputArgs, seed: u64) -> Result<(), CliError> {
    let loaded = knot.load(seed)?;
    let (results, status) = evaluate_all(&loaded, methods);
    let text = match out.format {
        Format::Tsv => report::tsv_results(&results),
        Format::Json => report::json(&V2Output {
            kind: loaded.kind,
            crossings: loaded.diagram.len(),
            results: &results,
            agree: !matches!(status, Err(CliError::Disagreement(_))),
            error: status.as_ref().err().map(ToString::to_string),
        })?,
    };
    emit(&text, out.output.as_deref())?;
    status
}

fn moves_check(knot: &KnotArgs, moves: usize, out: &OutputArgs, seed: u64) -> Result<(), CliError> {
    let loaded = knot.load(seed)?;
    let g = loaded.diagram;
    if !is_realizable(&g) {
        return Err(CliError::Invalid("diagram is not realizable by a knot".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mix = MoveMix { base_point: 0.1, ..MoveMix::default() };
    let (v, a) = (v2_gauss(&g), arf(&g));
    let mut h = g;
    let mut broken = None;
    for step in 0..moves {
        let site = random_site(&mut rng, &h, mix).map_err(|e| CliError::Invalid(e.to_string()))?;
        h = apply(&h, &site).map_err(|e| CliError::Disagreement(format!("listed move failed: {e}")))?;
        if broken.is_none() && (v2_gauss(&h) != v || arf(&h) != a) {
            broken = Some(format!("step {}: {site:?} gives v2 {} arf {}", step + 1, v2_gauss(&h), arf(&h)));
        }
    }
    let text = match out.format {
        Format::Tsv => format!("moves\tv2\tarf\tpreserved\n{moves}\t{v}\t{a}\t{}\n", broken.is_none()),
        Format::Json => report::json(&serde_json::json!({
            "moves": moves,
            "v2": v,
            "arf": a,
            "final_crossings": h.len(),
            "final_gauss_code": h.to_gauss_code(),
            "preserved": broken.is_none(),
        }))?,
    };
    emit(&text, out.output.as_deref())?;
    match broken {
        Some(msg) => Err(CliError::Disagreement(msg)),
        None => Ok(()),
    }
}

fn integrate(path: &Path, samples: u64, report_variance: bool, output: Option<&Path>, seed: u64) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut knot = PolyKnot::from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    if knot.shape() == Shape::Closed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        knot = fixtures::long(&mut rng, &knot).map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    let options = McOptions::default();
    let invalid = |e: casson::geomint::IntegralError| CliError::Invalid(e.to_string());
    let estimate = v2_mc_with(&knot, samples, seed, options).map_err(invalid)?;
    let terms = if report_variance { Some(v2_mc_terms(&knot, samples, seed, options).map_err(invalid)?) } else { None };
    emit(&report::json(&IntegrateOutput { estimate, terms })?, output)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::V2 { knot, method, out } => v2(&knot, &method, &out, seed),
        Command::Arf { knot, out } => {
            let g = knot.load(seed)?.diagram;
            let a = arf(&g);
            let text = match out.format {
                Format::Tsv => format!("arf\t{a}\n"),
                Format::Json => report::json(&serde_json::json!({ "arf": a, "crossings": g.len() }))?,
            };
            emit(&text, out.output.as_deref())
        }
        Command::Bound { knot, out } => {
            let g = knot.load(seed)?.diagram;
            let b = check_bound(&g);
            let text = match out.format {
                Format::Tsv => format!("v2\tbound\tok\n{}\t{}\t{}\n", b.v2, b.bound, b.ok),
                Format::Json => report::json(&serde_json::json!({
                    "v2": b.v2,
                    "bound": b.bound,
                    "ok": b.ok,
                    "sharp": b.v2.abs() == b.bound,
                    "crossings": g.len(),
                    "even_advisory": even_bound_advisory(&g),
                }))?,
            };
            emit(&text, out.output.as_deref())?;
            if b.ok {
                Ok(())
            } else {
                Err(CliError::Disagreement(format!("|v2| = {} exceeds the bound {}", b.v2.abs(), b.bound)))
            }
        }
        Command::Gen { letters, moves, out } => {
            let g = random_realizable(seed, letters, moves);
            let text = match out.format {
                Format::Tsv => format!("{}\n", g.to_gauss_code()),
                Format::Json => report::json(&serde_json::json!({
                    "gauss_code": g.to_gauss_code(),
                    "crossings": g.len(),
                    "provenance": g.provenance(),
                }))?,
            };
            emit(&text, out.output.as_deref())
        }
        Command::MovesCheck { knot, moves, out } => moves_check(&knot, moves, &out, seed),
        Command::Integrate { knot, samples, report_variance, output } => {
            integrate(&knot, samples, report_variance, output.as_deref(), seed)
        }
        Command::Batch { table, method, out } => {
            let records = batch::run_batch(&table, &method, seed)?;
            let text = match out.format {
                Format::Tsv => batch::tsv(&records),
                Format::Json => report::json(&serde_json::json!({ "records": records }))?,
            };
            emit(&text, out.output.as_deref())?;
            match records.iter().map(|r| r.exit).max() {
                Some(3) => Err(CliError::Disagreement("see records with agree = false".into())),
                _ => Ok(()),
            }
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("casson: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_lists() {
        assert_eq!(parse_methods("all").unwrap().len(), 5);
        assert_eq!(parse_methods("skein, gauss").unwrap(), vec![Method::Skein, Method::Gauss]);
        assert!(parse_methods("gauss,magic").is_err());
    }

    #[test]
    fn input_flags_are_exclusive() {
        assert!(Cli::try_parse_from(["casson", "v2", "--gauss", "", "--braid", "s1"]).is_err());
        assert!(Cli::try_parse_from(["casson", "v2"]).is_err());
        assert!(Cli::try_parse_from(["casson", "v2", "--torus", "3"]).is_ok());
    }
}
