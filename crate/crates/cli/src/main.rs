//! `degform`: enumerate the index set of the blow-up degeneration formula.
//!
//! Exit codes: 0 on success, 1 on validation or model errors (one
//! `error: ...` line on stderr), 2 on usage errors. `check-h` exits 1 if
//! the enumerated key sets disagree between ample choices — they never
//! should; such an exit indicates an engine bug.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use degform_core::enumeration::{
    check_h_independence, enumerate_by_degree, enumerate_triples, reduce_to_classes,
    EnumerationRequest, Target,
};
use degform_core::formula::{build_formula, emit, FormulaTerm, OutputFormat, RequestEcho};
use degform_core::geometry::{preset_config, BlowupGeometry, PRESET_NAMES};
use degform_core::lattice::LatticeVector;
use degform_core::{AdmissibleTriple, AmpleData};

#[derive(Parser)]
#[command(
    name = "degform",
    version,
    about = "Enumerate degeneration-formula terms for blow-up degenerations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the terms for a fixed curve class
    Enumerate(EnumerateArgs),
    /// Enumerate all classes of a fixed L-degree and their terms
    ByDegree(ByDegreeArgs),
    /// Verify that the enumerated key set does not depend on the ample choice
    CheckH(CheckHArgs),
    /// List the built-in geometry presets
    Presets,
    /// Load and validate a geometry config file
    ValidateConfig { path: PathBuf },
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct GeometrySource {
    /// Built-in geometry preset name
    #[arg(long, group = "source")]
    preset: Option<String>,
    /// Path to a geometry config (JSON)
    #[arg(long, group = "source")]
    config: Option<PathBuf>,
}

impl GeometrySource {
    fn load(&self) -> Result<BlowupGeometry, degform_core::Error> {
        match (&self.preset, &self.config) {
            (Some(name), None) => BlowupGeometry::preset(name),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| degform_core::Error::Config(format!("{}: {e}", path.display())))?;
                BlowupGeometry::from_json(&text)
            }
            _ => unreachable!("clap enforces exactly one geometry source"),
        }
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    source: GeometrySource,
    /// Genus
    #[arg(long)]
    g: i64,
    /// Number of marked points
    #[arg(long)]
    k: usize,
    /// Curve class in the declared basis of N1(X), comma-separated integers
    #[arg(long, allow_hyphen_values = true, value_parser = parse_class)]
    beta: LatticeVector,
    /// Ample scalar c (L = c * reference ample of the geometry)
    #[arg(long)]
    ample: i64,
    /// Output format: machine, latex or summary
    #[arg(long, default_value = "summary", value_parser = parse_format)]
    format: OutputFormat,
    /// Write output to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ByDegreeArgs {
    #[command(flatten)]
    source: GeometrySource,
    #[arg(long)]
    g: i64,
    #[arg(long)]
    k: usize,
    /// Target H-degree
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long)]
    ample: i64,
    #[arg(long, default_value = "summary", value_parser = parse_format)]
    format: OutputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckHArgs {
    #[command(flatten)]
    source: GeometrySource,
    #[arg(long)]
    g: i64,
    #[arg(long)]
    k: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_class)]
    beta: LatticeVector,
    /// Ample scalar; pass at least twice
    #[arg(long, action = clap::ArgAction::Append)]
    ample: Vec<i64>,
}

fn parse_class(text: &str) -> Result<LatticeVector, String> {
    let coords: Result<Vec<i64>, _> = text.split(',').map(|p| p.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|e| format!("invalid class coordinates {text:?}: {e}"))?;
    LatticeVector::new(coords).map_err(|e| e.to_string())
}

fn parse_format(text: &str) -> Result<OutputFormat, String> {
    text.parse::<OutputFormat>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, degform_core::Error> {
    match command {
        Command::Enumerate(args) => {
            let geom = args.source.load()?;
            let amp = geom.ample_from_scalar(args.ample)?;
            let req = EnumerationRequest::class_mode(args.g, args.k, args.beta.clone(), amp)?;
            let triples = enumerate_triples(&req, &geom)?;
            let terms = terms_from_triples(&triples)?;
            let echo = RequestEcho {
                g: args.g,
                k: args.k,
                target: Target::Class(args.beta),
            };
            let text = emit(&geom, &echo, &terms, args.format)?;
            write_output(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ByDegree(args) => {
            let geom = args.source.load()?;
            let amp = geom.ample_from_scalar(args.ample)?;
            let req = EnumerationRequest::degree_mode(args.g, args.k, args.d, amp)?;
            let partition = enumerate_by_degree(&req, &geom)?;
            let flattened: Vec<AdmissibleTriple> = partition
                .values()
                .flat_map(|ts| ts.iter().cloned())
                .collect();
            let terms = terms_from_triples(&flattened)?;
            let echo = RequestEcho {
                g: args.g,
                k: args.k,
                target: Target::Degree(args.d),
            };
            let text = emit(&geom, &echo, &terms, args.format)?;
            write_output(args.output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckH(args) => {
            if args.ample.len() < 2 {
                eprintln!("error: check-h needs at least two --ample values");
                return Ok(ExitCode::from(2));
            }
            let geom = args.source.load()?;
            let amples: Vec<AmpleData> = args
                .ample
                .iter()
                .map(|&c| geom.ample_from_scalar(c))
                .collect::<Result<_, _>>()?;
            let report = check_h_independence(args.g, args.k, &args.beta, &geom, &amples)?;
            println!(
                "geometry {} beta={} g={} k={} amples={:?}",
                geom.label(),
                geom.format_class_x(&args.beta),
                args.g,
                args.k,
                args.ample
            );
            if report.is_independent() {
                println!(
                    "identical: {} classes under every ample choice",
                    report.key_count
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!("MISMATCH: key sets differ between ample choices");
                for diff in &report.differences {
                    println!(
                        "ample #{} ({}): {} missing, {} extra",
                        diff.ample_index,
                        args.ample[diff.ample_index],
                        diff.missing.len(),
                        diff.extra.len()
                    );
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                let config = preset_config(name)?;
                println!(
                    "{name}: codim={} basis X=[{}] Y1=[{}] Y2=[{}]",
                    config.codim,
                    config.x.basis.join(","),
                    config.y1.basis.join(","),
                    config.y2.basis.join(","),
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateConfig { path } => {
            let text = fs::read_to_string(&path)
                .map_err(|e| degform_core::Error::Config(format!("{}: {e}", path.display())))?;
            let geom = BlowupGeometry::from_json(&text)?;
            println!(
                "ok: geometry {} valid (ranks X={} Y1={} Y2={}, codim={})",
                geom.label(),
                geom.rank_x(),
                geom.rank_y1(),
                geom.rank_y2(),
                geom.codim()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn terms_from_triples(
    triples: &[AdmissibleTriple],
) -> Result<Vec<FormulaTerm>, degform_core::Error> {
    let classes = reduce_to_classes(triples)?;
    build_formula(&classes)
}

fn write_output(path: Option<&std::path::Path>, text: &str) -> Result<(), degform_core::Error> {
    match path {
        Some(path) => fs::write(path, text)
            .map_err(|e| degform_core::Error::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
