use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use steinitz::io::{emit_json, emit_off, RunReport};
use steinitz::pipeline::{realize, Options};
use steinitz::placement::{StrategyRegistry, AUTO};
use steinitz::planar_map::RawMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Off,
    Json,
    Both,
}

/// Realize a 3-connected planar map as a convex polytope with integer
/// coordinates.
#[derive(Debug, Parser)]
#[command(name = "realize", version)]
struct Args {
    /// Planar map as JSON: {"vertices": n, "faces": [[...], ...]}
    input: PathBuf,
    /// Index of the outer face (default: a smallest face)
    #[arg(long)]
    outer_face: Option<usize>,
    /// Divide the grid coordinates by their per-axis gcd before lifting
    #[arg(long)]
    reduce: bool,
    /// Skip the certificate checks
    #[arg(long)]
    no_verify: bool,
    /// Write the run report as JSON
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Off)]
    format: Format,
    /// Output file; with `--format both` the extension is replaced by .off and .json
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Boundary placement strategy
    #[arg(long, default_value = AUTO, value_parser = placement_names())]
    placement: String,
}

fn placement_names() -> Vec<&'static str> {
    let mut names = vec![AUTO];
    names.extend(StrategyRegistry::default().names());
    names
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("Io: {}: {e}", path.display())))
}

fn run(args: &Args) -> Result<(), Failure> {
    if args.format == Format::Both && args.output.is_none() {
        return Err(Failure::input("Usage: --format both needs --output"));
    }
    let bytes = fs::read(&args.input).map_err(|e| Failure::input(format!("Io: {}: {e}", args.input.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Failure::input(format!("Parse: {e}")))?;
    let raw = RawMap::from_json(&text).map_err(|e| Failure::input(e.to_string()))?;

    let opts = Options {
        outer_face: args.outer_face,
        strategy: (args.placement != AUTO).then(|| args.placement.clone()),
        reduce: args.reduce,
        verify: !args.no_verify,
    };
    let r = realize(&raw, &opts).map_err(|e| Failure {
        code: e.exit_code() as u8,
        message: e.to_string(),
    })?;

    let poly = r.output();
    match (args.format, &args.output) {
        (Format::Both, Some(path)) => {
            write_file(&path.with_extension("off"), &emit_off(poly))?;
            write_file(&path.with_extension("json"), &emit_json(poly))?;
        }
        (format, out) => {
            let body = if format == Format::Json {
                emit_json(poly)
            } else {
                emit_off(poly)
            };
            match out {
                Some(path) => write_file(path, &body)?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout
                        .write_all(body.as_bytes())
                        .and_then(|_| stdout.flush())
                        .map_err(|e| Failure::input(format!("Io: stdout: {e}")))?;
                }
            }
        }
    }
    if let Some(path) = &args.report {
        write_file(path, &RunReport::new(&bytes, &r).to_json())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors are invalid input (exit 1), not clap's default 2.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
