use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use dirac_cli::{cmd_bracket, cmd_cohomology, cmd_deform, cmd_gauge, cmd_verify, error_exit_code, DeformArgs, Report};
use dirac_core::deform::StateRecord;
use dirac_core::specfile::{SpecFile, BUNDLED};
use dirac_core::Error;

/// Exact Courant algebroid and Dirac deformation toolkit.
///
/// SPEC is a path to a spec file or the name of a bundled spec
/// (see `dirac specs`).
#[derive(Parser)]
#[command(name = "dirac", version)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks (defaults to the spec's seed, then 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the master equation, classify, and test the axioms.
    Verify { spec: String },
    /// Derived bracket of two sections.
    Bracket { spec: String, e1: String, e2: String },
    /// Solve the Maurer-Cartan equation order by order.
    Deform {
        spec: String,
        /// First-order term, a 2-cochain in f1..fk.
        #[arg(long)]
        omega1: Option<String>,
        /// Target order.
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Coefficient-degree truncation for primitive searches.
        #[arg(long)]
        truncate: Option<u32>,
        /// Continue from a JSON report or state file.
        #[arg(long, conflicts_with = "omega1")]
        resume: Option<PathBuf>,
    },
    /// Dimension of the Lie algebroid cohomology of L.
    Cohomology {
        spec: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        truncate: Option<u32>,
    },
    /// Test whether the gauge transformation by B preserves the bracket.
    Gauge {
        spec: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
    /// List bundled specs, or print one in canonical form.
    Specs { name: Option<String> },
}

fn read_state(path: &PathBuf) -> Result<StateRecord, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::SpecFile(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::SpecFile(format!("{}: {e}", path.display())))?;
    let state = value.get("state").cloned().unwrap_or(value);
    serde_json::from_value(state).map_err(|e| Error::SpecFile(format!("{}: not a deformation state: {e}", path.display())))
}

fn run(cli: &Cli, echo: &str) -> Result<Option<Report>, Error> {
    Ok(Some(match &cli.command {
        Command::Verify { spec } => cmd_verify(echo, &SpecFile::resolve(spec)?, cli.seed)?,
        Command::Bracket { spec, e1, e2 } => cmd_bracket(echo, &SpecFile::resolve(spec)?, e1, e2)?,
        Command::Deform { spec, omega1, order, truncate, resume } => {
            let file = SpecFile::resolve(spec)?;
            let resume = resume.as_ref().map(read_state).transpose()?;
            let args = DeformArgs { omega1: omega1.clone(), order: *order, truncate: *truncate, resume };
            cmd_deform(echo, &file, &args)?
        }
        Command::Cohomology { spec, degree, truncate } => {
            cmd_cohomology(echo, &SpecFile::resolve(spec)?, *degree, *truncate)?
        }
        Command::Gauge { spec, b, bound } => cmd_gauge(echo, &SpecFile::resolve(spec)?, b, *bound)?,
        Command::Specs { name: Some(name) } => {
            let text = dirac_core::specfile::bundled(name)
                .ok_or_else(|| Error::SpecFile(format!("no bundled spec named {name}")))?;
            print!("{text}");
            return Ok(None);
        }
        Command::Specs { name: None } => {
            for (name, _) in BUNDLED {
                println!("{name}");
            }
            return Ok(None);
        }
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).filter(|a| a != "--timing").collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    match run(&cli, &echo) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(mut report)) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            let code = error_exit_code(&e);
            if cli.json {
                let body = serde_json::json!({ "command": echo, "error": e.to_string(), "exit_code": code });
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
