use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gaussphase_cli::{process, JobError, MethodChoice, Ordering, Overrides, EXIT_SCHEMA};

/// Vacuum-to-vacuum amplitude (modulus and global phase) of quadratic
/// bosonic Hamiltonians. Reads one JSON job or an array of jobs.
#[derive(Parser, Debug)]
#[command(name = "gaussphase", version)]
struct Args {
    /// Input file (default: stdin).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    /// auto, passive, active, single_mode, williamson, general or fock_oracle.
    #[arg(long)]
    method: Option<MethodChoice>,
    /// Trotter steps for schedules.
    #[arg(long)]
    steps: Option<usize>,
    /// Quadrature tolerance (absolute and relative).
    #[arg(long)]
    tol: Option<f64>,
    /// Fock cutoff for the brute-force oracle.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Include the symplectic matrix S = exp(Omega H t).
    #[arg(long)]
    emit_symplectic: bool,
    /// Quadrature ordering of all matrices and vectors: xxpp or xpxp.
    #[arg(long)]
    ordering: Option<Ordering>,
}

fn write_out(path: Option<&PathBuf>, doc: &serde_json::Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("json values serialize");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.input {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let (doc, code) = match text {
        Ok(t) => {
            let overrides = Overrides {
                method: args.method,
                steps: args.steps,
                tol: args.tol,
                cutoff: args.cutoff,
                emit_symplectic: args.emit_symplectic,
                ordering: args.ordering,
            };
            process(&t, &overrides)
        }
        Err(e) => (JobError::Schema(format!("cannot read input: {e}")).to_json(None), EXIT_SCHEMA),
    };
    if let Some(err) = doc.get("error") {
        eprintln!("gaussphase: {}", err["message"].as_str().unwrap_or("error"));
    }
    if let Err(e) = write_out(args.output.as_ref(), &doc) {
        eprintln!("gaussphase: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
