//! `sltx` — solve, compare and verify three-interval Sturm–Liouville
//! problems described by a JSON config.
//!
//! Exit status: 0 success, 1 usage, 2 config/validation, 3 numerical
//! failure or a FAIL verdict.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use sltx::report::RunReport;
use sltx::{commands, config, verify, CommandError, CommandOutput};

#[derive(Parser)]
#[command(name = "sltx", version, about = "Three-interval Sturm–Liouville spectral solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem configuration (JSON).
    config: PathBuf,
    /// Output table; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solver setting override `key=value` (repeatable), e.g. `rk_tol=1e-11`.
    #[arg(long = "tol-override", value_name = "KEY=VALUE")]
    tol_override: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the first eigenvalues.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: usize,
    },
    /// Tabulate the asymptotic eigenvalue formula.
    Asym {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: usize,
    },
    /// Compare computed and asymptotic eigenvalues (O(1/n) decay check).
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        n_lo: usize,
        #[arg(long, default_value_t = 40)]
        n_hi: usize,
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
    },
    /// Sample a normalized eigenfunction.
    Eigenfunction {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Run the full property suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let (name, common) = match &cli.command {
        Command::Solve { common, .. } => ("solve", common),
        Command::Asym { common, .. } => ("asym", common),
        Command::Compare { common, .. } => ("compare", common),
        Command::Eigenfunction { common, .. } => ("eigenfunction", common),
        Command::Verify { common } => ("verify", common),
    };
    let loaded = match config::load(&common.config, &common.tol_override) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut report = RunReport::new(name, &loaded.digest);
    report.param("config", common.config.display());
    for o in &common.tol_override {
        report.param("tol_override", o);
    }
    let p = &loaded.problem;
    let result = match &cli.command {
        Command::Solve { n_max, .. } => {
            report.param("n_max", n_max);
            commands::solve(p, *n_max)
        }
        Command::Asym { n_max, .. } => {
            report.param("n_max", n_max);
            commands::asym(p, *n_max)
        }
        Command::Compare { n_lo, n_hi, bound, .. } => {
            report.param("n_lo", n_lo);
            report.param("n_hi", n_hi);
            report.param("bound", bound);
            commands::compare(p, *n_lo, *n_hi, *bound)
        }
        Command::Eigenfunction { index, samples, .. } => {
            report.param("index", index);
            report.param("samples", samples);
            commands::eigenfunction(p, *index, *samples)
        }
        Command::Verify { .. } => Ok(verify::verify_output(p)),
    };
    let output = match result {
        Ok(o) => o,
        Err(e @ CommandError::Usage(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e @ CommandError::Numerical(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    if let Err(e) = emit(&output, name, &loaded.digest, common.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_NUMERICAL);
    }
    if let Some(path) = &common.out {
        report.outputs.push(path.display().to_string());
    }
    report.verdicts(&output.verdicts);
    report.notes = output.notes.clone();
    for note in &output.notes {
        eprintln!("warning: {note}");
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    eprintln!("report: {}", report.to_json());
    if output.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn emit(output: &CommandOutput, command: &str, digest: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            output.table.write(&mut w, command, digest)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            output.table.write(&mut w, command, digest)?;
            w.flush()
        }
    }
}
