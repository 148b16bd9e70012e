use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swe_fronts_cli::{run_file, scenarios::parse_grid, sweep_file, validate_criteria, CliError};

/// Wave fronts and vacuum points of the shallow water equations.
#[derive(Parser)]
#[command(name = "swe-fronts", version)]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario config and write TSV data plus a manifest
    Run {
        config: PathBuf,
        /// Output directory, overriding `output.dir`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vary one parameter over a grid
    Sweep {
        config: PathBuf,
        /// Dotted key, e.g. `initial.gamma0`
        #[arg(long)]
        param: String,
        /// `lo:hi:n` or `v1,v2,...`
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the twelve acceptance criteria
    Validate,
    /// Like `run`, and always write SVG figures
    ExportFigures {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let r = match args.cmd {
        Cmd::Run { config, out } => run_file(&config, out.as_deref(), false).map(|(d, _)| println!("wrote {}", d.display())),
        Cmd::ExportFigures { config, out } => run_file(&config, out.as_deref(), true).map(|(d, _)| println!("wrote {}", d.display())),
        Cmd::Sweep { config, param, grid, out } => {
            parse_grid(&grid).and_then(|g| sweep_file(&config, &param, &g, out.as_deref())).map(|(d, a)| {
                a.notes.iter().for_each(|n| eprintln!("{n}"));
                println!("wrote {}", d.display())
            })
        }
        Cmd::Validate => {
            let reports = validate_criteria();
            reports.iter().for_each(|r| println!("{}", r.line()));
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Acceptance(failed))
            }
        }
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
