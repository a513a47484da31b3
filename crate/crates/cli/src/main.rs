//! `rdlab` — declarative experiment runner.
//!
//! Exit status: 0 when every checker passed, 2 when any failed, 1 on
//! configuration errors.

mod config;
mod experiments;
mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable overriding the enumeration budget.
const BUDGET_ENV: &str = "RDLAB_MAX_ELEMENTS";

#[derive(Parser)]
#[command(name = "rdlab", version, about = "group-theory workbench experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file.
    Run {
        config_file: PathBuf,
        /// Output directory for <name>.report.json and <name>.rows.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List group models, complexes and experiment kinds.
    List,
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            print!("{}", experiments::catalog());
            ExitCode::SUCCESS
        }
        Command::Version => {
            println!("rdlab {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
        Command::Run { config_file, out_dir } => run(&config_file, &out_dir),
    }
}

fn run(config_file: &PathBuf, out_dir: &PathBuf) -> ExitCode {
    let started = std::time::Instant::now();
    let text = match std::fs::read_to_string(config_file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_file.display());
            return ExitCode::from(1);
        }
    };
    let cfg = match config::Config::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut budget = match cfg.get_usize("max_elements", rdlab_core::group::metric::DEFAULT_BUDGET)
    {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Ok(v) = std::env::var(BUDGET_ENV) {
        match v.parse() {
            Ok(b) => budget = b,
            Err(_) => {
                eprintln!("error: {BUDGET_ENV}=`{v}` is not an integer");
                return ExitCode::from(1);
            }
        }
    }
    let out_dir = cfg
        .get("out_dir")
        .map(PathBuf::from)
        .unwrap_or_else(|| out_dir.clone());
    match experiments::run(&cfg, budget) {
        Err(rdlab_core::Error::Config(msg)) => {
            eprintln!("error: configuration: {msg}");
            ExitCode::from(1)
        }
        Err(rdlab_core::Error::UnknownKey(k)) => {
            eprintln!("error: configuration: unknown key `{k}`");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Ok(outcome) => {
            match report::emit(&out_dir, &outcome.report, &outcome.rows) {
                Ok((json_path, csv_path)) => {
                    for v in &outcome.report.verdicts {
                        let mark = if v.pass { "PASS" } else { "FAIL" };
                        println!("{mark} {}{}", v.check, if v.witness.is_empty() {
                            String::new()
                        } else {
                            format!(" [{}]", v.witness)
                        });
                    }
                    eprintln!(
                        "wrote {} and {} in {:.2?}",
                        json_path.display(),
                        csv_path.display(),
                        started.elapsed()
                    );
                    if outcome.report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: writing report: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
