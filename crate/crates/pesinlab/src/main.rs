use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pesinlab::{run_config_file, Config, RunError, RunOptions};
use pesinlab_core::dynsys::BUILTIN_SYSTEMS;
use pesinlab_core::livshitz::BUILTIN_OBSERVABLES;

/// Exit status for an invalid configuration.
const EXIT_CONFIG: u8 = 64;

#[derive(Parser)]
#[command(
    name = "pesinlab",
    version,
    about = "Finite-horizon experiments on hyperbolic surface maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, env = "PESINLAB_THREADS")]
        threads: Option<usize>,
    },
    /// List the built-in systems and observables.
    ListSystems,
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, threads } => {
            match run_config_file(
                &config,
                &RunOptions {
                    out_dir: out,
                    threads,
                },
            ) {
                Ok(report) => {
                    let summary = match &report.error {
                        Some(e) => format!("error: {}: {}", e.name, e.message),
                        None => format!(
                            "{}: {}/{} checks passed",
                            report.config.experiment.name(),
                            report.checks.iter().filter(|c| c.pass).count(),
                            report.checks.len()
                        ),
                    };
                    println!("{summary}");
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(RunError::Config(e)) => {
                    eprintln!("invalid config: {e}");
                    ExitCode::from(EXIT_CONFIG)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::ListSystems => {
            for (name, params, about) in BUILTIN_SYSTEMS {
                let params = if params.is_empty() {
                    "-".to_string()
                } else {
                    params.join(",")
                };
                println!("{name:<14} {params:<10} {about}");
            }
            println!("observables: {}", BUILTIN_OBSERVABLES.join(", "));
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match Config::load(&config) {
            Ok(cfg) => {
                println!("ok: {} on {}", cfg.experiment.name(), cfg.system);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid config: {e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
    }
}
