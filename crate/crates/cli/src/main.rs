// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use windctl::{bundled, load, run, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "windctl", version, about = "Run wind-control experiments from config files")]
struct Cli {
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config path or bundled name
    Run {
        config: String,
        /// Output root; results go to <root>/<config name>/
        #[arg(long, env = "WINDCTL_OUT", default_value = "out")]
        out: PathBuf,
        /// Override the step count of every run
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Check a config without running it
    Validate { config: String },
    /// List bundled reproduction configs
    List,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::List => {
            print!("{}", bundled::listing());
            Ok(())
        }
        Command::Validate { config } => {
            load(&config)?;
            println!("OK");
            Ok(())
        }
        Command::Run { config, out, steps } => {
            if steps == Some(0) {
                return Err(windctl::SchemaError {
                    field: Some("--steps".into()),
                    line: None,
                    message: "must be at least 1".into(),
                }
                .into());
            }
            let loaded = load(&config)?;
            let outcome = run(
                &loaded.name,
                &loaded.config,
                &RunOptions {
                    out_root: out,
                    steps,
                },
            )?;
            println!(
                "wrote {} files to {} in {:.2} s",
                outcome.manifest.files.len() + 1,
                outcome.dir.display(),
                outcome.manifest.wall_time_s
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("windctl: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("windctl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
