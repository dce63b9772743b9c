//! Command-line front end for the experiment registry.
//!
//! Configuration is plain key=value text; command-line settings are applied
//! after the config file, so later sources win. Failures map to distinct
//! exit codes: 2 for an unknown experiment, 3 for malformed configuration
//! or parameter values, 4 for filesystem problems, 1 for anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use numbench::error::Error;
use numbench::exp;

#[derive(Parser)]
#[command(
    name = "numbench",
    about = "Reproducible desk-scale numerical linear algebra experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV (and SVG plots with --plot).
    Run {
        /// Experiment name; overrides the config file's `experiment` key.
        experiment: Option<String>,
        /// Plain-text key=value configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one key, e.g. --set trials=50; repeatable, applied in order.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Random seed (shorthand for --set seed=N).
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for output artifacts.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write SVG plots (shorthand for --set plot=true).
        #[arg(long)]
        plot: bool,
    },
    /// List registered experiments with their parameter defaults.
    List {
        /// Emit the parameter schema as CSV.
        #[arg(long)]
        machine: bool,
    },
    /// Show one experiment's parameters in detail.
    Describe { experiment: String },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exp::exit_code(&e) as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            experiment,
            config,
            set,
            seed,
            out,
            plot,
        } => {
            let mut raw = match config {
                Some(path) => exp::RawConfig::parse_text(&std::fs::read_to_string(&path)?)?,
                None => exp::RawConfig::default(),
            };
            if let Some(name) = experiment {
                raw.set("experiment", name);
            }
            for pair in set {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("--set expects key=value, got '{pair}'")))?;
                raw.set(k.trim(), v.trim());
            }
            if let Some(s) = seed {
                raw.set("seed", s.to_string());
            }
            if plot {
                raw.set("plot", "true");
            }
            let cfg = exp::resolve(&raw)?;
            for path in exp::run_experiment(&cfg, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::List { machine } => {
            if machine {
                print!("{}", exp::schema_csv());
            } else {
                for line in exp::list_lines() {
                    println!("{line}");
                }
            }
            Ok(())
        }
        Command::Describe { experiment } => {
            print!("{}", exp::describe(&experiment)?);
            Ok(())
        }
    }
}
