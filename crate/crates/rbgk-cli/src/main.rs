use clap::{Parser, Subcommand};
use rbgk_cli::{run_scenario_file, scenarios, Overrides};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rbgk",
    version,
    about = "Relativistic BGK scenario runner",
    long_about = "Runs reproducible kinetic-theory studies (closure checks, BGK \
relaxation runs, limit ladders, linearized diagnostics) from TOML scenario files."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario config; exit 0 iff every enforced check passes
    Run {
        /// Path to the scenario TOML file
        config: PathBuf,
        /// Write outputs here instead of the config's output_dir
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Only run the grid-certification suite for the scenario's
        /// equilibrium states; write nothing
        #[arg(long)]
        verify_only: bool,
    },
    /// Print the scenario catalog: kinds, required fields, defaults
    List,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::List => {
            print!("{}", scenarios::catalog());
            ExitCode::SUCCESS
        }
        Cmd::Run { config, output_dir, seed, verify_only } => {
            let overrides = Overrides { output_dir, seed, verify_only };
            match run_scenario_file(&config, &overrides) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => {
                    eprintln!("scenario finished with failed checks");
                    ExitCode::from(1)
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
