use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hisd_cli::{parse_config, run_experiment, CliError, Mode};

#[derive(Parser)]
#[command(name = "hisd", version, about = "Constrained high-index saddle dynamics on the unit sphere")]
struct Cli {
    /// Worker threads for parallel studies (default: all processors).
    #[arg(long, global = true, env = "HISD_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate once and write the trajectory and per-step probes.
    Run(Files),
    /// Error table against a fine-step reference.
    Converge(Files),
    /// Scaling of the per-step defects with the step size.
    Lemmas(Files),
    /// Cauchy differences and endpoint distances across step sizes.
    Pathway(Files),
    /// Error sweep over saddle indices with and without alpha = beta = q0/k.
    IndexRobust(Files),
}

#[derive(Args)]
struct Files {
    /// TOML experiment description.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir` from the config.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn execute(mode: Mode, files: &Files) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(&files.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", files.config.display())))?;
    let config = parse_config(&text, mode)?;
    run_experiment(&config, files.output.as_deref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Some(n) = cli.workers.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }

    let (mode, files) = match &cli.command {
        Command::Run(f) => (Mode::Run, f),
        Command::Converge(f) => (Mode::Converge, f),
        Command::Lemmas(f) => (Mode::Lemmas, f),
        Command::Pathway(f) => (Mode::Pathway, f),
        Command::IndexRobust(f) => (Mode::IndexRobust, f),
    };
    match execute(mode, files) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hisd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
