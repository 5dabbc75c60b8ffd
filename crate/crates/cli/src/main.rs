use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use supou::experiments::digest;
use supou_cli::output::Run;
use supou_cli::{commands, parse_config, CliError, Suite};

/// Environment variable fixing the size of the worker pool.
const THREADS_VAR: &str = "SUPOU_THREADS";

#[derive(Parser)]
#[command(name = "supou", version, about = "Analytics and Monte Carlo for integrated supOU processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run document (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed; overrides `sim.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic quantities as CSV.
    Analyze,
    /// Simulated paths as CSV.
    Simulate,
    /// Run a statistical suite; exit 1 when it fails.
    Verify {
        #[arg(value_enum)]
        suite: Option<Suite>,
    },
    /// Growth-exponent table of the configured model.
    Table,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Config(format!("{THREADS_VAR}: expected a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("{THREADS_VAR}: {e}")))?;
    }
    let path = cli
        .config
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(s) = cli.seed {
        cfg.sim.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.to_string_lossy().into_owned();
    }
    let mut out = Run::new(PathBuf::from(&cfg.output.dir), digest(&cfg.canonical()), cfg.sim.seed)?;
    match cli.command {
        Command::Analyze => commands::analyze(&cfg, &mut out).map(|_| true),
        Command::Simulate => commands::simulate(&cfg, &mut out).map(|_| true),
        Command::Verify { suite } => commands::verify(&cfg, suite, &mut out),
        Command::Table => commands::table(&cfg, &mut out).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
