use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};

use twoboundary::cli::{dispatch, RunSpec, Subcommand};
use twoboundary::report::Format;

/// Experiments on systems pinned by both an initial and a final condition.
#[derive(Parser)]
#[command(name = "twoboundary", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration file (`key = value` lines)
    #[arg(long)]
    config: PathBuf,
    /// Write results to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sampling (default: TWOBOUNDARY_WORKERS, then the
    /// config, then 1)
    #[arg(long)]
    workers: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Table,
    Ascii,
}

impl From<FormatArg> for Format {
    fn from(format: FormatArg) -> Self {
        match format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Table => Format::Table,
            FormatArg::Ascii => Format::Ascii,
        }
    }
}

#[derive(ClapSubcommand)]
enum Command {
    /// Rejection-sample the two-boundary lattice walk into a density profile
    Walk(CommonArgs),
    /// Exact conditioned walk density from the forward-backward pass
    WalkExact(CommonArgs),
    /// Conditioned outcome probabilities between two boundary states
    Abl(CommonArgs),
    /// Weak value of an observable between two boundary states
    Weak(CommonArgs),
    /// Two-photon coincidence enhancement versus relative phase
    Hbt(CommonArgs),
    /// Complementary intensities behind a two-port junction
    Splitter(CommonArgs),
    /// Stationary-phase double-slit amplitudes and the detour ratio
    Slit(CommonArgs),
    /// Integrate the photon rate equation
    Laser(CommonArgs),
    /// Average conditioned probabilities over random final states
    BornRecovery(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (subcommand, args) = match cli.command {
        Command::Walk(args) => (Subcommand::Walk, args),
        Command::WalkExact(args) => (Subcommand::WalkExact, args),
        Command::Abl(args) => (Subcommand::Abl, args),
        Command::Weak(args) => (Subcommand::Weak, args),
        Command::Hbt(args) => (Subcommand::Hbt, args),
        Command::Splitter(args) => (Subcommand::Splitter, args),
        Command::Slit(args) => (Subcommand::Slit, args),
        Command::Laser(args) => (Subcommand::Laser, args),
        Command::BornRecovery(args) => (Subcommand::BornRecovery, args),
    };
    if !args.config.exists() {
        eprintln!(
            "error: config file {} does not exist",
            args.config.display()
        );
        return ExitCode::from(1);
    }
    let workers = match args.workers {
        Some(workers) => Some(workers),
        None => match std::env::var("TWOBOUNDARY_WORKERS") {
            Ok(text) => match text.parse::<usize>() {
                Ok(workers) => Some(workers),
                Err(_) => {
                    eprintln!("error: TWOBOUNDARY_WORKERS must be an integer, got `{text}`");
                    return ExitCode::from(1);
                }
            },
            Err(_) => None,
        },
    };
    let spec = RunSpec {
        subcommand,
        config_path: args.config,
        output_path: args.output,
        seed: args.seed,
        workers,
        format: args.format.into(),
    };
    let code = dispatch(
        &spec,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
