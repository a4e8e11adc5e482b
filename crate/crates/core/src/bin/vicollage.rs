use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vicollage::cli::{self, CliError, Preset};
use vicollage::Normalization;

#[derive(Parser)]
#[command(name = "vicollage", version, about = "Galerkin solver and collage-based parameter recovery for -u'' + ju = f")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the direct problem for each m and report errors (or samples).
    Direct(RunArgs),
    /// Recover j from Galerkin targets for each (m, n).
    Inverse(RunArgs),
    /// Compare the collage bound with the true H1 error.
    Bound(RunArgs),
    /// Run a built-in reproduction preset.
    Repro {
        #[arg(value_enum)]
        table: Table,
        #[arg(long, value_enum, default_value_t = Norm::Flat)]
        norm: Norm,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_path` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Table1,
    Table2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Flat,
    L2,
}

impl From<Norm> for Normalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Flat => Normalization::Flat,
            Norm::L2 => Normalization::L2,
        }
    }
}

fn run(args: Args) -> Result<(), CliError> {
    cli::configure_threads(std::env::var(cli::THREADS_ENV).ok().as_deref())?;
    match args.command {
        Command::Direct(a) => run_config(a, cli::cmd_direct),
        Command::Inverse(a) => run_config(a, cli::cmd_inverse),
        Command::Bound(a) => run_config(a, cli::cmd_bound),
        Command::Repro { table, norm, out } => {
            let preset = match table {
                Table::Table1 => Preset::Table1,
                Table::Table2 => Preset::Table2,
            };
            let csv = cli::repro(preset, norm.into())?;
            cli::emit(&csv, out.as_deref())
        }
    }
}

fn run_config(
    args: RunArgs,
    cmd: fn(&cli::RunConfig) -> Result<String, CliError>,
) -> Result<(), CliError> {
    let cfg = cli::load_config(&args.config)?;
    let csv = cmd(&cfg)?;
    let out = args.out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    cli::emit(&csv, out.as_deref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vicollage: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
