use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use baseball_highlights::cli::{
    cmd_build_table, cmd_evaluate, cmd_run, cmd_sweep, BackendChoice, Overrides,
};
use baseball_highlights::sabermetrics::DEFAULT_MAX_INNING_BUCKET;

#[derive(Parser)]
#[command(name = "highlights", about = "Baseball highlight selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a win expectancy table from a directory of game logs.
    BuildTable {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_INNING_BUCKET)]
        max_inning_bucket: u32,
        /// Stored verbatim in the table metadata.
        #[arg(long)]
        built_at: Option<String>,
    },
    /// Score one game and write its highlight selection and clip manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        backend: Option<BackendChoice>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Precision, recall and F1 of a saved selection.
    Evaluate {
        #[arg(long)]
        selection: PathBuf,
        #[arg(long)]
        gt: PathBuf,
    },
    /// Mean F1 across games for a grid of k values.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        k_grid: Option<Vec<usize>>,
        #[arg(long, value_enum)]
        backend: Option<BackendChoice>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout(), io::stderr());
    let code = match cli.command {
        Command::BuildTable { corpus, out: path, max_inning_bucket, built_at } => {
            cmd_build_table(&corpus, &path, max_inning_bucket, built_at, &mut out, &mut err)
        }
        Command::Run { config, backend, k, out_dir } => {
            cmd_run(&config, &Overrides { backend, k, out_dir }, &mut out, &mut err)
        }
        Command::Evaluate { selection, gt } => cmd_evaluate(&selection, &gt, &mut out, &mut err),
        Command::Sweep { config, k_grid, backend, out_dir } => {
            let overrides = Overrides { backend, k: None, out_dir };
            cmd_sweep(&config, k_grid, &overrides, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
