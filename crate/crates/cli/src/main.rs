mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gkp", version, about = "GKP error-correction simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the acceptance suite and print a pass/fail table.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fewer random instances for the lemma checks.
        #[arg(long)]
        quick: bool,
    },
    /// Compare Steane correction with Knill teleportation on a grid.
    Equivalence {
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
        /// `coherent:<alpha>` or `comb:<label>`.
        #[arg(long, default_value = "coherent:1.0")]
        input: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        s1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        s2: f64,
        /// Points per mode; the grid is self-dual.
        #[arg(long, default_value_t = 128)]
        n_points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-form output widths over a sweep of Δ and input-width ratios.
    Widths {
        #[arg(long, value_enum, default_value_t = BellArg::Standard)]
        kind: BellArg,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.3])]
        delta: Vec<f64>,
        /// Ratios σ_in/Δ, used for both quadratures.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        ratios: Vec<f64>,
        /// Output CSV; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a logical comb state on a grid.
    State {
        #[arg(long, default_value = "zero")]
        label: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a Bell state on a two-mode grid and report marginal peak widths.
    Bell {
        #[arg(long, value_enum, default_value_t = BellArg::Qunaught)]
        kind: BellArg,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Wigner function of a one-mode state.
    Wigner {
        /// Wavefunction CSV as written by `state` or `equivalence`.
        #[arg(long, conflicts_with = "input")]
        from: Option<PathBuf>,
        /// `coherent:<alpha>` or `comb:<label>`.
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct GridArgs {
    #[arg(long, default_value_t = 0.3)]
    delta: f64,
    #[arg(long, default_value_t = 512)]
    n_points: usize,
    /// Half-width of the grid; 6√π if omitted.
    #[arg(long)]
    extent: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BellArg {
    Qunaught,
    Standard,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { seed, quick } => commands::verify(seed, quick),
        Command::Equivalence { delta, input, s1, s2, n_points, out } => {
            commands::equivalence(delta, &input, s1, s2, n_points, &out)
        }
        Command::Widths { kind, delta, ratios, out } => commands::widths(kind, delta, ratios, out.as_deref()),
        Command::State { label, grid, out } => commands::state(&label, grid, &out),
        Command::Bell { kind, grid, out } => commands::bell(kind, grid, &out),
        Command::Wigner { from, input, grid, out } => {
            commands::wigner(from.as_deref(), input.as_deref(), grid, &out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
