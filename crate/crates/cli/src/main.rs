mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iqaoa::criteria::{CriterionSpec, RankPolicy};
use iqaoa::optimizer::GraspConfig;

/// Rank-encoded QAOA for small travelling salesman instances.
#[derive(Parser)]
#[command(name = "iqaoa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimise the circuit angles and report the final cost distribution.
    Solve(SolveArgs),
    /// Enumerate every tour and summarise the costs.
    BruteForce(BruteForceArgs),
    /// Convert between ranks, factoradic digits and permutations.
    Codec(CodecArgs),
    /// Sample the circuit at explicit angles and emit a histogram CSV.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct InstanceArgs {
    /// Distance matrix file, or a bundled instance name (`six`, `eight`).
    #[arg(long)]
    pub instance: String,
    /// File format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 20)]
    pub np: usize,
    #[arg(long, default_value_t = 5)]
    pub ne: usize,
    #[arg(long, default_value_t = 3)]
    pub nd1: usize,
    #[arg(long, default_value_t = 5)]
    pub nd2: usize,
    #[arg(long, default_value_t = 40)]
    pub shots_search: u64,
    #[arg(long, default_value_t = 1000)]
    pub shots_final: u64,
    /// Neighbour trials per local-search step size.
    #[arg(long, default_value_t = 10)]
    pub ls_budget: usize,
    /// Terms joined by `+` or `,`: `mean`, `p<q>`, `mbp<q>`, each optionally `*<weight>`.
    #[arg(long, default_value = "mbp0.1+mean")]
    pub criterion: CriterionSpec,
    /// `modulo`, `discard` or `penalty=<cost>`.
    #[arg(long, default_value = "modulo")]
    pub policy: RankPolicy,
    #[arg(long, default_value_t = GraspConfig::default().master_seed)]
    pub seed: u64,
    /// Score exact distributions instead of sampled ones.
    #[arg(long)]
    pub exact: bool,
    /// Average each evaluation over this many independent samples.
    #[arg(long, default_value_t = 1)]
    pub reeval: usize,
    /// Also enumerate all tours and report the mass on the optimal cost.
    #[arg(long)]
    pub reference: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write the final cost distribution as CSV.
    #[arg(long)]
    pub cost_histogram: Option<PathBuf>,
}

impl SolveArgs {
    pub fn config(&self) -> GraspConfig {
        GraspConfig {
            np: self.np,
            ne: self.ne,
            nd1: self.nd1,
            nd2: self.nd2,
            layers: self.layers,
            shots_search: self.shots_search,
            shots_final: self.shots_final,
            ls_budget: self.ls_budget,
            criterion: self.criterion.clone(),
            policy: self.policy,
            master_seed: self.seed,
            reeval: self.reeval,
            exact: self.exact,
            ..GraspConfig::default()
        }
    }
}

#[derive(Args, Debug)]
pub struct BruteForceArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write `cost,count` for every distinct cost as CSV.
    #[arg(long)]
    pub cost_histogram: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("value").required(true).args(["rank", "perm"]))]
pub struct CodecArgs {
    /// Number of customers; required with `--rank`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rank: Option<u64>,
    /// Comma-separated permutation, 0-indexed unless `--one-indexed`.
    #[arg(long, value_delimiter = ',')]
    pub perm: Option<Vec<usize>>,
    #[arg(long)]
    pub one_indexed: bool,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Comma-separated `beta_1..beta_p,gamma_1..gamma_p`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub angles: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = GraspConfig::default().master_seed)]
    pub seed: u64,
    #[arg(long, default_value = "modulo")]
    pub policy: RankPolicy,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::BruteForce(args) => commands::brute_force(&args),
        Command::Codec(args) => commands::codec(&args),
        Command::Sample(args) => commands::sample(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
