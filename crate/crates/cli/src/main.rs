mod bundled;
mod commands;
mod error;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Failure;

#[derive(Parser)]
#[command(name = "pseudorank", version, about = "Rank and pseudo-rank inference for grouped data")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, env = "PSEUDORANK_FORMAT", default_value = "text")]
    format: Format,

    /// Exit with status 4 when a statistic is degenerate
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Ranks or pseudo-ranks of every observation
    Ranks(RanksArgs),
    /// Relative effect estimates and intervals
    Effects(EffectsArgs),
    /// Kruskal-Wallis, trend, rank contrast or ANOVA contrast test
    Test(TestArgs),
    /// Population effects and non-centralities of a scenario
    Analytic(AnalyticArgs),
    /// Monte Carlo rejection rates, sign frequencies or coverage
    Simulate(SimulateArgs),
    /// List bundled scenarios and plans, or print one
    Bundled(BundledArgs),
}

#[derive(Args)]
pub struct RanksArgs {
    /// Long-format CSV (`group,value` or `a,b,value`); `-` reads stdin
    pub file: PathBuf,
    /// Use pseudo-ranks
    #[arg(long)]
    pub pseudo: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Weighted,
    Unweighted,
    Both,
}

#[derive(Args)]
pub struct EffectsArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub kind: KindArg,
    /// Confidence level for intervals, in (0.5, 1)
    #[arg(long)]
    pub level: Option<f64>,
    /// Build interval limits on the logit scale
    #[arg(long, requires = "level")]
    pub logit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Kw,
    Hn,
    Contrast,
    Anova,
}

#[derive(Args)]
pub struct TestArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Use pseudo-ranks
    #[arg(long)]
    pub pseudo: bool,
    /// Trend scores for `hn`, e.g. `1,2,3`
    #[arg(long, allow_hyphen_values = true)]
    pub trend: Option<String>,
    /// `A`, `B`, `AB` or explicit coefficients for `contrast` and `anova`
    #[arg(long, allow_hyphen_values = true)]
    pub contrast: Option<String>,
    /// `two-sided`, `increasing` or `decreasing` (trend test)
    #[arg(long, default_value = "two-sided")]
    pub side: String,
}

#[derive(Args)]
pub struct AnalyticArgs {
    /// Scenario JSON file
    #[arg(required_unless_present = "bundled", conflicts_with = "bundled")]
    pub scenario: Option<PathBuf>,
    /// Name of a bundled scenario
    #[arg(long)]
    pub bundled: Option<String>,
    /// Effects and non-centralities for each named allocation
    #[arg(long, conflicts_with = "subgroup")]
    pub allocations: bool,
    /// Interaction non-centralities along the sub-group ladder
    #[arg(long)]
    pub subgroup: bool,
    /// Total sample size used for the scaled non-centralities
    #[arg(long)]
    pub n_total: Option<u64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Plan JSON file
    #[arg(required_unless_present = "bundled", conflicts_with = "bundled")]
    pub plan: Option<PathBuf>,
    /// Name of a bundled plan
    #[arg(long)]
    pub bundled: Option<String>,
    /// Override the number of replications
    #[arg(long)]
    pub reps: Option<u64>,
    /// Override the seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Keep one summary per replication in the output
    #[arg(long)]
    pub keep_replications: bool,
}

#[derive(Args)]
pub struct BundledArgs {
    /// Print this scenario or plan
    pub name: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Ranks(a) => commands::ranks(a),
        Command::Effects(a) => commands::effects(a),
        Command::Test(a) => commands::test(a),
        Command::Analytic(a) => commands::analytic(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Bundled(a) => commands::bundled(a),
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            if cli.strict {
                if let Some(why) = &out.degenerate {
                    eprintln!("pseudorank: degenerate statistic: {why}");
                    return ExitCode::from(4);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pseudorank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}
