//! `projforce`: decide projection-forcing multisets from the command line.
//!
//! Exit codes: 0 on success (verdicts are data), 1 for NotForcing under
//! `--exit-status`, 2 for malformed input or size caps, 3 when the search
//! budget runs out.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use projforce::forcing::DEFAULT_NODE_BUDGET;
use projforce::WeightChangeMultiset;

#[derive(Debug, Parser)]
#[command(name = "projforce", version, about = "Decide whether a multiset of weight changes forces a projection")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Maximum number of search nodes per decision.
    #[arg(long, env = "PROJFORCE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET, global = true)]
    pub budget: u64,

    /// Worker threads for the search and surveys.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..), global = true)]
    pub threads: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Instance {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated integers, one per point of PG(k-1, q).
    #[arg(long, allow_hyphen_values = true)]
    pub multiset: WeightChangeMultiset,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the multiset is projection-forcing.
    Check {
        #[command(flatten)]
        instance: Instance,
        /// Exit with status 1 when the multiset is not forcing.
        #[arg(long)]
        exit_status: bool,
    },
    /// Print the points of PG(k-1, q), the matrix M and its inverse.
    Matrix {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
    },
    /// Report the weight changes of the map sending a domain generator matrix to an image matrix.
    VerifyMap { domain: PathBuf, image: PathBuf },
    /// Classify every multiset with entries in a range.
    Survey(SurveyArgs),
    /// Construct and verify a non-projection realizing the multiset.
    Witness {
        #[command(flatten)]
        instance: Instance,
    },
    /// Decide whether any linear map realizes the multiset.
    Realizable {
        #[command(flatten)]
        instance: Instance,
    },
    /// Compute the split difference and its threshold.
    SplitDiff {
        #[command(flatten)]
        instance: Instance,
    },
    /// Independent reference checks.
    Oracle {
        #[command(subcommand)]
        oracle: OracleCommand,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SurveyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub min_entry: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub max_entry: i64,
    /// Also count non-realizable (vacuously forcing) multisets.
    #[arg(long)]
    pub include_vacuous: bool,
    /// State file updated as the survey progresses.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint file.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
    /// Write the full report as JSON.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    /// Write one CSV row per multiset.
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    /// Non-forcing multisets whose witnesses are kept in the report.
    #[arg(long, default_value_t = 5)]
    pub witness_samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Decide by trying every ordering of the multiset.
    Bruteforce {
        #[command(flatten)]
        instance: Instance,
    },
    /// Binary closed form for 2^k - 2 copies of a and one b.
    Ab {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
    },
    /// Binary closed form for 2^k - 3 copies of a and one each of b, c.
    Abc {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
    },
    /// Search all binary maps of dimension 2 with at most `max_cols` columns.
    Maps {
        #[arg(long, allow_hyphen_values = true)]
        multiset: WeightChangeMultiset,
        #[arg(long, default_value_t = 8)]
        max_cols: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
