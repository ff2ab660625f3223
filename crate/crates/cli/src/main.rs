//! `eigencm`: eigenspace posets of reflection groups from the command line.

mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eigencm::groups::{RootSpec, DEFAULT_ELEMENT_CAP};
use eigencm::homology::DEFAULT_SIMPLEX_CAP;

#[derive(Debug, Parser)]
#[command(name = "eigencm", version, about = "Eigenspace posets of unitary reflection groups: homology and Cohen-Macaulay checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format (default: json, or pretty for reproduce and verify).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Cache directory for built posets and homology results.
    #[arg(long, global = true, env = "EIGENCM_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Recompute everything, ignoring and not writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Maximum number of group elements to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP)]
    pub element_cap: usize,
    /// Maximum number of simplices in an order complex.
    #[arg(long, global = true, default_value_t = DEFAULT_SIMPLEX_CAP)]
    pub simplex_cap: usize,
    /// Progress messages on standard error.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, reflections, invariant degrees and a(ζ).
    GroupInfo {
        #[command(flatten)]
        group: GroupArgs,
        /// Roots k/N for which to report a(ζ); repeatable.
        #[arg(long = "zeta")]
        zetas: Vec<RootSpec>,
    },
    /// Build the ζ-eigenspace poset.
    Poset(PosetArgs),
    /// Reduced integral homology of the poset's order complex.
    Homology(PosetArgs),
    /// Cohen-Macaulay certificate over ℤ.
    Cm {
        #[command(flatten)]
        poset: PosetArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::Intervals)]
        strategy: StrategyArg,
        /// Also run the definitional check (every chain link) and compare.
        #[arg(long)]
        check_oracle: bool,
        /// Chain limit for the definitional check.
        #[arg(long, default_value_t = 10_000)]
        max_chains: usize,
    },
    /// Recompute the published homology values.
    Reproduce {
        /// k5-omega, e6-minus1, e6-omega, e7-omega (experimental) or all-desk.
        #[arg(long)]
        case: String,
    },
    /// Run the theorem suites.
    Verify {
        /// JSON suite configuration (default: the built-in grid).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Add the negative control, which must fail.
        #[arg(long)]
        sabotage: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Intervals,
    Garst,
    Definition,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group spec file (JSON).
    pub spec: Option<PathBuf>,
    /// Shipped group name instead of a spec file, e.g. E6, K5, "G(3,1,2)".
    #[arg(long, conflicts_with = "spec")]
    pub group: Option<String>,
}

#[derive(Debug, Args)]
pub struct PosetArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// The root of unity, k/N for e^{2πik/N}.
    #[arg(long)]
    pub zeta: Option<RootSpec>,
    /// Remove the unique maximum (and unique minimum, if any).
    #[arg(long)]
    pub reduced: bool,
    /// Write <STEM>.hasse and <STEM>.json for the poset used.
    #[arg(long, value_name = "STEM")]
    pub export: Option<PathBuf>,
    /// Read a plain Hasse diagram instead of building from a group.
    #[arg(long, conflicts_with_all = ["spec", "group", "zeta"])]
    pub hasse: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

/// What a command produced: a JSON document, its rendering, and an exit code.
pub struct Outcome {
    pub value: serde_json::Value,
    pub pretty: Option<String>,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.global.threads;
    if threads == Some(0) {
        eprintln!("error: --threads must be positive");
        return ExitCode::from(2);
    }
    let format = cli.global.format.unwrap_or(match cli.command {
        Command::Reproduce { .. } | Command::Verify { .. } => Format::Pretty,
        _ => Format::Json,
    });
    let result = eigencm::par::with_threads(threads, || commands::run(&cli));
    match result {
        Ok(out) => {
            print!("{}", output::render(&out, format));
            ExitCode::from(out.code)
        }
        Err(e) => {
            let kind = match e {
                CliError::Usage(_) => "usage",
                CliError::Cap(_) => "cap",
                CliError::Failure(_) => "failure",
            };
            let doc = serde_json::json!({ "schema": "eigencm.error.v1", "error": kind, "message": e.to_string() });
            eprintln!("error: {e}");
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            ExitCode::from(e.code())
        }
    }
}
