//! `alcoved`: compatibility checks for alcoved simplices from the shell.
//!
//! Exit codes: 0 compatible/alcoved, 1 incompatible/not alcoved, 2 usage or
//! parse error, 3 when the combinatorial criterion and the geometric oracle
//! disagree.

mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "alcoved",
    version,
    about = "Decide whether Minkowski sums of alcoved simplices are alcoved"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print wall-clock timings to stderr.
    #[arg(long, global = true)]
    timings: bool,
    /// Largest ground set the geometric oracle accepts.
    #[arg(long, global = true, env = "ALCOVE_ORACLE_BOUND", default_value_t = alcove_core::families::DEFAULT_ORACLE_BOUND)]
    oracle_bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountModeArg {
    FourOnly,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyModeArg {
    Pairwise,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether two simplices are compatible.
    CheckPair {
        /// Ordered set partition, e.g. "1|2 3|4".
        s: String,
        t: String,
        /// Always go through restrictions, even for two cyclic orders.
        #[arg(long)]
        restriction: bool,
    },
    /// Check every pair in a file with one partition per line.
    CheckCollection {
        /// Input file; `-` reads stdin. Blank lines and `#` comments are skipped.
        file: String,
    },
    /// Decide alcovedness of a Minkowski sum geometrically.
    Oracle {
        /// Summands; omit with --exhaustive.
        osps: Vec<String>,
        /// Also run the combinatorial check and exit 3 on disagreement.
        #[arg(long)]
        compare: bool,
        /// Run every ordered pair of cyclic orders on [N] instead.
        #[arg(long, value_name = "N")]
        exhaustive: Option<usize>,
        /// With --exhaustive, use all normalized partitions instead of
        /// cyclic orders.
        #[arg(long, requires = "exhaustive")]
        partitions: bool,
    },
    /// Count cyclic orders compatible with (1, ..., n).
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CountModeArg::Full)]
        mode: CountModeArg,
        /// Also list the orders.
        #[arg(long)]
        list: bool,
    },
    /// Verify one of the named families.
    Family {
        /// associahedron, cyclohedron, dhat, pellytope or higher-pellytope.
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VerifyModeArg::Pairwise)]
        mode: VerifyModeArg,
        /// Block bound for higher-pellytope.
        #[arg(long)]
        k: Option<usize>,
        /// Drop repeated summands.
        #[arg(long)]
        dedup: bool,
    },
    /// Intersect two root cones given as "i>j" generators and "i~j" lineality pairs.
    Cones {
        s: String,
        t: String,
        /// Ambient dimension (default: largest label).
        #[arg(long)]
        n: Option<usize>,
    },
    /// List every normalized partition incompatible with the given one.
    Enumerate {
        osp: String,
        /// Only cyclic orders.
        #[arg(long)]
        nondegenerate: bool,
    },
    /// Compare the criterion with the oracle on seeded random pairs.
    Crossval {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample arbitrary partitions instead of cyclic orders.
        #[arg(long)]
        degenerate: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    let start = Instant::now();
    let result = commands::run(cli.command, &cli.global);
    if cli.global.timings {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(out) => {
            out.print(cli.global.format);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
