//! `jordan-info`: entropies, divergences, information quantities and
//! randomised property suites on Jordan-algebra state spaces.
//!
//! Every run prints one JSON report on standard output. Exit status is 0 on
//! success, 1 when a suite finds a violation and 2 on bad usage or input.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "jordan-info", version, about = "Information theory on Euclidean Jordan algebras")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct Common {
    /// Master seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of randomised trials (command default if omitted).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Violation tolerance for suites (module default if omitted).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Report entropies and information quantities in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,
    /// Compact single-line JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral, decomposition and fine-grained entropy of a state.
    Entropy {
        #[arg(long)]
        state: PathBuf,
        /// Random fine-grained measurements to sample.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Also report the outcome entropy of this measurement.
        #[arg(long)]
        measurement: Option<PathBuf>,
    },
    /// Bregman divergence `D_F(rho, sigma)`.
    Divergence {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value = "neg-entropy")]
        generator: String,
        /// Also report the divergence after this channel.
        #[arg(long)]
        channel: Option<PathBuf>,
    },
    /// Mutual information `I(A;B)` of a partitioned state.
    Mi {
        #[command(flatten)]
        input: Partitioned,
        #[arg(long, default_value = "A")]
        a: String,
        #[arg(long, default_value = "B")]
        b: String,
        #[arg(long, default_value = "neg-entropy")]
        generator: String,
    },
    /// Conditional mutual information `I(A;B|C)` of a partitioned state.
    Cmi {
        #[command(flatten)]
        input: Partitioned,
        #[arg(long, default_value = "A")]
        a: String,
        #[arg(long, default_value = "B")]
        b: String,
        /// Conditioning labels; empty conditions on nothing.
        #[arg(long, default_value = "C")]
        c: String,
        #[arg(long, default_value = "neg-entropy")]
        generator: String,
    },
    /// Randomised property suite.
    Suite {
        #[arg(long, value_enum)]
        property: SuiteProperty,
        #[arg(long, default_value = "neg-entropy")]
        generator: String,
        /// Algebra (`C3`, `S3`, `C2+P2`) or layout (`C2x2`, `R2x2`) depending on the property.
        #[arg(long)]
        algebra: String,
        /// Run only the trial with this seed, as recorded in a witness.
        #[arg(long)]
        replay: Option<u64>,
    },
    /// Monotonicity against additivity over a random generator family.
    Explore {
        #[arg(long, default_value_t = 50)]
        generators: usize,
        #[arg(long, default_value = "C2x2")]
        layout: String,
    },
    /// CHSH value of a named or stored no-signalling box.
    Chsh {
        #[arg(long = "box", value_enum, required_unless_present = "box_file", conflicts_with = "box_file")]
        kind: Option<BoxKind>,
        /// Box table `[x][y][a][b]` as JSON.
        #[arg(long)]
        box_file: Option<PathBuf>,
        /// Restarts of the quantum search.
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Affine dimension of the two-rebit state space and of its product slice.
    #[command(name = "audit-example1")]
    AuditExample1 {
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
}

/// A partitioned state file, or a plain state file with `--layout`.
#[derive(Args, Debug)]
struct Partitioned {
    #[arg(long)]
    state: PathBuf,
    /// Layout for plain state files, e.g. `C2x2x2`.
    #[arg(long)]
    layout: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SuiteProperty {
    Mono,
    Suff,
    Local,
    Identity,
    Additivity,
    Marginal,
    Separoid,
    Dpi,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BoxKind {
    Pr,
    White,
    Deterministic,
    QuantumOpt,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common.clone();
    match commands::run(cli) {
        Ok(report) => {
            // a closed pipe downstream is not an error of this run
            let _ = writeln!(std::io::stdout(), "{}", report.render(common.pretty));
            if report.pass == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
