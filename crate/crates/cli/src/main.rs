//! `pfunnel`: privacy mappings from the command line.

mod commands;
mod level;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use level::{Grid, Level};
use source::JointSource;

#[derive(Parser, Debug)]
#[command(
    name = "pfunnel",
    version,
    about = "Greedy privacy mappings, trade-off curves and inference bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Least-leaking mapping that keeps I(X;Y) >= R.
    Funnel {
        #[command(flatten)]
        source: JointSource,
        /// Disclosure floor in bits, or `NN%` of H(X).
        #[arg(long = "R", value_name = "LEVEL")]
        r: Level,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Least-disclosing mapping that keeps I(S;Y) >= delta.
    Bottleneck {
        #[command(flatten)]
        source: JointSource,
        /// Leakage floor in bits, or `NN%` of I(S;X).
        #[arg(long, value_name = "LEVEL")]
        delta: Level,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Trade-off curves over a grid of constraint levels.
    Sweep {
        #[command(flatten)]
        source: JointSource,
        /// `start:stop:count` or `a,b,c`; each level in bits or `NN%`.
        #[arg(long)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Every deterministic mapping with its (I(X;Y), I(S;Y)) point.
    Region {
        #[command(flatten)]
        source: JointSource,
        /// Largest public alphabet to enumerate.
        #[arg(long, default_value_t = privacy_funnel::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Inference-cost gains of a mapping against their information bounds.
    CheckBounds {
        #[command(flatten)]
        source: JointSource,
        /// Channel file as written by `funnel` or `bottleneck`.
        #[arg(long, value_name = "PATH")]
        channel: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Count a table into a serialized joint.
    Ingest {
        #[command(flatten)]
        source: JointSource,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Funnel,
    Bottleneck,
    Both,
}

/// A failed command and its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<privacy_funnel::Error> for Failure {
    fn from(e: privacy_funnel::Error) -> Self {
        use privacy_funnel::Error::*;
        let code = match e {
            InfeasibleDisclosure { .. } | InfeasibleRetention { .. } | CapExceeded { .. } => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Funnel { source, r, out } => {
            commands::greedy(commands::Algorithm::Funnel, &source, r, &out)
        }
        Command::Bottleneck { source, delta, out } => {
            commands::greedy(commands::Algorithm::Bottleneck, &source, delta, &out)
        }
        Command::Sweep {
            source,
            grid,
            which,
            out,
        } => commands::sweep(&source, &grid, which, &out),
        Command::Region { source, cap, out } => commands::region(&source, cap, &out),
        Command::CheckBounds {
            source,
            channel,
            out,
        } => commands::check_bounds(&source, &channel, &out),
        Command::Ingest { source, out } => commands::ingest(&source, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pfunnel: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
