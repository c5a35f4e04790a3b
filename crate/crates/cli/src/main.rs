//! `tnq`: batch front end over the tnq libraries.

mod commands;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use tnq_channels::RepKind;

use commands::BasisChoice;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "tnq", version, about = "Tensor-network computations on states, channels and counting problems")]
struct Cli {
    /// numerical tolerance
    #[arg(long, global = true, default_value_t = tnq_tensor::DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Model counting on DIMACS CNF
    Sat {
        #[command(subcommand)]
        cmd: SatCmd,
    },
    /// Proper 3-edge-colorings of a cubic graph
    Coloring {
        graph: PathBuf,
        /// also run the exhaustive count
        #[arg(long)]
        oracle: bool,
        /// the caller vouches that the graph is planar
        #[arg(long)]
        planar: bool,
    },
    /// Channel conversion and structural checks
    Channel {
        #[command(subcommand)]
        cmd: ChannelCmd,
    },
    /// Matrix product states
    Mps {
        #[command(subcommand)]
        cmd: MpsCmd,
    },
    /// Local invariants and entanglement of a state across a cut
    Invariants {
        #[arg(long = "in")]
        input: PathBuf,
        /// number of leading legs on the left of the cut
        #[arg(long, default_value_t = 1)]
        cut: usize,
    },
    /// Average gate fidelity, and entanglement fidelity for a given state
    Fidelity {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SatCmd {
    Count {
        cnf: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ChannelCmd {
    Convert {
        #[arg(long, value_parser = parse_rep)]
        from: RepKind,
        #[arg(long, value_parser = parse_rep)]
        to: RepKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, value_enum)]
        basis: Option<BasisChoice>,
    },
    Check {
        #[arg(long = "in", conflicts_with = "file")]
        input: Option<PathBuf>,
        #[arg(required_unless_present = "input")]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum MpsCmd {
    Factor {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// keep at most this many singular values at every cut
        #[arg(long)]
        truncate: Option<usize>,
    },
}

fn parse_rep(s: &str) -> Result<RepKind, String> {
    s.parse().map_err(|_| format!("expected one of kraus, superop, choi, chi, stinespring; got `{s}`"))
}

fn run(cli: Cli) -> Result<String, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    match cli.cmd {
        Cmd::Sat { cmd: SatCmd::Count { cnf, oracle } } => commands::sat_count(&cnf, oracle),
        Cmd::Coloring { graph, oracle, planar } => commands::coloring(&graph, oracle, planar),
        Cmd::Channel { cmd: ChannelCmd::Convert { from, to, input, output, basis } } => {
            commands::channel_convert(from, to, &input, &output, basis)
        }
        Cmd::Channel { cmd: ChannelCmd::Check { input, file } } => {
            let path = input.or(file).expect("clap enforces one path");
            commands::channel_check(&path, cli.tol)
        }
        Cmd::Mps { cmd: MpsCmd::Factor { input, output, truncate } } => {
            commands::mps_factor_cmd(&input, &output, truncate)
        }
        Cmd::Invariants { input, cut } => commands::invariants_cmd(&input, cut, cli.tol),
        Cmd::Fidelity { input, state } => commands::fidelity_cmd(&input, state.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
