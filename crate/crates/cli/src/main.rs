//! `genround`: generalized roundness and negative type from the command line.

mod commands;
mod experiment;
mod failure;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genround::{DEFAULT_P_CAP, DEFAULT_TOL, DEFAULT_VERTEX_CAP};

use commands::{GenKind, ScaleIsoCmd, SimplexArgs};
use experiment::ExperimentArgs;
use failure::CmdResult;
use io::{Format, Output};

#[derive(Debug, Parser)]
#[command(name = "genround", version, about = "Generalized roundness and negative type of finite metric spaces")]
struct Cli {
    /// Bisection tolerance for roundness brackets.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Largest exponent the roundness search tries before reporting a bracketing failure.
    #[arg(long, global = true, default_value_t = DEFAULT_P_CAP)]
    p_cap: f64,
    /// Refuse to build trees with more vertices than this.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// Inputs are inline JSON, a file path, or `-` for standard input.
#[derive(Debug, Subcommand)]
enum Command {
    /// Build a comb, an SST or an lp point set from a JSON spec.
    Gen { kind: GenKind, spec: String },
    /// Bracket the supremal roundness exponent of a space or tree.
    Roundness { input: String },
    /// Test p-negative type.
    Negtype {
        input: String,
        #[arg(long)]
        p: f64,
    },
    /// Evaluate one simplex, or search small simplices for a violation.
    Simplex {
        input: String,
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',', conflicts_with = "search")]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',', requires = "a")]
        b: Vec<usize>,
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        mult_max: usize,
    },
    /// Star upper bounds for a spherically symmetric tree.
    Bound { spec: String },
    /// Scale-isomorphism certificates and comb windows.
    #[command(subcommand)]
    Scaleiso(ScaleIsoCmd),
    /// Euclidean coordinates for the transform sqrt(d^p), or a witness that none exist.
    Embed {
        input: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
    /// Run a parameter sweep.
    Experiment(ExperimentArgs),
}

fn run(cli: Cli) -> CmdResult {
    let out = Output { format: cli.format, path: cli.output };
    match cli.command {
        Command::Gen { kind, spec } => commands::gen(kind, &spec, cli.vertex_cap, &out),
        Command::Roundness { input } => commands::roundness_cmd(&input, cli.tol, cli.p_cap, &out),
        Command::Negtype { input, p } => commands::negtype(&input, p, &out),
        Command::Simplex { input, p, a, b, search, k_max, mult_max } => {
            commands::simplex(&input, SimplexArgs { p, a, b, search, k_max, mult_max }, &out)
        }
        Command::Bound { spec } => commands::bound(&spec, &out),
        Command::Scaleiso(cmd) => commands::scaleiso(cmd, &out),
        Command::Embed { input, p } => commands::embed(&input, p, &out),
        Command::Experiment(args) => experiment::cmd(&args, cli.tol, cli.p_cap, cli.vertex_cap, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are validation errors; 2 is reserved for numerical failures.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("genround: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
