//! gsmin: edge minimisation of LC-equivalent graph states.
//!
//! Subcommands: `minimize` (SA / exact ILP / hybrid / orbit oracle),
//! `check-lc` (LC-equivalence with witness), `orbit` (orbit enumeration),
//! `ilp-export` (LP text bridge), `bench` (benchmark harness over random
//! graph models), `grgs` (repeater-graph-state resource comparison).
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 budget or size cap,
//! 4 internal verification failure.

mod bench;
mod cmds;
mod io;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 2 }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 3 }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 4 }
    }
}

#[derive(Parser)]
#[command(name = "gsmin", version, about = "Edge minimisation of LC-equivalent graph states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimise the edge count of a graph state's graph.
    Minimize(cmds::MinimizeArgs),
    /// Decide LC-equivalence of two graphs and print a witness.
    CheckLc(cmds::CheckLcArgs),
    /// Enumerate the LC orbit of a graph.
    Orbit(cmds::OrbitArgs),
    /// Export the edge-minimisation ILP in LP format.
    IlpExport(cmds::IlpExportArgs),
    /// Run benchmark sweeps over random graph models.
    Bench(bench::BenchArgs),
    /// Compare naive and Commute-LC fusion costs for a gRGS.
    Grgs(cmds::GrgsArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Minimize(args) => cmds::run_minimize(args),
        Command::CheckLc(args) => cmds::run_check_lc(args),
        Command::Orbit(args) => cmds::run_orbit(args),
        Command::IlpExport(args) => cmds::run_ilp_export(args),
        Command::Bench(args) => bench::run_bench(args),
        Command::Grgs(args) => cmds::run_grgs(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
