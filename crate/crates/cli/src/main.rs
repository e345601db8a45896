// SPDX-License-Identifier: Apache-2.0
//! `pwlship` command-line front end.

mod bench;
mod generate;
mod input;
mod report;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pwlship::instgen::SizeClass;
use pwlship::mipexport::Variant;
use pwlship::solve::Method;

#[derive(Parser)]
#[command(name = "pwlship", version, about = "Exact a-priori route evaluation and lot sizing with requalification costs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Generate instance files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve many instances with several methods and write a CSV table.
    Bench(BenchArgs),
    /// Savings against lot-for-lot for lot-sizing instances.
    Report(ReportArgs),
    /// Write a MIP model in LP format for an external solver.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Instance file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: Method,
    /// Branching seed for bbdp.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Require the vehicle to end empty.
    #[arg(long)]
    pub force_empty_end: bool,
    /// Restrict value functions to integer borders; chosen from the data when omitted.
    #[arg(long, value_enum)]
    pub integer_mode: Option<Switch>,
    /// Solution file; printed to standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum GenCommand {
    /// Lot-sizing instances on a grid of sizes and classes.
    Lswrc(GenLswrcArgs),
    /// Route-evaluation instances on orienteering data.
    Srltp(GenSrltpArgs),
}

#[derive(Args)]
pub struct GenLswrcArgs {
    /// Numbers of periods.
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "small,medium,large", value_parser = parse_class)]
    pub qmax_class: Vec<SizeClass>,
    #[arg(long, value_delimiter = ',', default_value = "small,medium,large", value_parser = parse_class)]
    pub theta_class: Vec<SizeClass>,
    /// Number of seeds per cell.
    #[arg(long, default_value_t = 11)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    /// Generator settings as JSON; built-in defaults otherwise.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct GenSrltpArgs {
    /// Orienteering file with the time limit and `x y score` records.
    #[arg(long, value_name = "FILE", conflicts_with = "synthetic", required_unless_present = "synthetic")]
    pub base: Option<PathBuf>,
    /// Use random points instead of a base file.
    #[arg(long, value_name = "POINTS")]
    pub synthetic: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "30,60,120")]
    pub qmax: Vec<u32>,
    /// Routes per capacity; overrides the config file.
    #[arg(long)]
    pub routes: Option<usize>,
    /// Candidates per randomized nearest-neighbour step; overrides the config file.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Instance files or directories of `.json` files.
    #[arg(long = "in", value_name = "PATH", num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "auto", value_parser = parse_method)]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Lot-sizing files or directories of `.json` files.
    #[arg(long = "in", value_name = "PATH", num_args = 0..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: Method,
    /// Per-instance table; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Per-cell means of the savings components.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExportArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, default_value = "beta", value_parser = parse_variant)]
    pub variant: Variant,
    /// LP file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: pwlship::Error| e.to_string())
}

fn parse_class(s: &str) -> Result<SizeClass, String> {
    s.parse().map_err(|e: pwlship::Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: pwlship::Error| e.to_string())
}

/// How a command ended.
pub enum Outcome {
    Done,
    Infeasible,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Gen(GenCommand::Lswrc(args)) => generate::lswrc(&args).map(|_| Outcome::Done),
        Command::Gen(GenCommand::Srltp(args)) => generate::srltp(&args).map(|_| Outcome::Done),
        Command::Bench(args) => bench::run(&args).map(|_| Outcome::Done),
        Command::Report(args) => report::run(&args).map(|_| Outcome::Done),
        Command::Export(args) => solve::export(&args).map(|_| Outcome::Done),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
