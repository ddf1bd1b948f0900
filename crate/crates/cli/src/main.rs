//! `liouville` command-line entry point.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liouville_core::SequenceKind;

#[derive(Parser, Debug)]
#[command(name = "liouville", version, about = "Solve and certify polynomial systems coupled with Liouville series")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub prec: u32,
    /// Seed for the multistart search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the command's result document here (no timings, reproducible byte for byte).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient sequence tools.
    #[command(subcommand)]
    Seq(SeqCommand),
    /// Evaluate H_{d,eps}(x) and its derivative.
    Eval(EvalArgs),
    /// Certify a candidate zero as regular / balanced / well balanced.
    Certify(CertifyArgs),
    /// Find a start root and track it through increasing degrees.
    Solve(SolveArgs),
    /// Track from a given start point at a given degree.
    Track(TrackArgs),
    /// Print the degree bounds n(nr+n+r+1) and n(r+1)+r.
    Bounds(BoundsArgs),
}

#[derive(Subcommand, Debug)]
pub enum SeqCommand {
    /// Check |a_{i+1}| > |a_i|^(i^l) for i = 1..=max_i.
    Audit(AuditArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SequenceArgs {
    /// Built-in sequence.
    #[arg(long = "sequence", value_enum, default_value = "default-tower")]
    pub kind: KindArg,
    /// JSON sequence spec (overrides --sequence).
    #[arg(long = "sequence-file")]
    pub file: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum KindArg {
    #[value(name = "default-tower", alias = "default_tower")]
    DefaultTower,
    #[value(name = "factorial-pow2", alias = "factorial_pow2")]
    FactorialPow2,
}

impl From<KindArg> for SequenceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::DefaultTower => SequenceKind::DefaultTower,
            KindArg::FactorialPow2 => SequenceKind::FactorialPow2,
        }
    }
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Growth exponent; may be repeated.
    #[arg(long = "l", default_values_t = [3u32])]
    pub l: Vec<u32>,
    #[arg(long = "max-i", default_value_t = 7)]
    pub max_i: usize,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long)]
    pub d: usize,
    /// Real part of x (decimal or p/q).
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long = "x-im", default_value = "0", allow_hyphen_values = true)]
    pub x_im: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub eps: String,
    #[arg(long = "eps-im", default_value = "0", allow_hyphen_values = true)]
    pub eps_im: String,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Parameter values; omit when the system has no parameters.
    #[arg(long)]
    pub z: Option<PathBuf>,
    /// Point JSON with both x and y.
    #[arg(long)]
    pub point: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrackerArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub z: Option<PathBuf>,
    #[arg(long = "d-max", default_value_t = 8)]
    pub d_max: usize,
    #[arg(long = "r-max", default_value_t = 10.0)]
    pub r_max: f64,
    /// Stop once the certified residual bound is below 2^this.
    #[arg(long = "residual-tol-log2", default_value_t = -100, allow_hyphen_values = true)]
    pub residual_tol_log2: i64,
    #[arg(long = "max-newton-iters", default_value_t = 50)]
    pub max_newton_iters: usize,
    #[arg(long = "max-substeps", default_value_t = 64)]
    pub max_substeps: usize,
    /// CSV trace of every accepted state.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub tracker: TrackerArgs,
    /// Starting degree (default: smallest degree with a start root).
    #[arg(long = "d-start")]
    pub d_start: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    /// Candidate zero of F to certify alongside the solve.
    #[arg(long)]
    pub point: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrackArgs {
    #[command(flatten)]
    pub tracker: TrackerArgs,
    /// Start point JSON (x only is used).
    #[arg(long)]
    pub start: PathBuf,
    /// Degree at which the start point is a root.
    #[arg(long)]
    pub d: usize,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub r: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
