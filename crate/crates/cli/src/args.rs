use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const MIN_SEGMENT: u64 = 1 << 10;

#[derive(Debug, Parser, Serialize)]
#[command(name = "sqfree", version, about = "Clique covers and bound checks for the squarefree graph")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "SQFREE_THREADS")]
    pub threads: Option<usize>,

    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Sieve window length
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub segment_size: u64,

    /// Write the main output here instead of stdout
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format (default: csv for cdf, json otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the run record (version, config, wall time) here instead of stderr
    #[arg(long, global = true)]
    pub provenance: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Build a clique cover and validate it
    Cover {
        #[arg(long, value_enum, default_value_t = Strategy::CappedGreedy)]
        strategy: Strategy,
        /// Odd-member limit for capped-greedy
        #[arg(long, default_value_t = 3)]
        cap: u32,
        #[arg(short)]
        n: u64,
    },
    /// Check a bound and print margin-bearing reports
    Verify {
        #[arg(value_enum)]
        subject: Subject,
        /// Graph size (default depends on the subject)
        #[arg(short)]
        n: Option<u64>,
        /// main: check every n up to -n
        #[arg(long)]
        sweep: bool,
        /// main: threshold K (default 0.672·2n/π²)
        #[arg(long)]
        k: Option<f64>,
        /// est-c: evaluate every odd vertex instead of a sample
        #[arg(long)]
        exhaustive: bool,
        /// est-c: sample size; degree-error: trial count
        #[arg(long)]
        samples: Option<usize>,
        /// sigma, degree-error: sweep bound
        #[arg(long)]
        n_max: Option<u64>,
        /// sigma: exponent
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[command(flatten)]
        eps: EpsOverride,
    },
    /// Exact independence number by branch and bound
    Oracle {
        #[arg(short)]
        n: u64,
        /// List every maximum independent set
        #[arg(long)]
        families: bool,
    },
    /// Empirical distribution of the density factor over odd vertices
    Cdf {
        #[arg(short)]
        n: u64,
        /// start:end:step, decimals
        #[arg(long, default_value = "0:1:0.001")]
        grid: String,
    },
    /// Print the sigma constants and relative-error bounds
    Constants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Greedy,
    CappedGreedy,
    Mcf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    Main,
    EstAb,
    EstC,
    EstDe,
    Sigma,
    DegreeError,
    TailGrid,
    BMargin,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct EpsOverride {
    /// Override one relative-error bound (default: the stock set)
    #[arg(long)]
    pub eps_a: Option<f64>,
    #[arg(long)]
    pub eps_b: Option<f64>,
    #[arg(long)]
    pub eps_c: Option<f64>,
    #[arg(long)]
    pub eps_d: Option<f64>,
    #[arg(long)]
    pub eps_e: Option<f64>,
}
