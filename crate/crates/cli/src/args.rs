use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Environment variable naming the default physics configuration file.
pub const CONFIG_ENV: &str = "GAUSS_FACTOR_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "gauss-factor",
    version,
    about = "Gauss-sum factorization with a simulated atom interferometer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// c_m(l) for m = 0..=M at one trial factor.
    Signal(Common),
    /// |C_N^(M)(l)| over a trial set, with classification.
    Factor(Common),
    /// Contrast V for every M in 1..=M_max.
    Contrast(Common),
    /// Factor-averaged c_m with and without pulse-length adaptation.
    AdaptCompare(Common),
    /// Write the pulse schedule for (N, l, m).
    Schedule(Common),
    /// Primes up to floor(sqrt(N)).
    Primes(Common),
    /// Re-run a command from its manifest and verify the checksums.
    Replay {
        manifest: PathBuf,
        /// Write the regenerated output here instead of the recorded path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Range,
    Primes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhysicsArg {
    /// Closed-form signal.
    Ideal,
    /// Ideal pulses through the two-level simulation.
    Sim,
    /// Gaussian beam and cloud averaging.
    Beam,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    #[arg(long = "n", value_name = "N")]
    pub n: Option<u64>,
    /// Truncation order M (maximum order for `contrast`).
    #[arg(long, default_value_t = gauss_factor::DEFAULT_ORDER)]
    pub m_max: u32,
    /// Trial factor for `signal` and `schedule`.
    #[arg(long)]
    pub l: Option<u64>,
    /// Factorization index for `schedule`.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub l_min: u64,
    #[arg(long, default_value_t = 200)]
    pub l_max: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Range)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = gauss_factor::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Report l = 1 among the classified factors.
    #[arg(long)]
    pub include_one: bool,
    /// Factors averaged by `adapt-compare`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = PhysicsArg::Ideal)]
    pub physics: PhysicsArg,
    /// Physics configuration file (`key = value` lines).
    #[arg(long, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Free-evolution time T in µs.
    #[arg(long)]
    pub t_us: Option<f64>,
    #[arg(long)]
    pub tau_pi_us: Option<f64>,
    #[arg(long)]
    pub tau_pi2_us: Option<f64>,
    /// Re-export a parsed schedule file (`schedule` only).
    #[arg(long)]
    pub from: Option<PathBuf>,
    /// Output file; a manifest is written next to it. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Does not affect the output.
    #[arg(long)]
    pub threads: Option<usize>,
}
