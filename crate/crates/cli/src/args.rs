//! Command-line arguments. Every subcommand's arguments double as its
//! echoed run config, so they derive both `clap` and `serde`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "solzeta", version, about = "Periodic points, zeta functions and natural boundaries of solenoid automorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Periodic-point counts f(n) for n = 1..N.
    Seq(SeqArgs),
    /// Rational/irrational verdict with closed forms and detector evidence.
    Classify(ClassifyArgs),
    /// Zeta coefficients from the recurrence m z_m = sum f(k) z_(m-k).
    Zeta(ZetaArgs),
    /// Radial scan of F(lambda e^(2 pi i delta)).
    Probe(ProbeArgs),
    /// The Lambert form of H_S.
    Hs(HsArgs),
    /// G_p(z) = H_p(z) + G_p(z^p)/p, optionally with the r=2 decomposition.
    Funceq(FunceqArgs),
    /// Periodic-point counts of a quadratic toral automorphism.
    Catmap(CatmapArgs),
    /// Topological entropy and radius of convergence.
    Entropy(EntropyArgs),
    /// Exceptional set {n : f(n) > s^n} for a cofinite system.
    Sparsity(SparsityArgs),
    /// Kernel factors along rigid indices n(e).
    Rigid(RigidArgs),
    /// Runs a named self-check suite, or all of them.
    Verify(VerifyArgs),
    /// Reruns the worked examples end to end.
    Paper(PaperArgs),
    /// Re-executes the config echoed in an output file and compares bytes.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SystemArgs {
    /// The multiplier r as "a/b".
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    /// Finite S, comma separated.
    #[arg(long, conflicts_with = "t")]
    pub s: Option<String>,
    /// Cofinite mode: S is every prime outside T.
    #[arg(long)]
    pub t: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SeqArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ZetaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Coefficients z_0 .. z_terms.
    #[arg(long)]
    pub terms: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ProbeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long)]
    pub s: String,
    #[arg(long)]
    pub q: u64,
    /// Direction c/q^e.
    #[arg(long)]
    pub delta: String,
    #[arg(long, default_value = "9/10")]
    pub lambda_min: String,
    #[arg(long, default_value = "999/1000")]
    pub lambda_max: String,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Explicit comma-separated grid; overrides min, max and points.
    #[arg(long)]
    pub lambda_grid: Option<String>,
    /// Number of terms; derived from the tail bound when omitted.
    #[arg(long)]
    pub truncation: Option<u64>,
    /// Accept |delta|_q <= q^E.
    #[arg(long)]
    pub allow_weak_delta: bool,
    #[arg(long, default_value_t = 3)]
    pub window_divisor: usize,
    #[arg(long, default_value_t = 10)]
    pub ratio: u32,
    /// Also rescan with 2N terms and compare moduli against the tail bound.
    #[arg(long)]
    pub tail_check: bool,
    /// Bits of precision; defaults to ZETA_PRECISION_BITS or 256.
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct HsArgs {
    /// Comma-separated primes; empty for H = z/(1 - z).
    #[arg(long, default_value = "")]
    pub primes: String,
    /// Also list the first n coefficients.
    #[arg(long, default_value_t = 0)]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct FunceqArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub degree: u64,
    /// Also check the r=2, S={3} decomposition to the same degree.
    #[arg(long)]
    pub decomposition: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct CatmapArgs {
    #[arg(long, default_value_t = 3)]
    pub trace: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub norm: i64,
    /// Expected squarefree d of the field; checked when given.
    #[arg(long)]
    pub d: Option<i64>,
    /// Places such as "2" or "11:0", comma separated.
    #[arg(long, default_value = "")]
    pub places: String,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct EntropyArgs {
    #[arg(long, conflicts_with_all = ["trace", "norm"], allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, conflicts_with = "t")]
    pub s: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long, requires = "norm")]
    pub trace: Option<i64>,
    #[arg(long, requires = "trace", allow_negative_numbers = true)]
    pub norm: Option<i64>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SparsityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long)]
    pub t: String,
    /// Growth base s > 1 as "a/b".
    #[arg(long)]
    pub s: String,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct RigidArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long)]
    pub s: String,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 3)]
    pub e_max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Suite name, or "all".
    pub suite: String,
    #[arg(long)]
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct PaperArgs {
    #[arg(long)]
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A file written by any other subcommand.
    #[arg(long)]
    pub input: PathBuf,
}
