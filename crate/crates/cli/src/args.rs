use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ks_core::experiments::AmplitudeRule;
use ks_core::Scheme;

#[derive(Debug, Parser)]
#[command(name = "ks-lab", version, about = "Numerical laboratory for the nonlocal Kuramoto-Sivashinsky equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve to time T with window-by-window continuation.
    Simulate(SimulateArgs),
    /// Check the multiplier lemmas and write lemmas.json.
    VerifyLemmas(LemmaArgs),
    /// Bilinear scaling scan for high-frequency box data.
    Illposed(IllposedArgs),
    /// Distance between μ > 0 and μ = 0 solutions along a μ list.
    MuLimit(MuLimitArgs),
    /// H^{s+λ} smoothing profile and its refinement stability.
    Smoothing(SmoothingArgs),
    /// Residuals of the energy identities.
    Energy(EnergyArgs),
    /// Successive Picard distances on one window.
    Contraction(ContractionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialData {
    Zero,
    Gaussian,
    Sech,
    RandomSobolev,
    BoxPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Picard,
    Etd1,
    Etdrk2,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Picard => Scheme::Picard,
            SchemeArg::Etd1 => Scheme::Etd1,
            SchemeArg::Etdrk2 => Scheme::Etdrk2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleArg {
    Paper,
    Normalized,
}

impl From<RuleArg> for AmplitudeRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Paper => AmplitudeRule::Paper,
            RuleArg::Normalized => AmplitudeRule::Normalized,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Half-length of the periodic domain [0, 2L).
    #[arg(long = "L", default_value_t = 32.0)]
    pub half_length: f64,
    /// Number of collocation points (even, >= 8).
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Uniform time nodes per window, including t = 0.
    #[arg(long, default_value_t = 256)]
    pub nt: usize,
    /// Final time; each command has its own default.
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    /// Sobolev index s.
    #[arg(long, default_value_t = 0.75)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, value_enum, default_value_t = InitialData::Gaussian)]
    pub ic: InitialData,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Profile center; defaults to L.
    #[arg(long)]
    pub center: Option<f64>,
    /// Frequency offset N of box-pair initial data.
    #[arg(long = "box-N", default_value_t = 8.0)]
    pub box_n: f64,
    /// Box width r.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Picard)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 50)]
    pub max_iter: usize,
    /// Contraction constant C used to size Picard windows.
    #[arg(long = "C", default_value_t = 1.0)]
    pub contraction_constant: f64,
    /// Output directory.
    #[arg(long, default_value = "ks-out")]
    pub out: PathBuf,
    /// key=value file of flag defaults; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.0, 0.25, 0.5, 1.0, 2.0])]
    pub lambdas: Vec<f64>,
    /// Times t for the weighted sup check.
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.01, 0.1, 0.5, 1.0])]
    pub times: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.0, 0.3, 1.0, 2.0])]
    pub nus: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IllposedArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "N-list", value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![32.0, 64.0, 128.0, 256.0])]
    pub n_list: Vec<f64>,
    /// Regularity indices; defaults to --s.
    #[arg(long = "s-list", value_delimiter = ',', allow_hyphen_values = true)]
    pub s_list: Option<Vec<f64>>,
    #[arg(long = "t-probe", default_value_t = 0.1)]
    pub t_probe: f64,
    /// Restrict output to one amplitude rule; both by default.
    #[arg(long = "amplitude-rule", value_enum)]
    pub amplitude_rule: Option<RuleArg>,
    #[arg(long = "quad-points", default_value_t = 64)]
    pub quad_points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MuLimitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "mu-list", value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![1.0, 0.5, 0.25, 0.125])]
    pub mu_list: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SmoothingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.2)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Time-step halvings in the convergence study.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ContractionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}
