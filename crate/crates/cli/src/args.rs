use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// V-complexity, compression complexity and cream-in-coffee experiments.
#[derive(Debug, Parser, Serialize)]
#[command(name = "vcx", version, args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct Cli {
    /// TOML file of flag values; flags on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<PathBuf>,

    /// Output directory, or a .csv path for the main table.
    #[arg(long, global = true, default_value = "vcx-out")]
    pub out: PathBuf,

    #[arg(long, global = true, default_value_t = 42)]
    #[serde(serialize_with = "seed_value")]
    pub seed: u64,

    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

/// TOML integers are signed 64-bit; larger seeds are written as strings.
fn seed_value<S: serde::Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(*seed) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&seed.to_string()),
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Print V(f).
    Vc(VcArgs),
    /// Equidistributed step-function approximation.
    Approx(ApproxArgs),
    /// RLE and LZ77 scaling of a discretised function.
    Compress(CompressArgs),
    /// LZ77 token counts on half and full domain.
    Ratio(RatioArgs),
    /// Two-lane lattice gas.
    Lattice(LatticeArgs),
    /// Complexity of the diffusing step profile.
    Diffusion(DiffusionArgs),
    /// Data (and optionally SVG) for one figure.
    Figures(FigureArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Vc(_) => "vc",
            Command::Approx(_) => "approx",
            Command::Compress(_) => "compress",
            Command::Ratio(_) => "ratio",
            Command::Lattice(_) => "lattice",
            Command::Diffusion(_) => "diffusion",
            Command::Figures(_) => "figures",
        }
    }
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct QuadArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-13)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_subdivisions: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct VcArgs {
    /// Function spec, e.g. power:alpha=2@0,1
    pub function: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMethod {
    Greedy,
    Grid,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct ApproxArgs {
    pub function: String,
    /// Target total L1 error.
    #[arg(long, default_value_t = 0.07)]
    pub epsilon: f64,
    /// Per-interval error budget for the greedy method; overrides --epsilon.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = ApproxMethod::Greedy)]
    pub method: ApproxMethod,
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct CompressArgs {
    pub function: String,
    /// Ratio dy/dx of the rounding grid; 0 keeps exact samples.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Comma-separated cell widths; default (b-a)/{100,200,400,800}.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<String>,
    #[arg(long, default_value_t = 4096)]
    pub window: usize,
    #[arg(long, default_value_t = 2)]
    pub min_match: usize,
    /// Also write the LZ77 token stream of the finest grid.
    #[arg(long)]
    pub tokens: bool,
    /// Also minimise over r in 0, 0.1, ..., 3 and write complexity.csv.
    #[arg(long)]
    pub complexity: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct RatioArgs {
    #[arg(default_value = "sin2@0,1")]
    pub function: String,
    /// Comma-separated even cell counts for the full domain.
    #[arg(long, default_value = "1000,2000,5000,10000")]
    pub n: String,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 4096)]
    pub window: usize,
    #[arg(long, default_value_t = 2)]
    pub min_match: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct LatticeArgs {
    #[arg(long, default_value_t = 201)]
    pub nodes: usize,
    #[arg(long, default_value_t = 18000)]
    pub steps: u64,
    /// Segments left of this node start as cream.
    #[arg(long, default_value_t = 101)]
    pub split: usize,
    #[arg(long, default_value_t = 20)]
    pub groups: usize,
    #[arg(long, default_value_t = 12)]
    pub bins: u32,
    #[arg(long, default_value_t = 20)]
    pub replicas: usize,
    #[arg(long, default_value_t = 100)]
    pub sample_every: u64,
    /// Skip the per-time profile files.
    #[arg(long)]
    pub no_profiles: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct DiffusionArgs {
    /// `log:lo,hi,n` or a comma-separated list.
    #[arg(long, default_value = "log:1e-4,2,60")]
    pub times: String,
    #[arg(long, default_value_t = 0.0025)]
    pub dx: f64,
    #[arg(long, default_value_t = 0.8)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub diffusivity: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
    Fig9,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: Figure,
    /// Also write an SVG chart.
    #[arg(long)]
    pub plot: bool,
}
