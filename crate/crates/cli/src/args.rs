use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::format::Format;
use crate::manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(
    name = "mtlogloss",
    version,
    about = "Rate regions and coding simulations for log-loss distortion",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    /// Rerun exactly from a `.meta.json` sidecar written by an earlier run.
    #[arg(long, value_name = "SIDECAR")]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership or dominant face of the joint-distortion region.
    #[command(allow_negative_numbers = true)]
    RegionJd {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: RegionJdParams,
    },
    /// Membership, single point or curve of the X-distortion region.
    #[command(allow_negative_numbers = true)]
    RegionXd {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: RegionXdParams,
    },
    /// Monte Carlo run of one coding scheme.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: SimulateParams,
    },
    /// Single-terminal rate-distortion functions of X.
    #[command(allow_negative_numbers = true)]
    Rdfun {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: RdfunParams,
    },
    /// Self-consistency checks of the region solvers on one pmf.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: VerifyParams,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON file `{"pmf": [[...], ...]}` with x indexing rows.
    #[arg(long)]
    pub pmf: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent. A `.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to the output extension, then to csv for tables and json for verdicts.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RegionJdParams {
    /// Joint distortion budget in bits.
    #[arg(long)]
    pub d: f64,
    /// With `--ry`, decide membership of `(rx, ry)`.
    #[arg(long, requires = "ry")]
    pub rx: Option<f64>,
    #[arg(long, requires = "rx")]
    pub ry: Option<f64>,
    /// Points on the dominant face when no query is given.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RegionXdParams {
    /// With `--ry` and `--dx`, decide membership of `(rx, ry, dx)`.
    #[arg(long, requires_all = ["ry", "dx"])]
    pub rx: Option<f64>,
    #[arg(long, requires_all = ["rx", "dx"])]
    pub ry: Option<f64>,
    #[arg(long, requires_all = ["rx", "ry"])]
    pub dx: Option<f64>,
    /// Solve at a single helper-rate budget.
    #[arg(long, conflicts_with = "rx")]
    pub ry_budget: Option<f64>,
    /// Budgets on the curve when neither a query nor a budget is given.
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    /// Also report the exhaustive lattice search at this spacing.
    #[arg(long)]
    pub grid_step: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// X coded with Y at the decoder.
    Wz,
    /// X coded alone.
    Rd,
    /// Time-sharing between the two corners of the joint region.
    Jd,
    /// Lossless recovery from the joint code plus extra bins.
    Smsw,
    /// Helper codebook for Y, binned X.
    Xd,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Wz => "wz",
            Scheme::Rd => "rd",
            Scheme::Jd => "jd",
            Scheme::Smsw => "smsw",
            Scheme::Xd => "xd",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SimulateParams {
    #[arg(value_enum)]
    pub scheme: Scheme,
    /// Blocklength.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Rate in bits/symbol (wz, rd).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Joint distortion target (jd, smsw).
    #[arg(long)]
    pub d: Option<f64>,
    /// Fraction of the block spent at the Y-first corner (jd, smsw).
    #[arg(long, default_value_t = 0.5)]
    pub mix: f64,
    /// X distortion target (xd).
    #[arg(long)]
    pub dx: Option<f64>,
    /// Helper rate for the xd channel; U = Y when absent.
    #[arg(long)]
    pub ry_budget: Option<f64>,
    /// Extra-bin rates (smsw); default to the realized split plus 3·eps.
    #[arg(long)]
    pub extra_x: Option<f64>,
    #[arg(long)]
    pub extra_y: Option<f64>,
    /// Also report how often an average over this many blocks exceeds mean + eps.
    #[arg(long)]
    pub repeats: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RdfunParams {
    /// Evaluate at one distortion instead of a sweep.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct VerifyParams {
    /// Points per axis of the membership grid.
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
    /// Random membership queries on top of the grid.
    #[arg(long, default_value_t = 10_000)]
    pub queries: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Compare the solver against the lattice search at this spacing.
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Budgets for the lattice comparison.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
}

impl Command {
    pub fn into_manifest(self) -> RunManifest {
        let (common, mut m) = match self {
            Command::RegionJd { common, params } => with(common, "region-jd", &params),
            Command::RegionXd { common, params } => with(common, "region-xd", &params),
            Command::Simulate { common, params } => with(common, "simulate", &params),
            Command::Rdfun { common, params } => with(common, "rdfun", &params),
            Command::Verify { common, params } => with(common, "verify", &params),
        };
        m.output_path = common.out;
        m.format = common.format;
        m
    }
}

fn with(common: Common, name: &str, params: &impl Serialize) -> (Common, RunManifest) {
    let m = RunManifest::new(name, common.pmf.clone(), params, common.seed);
    (common, m)
}
