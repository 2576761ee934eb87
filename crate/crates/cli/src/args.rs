//! Flags and config files. Every analysis flag is optional here so a config file can be
//! overlaid on top; `fill` then supplies defaults and the filled struct is what gets embedded
//! in the JSON artifact.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "gscpcc", version, about = "Thresholds, potential analysis and erasure-channel simulation for partially repeated spatially coupled turbo codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// BP threshold by density evolution (uncoupled when m = 0).
    #[command(after_help = "CSV columns: code,rate,q,lambda,rho,m,L,mode,threshold,gap,probes,iterations")]
    Threshold(ThresholdArgs),
    /// Single-system and potential thresholds of the uncoupled ensemble, with the capacity bound.
    #[command(after_help = "CSV columns: code,rate,q,lambda,eps_s,eps_c,bound,closed_form,gap\n\
        bound is empty when q < 2 or lambda != 1/q; closed_form is empty unless the code has 2 states and lambda = 1/q")]
    Potential(PotentialArgs),
    /// MAP threshold from the area theorem.
    #[command(after_help = "CSV columns: code,rate,q,lambda,eps_map,gap\n\
        with --curve: eps,h,p_bar,q_bar,p_u,p_l (the EXIT curve walked to find eps_map)")]
    Map(MapArgs),
    /// Sweep the repetition ratio and report the threshold-maximising set.
    #[command(after_help = "CSV columns: lambda,threshold,tied\n\
        tied is 1 for every lambda whose threshold equals the best at the tie precision")]
    Optimize(OptimizeArgs),
    /// Threshold table over codes, rates, q and m.
    #[command(after_help = "CSV columns: code,rate,q,lambda,m,kind,threshold,gap\n\
        kind is one of bp_uncoupled, bp_coupled, potential, area_map")]
    Table(TableArgs),
    /// Monte-Carlo erasure rate of a finite-length chain.
    #[command(after_help = "CSV columns: eps,frames,bits,bit_errors,frame_errors,ber,fer,ci_low,ci_high\n\
        ci_low/ci_high bound the bit erasure rate (95% Wilson interval)")]
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Closed form for 2-state codes, exact chain otherwise.
    Auto,
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctureKind {
    Random,
    Periodic,
}

/// Lets a config file override flags field by field.
pub trait Overlay {
    fn overlay(&mut self, other: Self);
}

macro_rules! overlay_fields {
    ($t:ty { $($f:ident),* } $(nested { $($n:ident),* })?) => {
        impl Overlay for $t {
            fn overlay(&mut self, other: Self) {
                $(if other.$f.is_some() { self.$f = other.$f; })*
                $($(self.$n.overlay(other.$n);)*)?
            }
        }
    };
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleArgs {
    /// Component code, e.g. `1,5/7` (octal feedforward/feedback).
    #[arg(long)]
    pub code: Option<String>,
    /// Design rate, as a fraction `1/2` or a decimal.
    #[arg(long)]
    pub rate: Option<String>,
    /// Repetition factor.
    #[arg(long)]
    pub q: Option<usize>,
    /// Repetition ratio in [0, 1/q]; default 1/q.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Coupling memory; 0 is the uncoupled ensemble.
    #[arg(long)]
    pub m: Option<usize>,
    /// Coupling length.
    #[arg(long = "length", short = 'L')]
    pub l: Option<usize>,
}
overlay_fields!(EnsembleArgs { code, rate, q, lambda, m, l });

impl EnsembleArgs {
    pub fn fill(&mut self, default_l: usize) {
        self.q.get_or_insert(1);
        let q = self.q.unwrap_or(1).max(1);
        self.lambda.get_or_insert(1.0 / q as f64);
        self.m.get_or_insert(0);
        self.l.get_or_insert(default_l);
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct DeArgs {
    /// Transfer-function backend.
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    /// Interpolation grid of the exact or Monte-Carlo backend.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Trellis sections per Monte-Carlo estimate.
    #[arg(long)]
    pub mc_len: Option<usize>,
    #[arg(long)]
    pub mc_seed: Option<u64>,
    /// Threshold bisection tolerance.
    #[arg(long)]
    pub bisect_tol: Option<f64>,
    /// DE convergence tolerance.
    #[arg(long)]
    pub de_tol: Option<f64>,
    /// Erasure probability counted as decoded.
    #[arg(long)]
    pub zero_thresh: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
}
overlay_fields!(DeArgs { backend, grid_points, mc_len, mc_seed, bisect_tol, de_tol, zero_thresh, max_iters });

impl DeArgs {
    pub fn fill(&mut self) {
        let d = gscpcc::de::DeConfig::default();
        let backend = *self.backend.get_or_insert(BackendKind::Auto);
        if backend != BackendKind::Auto {
            self.grid_points.get_or_insert(if backend == BackendKind::Mc { 201 } else { 1001 });
        }
        if backend == BackendKind::Mc {
            let mc = gscpcc::transfer::McConfig::default();
            self.mc_len.get_or_insert(mc.trellis_len);
            self.mc_seed.get_or_insert(mc.seed);
        }
        self.bisect_tol.get_or_insert(d.bisect_tol);
        self.de_tol.get_or_insert(d.tol);
        self.zero_thresh.get_or_insert(d.zero_thresh);
        self.max_iters.get_or_insert(d.max_iters);
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ThresholdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub de: DeArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub io: IoOpt,
}
overlay_fields!(ThresholdArgs {} nested { ensemble, de });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PotentialArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub de: DeArgs,
    /// Grid points on (0, 1] for fixed-point and minimum scans.
    #[arg(long)]
    pub potential_grid: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: IoOpt,
}
overlay_fields!(PotentialArgs { potential_grid } nested { ensemble, de });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub de: DeArgs,
    /// Coarse step of the EXIT walk.
    #[arg(long)]
    pub area_step: Option<f64>,
    /// Fine step near the solution.
    #[arg(long)]
    pub area_refine_step: Option<f64>,
    /// Emit the EXIT curve instead of the summary row.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub curve: Option<bool>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: IoOpt,
}
overlay_fields!(MapArgs { area_step, area_refine_step, curve } nested { ensemble, de });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub de: DeArgs,
    /// Final λ resolution.
    #[arg(long)]
    pub step: Option<f64>,
    /// Coarse pre-sweep step; 0 disables the pre-sweep.
    #[arg(long)]
    pub coarse_step: Option<f64>,
    #[arg(long)]
    pub refine_margin: Option<f64>,
    /// Decimals at which thresholds tie.
    #[arg(long)]
    pub tie_decimals: Option<i32>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: IoOpt,
}
overlay_fields!(OptimizeArgs { step, coarse_step, refine_margin, tie_decimals } nested { ensemble, de });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TableArgs {
    /// Component code; repeat for several.
    #[arg(long = "code")]
    pub codes: Option<Vec<String>>,
    /// Comma-separated design rates.
    #[arg(long, value_delimiter = ',')]
    pub rates: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub qs: Option<Vec<usize>>,
    /// Coupling memories; 0 gives the uncoupled row.
    #[arg(long, value_delimiter = ',')]
    pub ms: Option<Vec<usize>>,
    /// Fixed λ (capped at 1/q); default 1/q.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Optimise λ per row on the default grid.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub optimize_lambda: Option<bool>,
    #[arg(long = "length", short = 'L')]
    pub l: Option<usize>,
    /// Add potential-threshold rows.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub potential: Option<bool>,
    /// Add area-theorem MAP rows.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub map: Option<bool>,
    #[arg(long)]
    pub bisect_tol: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: IoOpt,
}
overlay_fields!(TableArgs { codes, rates, qs, ms, lambda, optimize_lambda, l, potential, map, bisect_tol });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Information bits per block.
    #[arg(long)]
    pub k: Option<usize>,
    /// Master seed for the instance and every channel realisation.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated channel erasure probabilities.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub min_errors: Option<u64>,
    #[arg(long)]
    pub max_bits: Option<u64>,
    #[arg(long)]
    pub batch: Option<usize>,
    /// Build the instance under the coupling-bit criterion.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub criterion: Option<bool>,
    #[arg(long, value_enum)]
    pub puncture: Option<PunctureKind>,
    /// Sliding-window size; omit for full-chain decoding.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub max_intra: Option<usize>,
    #[arg(long)]
    pub max_inter: Option<usize>,
    /// Send random data rather than the all-zero codeword.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub random_data: Option<bool>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: IoOpt,
}
overlay_fields!(SimulateArgs {
    k, seed, eps, min_errors, max_bits, batch, criterion, puncture, window, max_intra, max_inter, random_data
} nested { ensemble });

/// Output handling; never embedded in artifacts.
#[derive(Args, Debug, Clone, Default)]
pub struct IoOpt {
    /// TOML or JSON config; its values override flags. A JSON artifact of an earlier run is accepted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write CSV to this path and a JSON mirror next to it (extension `.json`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON artifact to stdout instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}
