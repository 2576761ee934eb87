//! Parameter sweeps over ensembles: repetition-ratio optimisation, threshold tables and
//! gap to capacity versus coupling length.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conv::ConvCodeSpec;
use crate::de::{bp_threshold, bp_threshold_in, de_converges, DeConfig, DeMode, EnsembleParams, TerminationAccounting};
use crate::error::Result;
use crate::potential::{map_threshold_area, potential_threshold, AreaConfig, PotentialConfig};
use crate::transfer::TransferModel;

/// Coupling length used for "large `L`" coupled thresholds.
pub const DEFAULT_COUPLING_LENGTH: usize = 100;

/// `λ` grid on `[0, 1/q]`: a coarse pass, then `step` around the coarse optimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub step: f64,
    /// `None` evaluates the full fine grid.
    pub coarse_step: Option<f64>,
    /// Coarse points within this of the best coarse threshold are refined.
    pub refine_margin: f64,
    /// Decimal places at which thresholds are compared for ties.
    pub tie_decimals: i32,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self { step: 1e-3, coarse_step: Some(1e-2), refine_margin: 5e-4, tie_decimals: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSweep {
    /// Every `λ` whose rounded threshold ties with the best.
    pub lambda_star: Vec<f64>,
    pub threshold: f64,
    /// All evaluated `(λ, threshold)` pairs sorted by `λ`.
    pub points: Vec<(f64, f64)>,
    pub grid: LambdaGrid,
    pub config: DeConfig,
}

impl LambdaSweep {
    /// `(min, max)` of the tied set.
    pub fn lambda_range(&self) -> (f64, f64) {
        let lo = self.lambda_star.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.lambda_star.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Midpoint of the tied set, the single `λ*` to report.
    pub fn lambda_center(&self) -> f64 {
        let (lo, hi) = self.lambda_range();
        0.5 * (lo + hi)
    }
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (v * s).round() / s
}

fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut v: Vec<f64> = (0..=n).map(|i| round_to(lo + i as f64 * step, 9)).collect();
    if (hi - v[v.len() - 1]).abs() > 1e-12 {
        v.push(hi);
    }
    v
}

/// Threshold of `base` at each `λ`; uncoupled when `base.m == 0`.
///
/// With `hint = (lo, hi)` the bisection starts from that bracket when `lo` decodes and `hi`
/// does not, and from `[0, 1]` otherwise, so the result does not depend on the hint being right.
fn sweep(
    base: &EnsembleParams<f64>,
    model: &TransferModel<f64>,
    lambdas: &[f64],
    cfg: &DeConfig,
    hint: Option<(f64, f64)>,
) -> Result<Vec<(f64, f64)>> {
    let mode = if base.m == 0 { DeMode::Uncoupled } else { DeMode::Coupled };
    lambdas
        .par_iter()
        .map(|&l| {
            let p = EnsembleParams::new(base.code.clone(), base.rate, base.q, l, base.m, base.l)?;
            let t = match hint {
                Some((lo, hi))
                    if de_converges(&p, model, mode, lo, cfg).0 && !de_converges(&p, model, mode, hi, cfg).0 =>
                {
                    bp_threshold_in(&p, model, mode, cfg, lo, hi).threshold
                }
                _ => bp_threshold(&p, model, mode, cfg).threshold,
            };
            Ok((l, t))
        })
        .collect()
}

/// Maximises the BP threshold over `λ ∈ [0, 1/q]` and reports the tie set.
///
/// `base` fixes `(R, q, m, L, code)`; its `λ` is ignored.
pub fn optimize_lambda(
    base: &EnsembleParams<f64>,
    model: &TransferModel<f64>,
    grid: &LambdaGrid,
    cfg: &DeConfig,
) -> Result<LambdaSweep> {
    let top = 1.0 / base.q as f64;
    let mut points = match grid.coarse_step {
        Some(cs) if cs > grid.step => {
            let coarse = sweep(base, model, &grid_points(0.0, top, cs), cfg, None)?;
            let best = coarse.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let mut fine: Vec<f64> = Vec::new();
            for &(l, t) in &coarse {
                if t >= best - grid.refine_margin {
                    let lo = (l - cs).max(0.0);
                    let hi = (l + cs).min(top);
                    fine.extend(grid_points(lo, hi, grid.step));
                }
            }
            fine.sort_by(|a, b| a.partial_cmp(b).unwrap());
            fine.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            fine.retain(|l| !coarse.iter().any(|c| (c.0 - l).abs() < 1e-12));
            let mut all = coarse;
            let hint = (best - 0.01, best + 0.01);
            all.extend(sweep(base, model, &fine, cfg, Some(hint))?);
            all
        }
        _ => sweep(base, model, &grid_points(0.0, top, grid.step), cfg, None)?,
    };
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let best = points.iter().map(|p| round_to(p.1, grid.tie_decimals)).fold(f64::NEG_INFINITY, f64::max);
    let lambda_star: Vec<f64> =
        points.iter().filter(|p| round_to(p.1, grid.tie_decimals) == best).map(|p| p.0).collect();
    let threshold = points.iter().filter(|p| lambda_star.contains(&p.0)).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(LambdaSweep { lambda_star, threshold, points, grid: *grid, config: *cfg })
}

/// How `λ` is chosen for each table row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaChoice {
    /// `λ = 1/q`.
    Regular,
    Fixed { lambda: f64 },
    Optimized { grid: LambdaGrid },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    BpUncoupled,
    BpCoupled,
    Potential,
    AreaMap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub codes: Vec<ConvCodeSpec>,
    pub rates: Vec<f64>,
    pub qs: Vec<usize>,
    /// Coupling memories; `0` gives the uncoupled BP threshold.
    pub ms: Vec<usize>,
    pub lambda: LambdaChoice,
    pub l: usize,
    pub potential: bool,
    pub area_map: bool,
    pub de: DeConfig,
    pub potential_config: PotentialConfig,
    pub area_config: AreaConfig,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            codes: vec![ConvCodeSpec::four_state()],
            rates: vec![0.5],
            qs: vec![1, 2],
            ms: vec![0, 1],
            lambda: LambdaChoice::Regular,
            l: DEFAULT_COUPLING_LENGTH,
            potential: false,
            area_map: false,
            de: DeConfig::default(),
            potential_config: PotentialConfig::default(),
            area_config: AreaConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub code: String,
    pub rate: f64,
    pub q: usize,
    pub lambda: f64,
    pub m: usize,
    pub kind: RowKind,
    pub threshold: f64,
    /// `Δ_SH = 1 - R - ε`.
    pub gap: f64,
}

impl TableRow {
    pub const CSV_HEADER: &'static str = "code,rate,q,lambda,m,kind,threshold,gap";

    pub fn csv_line(&self) -> String {
        let kind = match self.kind {
            RowKind::BpUncoupled => "bp_uncoupled",
            RowKind::BpCoupled => "bp_coupled",
            RowKind::Potential => "potential",
            RowKind::AreaMap => "area_map",
        };
        format!("\"{}\",{},{},{},{},{},{:.6},{:.6}", self.code, self.rate, self.q, self.lambda, self.m, kind, self.threshold, self.gap)
    }
}

fn row(p: &EnsembleParams<f64>, kind: RowKind, threshold: f64) -> TableRow {
    TableRow {
        code: p.code.to_string(),
        rate: p.rate,
        q: p.q,
        lambda: p.lambda,
        m: p.m,
        kind,
        threshold,
        gap: 1.0 - p.rate - threshold,
    }
}

/// Computes every row of `spec` in a deterministic order: code, rate, q, then m, potential, MAP.
pub fn threshold_table(spec: &TableSpec) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for code in &spec.codes {
        let model = TransferModel::with_default_backend(code.clone());
        for &rate in &spec.rates {
            for &q in &spec.qs {
                let regular = EnsembleParams::regular(code.clone(), rate, q, 0, spec.l)?;
                for &m in &spec.ms {
                    let base = regular.with_coupling(m, if m == 0 { 1 } else { spec.l });
                    let (p, t) = match spec.lambda {
                        LambdaChoice::Regular => {
                            let mode = if m == 0 { DeMode::Uncoupled } else { DeMode::Coupled };
                            let t = bp_threshold(&base, &model, mode, &spec.de).threshold;
                            (base, t)
                        }
                        LambdaChoice::Fixed { lambda } => {
                            let p = base.with_lambda(lambda.min(1.0 / q as f64))?;
                            let mode = if m == 0 { DeMode::Uncoupled } else { DeMode::Coupled };
                            let t = bp_threshold(&p, &model, mode, &spec.de).threshold;
                            (p, t)
                        }
                        LambdaChoice::Optimized { grid } => {
                            let s = optimize_lambda(&base, &model, &grid, &spec.de)?;
                            // report the largest tied λ
                            (base.with_lambda(s.lambda_center())?, s.threshold)
                        }
                    };
                    rows.push(row(&p, if m == 0 { RowKind::BpUncoupled } else { RowKind::BpCoupled }, t));
                }
                if spec.potential {
                    let t = potential_threshold(&regular, &model, &spec.potential_config);
                    rows.push(row(&regular.with_coupling(0, 1), RowKind::Potential, t));
                }
                if spec.area_map {
                    let t = map_threshold_area(&regular, &model, &spec.area_config)?.eps_map;
                    rows.push(row(&regular.with_coupling(0, 1), RowKind::AreaMap, t));
                }
            }
        }
    }
    Ok(rows)
}

/// One coupling length of a gap-to-capacity study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub l: usize,
    pub threshold: f64,
    pub rate_full: f64,
    pub rate_shortened: f64,
    pub gap_full: f64,
    pub gap_shortened: f64,
}

impl GapPoint {
    pub const CSV_HEADER: &'static str = "L,threshold,rate_full,rate_shortened,gap_full,gap_shortened";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            self.l, self.threshold, self.rate_full, self.rate_shortened, self.gap_full, self.gap_shortened
        )
    }

    pub fn gap(&self, accounting: TerminationAccounting) -> f64 {
        match accounting {
            TerminationAccounting::FullBlocks => self.gap_full,
            TerminationAccounting::Shortened => self.gap_shortened,
        }
    }
}

/// Coupled BP threshold and terminated rate for each `L`, under both termination accountings.
pub fn gap_vs_l(params: &EnsembleParams<f64>, model: &TransferModel<f64>, ls: &[usize], cfg: &DeConfig) -> Vec<GapPoint> {
    ls.par_iter()
        .map(|&l| {
            let p = params.with_coupling(params.m, l);
            let threshold = bp_threshold(&p, model, DeMode::Coupled, cfg).threshold;
            let rate_full = p.terminated_rate(TerminationAccounting::FullBlocks);
            let rate_shortened = p.terminated_rate(TerminationAccounting::Shortened);
            GapPoint {
                l,
                threshold,
                rate_full,
                rate_shortened,
                gap_full: 1.0 - rate_full - threshold,
                gap_shortened: 1.0 - rate_shortened - threshold,
            }
        })
        .collect()
}
