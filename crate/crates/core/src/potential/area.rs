//! Area-theorem MAP threshold estimate from the BP EXIT curve of the uncoupled ensemble.

use serde::{Deserialize, Serialize};

use crate::de::{de_uncoupled_with, info_input, DeConfig, EnsembleParams};
use crate::error::{Error, Result};
use crate::scalar::{powu, Real};
use crate::transfer::TransferModel;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaConfig {
    /// Coarse `ε` step of the walk down from `ε = 1`.
    pub step: f64,
    /// Fine step used once the coarse integral passes the rate.
    pub refine_step: f64,
    pub de: DeConfig,
}

impl Default for AreaConfig {
    fn default() -> Self {
        Self { step: 1e-3, refine_step: 1e-5, de: DeConfig::default() }
    }
}

/// One sample of the BP EXIT curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExitPoint {
    pub eps: f64,
    pub h: f64,
    pub p_bar: f64,
    pub q_bar: f64,
    pub p_u: f64,
    pub p_l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaResult {
    /// Area-theorem MAP estimate: `∫_{ε_MAP}^1 h = R`.
    pub eps_map: f64,
    /// Coarse samples from `ε = 1` down to the root cell, in walking order.
    pub curve: Vec<ExitPoint>,
    pub config: AreaConfig,
}

impl AreaResult {
    /// Whitespace-separated columns `eps h p_bar q_bar p_u p_l`.
    pub fn to_columns(&self) -> String {
        let mut s = String::from("# eps h p_bar q_bar p_u p_l\n");
        for p in &self.curve {
            s.push_str(&format!("{} {} {} {} {} {}\n", p.eps, p.h, p.p_bar, p.q_bar, p.p_u, p.p_l));
        }
        s
    }
}

/// `h(ε) = R p̄ + (1-R) q̄` at the fixed point of uncoupled DE from the all-erased state.
pub fn exit_point<T: Real>(params: &EnsembleParams<T>, model: &TransferModel<T>, eps: T, de: &DeConfig) -> ExitPoint {
    let slice = model.slice(params.punctured_epsilon(eps));
    let o = de_uncoupled_with(params, &slice, eps, de);
    let (pu, pl) = (o.state.p_u[0], o.state.p_l[0]);
    let q = params.q;
    let ql = params.q_lambda();
    let one = T::one();
    let p_bar = ql * powu(pu, q as u32) * powu(pl, q as u32) + (one - ql) * pu * pl;
    let half = T::lit(0.5);
    let q_bar = half * slice.fp(info_input(eps, q, ql, pu, pl).clamp01())
        + half * slice.fp(info_input(eps, q, ql, pl, pu).clamp01());
    let h = params.rate * p_bar + (one - params.rate) * q_bar;
    ExitPoint {
        eps: eps.as_f64(),
        h: h.as_f64(),
        p_bar: p_bar.as_f64(),
        q_bar: q_bar.as_f64(),
        p_u: pu.as_f64(),
        p_l: pl.as_f64(),
    }
}

/// Solves `∫_{ε_MAP}^1 h(ε) dε = R` by walking down from `ε = 1` with the trapezoidal rule.
pub fn map_threshold_area<T: Real>(params: &EnsembleParams<T>, model: &TransferModel<T>, cfg: &AreaConfig) -> Result<AreaResult> {
    let rate = params.rate.as_f64();
    let at = |e: f64| exit_point(params, model, T::lit(e.max(0.0)), &cfg.de);
    let n = (1.0 / cfg.step).round() as usize;
    let mut curve = vec![at(1.0)];
    let mut area = 0.0;
    for k in 1..=n {
        let p = at(1.0 - k as f64 * cfg.step);
        let prev = *curve.last().unwrap();
        let next = area + 0.5 * (prev.h + p.h) * (prev.eps - p.eps);
        curve.push(p);
        if next >= rate {
            let eps_map = refine(&at, prev, area, rate, cfg.refine_step);
            return Ok(AreaResult { eps_map, curve, config: *cfg });
        }
        area = next;
    }
    Err(Error::NoAreaSolution { total: area, rate })
}

/// Continues the walk from `start` (where the integral is `area < rate`) in fine steps.
fn refine<F: Fn(f64) -> ExitPoint>(at: &F, start: ExitPoint, mut area: f64, rate: f64, step: f64) -> f64 {
    let mut prev = start;
    loop {
        let e = prev.eps - step;
        if e <= 0.0 {
            return 0.0;
        }
        let p = at(e);
        let cell = 0.5 * (prev.h + p.h) * step;
        if area + cell >= rate {
            // linear within the last fine cell
            let frac = if cell > 0.0 { (rate - area) / cell } else { 1.0 };
            return prev.eps - frac * step;
        }
        area += cell;
        prev = p;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::ConvCodeSpec;

    #[test]
    fn exit_curve_is_zero_below_bp_and_one_at_full_erasure() {
        let code = ConvCodeSpec::two_state();
        let p = EnsembleParams::<f64>::regular(code.clone(), 0.5, 2, 0, 1).unwrap();
        let m = TransferModel::with_default_backend(code);
        let lo = exit_point(&p, &m, 0.2, &DeConfig::default());
        assert!(lo.p_bar < 1e-12);
        assert!(lo.h.abs() < 1e-6);
        let hi = exit_point(&p, &m, 1.0, &DeConfig::default());
        assert!((hi.h - 1.0).abs() < 1e-9, "{hi:?}");
    }

    #[test]
    fn two_state_map_matches_potential_threshold() {
        let code = ConvCodeSpec::two_state();
        let p = EnsembleParams::<f64>::regular(code.clone(), 0.5, 2, 0, 1).unwrap();
        let m = TransferModel::with_default_backend(code);
        let r = map_threshold_area(&p, &m, &AreaConfig::default()).unwrap();
        assert!(r.eps_map <= 0.5);
        assert!((r.eps_map - 0.4520).abs() < 3e-3, "{}", r.eps_map);
    }
}
