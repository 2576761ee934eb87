use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::params::EnsembleParams;
use super::recursion::{de_coupled_with, de_uncoupled_with, DeConfig};
use crate::numerics::bisect_sup;
use crate::scalar::Real;
use crate::transfer::TransferModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeMode {
    Uncoupled,
    Coupled,
}

/// One threshold computation with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub params: EnsembleParams<f64>,
    pub mode: DeMode,
    pub threshold: f64,
    /// Total DE iterations over all bisection probes.
    pub iterations: usize,
    pub probes: usize,
    pub wall_time_s: f64,
    pub config: DeConfig,
    pub transfer: String,
}

impl ThresholdRecord {
    /// Gap to capacity `1 - R - ε*`.
    pub fn gap(&self) -> f64 {
        1.0 - self.params.rate - self.threshold
    }
}

/// Whether DE from the all-erased state decodes at `eps`. Returns the iteration count too.
pub fn de_converges<T: Real>(
    params: &EnsembleParams<T>,
    model: &TransferModel<T>,
    mode: DeMode,
    eps: T,
    cfg: &DeConfig,
) -> (bool, usize) {
    let slice = model.slice(params.punctured_epsilon(eps));
    let o = match mode {
        DeMode::Uncoupled => de_uncoupled_with(params, &slice, eps, cfg),
        DeMode::Coupled => de_coupled_with(params, &slice, eps, cfg),
    };
    (o.converged_to_zero, o.state.iteration)
}

/// BP threshold: supremum of `ε ∈ [0, 1]` for which DE decodes, by bisection.
pub fn bp_threshold<T: Real>(
    params: &EnsembleParams<T>,
    model: &TransferModel<T>,
    mode: DeMode,
    cfg: &DeConfig,
) -> ThresholdRecord {
    bp_threshold_in(params, model, mode, cfg, 0.0, 1.0)
}

/// As [`bp_threshold`] with a caller-supplied bracket `[lo, hi]`; `lo` must decode.
pub fn bp_threshold_in<T: Real>(
    params: &EnsembleParams<T>,
    model: &TransferModel<T>,
    mode: DeMode,
    cfg: &DeConfig,
    lo: f64,
    hi: f64,
) -> ThresholdRecord {
    let start = Instant::now();
    let mut iterations = 0;
    let (threshold, probes) = bisect_sup(lo, hi, cfg.bisect_tol, |e| {
        let (ok, it) = de_converges(params, model, mode, T::lit(e), cfg);
        iterations += it;
        ok
    });
    ThresholdRecord {
        params: params.to_f64(),
        mode,
        threshold,
        iterations,
        probes,
        wall_time_s: start.elapsed().as_secs_f64(),
        config: *cfg,
        transfer: model.describe(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::ConvCodeSpec;

    #[test]
    fn record_reports_gap_and_stays_below_capacity() {
        let p = EnsembleParams::<f64>::new(ConvCodeSpec::four_state(), 0.75, 1, 0.0, 0, 1).unwrap();
        let model = TransferModel::with_default_backend(p.code.clone());
        let r = bp_threshold(&p, &model, DeMode::Uncoupled, &DeConfig::default());
        assert!(r.threshold < 0.25);
        assert!((r.gap() - (0.25 - r.threshold)).abs() < 1e-15);
        assert!(r.probes > 5 && r.iterations > 0);
    }
}
