//! Density-evolution recursions for the uncoupled and coupled ensembles.

use serde::{Deserialize, Serialize};

use super::params::EnsembleParams;
use crate::scalar::{powu, Real};
use crate::transfer::{TransferModel, TransferSlice};

/// Stopping rules shared by every recursion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    /// Stop once no entry moves by more than this.
    pub tol: f64,
    /// Entries below this count as decoded.
    pub zero_thresh: f64,
    pub max_iters: usize,
    pub bisect_tol: f64,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self { tol: 1e-10, zero_thresh: 1e-6, max_iters: 1_000_000, bisect_tol: 1e-4 }
    }
}

/// Erasure probabilities of the upper and lower decoders' information outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DeState<T: Real> {
    pub p_u: Vec<T>,
    pub p_l: Vec<T>,
    pub iteration: usize,
}

/// Result of running a recursion to its stopping rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DeOutcome<T: Real> {
    pub state: DeState<T>,
    pub converged_to_zero: bool,
    /// Largest entry of the final state.
    pub max_residual: T,
}

/// Input erasure probability of one decoder's information bits, given the
/// partner's output `partner` and this decoder's own replicas `own`.
#[inline]
pub fn info_input<T: Real>(eps: T, q: usize, q_lambda: T, own: T, partner: T) -> T {
    let rep = if q > 1 { q_lambda * powu(own, q as u32 - 1) * powu(partner, q as u32) } else { T::zero() };
    eps * (rep + (T::one() - q_lambda) * partner)
}

fn max_of<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &b| a.max(b))
}

/// Uncoupled recursion, serial schedule: the lower decoder updates first and
/// the upper decoder already sees its new output.
pub fn de_uncoupled_with<T: Real>(params: &EnsembleParams<T>, slice: &TransferSlice<T>, eps: T, cfg: &DeConfig) -> DeOutcome<T> {
    let ql = params.q_lambda();
    let q = params.q;
    let (tol, zero) = (T::lit(cfg.tol), T::lit(cfg.zero_thresh));
    let (mut pu, mut pl) = (T::one(), T::one());
    let mut it = 0;
    while it < cfg.max_iters {
        it += 1;
        let nl = slice.fs(info_input(eps, q, ql, pl, pu));
        let nu = slice.fs(info_input(eps, q, ql, pu, nl));
        let delta = (nl - pl).abs().max((nu - pu).abs());
        pu = nu;
        pl = nl;
        if pu.max(pl) < zero || delta < tol {
            break;
        }
    }
    let max_residual = pu.max(pl);
    DeOutcome {
        state: DeState { p_u: vec![pu], p_l: vec![pl], iteration: it },
        converged_to_zero: max_residual < zero,
        max_residual,
    }
}

pub fn de_uncoupled_fixed_point<T: Real>(
    params: &EnsembleParams<T>,
    model: &TransferModel<T>,
    eps: T,
    cfg: &DeConfig,
) -> DeOutcome<T> {
    let slice = model.slice(params.punctured_epsilon(eps));
    de_uncoupled_with(params, &slice, eps, cfg)
}

/// Block averages `p̄_s = (1/(m+1)) Σ_j p_{s+j}` for `s = 1..L`, from decoder
/// outputs `p[t-1]`, `t = 1..L+m`.
fn block_average<T: Real>(p: &[T], m: usize, l: usize, out: &mut [T]) {
    let w = T::one() / T::lit((m + 1) as f64);
    let mut acc = T::zero();
    for &v in &p[..=m] {
        acc = acc + v;
    }
    for s in 0..l {
        if s > 0 {
            acc = acc + p[s + m] - p[s - 1];
        }
        out[s] = acc * w;
    }
}

/// Coupled recursion with the fully parallel schedule. Blocks outside `1..L`
/// are known (all-zero termination). Decoders run at `t = 1..L+m`.
pub fn de_coupled_with<T: Real>(params: &EnsembleParams<T>, slice: &TransferSlice<T>, eps: T, cfg: &DeConfig) -> DeOutcome<T> {
    let (m, l, q) = (params.m, params.l, params.q);
    let n = l + m;
    let ql = params.q_lambda();
    let (tol, zero) = (T::lit(cfg.tol), T::lit(cfg.zero_thresh));
    let w = eps / T::lit((m + 1) as f64);
    let mut pu = vec![T::one(); n];
    let mut pl = vec![T::one(); n];
    let mut bu = vec![T::zero(); l];
    let mut bl = vec![T::zero(); l];
    let mut hu = vec![T::zero(); l];
    let mut hl = vec![T::zero(); l];
    let mut it = 0;
    let mut done = false;
    while it < cfg.max_iters && !done {
        it += 1;
        block_average(&pu, m, l, &mut bu);
        block_average(&pl, m, l, &mut bl);
        for s in 0..l {
            // `info_input` with eps = 1, i.e. the bracket of the update before scaling
            hu[s] = info_input(T::one(), q, ql, bu[s], bl[s]);
            hl[s] = info_input(T::one(), q, ql, bl[s], bu[s]);
        }
        let mut delta = T::zero();
        let (mut su, mut sl) = (T::zero(), T::zero());
        for t in 0..n {
            // window of blocks t-m..=t (0-based), clipped to 0..l
            if t < l {
                su = su + hu[t];
                sl = sl + hl[t];
            }
            if t > m && t - m - 1 < l {
                su = su - hu[t - m - 1];
                sl = sl - hl[t - m - 1];
            }
            let nu = slice.fs((w * su.max(T::zero())).clamp01());
            let nl = slice.fs((w * sl.max(T::zero())).clamp01());
            delta = delta.max((nu - pu[t]).abs()).max((nl - pl[t]).abs());
            pu[t] = nu;
            pl[t] = nl;
        }
        done = delta < tol || max_of(&pu).max(max_of(&pl)) < zero;
    }
    let max_residual = max_of(&pu).max(max_of(&pl));
    DeOutcome {
        state: DeState { p_u: pu, p_l: pl, iteration: it },
        converged_to_zero: max_residual < zero,
        max_residual,
    }
}

pub fn de_coupled_run<T: Real>(params: &EnsembleParams<T>, model: &TransferModel<T>, eps: T, cfg: &DeConfig) -> DeOutcome<T> {
    let slice = model.slice(params.punctured_epsilon(eps));
    de_coupled_with(params, &slice, eps, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::ConvCodeSpec;
    use crate::transfer::Backend;

    fn model() -> TransferModel<f64> {
        TransferModel::new(ConvCodeSpec::four_state(), Backend::DEFAULT_EXACT).unwrap()
    }

    #[test]
    fn zero_channel_is_decoded_immediately() {
        let p = EnsembleParams::<f64>::new(ConvCodeSpec::four_state(), 0.5, 2, 0.2, 1, 20).unwrap();
        let m = model();
        let o = de_uncoupled_fixed_point(&p, &m, 0.0, &DeConfig::default());
        assert!(o.converged_to_zero);
        assert_eq!(o.state.iteration, 1);
        let o = de_coupled_run(&p, &m, 0.0, &DeConfig::default());
        assert!(o.converged_to_zero && o.state.iteration == 1);
    }

    #[test]
    fn block_average_matches_direct_sum() {
        let p: Vec<f64> = (0..9).map(|i| (i * i) as f64 / 81.0).collect();
        let (m, l) = (3, 6);
        let mut out = vec![0.0; l];
        block_average(&p, m, l, &mut out);
        for s in 0..l {
            let direct: f64 = (0..=m).map(|j| p[s + j]).sum::<f64>() / (m + 1) as f64;
            assert!((out[s] - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn uncoupled_table_ii_bracket() {
        let p = EnsembleParams::<f64>::new(ConvCodeSpec::four_state(), 0.5, 2, 0.2, 0, 1).unwrap();
        let m = model();
        let cfg = DeConfig::default();
        assert!(de_uncoupled_fixed_point(&p, &m, 0.46, &cfg).converged_to_zero);
        assert!(!de_uncoupled_fixed_point(&p, &m, 0.48, &cfg).converged_to_zero);
    }

    #[test]
    fn memory_zero_chain_is_independent_copies() {
        let p = EnsembleParams::<f64>::new(ConvCodeSpec::four_state(), 0.5, 2, 0.3, 0, 5).unwrap();
        let m = model();
        let cfg = DeConfig::default();
        for &eps in &[0.3, 0.47, 0.6] {
            let c = de_coupled_run(&p, &m, eps, &cfg);
            let u = de_uncoupled_fixed_point(&p, &m, eps, &cfg);
            assert_eq!(c.converged_to_zero, u.converged_to_zero);
            for t in 0..5 {
                assert!((c.state.p_u[t] - u.state.p_u[0]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn all_erased_channel_gets_stuck() {
        let p = EnsembleParams::<f64>::new(ConvCodeSpec::four_state(), 0.5, 2, 0.44, 1, 4).unwrap();
        let o = de_coupled_run(&p, &model(), 1.0, &DeConfig::default());
        assert!(!o.converged_to_zero);
        assert!(o.state.p_u.iter().all(|&v| v > 0.5));
    }
}
