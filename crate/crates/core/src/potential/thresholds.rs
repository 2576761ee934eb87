//! Single-system and potential thresholds of the symmetric recursion.

use serde::{Deserialize, Serialize};

use super::system::SymmetricSystem;
use crate::de::{DeConfig, EnsembleParams};
use crate::numerics::{bisect_sup, golden_min};
use crate::scalar::Real;
use crate::transfer::TransferModel;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialConfig {
    /// Grid points on `(0, 1]` used for sign scans and minimum search.
    pub grid_points: usize,
    /// Bisection steps refining `u(ε)` inside its bracketing cell.
    pub refine_steps: usize,
    pub bisect_tol: f64,
    pub golden_tol: f64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        Self { grid_points: 2001, refine_steps: 60, bisect_tol: 1e-6, golden_tol: 1e-10 }
    }
}

impl PotentialConfig {
    fn grid<T: Real>(&self) -> impl Iterator<Item = T> + '_ {
        let n = self.grid_points.max(2) - 1;
        (1..=n).map(move |i| T::lit(i as f64 / n as f64))
    }
}

/// The potential at one `ε`, sampled for inspection or plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    pub eps: f64,
    pub grid_x: Vec<f64>,
    pub potential_values: Vec<f64>,
    /// Minimum unstable fixed point `u(ε)`; `None` if `0` is unstable.
    pub u_eps: Option<f64>,
    /// `min U` over `[u(ε), 1]`, or `None` with `u_eps`.
    pub min_u_above: Option<f64>,
}

/// `u(ε) = sup{x̃ : f(g(x)) < x on (0, x̃)}`; `0` when the origin is unstable, `1` if no fixed point exists.
pub fn min_unstable_fixed_point<T: Real>(sys: &SymmetricSystem<T>, cfg: &PotentialConfig) -> T {
    if sys.unstable_at_zero() {
        return T::zero();
    }
    let mut prev = T::zero();
    for x in cfg.grid::<T>() {
        if x - sys.step(x) <= T::zero() {
            let (mut lo, mut hi) = (prev, x);
            for _ in 0..cfg.refine_steps {
                let mid = (lo + hi) / T::lit(2.0);
                if mid - sys.step(mid) > T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
        prev = x;
    }
    T::one()
}

/// `min_{x ∈ [from, 1]} U(x; ε)` by grid scan with golden-section polishing.
pub fn min_potential_above<T: Real>(sys: &SymmetricSystem<T>, from: T, cfg: &PotentialConfig) -> T {
    let n = cfg.grid_points.max(2) - 1;
    let h = T::one() / T::lit(n as f64);
    let mut best = (T::one(), sys.potential(T::one()));
    let at_from = sys.potential(from);
    if at_from < best.1 {
        best = (from, at_from);
    }
    for x in cfg.grid::<T>().filter(|&x| x > from) {
        let v = sys.potential(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - h).max(from);
    let b = (best.0 + h).min(T::one());
    let (_, v) = golden_min(|x| sys.potential(x), a, b, T::lit(cfg.golden_tol));
    v.min(best.1)
}

/// Profile of `U(.; ε)` on the configured grid together with `u(ε)` and the minimum above it.
pub fn potential_profile<T: Real>(
    params: &EnsembleParams<T>,
    model: &TransferModel<T>,
    eps: T,
    cfg: &PotentialConfig,
) -> PotentialProfile {
    let sys = SymmetricSystem::new(params, model, eps);
    let mut grid_x = vec![0.0];
    grid_x.extend(cfg.grid::<T>().map(|x| x.as_f64()));
    let potential_values = grid_x.iter().map(|&x| sys.potential(T::lit(x)).as_f64()).collect();
    let u = min_unstable_fixed_point(&sys, cfg);
    let (u_eps, min_u_above) = if u > T::zero() {
        (Some(u.as_f64()), Some(min_potential_above(&sys, u, cfg).as_f64()))
    } else {
        (None, None)
    };
    PotentialProfile { eps: eps.as_f64(), grid_x, potential_values, u_eps, min_u_above }
}

/// Single-system threshold: sup of `ε` with `U'(x; ε) > 0` on `(0, 1]`.
///
/// Checked as `x - f(g(x)) > 0` on the grid plus stability of the origin, since `g' > 0` on `(0,1]`.
pub fn single_system_threshold<T: Real>(params: &EnsembleParams<T>, model: &TransferModel<T>, cfg: &PotentialConfig) -> f64 {
    bisect_sup(0.0, 1.0, cfg.bisect_tol, |e| {
        let sys = SymmetricSystem::new(params, model, T::lit(e));
        !sys.unstable_at_zero() && cfg.grid::<T>().all(|x| x - sys.step(x) > T::zero())
    })
    .0
}

/// Threshold of the scalar recursion run from `x = 1`, an independent route to the single-system threshold.
pub fn symmetric_de_threshold<T: Real>(params: &EnsembleParams<T>, model: &TransferModel<T>, de: &DeConfig, bisect_tol: f64) -> f64 {
    bisect_sup(0.0, 1.0, bisect_tol, |e| {
        let sys = SymmetricSystem::new(params, model, T::lit(e));
        let (x, _) = sys.iterate_from_one(T::lit(de.tol), T::lit(de.zero_thresh), de.max_iters);
        x < T::lit(de.zero_thresh)
    })
    .0
}

/// Potential threshold: sup of `ε` with `u(ε) > 0` and `U ≥ 0` on `[u(ε), 1]`.
pub fn potential_threshold<T: Real>(params: &EnsembleParams<T>, model: &TransferModel<T>, cfg: &PotentialConfig) -> f64 {
    bisect_sup(0.0, 1.0, cfg.bisect_tol, |e| {
        let sys = SymmetricSystem::new(params, model, T::lit(e));
        let u = min_unstable_fixed_point(&sys, cfg);
        u > T::zero() && min_potential_above(&sys, u, cfg) >= T::zero()
    })
    .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::ConvCodeSpec;

    fn two_state(rate: f64, q: usize) -> (EnsembleParams<f64>, TransferModel<f64>) {
        let code = ConvCodeSpec::two_state();
        (EnsembleParams::regular(code.clone(), rate, q, 0, 1).unwrap(), TransferModel::with_default_backend(code))
    }

    #[test]
    fn potential_vanishes_at_origin() {
        let (p, m) = two_state(0.5, 2);
        for &e in &[0.1, 0.45, 0.9] {
            let prof = potential_profile(&p, &m, e, &PotentialConfig { grid_points: 101, ..Default::default() });
            assert_eq!(prof.potential_values[0], 0.0);
            assert_eq!(prof.grid_x.len(), 101);
        }
    }

    #[test]
    fn two_state_table_iii_point() {
        let (p, m) = two_state(0.5, 2);
        let ec = potential_threshold(&p, &m, &PotentialConfig::default());
        assert!((ec - 0.4520).abs() < 5e-4, "{ec}");
        let es = single_system_threshold(&p, &m, &PotentialConfig::default());
        assert!(es <= ec);
    }

    #[test]
    fn two_state_q1_is_stability_limited() {
        // λ = 0: the origin loses stability at ε · 2y/(1-y) = 1
        let (p, m) = two_state(0.5, 1);
        let ec = potential_threshold(&p, &m, &PotentialConfig::default());
        assert!((ec - 0.2808).abs() < 5e-4, "{ec}");
    }

    #[test]
    fn single_system_agrees_with_scalar_de() {
        let code = ConvCodeSpec::four_state();
        let m = TransferModel::with_default_backend(code.clone());
        let p = EnsembleParams::<f64>::new(code, 0.5, 2, 0.2, 0, 1).unwrap();
        let es = single_system_threshold(&p, &m, &PotentialConfig::default());
        let ed = symmetric_de_threshold(&p, &m, &DeConfig::default(), 1e-5);
        assert!((es - ed).abs() < 2e-4, "{es} vs {ed}");
        assert!((es - 0.4698).abs() < 5e-4);
    }
}
