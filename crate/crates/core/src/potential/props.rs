//! Empirical checks of the conditions under which the potential threshold improves with
//! code strength and with `q`. Violations are reported, never raised.

use serde::{Deserialize, Serialize};

use super::system::SymmetricSystem;
use super::thresholds::{potential_threshold, single_system_threshold, PotentialConfig};
use crate::conv::ConvCodeSpec;
use crate::de::{DeConfig, EnsembleParams};
use crate::error::Result;
use crate::transfer::TransferModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropConfig {
    /// Parity erasure probabilities at which transfer-function pairs are compared.
    pub ys: Vec<f64>,
    /// Interior samples of `ε` per code between the largest single-system threshold and `1 - R`.
    pub eps_samples: usize,
    /// Extra `ε` values checked for every code in addition to the samples.
    pub extra_eps: Vec<f64>,
    pub grid_points: usize,
    pub potential: PotentialConfig,
    pub de: DeConfig,
}

impl Default for PropConfig {
    fn default() -> Self {
        Self {
            ys: vec![0.25, 0.5, 0.66, 0.75],
            eps_samples: 3,
            extra_eps: Vec::new(),
            grid_points: 2001,
            potential: PotentialConfig { bisect_tol: 1e-5, ..Default::default() },
            de: DeConfig::default(),
        }
    }
}

/// Comparison of `f_s` for a weaker and a stronger code at one `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingCheck {
    pub weaker: String,
    pub stronger: String,
    pub y: f64,
    pub sign_changes: usize,
    pub crossing_x: Option<f64>,
    /// Stronger code below on `(0, z)` and above on `(z, 1)`.
    pub expected_order: bool,
    pub passed: bool,
}

/// Nonzero solutions of `x = f(g(x); ε)` on `(0, 1)` and the limit of the recursion from `x = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointCheck {
    pub code: String,
    pub q: usize,
    pub eps: f64,
    pub eps_s: f64,
    pub nonzero_fixed_points: usize,
    /// With an unstable origin the lower crossing is `x = 0` itself, so one interior root is expected.
    pub origin_unstable: bool,
    pub x_inf: f64,
    pub passed: bool,
}

/// `x^(∞)` across `q` at one `(code, ε)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneInQ {
    pub code: String,
    pub eps: f64,
    pub qs: Vec<usize>,
    pub x_inf: Vec<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialRow {
    pub code: String,
    pub eps_c: Vec<f64>,
    /// `ε_c` nondecreasing across `q`.
    pub monotone_in_q: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropReport {
    pub rate: f64,
    pub qs: Vec<usize>,
    pub crossings: Vec<CrossingCheck>,
    pub fixed_points: Vec<FixedPointCheck>,
    pub x_inf_in_q: Vec<MonotoneInQ>,
    pub eps_c: Vec<PotentialRow>,
    /// `ε_c` nondecreasing down the code list for every `q`.
    pub eps_c_monotone_in_code: bool,
    pub config: PropConfig,
}

impl PropReport {
    pub fn all_passed(&self) -> bool {
        self.crossings.iter().all(|c| c.passed)
            && self.fixed_points.iter().all(|c| c.passed)
            && self.x_inf_in_q.iter().all(|c| c.passed)
            && self.eps_c.iter().all(|r| r.monotone_in_q)
            && self.eps_c_monotone_in_code
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for c in self.crossings.iter().filter(|c| !c.passed) {
            v.push(format!("crossing {} vs {} at y={}: {} sign changes", c.weaker, c.stronger, c.y, c.sign_changes));
        }
        for c in self.fixed_points.iter().filter(|c| !c.passed) {
            v.push(format!("{} q={} eps={}: {} nonzero fixed points", c.code, c.q, c.eps, c.nonzero_fixed_points));
        }
        for c in self.x_inf_in_q.iter().filter(|c| !c.passed) {
            v.push(format!("{} eps={}: x_inf not nondecreasing in q {:?}", c.code, c.eps, c.x_inf));
        }
        for r in self.eps_c.iter().filter(|r| !r.monotone_in_q) {
            v.push(format!("{}: eps_c not nondecreasing in q {:?}", r.code, r.eps_c));
        }
        if !self.eps_c_monotone_in_code {
            v.push("eps_c not nondecreasing in code order".into());
        }
        v
    }
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(3) - 1;
    (1..n).map(move |i| i as f64 / n as f64)
}

/// Sign changes of `f_stronger - f_weaker` on the interior grid, with the first crossing location.
pub fn crossing_check(weak: &TransferModel<f64>, strong: &TransferModel<f64>, y: f64, grid_points: usize) -> CrossingCheck {
    let (ws, ss) = (weak.slice(y), strong.slice(y));
    let mut changes = 0;
    let mut first_sign = 0i8;
    let mut last_sign = 0i8;
    let mut crossing = None;
    let mut prev_x = 0.0;
    for x in grid(grid_points) {
        let d = ss.fs(x) - ws.fs(x);
        // ignore differences at interpolation noise level
        let s = if d > 1e-12 { 1 } else if d < -1e-12 { -1 } else { 0 };
        if s == 0 {
            continue;
        }
        if first_sign == 0 {
            first_sign = s;
        } else if s != last_sign {
            changes += 1;
            crossing.get_or_insert(0.5 * (prev_x + x));
        }
        last_sign = s;
        prev_x = x;
    }
    let expected_order = first_sign == -1 && last_sign == 1;
    CrossingCheck {
        weaker: weak.code().to_string(),
        stronger: strong.code().to_string(),
        y,
        sign_changes: changes,
        crossing_x: crossing,
        expected_order,
        passed: changes == 1 && expected_order,
    }
}

/// Roots of `x - f(g(x); ε)` on `(0, 1)` counted by sign changes on a grid.
pub fn count_nonzero_fixed_points(sys: &SymmetricSystem<f64>, grid_points: usize) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for x in grid(grid_points) {
        let d = x - sys.step(x);
        let s = if d > 0.0 { 1 } else if d < 0.0 { -1 } else { 0 };
        if s != 0 && last != 0 && s != last {
            changes += 1;
        }
        if s != 0 {
            last = s;
        }
    }
    changes
}

/// Runs every check for `codes` (ordered from weakest to strongest), `λ = 1/q`, at rate `rate`.
pub fn prop_checks(codes: &[ConvCodeSpec], qs: &[usize], rate: f64, cfg: &PropConfig) -> Result<PropReport> {
    let models: Vec<TransferModel<f64>> = codes.iter().map(|c| TransferModel::with_default_backend(c.clone())).collect();
    let mut crossings = Vec::new();
    for pair in models.windows(2) {
        for &y in &cfg.ys {
            crossings.push(crossing_check(&pair[0], &pair[1], y, cfg.grid_points));
        }
    }

    let mut fixed_points = Vec::new();
    let mut x_inf_in_q = Vec::new();
    let mut eps_c = Vec::new();
    for (code, model) in codes.iter().zip(&models) {
        let params: Vec<EnsembleParams<f64>> =
            qs.iter().map(|&q| EnsembleParams::regular(code.clone(), rate, q, 0, 1)).collect::<Result<_>>()?;
        let eps_s: Vec<f64> = params.iter().map(|p| single_system_threshold(p, model, &cfg.potential)).collect();
        let lo = eps_s.iter().cloned().fold(0.0, f64::max);
        let hi = 1.0 - rate;
        let mut eps_list: Vec<f64> =
            (1..=cfg.eps_samples).map(|i| lo + (hi - lo) * i as f64 / (cfg.eps_samples + 1) as f64).collect();
        eps_list.extend(cfg.extra_eps.iter().cloned());

        for &eps in &eps_list {
            let mut xs = Vec::new();
            for (p, &es) in params.iter().zip(&eps_s) {
                let sys = SymmetricSystem::new(p, model, eps);
                let n = count_nonzero_fixed_points(&sys, cfg.grid_points);
                let expected = if sys.unstable_at_zero() { 1 } else { 2 };
                let (x_inf, _) = sys.iterate_from_one(cfg.de.tol, cfg.de.zero_thresh, cfg.de.max_iters);
                xs.push(x_inf);
                fixed_points.push(FixedPointCheck {
                    code: code.to_string(),
                    q: p.q,
                    eps,
                    eps_s: es,
                    nonzero_fixed_points: n,
                    origin_unstable: sys.unstable_at_zero(),
                    x_inf,
                    // only binding inside (ε_s, 1 - R)
                    passed: n == expected || eps <= es || eps >= hi,
                });
            }
            let passed = xs.windows(2).all(|w| w[1] >= w[0] - 1e-9);
            x_inf_in_q.push(MonotoneInQ { code: code.to_string(), eps, qs: qs.to_vec(), x_inf: xs, passed });
        }

        let ec: Vec<f64> = params.iter().map(|p| potential_threshold(p, model, &cfg.potential)).collect();
        let monotone_in_q = ec.windows(2).all(|w| w[1] >= w[0] - cfg.potential.bisect_tol);
        eps_c.push(PotentialRow { code: code.to_string(), eps_c: ec, monotone_in_q });
    }
    let tol = cfg.potential.bisect_tol;
    let eps_c_monotone_in_code =
        eps_c.windows(2).all(|w| w[0].eps_c.iter().zip(&w[1].eps_c).all(|(a, b)| *b >= *a - tol));

    Ok(PropReport {
        rate,
        qs: qs.to_vec(),
        crossings,
        fixed_points,
        x_inf_in_q,
        eps_c,
        eps_c_monotone_in_code,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_vs_eight_state_cross_once_in_expected_order() {
        let weak = TransferModel::with_default_backend(ConvCodeSpec::four_state());
        let strong = TransferModel::with_default_backend(ConvCodeSpec::eight_state());
        let c = crossing_check(&weak, &strong, 0.66, 1001);
        assert!(c.passed, "{c:?}");
        let z = c.crossing_x.unwrap();
        assert!(z > 0.0 && z < 1.0);
    }

    #[test]
    fn two_state_report_is_consistent() {
        let cfg = PropConfig { eps_samples: 2, ys: vec![0.5], grid_points: 1001, ..Default::default() };
        let r = prop_checks(&[ConvCodeSpec::two_state()], &[2, 3], 0.5, &cfg).unwrap();
        assert_eq!(r.eps_c.len(), 1);
        assert!(r.eps_c[0].monotone_in_q);
        assert_eq!(r.fixed_points.len(), 4);
        assert!(r.crossings.is_empty());
    }
}
