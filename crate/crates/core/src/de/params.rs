//! Ensemble parameters and rate/puncturing arithmetic.

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::conv::ConvCodeSpec;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mother-code rate of the two-encoder parallel concatenation.
pub const MOTHER_RATE: f64 = 1.0 / 3.0;

fn from_usize<N: Num>(n: usize) -> N {
    let mut v = N::zero();
    for _ in 0..n {
        v = v + N::one();
    }
    v
}

/// Fraction of surviving parity bits `ρ` so that the uncoupled (or `L → ∞`)
/// rate equals `rate`:
/// `R = (1-(q-1)λ) / ((1/R0-1)ρ + 1-(q-1)λ)`.
///
/// Generic over the field, so `Ratio<i64>` gives exact answers.
pub fn rho_from_rate<N: Num + PartialOrd + Copy>(r0: N, rate: N, q: usize, lambda: N) -> Result<N> {
    let one = N::one();
    if rate <= N::zero() || rate >= one || r0 <= N::zero() || r0 >= one {
        return Err(Error::InvalidParams("rates must lie in (0,1)".into()));
    }
    let qm1: N = from_usize::<N>(q.max(1)) - one;
    let keep = one - qm1 * lambda;
    let rho = keep * (one / rate - one) / (one / r0 - one);
    if rho <= N::zero() || rho > one {
        return Err(Error::InvalidParams("target rate needs a surviving parity fraction outside (0,1]".into()));
    }
    Ok(rho)
}

/// Inverse of [`rho_from_rate`].
pub fn rate_from_rho<N: Num + Copy>(r0: N, rho: N, q: usize, lambda: N) -> N {
    let one = N::one();
    let keep = one - (from_usize::<N>(q.max(1)) - one) * lambda;
    keep / ((one / r0 - one) * rho + keep)
}

/// Erasure probability of a randomly punctured parity bit, `1 - (1-ε)ρ`.
pub fn punctured_epsilon<N: Num + Copy>(eps: N, rho: N) -> N {
    N::one() - (N::one() - eps) * rho
}

/// Rate of the unpunctured coupled chain with `L` blocks and memory `m`.
pub fn coupled_rate<N: Num + Copy>(r0: N, q: usize, lambda: N, m: usize, l: usize) -> N {
    let one = N::one();
    let keep = one - (from_usize::<N>(q.max(1)) - one) * lambda;
    let (l, m) = (from_usize::<N>(l), from_usize::<N>(m));
    l * keep / (l * (one / r0 - (one - keep)) + m * (one / r0 - one))
}

/// How the parity of the `m` termination blocks is counted in the finite-`L` rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TerminationAccounting {
    /// Every decoder `t = 1..L+m` emits a full (punctured) parity block.
    #[default]
    FullBlocks,
    /// Termination decoder `L+i` only encodes the `(m+1-i)/(m+1)` share of its
    /// input that carries information, so only that share of parity is sent.
    Shortened,
}

/// `(R0, R, q, λ, ρ, m, L)` plus the component code shared by both encoders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EnsembleParams<T: Real> {
    pub r0: T,
    pub rate: T,
    pub q: usize,
    pub lambda: T,
    pub rho: T,
    pub m: usize,
    pub l: usize,
    pub code: ConvCodeSpec,
}

impl<T: Real> EnsembleParams<T> {
    /// Builds parameters for target rate `rate`, solving for `ρ`.
    ///
    /// `λ = 0` with `q > 1` is the same ensemble as `q = 1`, and `q = 1` has no
    /// repetition, so both normalise to `(q, λ) = (1, 0)`.
    pub fn new(code: ConvCodeSpec, rate: T, q: usize, lambda: T, m: usize, l: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParams("repetition factor q must be >= 1".into()));
        }
        if l == 0 {
            return Err(Error::InvalidParams("coupling length L must be >= 1".into()));
        }
        let qf = T::lit(q as f64);
        if lambda < T::zero() || lambda * qf > T::one() + T::lit(1e-12) {
            return Err(Error::InvalidParams(format!("lambda {lambda} outside [0, 1/q] for q={q}")));
        }
        let (q, lambda) = if q == 1 || lambda == T::zero() { (1, T::zero()) } else { (q, lambda.min(T::one() / qf)) };
        let r0 = T::lit(MOTHER_RATE);
        let rho = rho_from_rate(r0, rate, q, lambda)?;
        Ok(Self { r0, rate, q, lambda, rho, m, l, code })
    }

    /// `λ = 1/q`.
    pub fn regular(code: ConvCodeSpec, rate: T, q: usize, m: usize, l: usize) -> Result<Self> {
        Self::new(code, rate, q, T::one() / T::lit(q as f64), m, l)
    }

    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.code.clone(), self.rate, self.q, lambda, self.m, self.l)
    }

    pub fn with_coupling(&self, m: usize, l: usize) -> Self {
        Self { m, l, ..self.clone() }
    }

    /// Weight of repeated positions in the encoder input, `qλ`.
    pub fn q_lambda(&self) -> T {
        T::lit(self.q as f64) * self.lambda
    }

    pub fn punctured_epsilon(&self, eps: T) -> T {
        punctured_epsilon(eps, self.rho).clamp01()
    }

    /// Rate of the terminated chain of `L` blocks with punctured parity.
    pub fn terminated_rate(&self, accounting: TerminationAccounting) -> T {
        let one = T::one();
        // per unit of K': info K, parity per decoder rho*(1/R0 - 1)
        let info = one - T::lit(self.q as f64 - 1.0) * self.lambda;
        let parity = self.rho * (one / self.r0 - one);
        let m = self.m as f64;
        let tail = match accounting {
            TerminationAccounting::FullBlocks => m,
            TerminationAccounting::Shortened => (1..=self.m).map(|i| (m + 1.0 - i as f64) / (m + 1.0)).sum(),
        };
        let l = T::lit(self.l as f64);
        l * info / (l * (info + parity) + T::lit(tail) * parity)
    }

    pub fn to_f64(&self) -> EnsembleParams<f64> {
        EnsembleParams {
            r0: self.r0.as_f64(),
            rate: self.rate.as_f64(),
            q: self.q,
            lambda: self.lambda.as_f64(),
            rho: self.rho.as_f64(),
            m: self.m,
            l: self.l,
            code: self.code.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rho_exact_values() {
        assert_eq!(rho_from_rate(r(1, 3), r(1, 2), 2, r(1, 2)).unwrap(), r(1, 4));
        assert_eq!(rho_from_rate(r(1, 3), r(1, 3), 1, r(0, 1)).unwrap(), r(1, 1));
        assert_eq!(rho_from_rate(r(1, 3), r(3, 4), 2, r(1, 2)).unwrap(), r(1, 12));
    }

    #[test]
    fn rho_matches_regular_shortcut() {
        // with λ = 1/q and R0 = 1/3: ρ = (1-R)/(2qR)
        for q in 1..8i64 {
            for (n, d) in [(1, 2), (3, 4), (2, 3), (9, 10)] {
                let rate = r(n, d);
                let rho = rho_from_rate(r(1, 3), rate, q as usize, r(1, q)).unwrap();
                assert_eq!(rho, (r(1, 1) - rate) / (r(2 * q, 1) * rate));
                assert_eq!(rate_from_rho(r(1, 3), rho, q as usize, r(1, q)), rate);
            }
        }
    }

    #[test]
    fn out_of_range_rate_rejected() {
        // lowest q=2, λ=1/2 rate is 1/5
        assert!(rho_from_rate(r(1, 3), r(1, 6), 2, r(1, 2)).is_err());
        assert!(rho_from_rate(r(1, 3), r(1, 5), 2, r(1, 2)).is_ok());
        assert!(rho_from_rate(r(1, 3), r(1, 1), 2, r(1, 2)).is_err());
    }

    #[test]
    fn punctured_epsilon_cases() {
        assert_eq!(punctured_epsilon(r(2, 5), r(1, 1)), r(2, 5));
        assert_eq!(punctured_epsilon(r(2, 5), r(0, 1)), r(1, 1));
        assert_eq!(punctured_epsilon(r(2, 5), r(1, 2)), r(7, 10));
    }

    #[test]
    fn coupled_rate_formula() {
        // L → ∞ recovers the uncoupled rate; m = 0 has no termination loss
        let uc = r(1, 2) / (r(3, 1) - r(1, 2));
        assert_eq!(coupled_rate(r(1, 3), 2, r(1, 2), 0, 7), uc);
        let rsc = coupled_rate(r(1, 3), 2, r(1, 2), 1, 100);
        assert_eq!(rsc, r(50, 252));
    }

    #[test]
    fn normalisation_and_validation() {
        let c = ConvCodeSpec::four_state();
        let p = EnsembleParams::<f64>::new(c.clone(), 0.5, 3, 0.0, 1, 10).unwrap();
        assert_eq!((p.q, p.lambda), (1, 0.0));
        let p = EnsembleParams::<f64>::new(c.clone(), 0.5, 1, 0.3, 1, 10).unwrap();
        assert_eq!((p.q, p.lambda), (1, 0.0));
        assert!(EnsembleParams::<f64>::new(c.clone(), 0.5, 2, 0.6, 1, 10).is_err());
        assert!(EnsembleParams::<f64>::new(c, 0.5, 0, 0.0, 1, 10).is_err());
    }

    #[test]
    fn terminated_rate_accountings() {
        let p = EnsembleParams::<f64>::regular(ConvCodeSpec::four_state(), 0.5, 2, 2, 50).unwrap();
        let full = p.terminated_rate(TerminationAccounting::FullBlocks);
        let short = p.terminated_rate(TerminationAccounting::Shortened);
        assert!((full - 25.0 / 51.0).abs() < 1e-12);
        assert!((short - 25.0 / 50.5).abs() < 1e-12);
        let p = p.with_coupling(0, 50);
        assert!((p.terminated_rate(TerminationAccounting::FullBlocks) - 0.5).abs() < 1e-12);
    }
}
