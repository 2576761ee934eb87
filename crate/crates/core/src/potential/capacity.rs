//! Closed-form potential threshold of the 2-state code with `λ = 1/q` and the resulting lower bound.

use num_traits::Num;

use crate::error::{Error, Result};
use crate::scalar::{powu, Real};

/// `(1-R)(1 - R/(R+q))`, a lower bound on the 2-state potential threshold for `q ≥ 2`.
///
/// Generic over the field so that `Ratio<i64>` gives the exact value.
pub fn capacity_bound<N: Num + Copy>(rate: N, q: usize) -> Result<N> {
    if q < 2 {
        return Err(Error::OutOfTheoremScope(format!("bound needs q >= 2, got q={q}")));
    }
    let one = N::one();
    let mut qn = N::zero();
    for _ in 0..q {
        qn = qn + one;
    }
    Ok((one - rate) * (one - rate / (rate + qn)))
}

/// Smallest `ε` at which the `λ = 1/q` potential of the 2-state code vanishes at `x`.
///
/// Positive root of `a ε² + b ε - 1 = 0` with `a = x^(2q-2) (2q/(2q-1) - x)` and `b = a (1-ρ)/ρ + 1`.
pub fn eps2_closed_form<T: Real>(x: T, q: usize, rho: T) -> T {
    let two_q = T::lit(2.0 * q as f64);
    let a = powu(x, 2 * q as u32 - 2) * (two_q / (two_q - T::one()) - x);
    let b = a * (T::one() - rho) / rho + T::one();
    if a <= T::zero() {
        // degenerate root of b ε = 1
        return T::one() / b;
    }
    (-b + (b * b + T::lit(4.0) * a).sqrt()) / (T::lit(2.0) * a)
}

/// `x* = 4q(q-1)/(2q-1)²`, the minimiser of [`eps2_closed_form`] over `x`.
pub fn argmin_x<T: Real>(q: usize) -> T {
    let q = T::lit(q as f64);
    let d = T::lit(2.0) * q - T::one();
    T::lit(4.0) * q * (q - T::one()) / (d * d)
}

/// Closed-form potential threshold `ε2(x*)` of the 2-state code with `λ = 1/q`, `q ≥ 2`.
pub fn two_state_potential_threshold<T: Real>(rate: T, q: usize) -> Result<T> {
    if q < 2 {
        return Err(Error::OutOfTheoremScope(format!("closed-form threshold needs q >= 2, got q={q}")));
    }
    let rho = (T::one() - rate) / (T::lit(2.0 * q as f64) * rate);
    Ok(eps2_closed_form(argmin_x(q), q, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::golden_min;
    use crate::scalar::Rational;

    #[test]
    fn bound_exact_values() {
        assert_eq!(capacity_bound(Rational::new(1, 2), 2).unwrap(), Rational::new(2, 5));
        assert_eq!(capacity_bound(Rational::new(1, 3), 2).unwrap(), Rational::new(4, 7));
        assert!(matches!(capacity_bound(Rational::new(1, 2), 1), Err(Error::OutOfTheoremScope(_))));
        let far = capacity_bound(0.5f64, 100_000).unwrap();
        assert!((far - 0.5).abs() < 1e-5);
    }

    #[test]
    fn argmin_values() {
        assert!((argmin_x::<f64>(2) - 8.0 / 9.0).abs() < 1e-15);
        for q in 2..20 {
            let x: f64 = argmin_x(q);
            assert!(x > 0.0 && x < 1.0);
        }
    }

    #[test]
    fn golden_search_finds_argmin() {
        for &q in &[2usize, 3, 5, 10] {
            let rho = 0.25;
            let (x, _) = golden_min(|x| eps2_closed_form(x, q, rho), 1e-3, 1.0, 1e-10);
            assert!((x - argmin_x::<f64>(q)).abs() < 1e-6, "q={q}");
        }
    }

    #[test]
    fn hand_checked_threshold() {
        // q = 2, R = 1/2: ρ = 1/4, x* = 8/9, a = (64/81)(4/9)
        let a = 64.0f64 / 81.0 * 4.0 / 9.0;
        let b = 3.0 * a + 1.0;
        let hand = (-b + (b * b + 4.0 * a).sqrt()) / (2.0 * a);
        let got = two_state_potential_threshold(0.5f64, 2).unwrap();
        assert!((got - hand).abs() < 1e-14);
        assert!((got - 0.4520).abs() < 1e-4);
    }

    #[test]
    fn root_solves_quadratic() {
        for &(x, q, rho) in &[(0.3f64, 2usize, 0.5f64), (0.9, 4, 0.1), (1.0, 3, 1.0)] {
            let e = eps2_closed_form(x, q, rho);
            let tq = 2.0 * q as f64;
            let a = x.powi(tq as i32 - 2) * (tq / (tq - 1.0) - x);
            let b = a * (1.0 - rho) / rho + 1.0;
            assert!((a * e * e + b * e - 1.0).abs() < 1e-12);
            assert!(e > 0.0);
        }
    }
}
