//! The scalar recursion `x ← f(g(x); ε)` of the symmetric uncoupled ensemble and its potential.

use crate::de::EnsembleParams;
use crate::scalar::{powu, Real};
use crate::transfer::{TransferModel, TransferSlice};

/// `g(x) = qλ x^(2q-1) + (1-qλ) x`.
pub fn g_fn<T: Real>(x: T, q: usize, lambda: T) -> T {
    let ql = T::lit(q as f64) * lambda;
    ql * powu(x, 2 * q as u32 - 1) + (T::one() - ql) * x
}

/// `g'(x) = (2q-1) qλ x^(2q-2) + (1-qλ)`.
pub fn g_prime<T: Real>(x: T, q: usize, lambda: T) -> T {
    let ql = T::lit(q as f64) * lambda;
    T::lit(2.0 * q as f64 - 1.0) * ql * powu(x, 2 * q as u32 - 2) + (T::one() - ql)
}

/// `G(x) = ∫_0^x g = ½ λ x^(2q) + ½ (1-qλ) x²`.
pub fn big_g<T: Real>(x: T, q: usize, lambda: T) -> T {
    let half = T::lit(0.5);
    let ql = T::lit(q as f64) * lambda;
    half * lambda * powu(x, 2 * q as u32) + half * (T::one() - ql) * x * x
}

/// The admissible system at one channel parameter `ε`.
#[derive(Clone, Debug)]
pub struct SymmetricSystem<T: Real> {
    pub q: usize,
    pub lambda: T,
    pub eps: T,
    slice: TransferSlice<T>,
}

impl<T: Real> SymmetricSystem<T> {
    pub fn new(params: &EnsembleParams<T>, model: &TransferModel<T>, eps: T) -> Self {
        let slice = model.slice(params.punctured_epsilon(eps));
        Self { q: params.q, lambda: params.lambda, eps, slice }
    }

    pub fn slice(&self) -> &TransferSlice<T> {
        &self.slice
    }

    pub fn g(&self, x: T) -> T {
        g_fn(x, self.q, self.lambda)
    }

    /// `f(x; ε) = f_s(εx, 1-(1-ε)ρ)`.
    pub fn f(&self, x: T) -> T {
        self.slice.fs(self.eps * x)
    }

    /// `F(x; ε) = ∫_0^x f(z; ε) dz`.
    pub fn big_f(&self, x: T) -> T {
        if self.eps <= T::zero() {
            return T::zero();
        }
        self.slice.fs_integral(self.eps * x) / self.eps
    }

    /// One step of the recursion.
    pub fn step(&self, x: T) -> T {
        self.f(self.g(x))
    }

    /// `U(x; ε) = x g(x) - G(x) - F(g(x); ε)`.
    pub fn potential(&self, x: T) -> T {
        let gx = self.g(x);
        x * gx - big_g(x, self.q, self.lambda) - self.big_f(gx)
    }

    /// `U'(x; ε) = g'(x) (x - f(g(x); ε))`.
    pub fn potential_prime(&self, x: T) -> T {
        g_prime(x, self.q, self.lambda) * (x - self.step(x))
    }

    /// Whether `0` is an unstable fixed point: `ε f_s'(0) g'(0) > 1`.
    pub fn unstable_at_zero(&self) -> bool {
        let gp0 = g_prime(T::zero(), self.q, self.lambda);
        gp0 > T::zero() && self.eps * self.slice.slope0() * gp0 > T::one()
    }

    /// Iterates from `x = 1` until the update falls below `tol` or `x < zero_thresh`.
    pub fn iterate_from_one(&self, tol: T, zero_thresh: T, max_iters: usize) -> (T, usize) {
        let mut x = T::one();
        for it in 1..=max_iters {
            let nx = self.step(x);
            let d = (x - nx).abs();
            x = nx;
            if x < zero_thresh || d < tol {
                return (x, it);
            }
        }
        (x, max_iters)
    }
}
