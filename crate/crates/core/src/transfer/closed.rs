//! Closed-form information-bit transfer function of the 2-state `(1,1/3)` code.

use crate::scalar::Real;

/// `f_s(x, y) = x y (2 - 2y + x y) / (1 - y + x y)^2`.
///
/// The expression is 0/0 at `(x, y) = (0, 1)`; the value there is taken as 0 so
/// that `f_s(0, y) = 0` for every `y`.
pub fn fs_closed_2state<T: Real>(x: T, y: T) -> T {
    let one = T::one();
    let den = one - y + x * y;
    if x <= T::zero() || den <= T::zero() {
        return T::zero();
    }
    let two = T::lit(2.0);
    (x * y * (two - two * y + x * y) / (den * den)).clamp01()
}

/// `∫_0^w f_s(v, y) dv = y w^2 / (1 - y + y w)`.
pub fn fs_closed_2state_integral<T: Real>(w: T, y: T) -> T {
    let den = T::one() - y + y * w;
    if w <= T::zero() || den <= T::zero() {
        return T::zero();
    }
    y * w * w / den
}

/// `∂f_s/∂x` at `x = 0`, i.e. `2y / (1 - y)` (infinite at `y = 1`).
pub fn fs_closed_2state_slope0<T: Real>(y: T) -> T {
    let one = T::one();
    if y >= one {
        return T::infinity();
    }
    T::lit(2.0) * y / (one - y)
}
