//! Scalar abstraction shared by the analytic parts of the crate.
//!
//! Everything that is a smooth function of probabilities (transfer functions,
//! density evolution, potentials) is written against [`Real`], so it runs in
//! `f32` or `f64`. Pure rate arithmetic only needs field operations and is
//! written against [`num_traits::Num`], which lets it run on
//! [`num_rational::Ratio`] for exact answers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Infallible for the supported float types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }

    #[inline]
    fn clamp01(self) -> Self {
        self.max(Self::zero()).min(Self::one())
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact rational scalar used for rate bookkeeping.
pub type Rational = num_rational::Ratio<i64>;

/// Integer power for small non-negative exponents (repetition factors).
#[inline]
pub fn powu<T: Real>(x: T, n: u32) -> T {
    x.powi(n as i32)
}
