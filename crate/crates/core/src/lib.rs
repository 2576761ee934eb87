pub mod codec;
pub mod conv;
pub mod de;
pub mod error;
pub mod numerics;
pub mod potential;
pub mod scalar;
pub mod studio;
pub mod transfer;

pub use error::{Error, Result};
pub use scalar::{Rational, Real};

pub type Params64 = de::EnsembleParams<f64>;
pub type Params32 = de::EnsembleParams<f32>;
pub type Model64 = transfer::TransferModel<f64>;
pub type Model32 = transfer::TransferModel<f32>;
pub type System64 = potential::SymmetricSystem<f64>;
pub type Table64 = transfer::TransferTable<f64>;
