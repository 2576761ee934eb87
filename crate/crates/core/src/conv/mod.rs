//! Rate-1/2 recursive systematic convolutional codes and their erasure decoder.

mod bcjr;
mod spec;
mod ternary;
mod trellis;

pub use bcjr::{bcjr_erase, bcjr_erase_into, bcjr_erase_with, BcjrScratch, Boundary};
pub use spec::{ConvCodeSpec, MAX_MEMORY};
pub use ternary::{Ternary, TernarySeq};
pub use trellis::{StateSet, Trellis};

/// Builds the trellis of `spec`. Specs are validated at construction, so this cannot fail.
pub fn build_trellis(spec: &ConvCodeSpec) -> Trellis {
    Trellis::new(spec)
}
