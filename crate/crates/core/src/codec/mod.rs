//! Finite-length chains: construction, encoding, erasure channel, decoding and BER measurement.

mod decode;
mod encode;
mod experiment;
mod instance;

pub use decode::{decode_chain, DecodeOutput, DecoderConfig};
pub use encode::{bec, encode_chain, Codeword, ObservationChain, PunctureMasks, PunctureMode};
pub use experiment::{ber_experiment, frame_seed, wilson_interval, BerPoint, ExperimentConfig};
pub use instance::{CodeInstance, Tap};
