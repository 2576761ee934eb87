//! Density evolution on the erasure channel and BP thresholds.

mod params;
mod recursion;
mod threshold;

pub use params::{
    coupled_rate, punctured_epsilon, rate_from_rho, rho_from_rate, EnsembleParams, TerminationAccounting,
    MOTHER_RATE,
};
pub use recursion::{
    de_coupled_run, de_coupled_with, de_uncoupled_fixed_point, de_uncoupled_with, info_input, DeConfig, DeOutcome,
    DeState,
};
pub use threshold::{bp_threshold, bp_threshold_in, de_converges, DeMode, ThresholdRecord};
