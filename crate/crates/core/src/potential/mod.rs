//! Scalar admissible system of the symmetric ensemble, its potential, and the thresholds derived from it.

mod area;
mod capacity;
mod props;
mod system;
mod thresholds;

pub use area::{exit_point, map_threshold_area, AreaConfig, AreaResult, ExitPoint};
pub use capacity::{argmin_x, capacity_bound, eps2_closed_form, two_state_potential_threshold};
pub use props::{
    count_nonzero_fixed_points, crossing_check, prop_checks, CrossingCheck, FixedPointCheck, MonotoneInQ, PotentialRow,
    PropConfig, PropReport,
};
pub use system::{big_g, g_fn, g_prime, SymmetricSystem};
pub use thresholds::{
    min_potential_above, min_unstable_fixed_point, potential_profile, potential_threshold, single_system_threshold,
    symmetric_de_threshold, PotentialConfig, PotentialProfile,
};
