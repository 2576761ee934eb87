//! Decoder transfer functions `f_s(x, y)`, `f_p(x, y)`: output erasure
//! probabilities of information and parity bits for i.i.d. input erasure
//! probabilities `x` (information) and `y` (parity).

pub mod closed;
mod exact;
mod mc;
mod model;
mod table;

pub use closed::{fs_closed_2state, fs_closed_2state_integral, fs_closed_2state_slope0};
pub use exact::ExactTransfer;
pub use mc::{estimate_transfer, McConfig, TransferEstimate};
pub use model::{Backend, TransferModel, TransferSlice};
pub use table::{isotonic, tabulate, uniform_grid, TableSource, TransferTable};
