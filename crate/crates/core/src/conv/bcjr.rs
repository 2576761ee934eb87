//! Exact bitwise-MAP decoding of a convolutional trellis over the erasure channel.
//!
//! On the BEC every log-likelihood ratio is `0` or `±∞`, so forward/backward
//! recursions reduce to sets of states that are consistent with the
//! observations. A bit is recovered iff every consistent branch agrees on it.

use super::ternary::{Ternary, TernarySeq};
use super::trellis::{StateSet, Trellis};
use crate::error::{Error, Result};

/// Known start/end states of a trellis segment. `None` means free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub start: Option<usize>,
    pub end: Option<usize>,
}

impl Default for Boundary {
    /// Start in state 0, free end (no termination).
    fn default() -> Self {
        Self { start: Some(0), end: None }
    }
}

impl Boundary {
    pub const FREE: Boundary = Boundary { start: None, end: None };
}

/// Reusable forward/backward buffers.
#[derive(Default, Clone, Debug)]
pub struct BcjrScratch {
    fwd: Vec<StateSet>,
    bwd: Vec<StateSet>,
}

/// Extrinsic erasure decoding with the default boundary (start 0, free end).
pub fn bcjr_erase(
    trellis: &Trellis,
    info_obs: &TernarySeq,
    parity_obs: &TernarySeq,
) -> Result<(TernarySeq, TernarySeq)> {
    bcjr_erase_with(trellis, info_obs, parity_obs, Boundary::default())
}

pub fn bcjr_erase_with(
    trellis: &Trellis,
    info_obs: &TernarySeq,
    parity_obs: &TernarySeq,
    boundary: Boundary,
) -> Result<(TernarySeq, TernarySeq)> {
    let n = info_obs.len();
    let mut out_info = vec![Ternary::Erased; n];
    let mut out_parity = vec![Ternary::Erased; n];
    let mut scratch = BcjrScratch::default();
    bcjr_erase_into(
        trellis,
        info_obs.as_slice(),
        parity_obs.as_slice(),
        boundary,
        &mut scratch,
        &mut out_info,
        Some(&mut out_parity),
    )?;
    Ok((out_info.into(), out_parity.into()))
}

/// Allocation-free core. Writes extrinsic info decisions into `out_info` and,
/// if given, extrinsic parity decisions into `out_parity`.
pub fn bcjr_erase_into(
    trellis: &Trellis,
    info: &[Ternary],
    parity: &[Ternary],
    boundary: Boundary,
    scratch: &mut BcjrScratch,
    out_info: &mut [Ternary],
    out_parity: Option<&mut [Ternary]>,
) -> Result<()> {
    let n = info.len();
    if parity.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: parity.len() });
    }
    if out_info.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: out_info.len() });
    }
    let full = trellis.full_set();
    let fwd = &mut scratch.fwd;
    let bwd = &mut scratch.bwd;
    fwd.clear();
    fwd.resize(n + 1, 0);
    bwd.clear();
    bwd.resize(n + 1, 0);

    fwd[0] = boundary.start.map_or(full, |s| 1 << s);
    for t in 0..n {
        fwd[t + 1] = trellis.forward(fwd[t], info[t], parity[t]);
    }
    bwd[n] = boundary.end.map_or(full, |s| 1 << s);
    for t in (0..n).rev() {
        bwd[t] = trellis.backward(bwd[t + 1], info[t], parity[t]);
    }
    if fwd[0] & bwd[0] == 0 {
        let section = fwd.iter().position(|&f| f == 0).map_or(n.saturating_sub(1), |i| i - 1);
        return Err(Error::InfeasibleObservation { section });
    }

    for t in 0..n {
        let (f, b) = (fwd[t], bwd[t + 1]);
        let zero = trellis.backward(b, Ternary::Zero, parity[t]) & f != 0;
        let one = trellis.backward(b, Ternary::One, parity[t]) & f != 0;
        out_info[t] = decide(zero, one);
    }
    if let Some(out_parity) = out_parity {
        if out_parity.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: out_parity.len() });
        }
        for t in 0..n {
            let (f, b) = (fwd[t], bwd[t + 1]);
            let zero = trellis.backward(b, info[t], Ternary::Zero) & f != 0;
            let one = trellis.backward(b, info[t], Ternary::One) & f != 0;
            out_parity[t] = decide(zero, one);
        }
    }
    Ok(())
}

#[inline]
fn decide(zero_possible: bool, one_possible: bool) -> Ternary {
    match (zero_possible, one_possible) {
        (true, false) => Ternary::Zero,
        (false, true) => Ternary::One,
        // (false, false) cannot happen once the global feasibility check passed
        _ => Ternary::Erased,
    }
}
