//! Iterative erasure decoder for the coupled chain.
//!
//! On the erasure channel an information bit is either known or not, and knowledge from any
//! source (channel, a replica, the partner decoder, a neighbouring block) is final. Decoding is
//! therefore a monotone growth of the known set driven by the trellis decoders.

use serde::{Deserialize, Serialize};

use super::encode::ObservationChain;
use super::instance::{CodeInstance, Tap};
use crate::conv::{bcjr_erase_into, BcjrScratch, Boundary, Ternary, Trellis};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    /// Upper/lower alternations per time instant.
    pub max_intra: usize,
    /// Passes over the chain (or over each window position).
    pub max_inter: usize,
    /// Sliding window of decoders; `None` decodes the full chain.
    pub window: Option<usize>,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self { max_intra: 20, max_inter: 20, window: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutput {
    /// `K L` information decisions, block-major.
    pub info: Vec<Ternary>,
    pub erased: usize,
    pub inter_iterations: usize,
}

impl DecodeOutput {
    pub fn erased_flags(&self) -> Vec<bool> {
        self.info.iter().map(|t| t.is_erased()).collect()
    }
}

struct ChainDecoder<'a> {
    inst: &'a CodeInstance,
    trellis: &'a Trellis,
    obs: &'a ObservationChain,
    cfg: DecoderConfig,
    known: Vec<Ternary>,
    scratch: BcjrScratch,
    input: Vec<Ternary>,
    out: Vec<Ternary>,
}

impl ChainDecoder<'_> {
    /// Runs one trellis decoder at time `t` and returns the number of newly known bits.
    fn run(&mut self, t: usize, lower: bool) -> Result<usize> {
        let (l, k) = (self.inst.l(), self.inst.k);
        let (taps, parity): (&[Tap], _) = if lower {
            (self.inst.lower_taps(), &self.obs.parity_lower[t - 1])
        } else {
            (self.inst.upper_taps(), &self.obs.parity_upper[t - 1])
        };
        for (slot, tap) in self.input.iter_mut().zip(taps) {
            let s = t as isize - tap.offset as isize;
            *slot = if s >= 1 && s as usize <= l {
                self.known[(s as usize - 1) * k + tap.info as usize]
            } else {
                Ternary::Zero
            };
        }
        bcjr_erase_into(
            self.trellis,
            &self.input,
            parity.as_slice(),
            Boundary::default(),
            &mut self.scratch,
            &mut self.out,
            None,
        )?;
        let mut new = 0;
        for (i, tap) in taps.iter().enumerate() {
            if self.input[i].is_erased() && !self.out[i].is_erased() {
                let s = t - tap.offset as usize;
                let idx = (s - 1) * k + tap.info as usize;
                if self.known[idx].is_erased() {
                    self.known[idx] = self.out[i];
                    new += 1;
                }
            }
        }
        Ok(new)
    }

    fn intra(&mut self, t: usize) -> Result<usize> {
        let mut total = 0;
        for _ in 0..self.cfg.max_intra {
            let n = self.run(t, false)? + self.run(t, true)?;
            total += n;
            if n == 0 {
                break;
            }
        }
        Ok(total)
    }

    /// Forward then backward pass over decoders `lo..=hi`.
    fn sweep(&mut self, lo: usize, hi: usize) -> Result<usize> {
        let mut total = 0;
        for t in lo..=hi {
            total += self.intra(t)?;
        }
        for t in (lo..hi).rev() {
            total += self.intra(t)?;
        }
        Ok(total)
    }

    fn iterate(&mut self, lo: usize, hi: usize) -> Result<usize> {
        let mut passes = 0;
        while passes < self.cfg.max_inter {
            passes += 1;
            if self.sweep(lo, hi)? == 0 {
                break;
            }
        }
        Ok(passes)
    }
}

/// Decodes one chain of observations.
pub fn decode_chain(inst: &CodeInstance, trellis: &Trellis, obs: &ObservationChain, cfg: &DecoderConfig) -> Result<DecodeOutput> {
    let (l, m, k) = (inst.l(), inst.m(), inst.k);
    if obs.systematic.len() != l {
        return Err(Error::LengthMismatch { expected: l, actual: obs.systematic.len() });
    }
    for seq in obs.parity_upper.iter().chain(&obs.parity_lower) {
        if seq.len() != inst.k_prime {
            return Err(Error::LengthMismatch { expected: inst.k_prime, actual: seq.len() });
        }
    }
    if obs.parity_upper.len() != l + m || obs.parity_lower.len() != l + m {
        return Err(Error::LengthMismatch { expected: l + m, actual: obs.parity_upper.len().min(obs.parity_lower.len()) });
    }
    let mut known = Vec::with_capacity(k * l);
    for s in &obs.systematic {
        if s.len() != k {
            return Err(Error::LengthMismatch { expected: k, actual: s.len() });
        }
        known.extend_from_slice(s.as_slice());
    }
    let mut dec = ChainDecoder {
        inst,
        trellis,
        obs,
        cfg: *cfg,
        known,
        scratch: BcjrScratch::default(),
        input: vec![Ternary::Erased; inst.k_prime],
        out: vec![Ternary::Erased; inst.k_prime],
    };
    let last = l + m;
    let inter_iterations = match cfg.window {
        None => dec.iterate(1, last)?,
        Some(w) => {
            let w = w.max(1);
            let mut total = 0;
            for t0 in 1..=l {
                total += dec.iterate(t0, (t0 + w - 1).min(last))?;
            }
            total
        }
    };
    let erased = dec.known.iter().filter(|t| t.is_erased()).count();
    Ok(DecodeOutput { info: dec.known, erased, inter_iterations })
}
