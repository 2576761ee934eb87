//! Encoder for the coupled chain, parity puncturing and the erasure channel.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::instance::{CodeInstance, Tap};
use crate::conv::{Ternary, TernarySeq, Trellis};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctureMode {
    /// Fresh uniformly random survivor set for every channel realisation.
    #[default]
    Random,
    /// Evenly spaced survivors, identical for every block.
    Periodic,
}

/// Surviving parity positions of every decoder at every time instant `t = 1..L+m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctureMasks {
    pub upper: Vec<Vec<bool>>,
    pub lower: Vec<Vec<bool>>,
}

impl PunctureMasks {
    /// Survivors per decoder block, `round(ρ K')`.
    pub fn survivors(inst: &CodeInstance) -> usize {
        (inst.params.rho * inst.k_prime as f64).round() as usize
    }

    pub fn draw<R: Rng>(inst: &CodeInstance, mode: PunctureMode, rng: &mut R) -> Self {
        let n = inst.k_prime;
        let keep = Self::survivors(inst).min(n);
        let blocks = inst.l() + inst.m();
        let one = |rng: &mut R| -> Vec<bool> {
            let mut v = vec![false; n];
            match mode {
                PunctureMode::Random => {
                    for i in sample(rng, n, keep) {
                        v[i] = true;
                    }
                }
                PunctureMode::Periodic => {
                    for (i, slot) in v.iter_mut().enumerate() {
                        *slot = (i + 1) * keep / n > i * keep / n;
                    }
                }
            }
            v
        };
        let upper = (0..blocks).map(|_| one(rng)).collect();
        let lower = (0..blocks).map(|_| one(rng)).collect();
        Self { upper, lower }
    }
}

/// Pre-channel bits of a whole chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    /// `L` blocks of `K` systematic bits; replicas are not sent.
    pub systematic: Vec<Vec<u8>>,
    /// `L + m` blocks of `K'` parity bits each, before puncturing.
    pub parity_upper: Vec<Vec<u8>>,
    pub parity_lower: Vec<Vec<u8>>,
    pub masks: PunctureMasks,
}

impl Codeword {
    /// The all-zero codeword, which every linear instance contains.
    pub fn all_zero(inst: &CodeInstance, masks: PunctureMasks) -> Self {
        let (l, m, k, kp) = (inst.l(), inst.m(), inst.k, inst.k_prime);
        Self {
            systematic: vec![vec![0; k]; l],
            parity_upper: vec![vec![0; kp]; l + m],
            parity_lower: vec![vec![0; kp]; l + m],
            masks,
        }
    }

    pub fn info_bits(&self) -> usize {
        self.systematic.iter().map(Vec::len).sum()
    }

    pub fn transmitted_bits(&self) -> usize {
        let kept = |m: &Vec<Vec<bool>>| m.iter().map(|b| b.iter().filter(|&&x| x).count()).sum::<usize>();
        self.info_bits() + kept(&self.masks.upper) + kept(&self.masks.lower)
    }

    pub fn rate(&self) -> f64 {
        self.info_bits() as f64 / self.transmitted_bits() as f64
    }
}

fn encoder_input(taps: &[Tap], t: usize, l: usize, k: usize, info: &[u8], out: &mut Vec<u8>) {
    out.clear();
    out.extend(taps.iter().map(|tap| {
        let s = t as isize - tap.offset as isize;
        if s >= 1 && s as usize <= l {
            info[(s as usize - 1) * k + tap.info as usize]
        } else {
            0
        }
    }));
}

/// Encodes `K L` information bits. Blocks outside `1..L` are all-zero, every encoder starts in state 0.
pub fn encode_chain(inst: &CodeInstance, trellis: &Trellis, info: &[u8], masks: PunctureMasks) -> Result<Codeword> {
    let (l, m, k) = (inst.l(), inst.m(), inst.k);
    if info.len() != k * l {
        return Err(Error::LengthMismatch { expected: k * l, actual: info.len() });
    }
    let systematic = info.chunks(k).map(<[u8]>::to_vec).collect();
    let mut input = Vec::with_capacity(inst.k_prime);
    let mut parity_upper = Vec::with_capacity(l + m);
    let mut parity_lower = Vec::with_capacity(l + m);
    for t in 1..=l + m {
        encoder_input(inst.upper_taps(), t, l, k, info, &mut input);
        parity_upper.push(trellis.encode(&input, 0).0);
        encoder_input(inst.lower_taps(), t, l, k, info, &mut input);
        parity_lower.push(trellis.encode(&input, 0).0);
    }
    Ok(Codeword { systematic, parity_upper, parity_lower, masks })
}

/// Channel outputs of a whole chain; punctured parity appears as erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationChain {
    pub systematic: Vec<TernarySeq>,
    pub parity_upper: Vec<TernarySeq>,
    pub parity_lower: Vec<TernarySeq>,
}

/// Erasure channel applied to every transmitted bit independently with probability `eps`.
pub fn bec<R: Rng>(cw: &Codeword, eps: f64, rng: &mut R) -> ObservationChain {
    let mut erase = |bits: &[u8], keep: Option<&[bool]>| -> TernarySeq {
        let v: Vec<Ternary> = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let sent = keep.map_or(true, |k| k[i]);
                if sent && !rng.gen_bool(eps) {
                    Ternary::known(b)
                } else {
                    Ternary::Erased
                }
            })
            .collect();
        v.into()
    };
    let systematic = cw.systematic.iter().map(|b| erase(b, None)).collect();
    let parity_upper = cw.parity_upper.iter().zip(&cw.masks.upper).map(|(b, k)| erase(b, Some(k))).collect();
    let parity_lower = cw.parity_lower.iter().zip(&cw.masks.lower).map(|(b, k)| erase(b, Some(k))).collect();
    ObservationChain { systematic, parity_upper, parity_lower }
}
