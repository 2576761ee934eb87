//! Finite-length code instances: repetition layout, interleavers and the coupling split.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::de::EnsembleParams;
use crate::error::{Error, Result};

/// Upper bound on repair swaps per violating bit before giving up.
const REPAIR_ATTEMPTS: usize = 1000;

/// Where one encoder input position takes its bit from: coupling offset `j`
/// (block `t - j` for the decoder at time `t`) and index within that block's info bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tap {
    pub offset: u16,
    pub info: u32,
}

/// One realisation of the finite-length ensemble. Maps are identical for every time instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeInstance {
    pub params: EnsembleParams<f64>,
    /// Information bits per block.
    pub k: usize,
    /// Encoder input length per block, `K + (q-1) n_rep`.
    pub k_prime: usize,
    /// Distinct repeated bits per block, the first `n_rep` info bits.
    pub n_rep: usize,
    /// `n_rep / K'` after rounding.
    pub lambda_realized: f64,
    /// `K' / (m+1)`.
    pub segment: usize,
    /// Reordering of the repeated sequence feeding the lower chain.
    pub pi: Vec<u32>,
    pub pi_upper: Vec<u32>,
    pub pi_lower: Vec<u32>,
    pub seed: u64,
    pub criterion_enabled: bool,
    upper_taps: Vec<Tap>,
    lower_taps: Vec<Tap>,
}

/// Chooses `n_rep` as close as possible to `λK'` with `K + (q-1) n_rep` divisible by `m+1`.
fn round_lengths(k: usize, q: usize, lambda: f64, m: usize) -> Result<(usize, usize)> {
    if q == 1 || lambda == 0.0 {
        if k % (m + 1) != 0 {
            return Err(Error::InvalidParams(format!("K={k} not divisible by m+1={}", m + 1)));
        }
        return Ok((k, 0));
    }
    let target = lambda * k as f64 / (1.0 - (q as f64 - 1.0) * lambda);
    let base = target.round() as i64;
    for d in 0..=(2 * (m as i64 + 1) * q as i64) {
        for cand in [base - d, base + d] {
            if cand < 0 {
                continue;
            }
            let n_rep = cand as usize;
            let kp = k + (q - 1) * n_rep;
            if kp % (m + 1) == 0 && q * n_rep <= kp {
                return Ok((kp, n_rep));
            }
        }
    }
    Err(Error::InvalidParams(format!("no admissible K' for K={k}, q={q}, m={m}")))
}

impl CodeInstance {
    /// Draws uniform interleavers. With `criterion`, the lower interleaver is then repaired by
    /// swaps until no repeated bit has all its placements at one coupling offset.
    pub fn build(params: &EnsembleParams<f64>, k: usize, seed: u64, criterion: bool) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("K must be positive".into()));
        }
        let (q, m) = (params.q, params.m);
        let (k_prime, n_rep) = round_lengths(k, q, params.lambda, m)?;
        let segment = k_prime / (m + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm = |n: usize| {
            let mut v: Vec<u32> = (0..n as u32).collect();
            v.shuffle(&mut rng);
            v
        };
        let pi = perm(k_prime);
        let pi_upper = perm(k_prime);
        let pi_lower = perm(k_prime);
        let mut inst = Self {
            params: params.clone(),
            k,
            k_prime,
            n_rep,
            lambda_realized: n_rep as f64 / k_prime as f64,
            segment,
            pi,
            pi_upper,
            pi_lower,
            seed,
            criterion_enabled: criterion,
            upper_taps: Vec::new(),
            lower_taps: Vec::new(),
        };
        if criterion {
            inst.repair(&mut rng)?;
        }
        inst.rebuild_taps();
        Ok(inst)
    }

    /// Same interleavers with the criterion enforced by swaps, for paired comparisons.
    pub fn with_criterion(&self) -> Result<Self> {
        let mut inst = self.clone();
        inst.criterion_enabled = true;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x00c0_ffee);
        inst.repair(&mut rng)?;
        inst.rebuild_taps();
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn l(&self) -> usize {
        self.params.l
    }

    /// Info index carried by position `p` of the repeated sequence `[u_r, .., u_r, u_o]`.
    pub fn source(&self, p: usize) -> usize {
        let rep = self.params.q * self.n_rep;
        if p < rep {
            p % self.n_rep
        } else {
            self.n_rep + p - rep
        }
    }

    /// Coupling offset of position `p` of the repeated sequence in the upper chain.
    pub fn upper_offset(&self, p: usize) -> usize {
        p / self.segment
    }

    /// Coupling offsets of position `i` of the reordered sequence in the lower chain.
    pub fn lower_offset(&self, i: usize) -> usize {
        i / self.segment
    }

    pub fn upper_taps(&self) -> &[Tap] {
        &self.upper_taps
    }

    pub fn lower_taps(&self) -> &[Tap] {
        &self.lower_taps
    }

    fn rebuild_taps(&mut self) {
        let m = self.m();
        let seg = self.segment;
        // concatenation order at time t is offsets m, m-1, .., 0
        let upper: Vec<Tap> = self
            .pi_upper
            .iter()
            .map(|&c| {
                let c = c as usize;
                let j = m - c / seg;
                let p = j * seg + c % seg;
                Tap { offset: j as u16, info: self.source(p) as u32 }
            })
            .collect();
        let lower: Vec<Tap> = self
            .pi_lower
            .iter()
            .map(|&c| {
                let c = c as usize;
                let j = m - c / seg;
                let i = j * seg + c % seg;
                Tap { offset: j as u16, info: self.source(self.pi[i] as usize) as u32 }
            })
            .collect();
        self.upper_taps = upper;
        self.lower_taps = lower;
    }

    /// Lower-chain positions of every repeated-sequence position.
    fn pi_inverse(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.k_prime];
        for (i, &p) in self.pi.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        inv
    }

    fn violates(&self, r: usize, inv: &[u32]) -> bool {
        let q = self.params.q;
        let first = self.upper_offset(r);
        (0..q).all(|c| {
            let p = c * self.n_rep + r;
            self.upper_offset(p) == first && self.lower_offset(inv[p] as usize) == first
        })
    }

    /// Repeated bits whose `2q` placements all share one coupling offset.
    pub fn violations(&self) -> Vec<usize> {
        if self.params.q < 2 || self.n_rep == 0 {
            return Vec::new();
        }
        let inv = self.pi_inverse();
        (0..self.n_rep).filter(|&r| self.violates(r, &inv)).collect()
    }

    /// Whether every repeated bit is spread over at least two coupling offsets.
    pub fn coupling_criterion_check(&self) -> bool {
        self.violations().is_empty()
    }

    fn repair(&mut self, rng: &mut ChaCha8Rng) -> Result<()> {
        let bad = self.violations();
        if bad.is_empty() {
            return Ok(());
        }
        if self.m() == 0 {
            return Err(Error::CriterionInfeasible("m = 0 leaves a single coupling offset".into()));
        }
        let rep = self.params.q * self.n_rep;
        let mut inv = self.pi_inverse();
        for r in bad {
            let mut fixed = false;
            for _ in 0..REPAIR_ATTEMPTS {
                // move one lower placement of r to a different offset
                let p = r;
                let i = inv[p] as usize;
                let j = rng.gen_range(0..self.k_prime);
                if self.lower_offset(j) == self.lower_offset(i) {
                    continue;
                }
                let other = self.pi[j] as usize;
                self.pi.swap(i, j);
                inv[p] = j as u32;
                inv[other] = i as u32;
                let other_bad = other < rep && self.violates(other % self.n_rep, &inv);
                if !other_bad && !self.violates(r, &inv) {
                    fixed = true;
                    break;
                }
                self.pi.swap(i, j);
                inv[p] = i as u32;
                inv[other] = j as u32;
            }
            if !fixed {
                return Err(Error::CriterionInfeasible(format!("repeated bit {r} could not be spread")));
            }
        }
        Ok(())
    }

    /// Overwrites the lower interleaver; for constructing adversarial instances.
    pub fn set_pi(&mut self, pi: Vec<u32>) -> Result<()> {
        let mut seen = vec![false; self.k_prime];
        if pi.len() != self.k_prime {
            return Err(Error::LengthMismatch { expected: self.k_prime, actual: pi.len() });
        }
        for &p in &pi {
            let p = p as usize;
            if p >= self.k_prime || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParams("pi is not a permutation".into()));
            }
        }
        self.pi = pi;
        self.rebuild_taps();
        Ok(())
    }
}
