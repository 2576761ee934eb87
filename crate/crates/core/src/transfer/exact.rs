//! Exact transfer functions of an infinitely long trellis on the erasure channel.
//!
//! Under the all-zero codeword the forward set `F_t` (states consistent with
//! the past) and the backward set `B_{t+1}` (states consistent with the
//! future) are Markov chains over state subsets driven by i.i.d. observation
//! patterns. In steady state `F_t` and `B_{t+1}` are independent, so the
//! extrinsic erasure probability of section `t` is an average over the product
//! of the two stationary laws.

use std::collections::HashMap;

use crate::conv::{ConvCodeSpec, StateSet, Ternary, Trellis};
use crate::numerics::stationary;
use crate::scalar::Real;

/// Observation pattern `(info erased, parity erased)` packed as `2*ie + pe`.
const PATTERNS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn obs(erased: bool) -> Ternary {
    if erased {
        Ternary::Erased
    } else {
        Ternary::Zero
    }
}

#[derive(Clone, Debug)]
struct SetChain {
    sets: Vec<StateSet>,
    next: Vec<[usize; 4]>,
    start: usize,
}

impl SetChain {
    fn explore(start: StateSet, step: impl Fn(StateSet, Ternary, Ternary) -> StateSet) -> Self {
        let mut index = HashMap::new();
        let mut sets = vec![start];
        index.insert(start, 0usize);
        let mut next = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = [0usize; 4];
            for (k, &(ie, pe)) in PATTERNS.iter().enumerate() {
                let s = step(sets[i], obs(ie), obs(pe));
                let id = *index.entry(s).or_insert_with(|| {
                    sets.push(s);
                    sets.len() - 1
                });
                row[k] = id;
            }
            next.push(row);
            i += 1;
        }
        Self { sets, next, start: 0 }
    }

    fn law<T: Real>(&self, x: T, y: T) -> Vec<T> {
        let probs = pattern_probs(x, y);
        // restrict to the part reachable from the start with positive probability
        let n = self.sets.len();
        let mut local = vec![usize::MAX; n];
        let mut order = vec![self.start];
        local[self.start] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for k in 0..4 {
                if probs[k] > T::zero() {
                    let t = self.next[s][k];
                    if local[t] == usize::MAX {
                        local[t] = order.len();
                        order.push(t);
                    }
                }
            }
            i += 1;
        }
        let m = order.len();
        let mut p = vec![vec![T::zero(); m]; m];
        for (li, &s) in order.iter().enumerate() {
            for k in 0..4 {
                if probs[k] > T::zero() {
                    let lj = local[self.next[s][k]];
                    p[li][lj] = p[li][lj] + probs[k];
                }
            }
        }
        let pi_local = stationary(&p, 0);
        let mut pi = vec![T::zero(); n];
        for (li, &s) in order.iter().enumerate() {
            pi[s] = pi_local[li];
        }
        pi
    }
}

fn pattern_probs<T: Real>(x: T, y: T) -> [T; 4] {
    let one = T::one();
    let mut out = [T::zero(); 4];
    for (k, &(ie, pe)) in PATTERNS.iter().enumerate() {
        let a = if ie { x } else { one - x };
        let b = if pe { y } else { one - y };
        out[k] = a * b;
    }
    out
}

/// Exact `(f_s, f_p)` evaluator for one component code.
#[derive(Clone, Debug)]
pub struct ExactTransfer {
    spec: ConvCodeSpec,
    fwd: SetChain,
    bwd: SetChain,
    /// `[f * nb + b][parity erased]` -> info extrinsic stays erased
    info_erased: Vec<[bool; 2]>,
    /// `[f * nb + b][info erased]` -> parity extrinsic stays erased
    parity_erased: Vec<[bool; 2]>,
}

impl ExactTransfer {
    pub fn new(spec: &ConvCodeSpec) -> Self {
        let trellis = Trellis::new(spec);
        let fwd = SetChain::explore(1, |s, i, p| trellis.forward(s, i, p));
        let bwd = SetChain::explore(trellis.full_set(), |s, i, p| trellis.backward(s, i, p));
        let nb = bwd.sets.len();
        let mut info_erased = vec![[false; 2]; fwd.sets.len() * nb];
        let mut parity_erased = vec![[false; 2]; fwd.sets.len() * nb];
        for (fi, &f) in fwd.sets.iter().enumerate() {
            for (bi, &b) in bwd.sets.iter().enumerate() {
                for e in [false, true] {
                    // the all-zero branch is always consistent; erased iff a 1 is too
                    info_erased[fi * nb + bi][e as usize] = trellis.backward(b, Ternary::One, obs(e)) & f != 0;
                    parity_erased[fi * nb + bi][e as usize] = trellis.backward(b, obs(e), Ternary::One) & f != 0;
                }
            }
        }
        Self { spec: spec.clone(), fwd, bwd, info_erased, parity_erased }
    }

    pub fn spec(&self) -> &ConvCodeSpec {
        &self.spec
    }

    /// Number of reachable forward and backward state sets.
    pub fn chain_sizes(&self) -> (usize, usize) {
        (self.fwd.sets.len(), self.bwd.sets.len())
    }

    /// `(f_s(x, y), f_p(x, y))`.
    pub fn eval<T: Real>(&self, x: T, y: T) -> (T, T) {
        let x = x.clamp01();
        let y = y.clamp01();
        if x <= T::zero() {
            return (T::zero(), T::zero());
        }
        let pf = self.fwd.law(x, y);
        let pb = self.bwd.law(x, y);
        let nb = self.bwd.sets.len();
        let one = T::one();
        let (mut fs, mut fp) = (T::zero(), T::zero());
        for (fi, &wf) in pf.iter().enumerate() {
            if wf == T::zero() {
                continue;
            }
            for (bi, &wb) in pb.iter().enumerate() {
                if wb == T::zero() {
                    continue;
                }
                let w = wf * wb;
                let ie = &self.info_erased[fi * nb + bi];
                let pe = &self.parity_erased[fi * nb + bi];
                let s = (one - y) * T::lit(ie[0] as u8 as f64) + y * T::lit(ie[1] as u8 as f64);
                let p = (one - x) * T::lit(pe[0] as u8 as f64) + x * T::lit(pe[1] as u8 as f64);
                fs = fs + w * s;
                fp = fp + w * p;
            }
        }
        (fs.clamp01(), fp.clamp01())
    }

    pub fn fs<T: Real>(&self, x: T, y: T) -> T {
        self.eval(x, y).0
    }

    pub fn fp<T: Real>(&self, x: T, y: T) -> T {
        self.eval(x, y).1
    }
}
