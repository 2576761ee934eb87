use super::spec::ConvCodeSpec;
use super::ternary::Ternary;

/// Bitmask over trellis states (bit `s` set iff state `s` is in the set).
pub type StateSet = u64;

/// State-transition structure of a rate-1/2 recursive systematic encoder.
///
/// State `s` packs the register contents `a_{t-1} .. a_{t-M}` with `a_{t-1}` in bit 0.
#[derive(Clone, Debug)]
pub struct Trellis {
    spec: ConvCodeSpec,
    num_states: usize,
    next: Vec<[u8; 2]>,
    parity: Vec<[u8; 2]>,
    tables: Option<SetTables>,
}

/// Set-image lookup tables, built when the state count fits in a byte mask.
#[derive(Clone, Debug)]
struct SetTables {
    /// forward image of a state set under one observation combo
    fwd: Vec<[u8; 256]>,
    /// backward preimage of a state set under one observation combo
    bwd: Vec<[u8; 256]>,
}

/// Index of an (info, parity) observation pair.
#[inline]
pub(crate) fn combo(info: Ternary, parity: Ternary) -> usize {
    info as usize * 3 + parity as usize
}

impl Trellis {
    pub fn new(spec: &ConvCodeSpec) -> Self {
        let m = spec.memory();
        let ns = spec.num_states();
        let ff = spec.feedforward_taps();
        let fb = spec.feedback_taps();
        let mask = ns - 1;
        let mut next = vec![[0u8; 2]; ns];
        let mut parity = vec![[0u8; 2]; ns];
        for s in 0..ns {
            for u in 0..2usize {
                let reg = |i: usize| (s >> (i - 1)) & 1;
                let mut a = u;
                for i in 1..=m {
                    if fb[i] {
                        a ^= reg(i);
                    }
                }
                let mut p = if ff[0] { a } else { 0 };
                for i in 1..=m {
                    if ff[i] {
                        p ^= reg(i);
                    }
                }
                next[s][u] = (((s << 1) | a) & mask) as u8;
                parity[s][u] = p as u8;
            }
        }
        let mut t = Self { spec: spec.clone(), num_states: ns, next, parity, tables: None };
        if ns <= 8 {
            t.tables = Some(t.build_tables());
        }
        t
    }

    pub fn spec(&self) -> &ConvCodeSpec {
        &self.spec
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn full_set(&self) -> StateSet {
        if self.num_states == 64 {
            u64::MAX
        } else {
            (1u64 << self.num_states) - 1
        }
    }

    #[inline]
    pub fn next_state(&self, state: usize, input: u8) -> usize {
        self.next[state][input as usize] as usize
    }

    #[inline]
    pub fn parity_bit(&self, state: usize, input: u8) -> u8 {
        self.parity[state][input as usize]
    }

    /// Encodes `info` from `start_state`; returns the parity sequence and end state.
    pub fn encode(&self, info: &[u8], start_state: usize) -> (Vec<u8>, usize) {
        let mut s = start_state;
        let mut out = Vec::with_capacity(info.len());
        for &u in info {
            let u = u & 1;
            out.push(self.parity[s][u as usize]);
            s = self.next[s][u as usize] as usize;
        }
        (out, s)
    }

    /// Encodes into a caller-provided buffer; returns the end state.
    pub fn encode_into(&self, info: &[u8], start_state: usize, parity: &mut [u8]) -> usize {
        let mut s = start_state;
        for (p, &u) in parity.iter_mut().zip(info) {
            let u = (u & 1) as usize;
            *p = self.parity[s][u];
            s = self.next[s][u] as usize;
        }
        s
    }

    #[inline]
    fn branch_ok(&self, s: usize, u: u8, info: Ternary, parity: Ternary) -> bool {
        info.admits(u) && parity.admits(self.parity[s][u as usize])
    }

    fn forward_slow(&self, set: StateSet, info: Ternary, parity: Ternary) -> StateSet {
        let mut out = 0;
        let mut rest = set;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for u in 0..2u8 {
                if self.branch_ok(s, u, info, parity) {
                    out |= 1 << self.next[s][u as usize];
                }
            }
        }
        out
    }

    fn backward_slow(&self, set: StateSet, info: Ternary, parity: Ternary) -> StateSet {
        let mut out = 0;
        for s in 0..self.num_states {
            for u in 0..2u8 {
                if self.branch_ok(s, u, info, parity) && set >> self.next[s][u as usize] & 1 == 1 {
                    out |= 1 << s;
                }
            }
        }
        out
    }

    fn build_tables(&self) -> SetTables {
        let n = 1usize << self.num_states;
        let mut fwd = vec![[0u8; 256]; 9];
        let mut bwd = vec![[0u8; 256]; 9];
        for info in Ternary::ALL {
            for parity in Ternary::ALL {
                let c = combo(info, parity);
                for set in 0..n {
                    fwd[c][set] = self.forward_slow(set as u64, info, parity) as u8;
                    bwd[c][set] = self.backward_slow(set as u64, info, parity) as u8;
                }
            }
        }
        SetTables { fwd, bwd }
    }

    /// States reachable in one section from `set` under the given observations.
    #[inline]
    pub fn forward(&self, set: StateSet, info: Ternary, parity: Ternary) -> StateSet {
        match &self.tables {
            Some(t) => t.fwd[combo(info, parity)][set as usize] as u64,
            None => self.forward_slow(set, info, parity),
        }
    }

    /// States with a branch into `set` consistent with the given observations.
    #[inline]
    pub fn backward(&self, set: StateSet, info: Ternary, parity: Ternary) -> StateSet {
        match &self.tables {
            Some(t) => t.bwd[combo(info, parity)][set as usize] as u64,
            None => self.backward_slow(set, info, parity),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift_register(spec: &ConvCodeSpec, info: &[u8]) -> Vec<u8> {
        // a_t = u_t + sum_{i>=1} fb_i a_{t-i};  p_t = sum_i ff_i a_{t-i}
        let m = spec.memory();
        let (ff, fb) = (spec.feedforward_taps(), spec.feedback_taps());
        let mut hist = vec![0u8; m + 1];
        let mut out = Vec::new();
        for &u in info {
            let mut a = u;
            for i in 1..=m {
                a ^= fb[i] as u8 & hist[i];
            }
            hist[0] = a;
            let mut p = 0;
            for i in 0..=m {
                p ^= ff[i] as u8 & hist[i];
            }
            out.push(p);
            hist.rotate_right(1);
            hist[0] = 0;
        }
        out
    }

    #[test]
    fn state_counts() {
        assert_eq!(Trellis::new(&ConvCodeSpec::two_state()).num_states(), 2);
        assert_eq!(Trellis::new(&ConvCodeSpec::four_state()).num_states(), 4);
        assert_eq!(Trellis::new(&ConvCodeSpec::eight_state()).num_states(), 8);
    }

    #[test]
    fn zero_input_gives_zero_parity() {
        for spec in [ConvCodeSpec::two_state(), ConvCodeSpec::four_state(), ConvCodeSpec::eight_state()] {
            let t = Trellis::new(&spec);
            let (p, end) = t.encode(&[0; 50], 0);
            assert!(p.iter().all(|&b| b == 0));
            assert_eq!(end, 0);
        }
    }

    #[test]
    fn impulse_response_is_infinite() {
        let t = Trellis::new(&ConvCodeSpec::four_state());
        let mut info = vec![0u8; 40];
        info[0] = 1;
        let (p, end) = t.encode(&info, 0);
        assert_ne!(end, 0);
        assert!(p[30..].iter().any(|&b| b == 1));
        // 5/7 impulse response is periodic with period 3
        assert_eq!(&p[..7], &[1, 1, 1, 0, 1, 1, 0]);
    }

    #[test]
    fn matches_shift_register_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for spec in [ConvCodeSpec::two_state(), ConvCodeSpec::four_state(), ConvCodeSpec::eight_state()] {
            let t = Trellis::new(&spec);
            for _ in 0..50 {
                let info: Vec<u8> = (0..20).map(|_| rng.gen_range(0..2)).collect();
                assert_eq!(t.encode(&info, 0).0, shift_register(&spec, &info), "{spec}");
            }
        }
    }

    #[test]
    fn deterministic_two_way_branching_and_reachability() {
        for spec in [ConvCodeSpec::two_state(), ConvCodeSpec::four_state(), ConvCodeSpec::eight_state()] {
            let t = Trellis::new(&spec);
            for s in 0..t.num_states() {
                assert_ne!(t.next_state(s, 0), t.next_state(s, 1));
            }
            let mut reach: StateSet = 1;
            for _ in 0..spec.memory() {
                reach = t.forward(reach, Ternary::Erased, Ternary::Erased);
            }
            assert_eq!(reach, t.full_set());
        }
    }

    #[test]
    fn tables_agree_with_direct_scan() {
        let t = Trellis::new(&ConvCodeSpec::eight_state());
        for set in 0..256u64 {
            for i in Ternary::ALL {
                for p in Ternary::ALL {
                    assert_eq!(t.forward(set, i, p), t.forward_slow(set, i, p));
                    assert_eq!(t.backward(set, i, p), t.backward_slow(set, i, p));
                }
            }
        }
    }
}
