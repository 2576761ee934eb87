//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the report is printed even when everything passes.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gscpcc::codec::{
    ber_experiment, bec, decode_chain, encode_chain, CodeInstance, DecoderConfig, ExperimentConfig, ObservationChain,
    PunctureMasks, PunctureMode,
};
use gscpcc::conv::{bcjr_erase, ConvCodeSpec, Ternary, TernarySeq, Trellis};
use gscpcc::de::{bp_threshold, DeConfig, DeMode, EnsembleParams};
use gscpcc::numerics::golden_min;
use gscpcc::potential::{
    argmin_x, capacity_bound, eps2_closed_form, map_threshold_area, potential_threshold, two_state_potential_threshold,
    AreaConfig, PotentialConfig,
};
use gscpcc::studio::{optimize_lambda, LambdaGrid, DEFAULT_COUPLING_LENGTH};
use gscpcc::transfer::{
    estimate_transfer, fs_closed_2state, tabulate, uniform_grid, Backend, McConfig, TableSource, TransferModel,
};
use gscpcc::{Model64, Params64};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn codes() -> [ConvCodeSpec; 3] {
    [ConvCodeSpec::two_state(), ConvCodeSpec::four_state(), ConvCodeSpec::eight_state()]
}

fn params(code: &ConvCodeSpec, rate: f64, q: usize, lambda: f64, m: usize) -> Params64 {
    let l = if m == 0 { 1 } else { DEFAULT_COUPLING_LENGTH };
    EnsembleParams::new(code.clone(), rate, q, lambda, m, l).unwrap()
}

fn threshold(p: &Params64, model: &Model64, cfg: &DeConfig) -> f64 {
    let mode = if p.m == 0 { DeMode::Uncoupled } else { DeMode::Coupled };
    bp_threshold(p, model, mode, cfg).threshold
}

fn c1_closed_form_oracle() -> Outcome {
    // Batch-means stderr of one 1e6-section trellis reaches ~1.3e-3 (small x, y = 0.75), so eight are pooled.
    let mc = McConfig { trellis_len: 1_000_000, trials: 8, seed: 101, ..Default::default() };
    let code = ConvCodeSpec::two_state();
    let (mut worst_z, mut worst_se, mut fails) = (0.0f64, 0.0f64, 0);
    for (yi, &y) in [0.25, 0.5, 0.75].iter().enumerate() {
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let e = estimate_transfer(&code, x, y, &McConfig { seed: mc.seed + (yi * 100 + i) as u64, ..mc });
            let exact = fs_closed_2state(x, y);
            worst_se = worst_se.max(e.stderr_s);
            let diff = (e.fs - exact).abs();
            let z = if e.stderr_s > 0.0 { diff / e.stderr_s } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            worst_z = worst_z.max(z);
            if z > 3.0 {
                fails += 1;
            }
        }
    }
    outcome(
        fails == 0 && worst_se <= 5e-4,
        format!("63 points, max |diff|/stderr {worst_z:.2}, max stderr {worst_se:.2e}, {fails} outside 3 stderr"),
    )
}

fn c2_integral_identity() -> Outcome {
    let grid = uniform_grid::<f64>(101);
    let mut worst = 0.0f64;
    let mut ok = true;
    for (ci, code) in codes().iter().enumerate() {
        for (yi, &y) in [0.25, 0.5, 0.75].iter().enumerate() {
            let mc = McConfig { trellis_len: 1_000_000, trials: 1, seed: 7_000 + (ci * 10 + yi) as u64, ..Default::default() };
            let t = tabulate(code, y, &grid, TableSource::MonteCarlo(mc)).unwrap();
            let (dev, se) = (t.integral_identity(), t.integral_stderr());
            worst = worst.max(dev / se);
            ok &= dev < 3.0 * se;
        }
    }
    outcome(ok, format!("3 codes x 3 y, 101-point grid, max |int - y| / aggregate stderr {worst:.2}"))
}

const TABLE3: [(f64, [f64; 4]); 3] = [
    (0.5, [0.2808, 0.4520, 0.4809, 0.4987]),
    (1.0 / 3.0, [0.5000, 0.6352, 0.6548, 0.6659]),
    (0.75, [0.0895, 0.2027, 0.2298, 0.2486]),
];
const TABLE3_Q: [usize; 4] = [1, 2, 4, 50];

fn c3_table3() -> Outcome {
    let code = ConvCodeSpec::two_state();
    let model = TransferModel::with_default_backend(code.clone());
    let cfg = PotentialConfig::default();
    let (mut worst, mut worst_closed) = (0.0f64, 0.0f64);
    for (rate, row) in TABLE3 {
        for (&q, &want) in TABLE3_Q.iter().zip(&row) {
            let p = EnsembleParams::regular(code.clone(), rate, q, 0, 1).unwrap();
            worst = worst.max((potential_threshold(&p, &model, &cfg) - want).abs());
            if q >= 2 {
                let closed: f64 = two_state_potential_threshold(rate, q).unwrap();
                worst_closed = worst_closed.max((closed - want).abs());
            }
        }
    }
    outcome(
        worst <= 5e-4 && worst_closed <= 5e-4,
        format!("12 entries, max deviation {worst:.5} (numeric), {worst_closed:.5} (closed form, q >= 2)"),
    )
}

fn c4_capacity_bound() -> Outcome {
    // 2-state rows of the potential-threshold table, q in {2,..,6,50}.
    let rows: [(f64, [f64; 6]); 6] = [
        (0.9, [0.0751, 0.0846, 0.0888, 0.0913, 0.0928, 0.0992]),
        (0.8, [0.1582, 0.1747, 0.1819, 0.1859, 0.1884, 0.1987]),
        (0.75, [0.2027, 0.2217, 0.2298, 0.2343, 0.2372, 0.2486]),
        (2.0 / 3.0, [0.2811, 0.3027, 0.3116, 0.3165, 0.3196, 0.3318]),
        (0.5, [0.4520, 0.4727, 0.4809, 0.4854, 0.4881, 0.4987]),
        (1.0 / 3.0, [0.6352, 0.6493, 0.6548, 0.6576, 0.6594, 0.6659]),
    ];
    let qs = [2usize, 3, 4, 5, 6, 50];
    let code = ConvCodeSpec::two_state();
    let model = TransferModel::with_default_backend(code.clone());
    let cfg = PotentialConfig::default();
    let mut ok = true;
    let mut min_margin = f64::INFINITY;
    let mut bumpy = Vec::new();
    for (rate, _) in rows {
        let mut to_capacity = Vec::new();
        let mut to_bound = Vec::new();
        for &q in &qs {
            let p = EnsembleParams::regular(code.clone(), rate, q, 0, 1).unwrap();
            let ec = potential_threshold(&p, &model, &cfg);
            let b: f64 = capacity_bound(rate, q).unwrap();
            min_margin = min_margin.min(ec - b);
            ok &= ec >= b;
            if [2, 4, 6, 50].contains(&q) {
                to_capacity.push(1.0 - rate - ec);
                to_bound.push(ec - b);
            }
        }
        ok &= to_capacity.windows(2).all(|w| w[1] < w[0]);
        // The distance to the bound itself need not shrink; just report where it doesn't.
        if !to_bound.windows(2).all(|w| w[1] < w[0]) {
            bumpy.push(format!("{rate:.3}"));
        }
    }
    outcome(
        ok,
        format!(
            "36 entries above the bound (min margin {min_margin:.5}); gap to capacity decreasing over q = 2,4,6,50; \
             eps_c - bound non-monotone at R = [{}]",
            bumpy.join(", ")
        ),
    )
}

fn c5_argmin() -> Outcome {
    let mut worst = 0.0f64;
    for q in [2usize, 3, 5, 10] {
        for rate in [1.0 / 3.0, 0.5, 0.75] {
            let rho = (1.0 - rate) / (2.0 * q as f64 * rate);
            let (x, _) = golden_min(|x| eps2_closed_form(x, q, rho), 1e-6, 1.0, 1e-12);
            worst = worst.max((x - argmin_x::<f64>(q)).abs());
        }
    }
    outcome(worst <= 1e-6, format!("q in {{2,3,5,10}}, 3 rates, max |x_num - x*| {worst:.2e}"))
}

fn c6_table2_mc() -> Outcome {
    let code = ConvCodeSpec::four_state();
    let mc = McConfig { trellis_len: 400_000, seed: 0x7ab1e2, ..Default::default() };
    let model = TransferModel::new(code.clone(), Backend::MonteCarlo { grid_points: 101, mc }).unwrap();
    let cfg = DeConfig::default();
    let cases = [
        ("uncoupled q=2", params(&code, 0.5, 2, 0.2, 0), 0.4698),
        ("m=1 q=2", params(&code, 0.5, 2, 0.44, 1), 0.4907),
        ("m=3 q=2", params(&code, 0.5, 2, 0.5, 3), 0.4938),
        ("R=3/4 q=1 m=1", params(&code, 0.75, 1, 0.0, 1), 0.1876),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, p, want) in cases {
        let t = threshold(&p, &model, &cfg);
        ok &= (t - want).abs() <= 3e-3;
        parts.push(format!("{name} {t:.4} ({want})"));
    }
    let p = params(&code, 0.5, 2, 0.5, 0);
    let map = map_threshold_area(&p, &model, &AreaConfig { step: 1e-2, refine_step: 1e-3, de: cfg }).unwrap().eps_map;
    ok &= (map - 0.4938).abs() <= 3e-3;
    parts.push(format!("MAP q=2 {map:.4} (0.4938)"));
    outcome(ok, parts.join(", "))
}

fn c7_lambda_sweep() -> Outcome {
    let code = ConvCodeSpec::four_state();
    let model = TransferModel::with_default_backend(code.clone());
    let cfg = DeConfig { bisect_tol: 1e-5, ..Default::default() };
    let grid = LambdaGrid::default();
    let sweep = |m: usize| optimize_lambda(&params(&code, 0.5, 2, 0.5, m), &model, &grid, &cfg).unwrap();
    let argmax = |s: &gscpcc::studio::LambdaSweep| {
        let best = s.points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let at: Vec<f64> = s.points.iter().filter(|p| p.1 == best).map(|p| p.0).collect();
        (at[0], at[at.len() - 1])
    };
    let s3 = sweep(3);
    let s1 = sweep(1);
    let s0 = sweep(0);
    let (a3, b3) = argmax(&s3);
    let (a1, b1) = argmax(&s1);
    let (r1, r0) = (s1.lambda_range(), s0.lambda_range());
    let r3 = s3.lambda_range();
    // m=3: optimum at the edge 1/q; m=1: interior optimum near 0.44; m=0: a tie range inside [0.184, 0.213].
    let ok3 = a3 == 0.5 && b3 == 0.5 && r3.1 == 0.5;
    let ok1 = (s1.lambda_center() - 0.44).abs() <= 0.01 && a1 <= 0.44 && 0.44 <= b1;
    let ok0 = r0.0 >= 0.184 - 0.005 && r0.1 <= 0.213 + 0.005 && r0.1 > r0.0;
    outcome(
        ok3 && ok1 && ok0,
        format!(
            "m=3 argmax {b3:.3} tie [{:.3},{:.3}]; m=1 tie [{:.3},{:.3}] centre {:.3} argmax [{a1:.3},{b1:.3}]; m=0 tie [{:.3},{:.3}]",
            r3.0,
            r3.1,
            r1.0,
            r1.1,
            s1.lambda_center(),
            r0.0,
            r0.1
        ),
    )
}

fn c8_saturation() -> Outcome {
    let code = ConvCodeSpec::four_state();
    let model = TransferModel::with_default_backend(code.clone());
    let cfg = DeConfig { bisect_tol: 1e-5, ..Default::default() };
    let ts: Vec<f64> = [1usize, 3, 5].iter().map(|&m| threshold(&params(&code, 0.5, 2, 0.5, m), &model, &cfg)).collect();
    let ec = potential_threshold(&params(&code, 0.5, 2, 0.5, 0), &model, &PotentialConfig::default());
    let ok = ts.windows(2).all(|w| w[1] >= w[0]) && (ts[2] - ec).abs() <= 3e-3;
    outcome(ok, format!("m=1,3,5: {:.4} {:.4} {:.4}; eps_c {ec:.4}", ts[0], ts[1], ts[2]))
}

/// SC-PCC written from its definition: block `b` is split into `m+1` segments, segment `j`
/// is encoded at time `b+j`; each encoder permutes the concatenation of segments `m..0`.
struct ScPcc<'a> {
    inst: &'a CodeInstance,
    trellis: Trellis,
}

impl ScPcc<'_> {
    /// `(block, bit)` feeding position `idx` of the upper or lower encoder at time `t`, if any.
    fn source(&self, t: usize, idx: usize, lower: bool) -> Option<(usize, usize)> {
        let (m, seg, l) = (self.inst.m(), self.inst.segment, self.inst.l());
        let c = if lower { self.inst.pi_lower[idx] } else { self.inst.pi_upper[idx] } as usize;
        let j = m - c / seg;
        let pos = j * seg + c % seg;
        let bit = if lower { self.inst.pi[pos] as usize } else { pos };
        let b = t as isize - j as isize;
        (b >= 1 && b as usize <= l).then(|| (b as usize - 1, bit))
    }

    fn encode(&self, info: &[Vec<u8>]) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
        let (m, l, kp) = (self.inst.m(), self.inst.l(), self.inst.k_prime);
        let mut up = Vec::new();
        let mut lo = Vec::new();
        for t in 1..=l + m {
            for (lower, out) in [(false, &mut up), (true, &mut lo)] {
                let input: Vec<u8> =
                    (0..kp).map(|i| self.source(t, i, lower).map_or(0, |(b, k)| info[b][k])).collect();
                out.push(self.trellis.encode(&input, 0).0);
            }
        }
        (up, lo)
    }

    /// Flooding schedule: every decoder of one side sees the same snapshot; repeat to a fixed point.
    fn decode(&self, obs: &ObservationChain) -> Vec<Vec<Ternary>> {
        let (m, l, kp) = (self.inst.m(), self.inst.l(), self.inst.k_prime);
        let mut known: Vec<Vec<Ternary>> = obs.systematic.iter().map(|s| s.as_slice().to_vec()).collect();
        loop {
            let mut changed = false;
            for lower in [false, true] {
                let snapshot = known.clone();
                for t in 1..=l + m {
                    let srcs: Vec<Option<(usize, usize)>> = (0..kp).map(|i| self.source(t, i, lower)).collect();
                    let input: TernarySeq =
                        srcs.iter().map(|s| s.map_or(Ternary::Zero, |(b, k)| snapshot[b][k])).collect::<Vec<_>>().into();
                    let parity = if lower { &obs.parity_lower[t - 1] } else { &obs.parity_upper[t - 1] };
                    let (out, _) = bcjr_erase(&self.trellis, &input, parity).unwrap();
                    for (i, s) in srcs.iter().enumerate() {
                        if let (Some((b, k)), false) = (s, out.as_slice()[i].is_erased()) {
                            if known[*b][*k].is_erased() {
                                known[*b][*k] = out.as_slice()[i];
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return known;
            }
        }
    }
}

fn c9_reduction() -> Outcome {
    let code = ConvCodeSpec::four_state();
    let model = TransferModel::with_default_backend(code.clone());
    let cfg = DeConfig::default();
    let rows = [(0.75, 0.1876), (0.5, 0.4689), (1.0 / 3.0, 0.6553)];
    let mut de_ok = true;
    let mut worst = 0.0f64;
    for (rate, want) in rows {
        for m in [1usize, 3, 5] {
            for (q, lambda) in [(1usize, 0.0), (2, 0.0)] {
                let t = threshold(&params(&code, rate, q, lambda, m), &model, &cfg);
                worst = worst.max((t - want).abs());
                de_ok &= (t - want).abs() <= 3e-3;
            }
        }
    }

    let p = EnsembleParams::<f64>::new(code.clone(), 0.5, 1, 0.0, 1, 10).unwrap();
    let inst = CodeInstance::build(&p, 300, 99, false).unwrap();
    let reference = ScPcc { inst: &inst, trellis: Trellis::new(&code) };
    let big = DecoderConfig { max_intra: 10_000, max_inter: 10_000, window: None };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut mismatches, mut enc_mismatch, mut partial) = (0, 0, 0);
    for n in 0..100 {
        let eps = 0.40 + 0.15 * (n as f64 / 99.0);
        let info: Vec<u8> = (0..inst.k * inst.l()).map(|_| rng.gen_range(0..2)).collect();
        let masks = PunctureMasks::draw(&inst, PunctureMode::Random, &mut rng);
        let cw = encode_chain(&inst, &reference.trellis, &info, masks).unwrap();
        let blocks: Vec<Vec<u8>> = info.chunks(inst.k).map(<[u8]>::to_vec).collect();
        let (up, lo) = reference.encode(&blocks);
        enc_mismatch += (up != cw.parity_upper || lo != cw.parity_lower) as usize;
        let obs = bec(&cw, eps, &mut rng);
        let ours = decode_chain(&inst, &reference.trellis, &obs, &big).unwrap();
        let theirs: Vec<Ternary> = reference.decode(&obs).concat();
        mismatches += (ours.info != theirs) as usize;
        partial += (ours.erased > 0 && ours.erased < info.len()) as usize;
    }
    outcome(
        de_ok && mismatches == 0 && enc_mismatch == 0,
        format!(
            "DE q=1 and q=2,lambda=0 at m=1,3,5, max deviation {worst:.4}; codec vs reference: {mismatches}/100 decode and {enc_mismatch}/100 encode mismatches ({partial} patterns partially decoded)"
        ),
    )
}

/// Bitwise-MAP of information and parity bits by enumeration, using a shift-register
/// encoder built from the generator taps (start state 0, free end).
fn brute_force_map(code: &ConvCodeSpec, info_obs: &[Ternary], par_obs: &[Ternary]) -> (Vec<Ternary>, Vec<Ternary>) {
    let n = info_obs.len();
    let ff = code.feedforward_taps();
    let fb = code.feedback_taps();
    let mem = fb.len() - 1;
    let mut seen: Vec<[bool; 2]> = vec![[false; 2]; 2 * n];
    let mut parity = vec![0u8; n];
    'word: for word in 0u32..(1 << n) {
        let mut reg = vec![0u8; mem];
        for k in 0..n {
            let u = ((word >> k) & 1) as u8;
            if !info_obs[k].admits(u) {
                continue 'word;
            }
            let mut w = u;
            for i in 1..=mem {
                if fb[i] {
                    w ^= reg[i - 1];
                }
            }
            let mut p = if ff[0] { w } else { 0 };
            for i in 1..=mem {
                if ff[i] {
                    p ^= reg[i - 1];
                }
            }
            if !par_obs[k].admits(p) {
                continue 'word;
            }
            parity[k] = p;
            reg.rotate_right(1);
            reg[0] = w;
        }
        for k in 0..n {
            seen[k][((word >> k) & 1) as usize] = true;
            seen[n + k][parity[k] as usize] = true;
        }
    }
    let decide = |s: &[bool; 2]| match s {
        [true, false] => Ternary::Zero,
        [false, true] => Ternary::One,
        [true, true] => Ternary::Erased,
        [false, false] => panic!("observations come from a codeword"),
    };
    let all: Vec<Ternary> = seen.iter().map(decide).collect();
    (all[..n].to_vec(), all[n..].to_vec())
}

/// Own observation where present, else the extrinsic decision.
fn app(obs: &[Ternary], extrinsic: &[Ternary]) -> Vec<Ternary> {
    obs.iter().zip(extrinsic).map(|(&o, &e)| if o.is_erased() { e } else { o }).collect()
}

fn c10_bcjr_oracle() -> Outcome {
    let mut mismatches = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for code in codes() {
        let tr = Trellis::new(&code);
        for _ in 0..1000 {
            let n = 12;
            let info: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let (par, _) = tr.encode(&info, 0);
            let e = rng.gen_range(0.1..0.9);
            let ei: Vec<bool> = (0..n).map(|_| rng.gen_bool(e)).collect();
            let ep: Vec<bool> = (0..n).map(|_| rng.gen_bool(e)).collect();
            let io = TernarySeq::observe(&info, &ei);
            let po = TernarySeq::observe(&par, &ep);
            let (oi, op) = bcjr_erase(&tr, &io, &po).unwrap();
            let (wi, wp) = brute_force_map(&code, io.as_slice(), po.as_slice());
            let ours = (app(io.as_slice(), oi.as_slice()), app(po.as_slice(), op.as_slice()));
            mismatches += (ours != (wi, wp)) as usize;
            // Extrinsic output at one observed info position ignores that observation.
            if let Some(k) = (0..n).find(|&k| !ei[k]) {
                let mut hidden = io.as_slice().to_vec();
                hidden[k] = Ternary::Erased;
                let (hi, _) = brute_force_map(&code, &hidden, po.as_slice());
                mismatches += (oi.as_slice()[k] != hi[k]) as usize;
            }
        }
    }
    outcome(mismatches == 0, format!("3 codes x 1000 patterns, length 12, info and parity: {mismatches} mismatches"))
}

fn gsc_instance(seed: u64, criterion: bool) -> CodeInstance {
    let p = EnsembleParams::<f64>::new(ConvCodeSpec::four_state(), 0.5, 2, 0.44, 1, 20).unwrap();
    CodeInstance::build(&p, 1000, seed, criterion).unwrap()
}

fn c11_waterfall() -> Outcome {
    let code = ConvCodeSpec::four_state();
    let model = TransferModel::with_default_backend(code.clone());
    let star = threshold(&params(&code, 0.5, 2, 0.44, 1), &model, &DeConfig::default());
    let inst = gsc_instance(11, false);
    let cfg = ExperimentConfig {
        eps_list: vec![star - 0.03, star + 0.03],
        // Below threshold errors come from rare failed frames, so stopping at the
        // first 300 errors is dominated by whichever frame happens first.
        min_errors: u64::MAX,
        max_bits: 10_000_000,
        seed: 1111,
        ..Default::default()
    };
    let pts = ber_experiment(&inst, &cfg).unwrap();
    let ok = pts[0].ber < 1e-3 && pts[1].ber > 0.1;
    outcome(
        ok,
        format!(
            "eps*={star:.4}: BER {:.2e} at {:.4} ({} bits), {:.2e} at {:.4} ({} bits)",
            pts[0].ber, pts[0].eps, pts[0].bits, pts[1].ber, pts[1].eps, pts[1].bits
        ),
    )
}

fn c12_criterion_benefit() -> Outcome {
    let eps = vec![0.44, 0.45, 0.46, 0.47, 0.48];
    // Fixed frame count so both instances see exactly the same channel realisations.
    let cfg = ExperimentConfig { eps_list: eps.clone(), min_errors: u64::MAX, max_bits: 2_000_000, seed: 1212, ..Default::default() };
    let seeds = 1u64..=8;
    let n = seeds.clone().count() as f64;
    // per point: paired differences designed - random, one per instance
    let mut diffs = vec![Vec::new(); eps.len()];
    let mut rand_err = vec![0u64; eps.len()];
    let mut crit_err = vec![0u64; eps.len()];
    let mut violations = 0;
    for seed in seeds {
        let random = gsc_instance(seed, false);
        let designed = random.with_criterion().unwrap();
        violations += random.violations().len();
        assert!(designed.coupling_criterion_check());
        for (i, (a, b)) in ber_experiment(&random, &cfg).unwrap().iter().zip(ber_experiment(&designed, &cfg).unwrap()).enumerate() {
            rand_err[i] += a.bit_errors;
            crit_err[i] += b.bit_errors;
            diffs[i].push(b.bit_errors as f64 - a.bit_errors as f64);
        }
    }
    // Non-inferiority: the designed total may exceed the random one only within
    // two standard errors of the summed paired differences.
    let mut ok = true;
    let mut strict = true;
    let mut pairs = Vec::new();
    for (i, e) in eps.iter().enumerate() {
        let d = &diffs[i];
        let mean = d.iter().sum::<f64>() / n;
        let sd = (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let margin = 2.0 * sd * n.sqrt();
        let excess = crit_err[i] as f64 - rand_err[i] as f64;
        ok &= excess <= margin;
        strict &= crit_err[i] <= rand_err[i];
        pairs.push(format!("{e}: {} vs {} (margin {margin:.0})", crit_err[i], rand_err[i]));
    }
    outcome(
        ok,
        format!(
            "erased bits designed vs random over 8 instances ({violations} violations repaired, strictly <= everywhere: {strict}): {}",
            pairs.join(", ")
        ),
    )
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1 closed-form oracle", c1_closed_form_oracle),
        ("2 integral identity", c2_integral_identity),
        ("3 potential-threshold table", c3_table3),
        ("4 capacity bound", c4_capacity_bound),
        ("5 closed-form argmin", c5_argmin),
        ("6 MC threshold spot checks", c6_table2_mc),
        ("7 repetition-ratio sweep", c7_lambda_sweep),
        ("8 threshold saturation", c8_saturation),
        ("9 reduction to SC-PCC", c9_reduction),
        ("10 BCJR brute-force oracle", c10_bcjr_oracle),
        ("11 finite-length waterfall", c11_waterfall),
        ("12 coupling-bit criterion", c12_criterion_benefit),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.split(' ').next() == Some(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {name}: {tag} [{:.1}s] {}", t.elapsed().as_secs_f64(), o.detail);
        failed += !o.passed as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
