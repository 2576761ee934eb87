//! Monte-Carlo estimation of transfer functions by decoding long random trellises.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conv::{bcjr_erase_into, BcjrScratch, Boundary, ConvCodeSpec, Ternary, Trellis};
use crate::numerics::derive_seed;

/// Simulation budget and seed for one transfer-function estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub trellis_len: usize,
    pub trials: usize,
    pub seed: u64,
    /// Sections discarded at each end of the trellis.
    pub burn_in: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { trellis_len: 100_000, trials: 1, seed: 0x5eed, burn_in: 200 }
    }
}

/// Length of the batches used for the batch-means standard error.
const BATCH: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferEstimate {
    pub fs: f64,
    pub fp: f64,
    pub stderr_s: f64,
    pub stderr_p: f64,
    /// Number of trellis sections contributing to each estimate.
    pub samples: usize,
}

/// Bernoulli(p) sampler comparing a raw `u64` against a fixed threshold.
#[derive(Clone, Copy)]
struct Coin(Option<u64>);

impl Coin {
    fn new(p: f64) -> Self {
        if p >= 1.0 {
            Coin(None)
        } else {
            Coin(Some((p.max(0.0) * 18_446_744_073_709_551_616.0) as u64))
        }
    }

    #[inline]
    fn flip<R: RngCore>(self, rng: &mut R) -> bool {
        match self.0 {
            None => true,
            Some(t) => rng.next_u64() < t,
        }
    }
}

/// Per-trial batch fractions of extrinsic erasures for info and parity.
fn run_trial(trellis: &Trellis, x: f64, y: f64, cfg: &McConfig, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let n = cfg.trellis_len;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let info: Vec<u8> = (0..n).map(|_| rng.gen::<u8>() & 1).collect();
    let (parity, _) = trellis.encode(&info, 0);
    let (cx, cy) = (Coin::new(x), Coin::new(y));
    let mut io = Vec::with_capacity(n);
    let mut po = Vec::with_capacity(n);
    for t in 0..n {
        io.push(if cx.flip(&mut rng) { Ternary::Erased } else { Ternary::known(info[t]) });
        po.push(if cy.flip(&mut rng) { Ternary::Erased } else { Ternary::known(parity[t]) });
    }
    let mut ei = vec![Ternary::Erased; n];
    let mut ep = vec![Ternary::Erased; n];
    let mut scratch = BcjrScratch::default();
    bcjr_erase_into(trellis, &io, &po, Boundary::default(), &mut scratch, &mut ei, Some(&mut ep))
        .expect("channel observations of a codeword are always feasible");

    let lo = cfg.burn_in.min(n / 2);
    let hi = n - lo;
    let mut bs = Vec::new();
    let mut bp = Vec::new();
    let mut start = lo;
    while start < hi {
        let end = (start + BATCH).min(hi);
        let len = (end - start) as f64;
        let cs = ei[start..end].iter().filter(|v| v.is_erased()).count() as f64;
        let cp = ep[start..end].iter().filter(|v| v.is_erased()).count() as f64;
        bs.push(cs / len);
        bp.push(cp / len);
        start = end;
    }
    (bs, bp)
}

fn mean_and_stderr(batches: &[f64], weights: &[f64]) -> (f64, f64) {
    let w: f64 = weights.iter().sum();
    let mean = batches.iter().zip(weights).map(|(b, w)| b * w).sum::<f64>() / w;
    let k = batches.len() as f64;
    if k < 2.0 {
        return (mean, f64::NAN);
    }
    let var = batches
        .iter()
        .zip(weights)
        .map(|(b, wi)| (wi * k / w).powi(2) * (b - mean).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Estimates `(f_s, f_p)` at `(x, y)` by extrinsic erasure decoding of random codewords.
///
/// Every section inside the burn-in window contributes, whether or not its own
/// bit was erased: the extrinsic output never uses the bit's own observation,
/// so its erasure probability is the same on both subsets. Sections along one
/// trellis are correlated, so the standard error comes from batch means.
pub fn estimate_transfer(code: &ConvCodeSpec, x: f64, y: f64, cfg: &McConfig) -> TransferEstimate {
    let x = x.clamp(0.0, 1.0);
    let y = y.clamp(0.0, 1.0);
    if x == 0.0 {
        return TransferEstimate { fs: 0.0, fp: 0.0, stderr_s: 0.0, stderr_p: 0.0, samples: 0 };
    }
    let trellis = Trellis::new(code);
    let trials = cfg.trials.max(1);
    let per_trial: Vec<(Vec<f64>, Vec<f64>)> = (0..trials)
        .into_par_iter()
        .map(|k| run_trial(&trellis, x, y, cfg, derive_seed(cfg.seed, k as u64)))
        .collect();
    let mut bs = Vec::new();
    let mut bp = Vec::new();
    let mut weights = Vec::new();
    let n = cfg.trellis_len;
    let lo = cfg.burn_in.min(n / 2);
    let window = n - 2 * lo;
    for (s, p) in per_trial {
        for (i, (a, b)) in s.into_iter().zip(p).enumerate() {
            bs.push(a);
            bp.push(b);
            weights.push((window - i * BATCH).min(BATCH) as f64);
        }
    }
    let (fs, stderr_s) = mean_and_stderr(&bs, &weights);
    let (fp, stderr_p) = mean_and_stderr(&bp, &weights);
    TransferEstimate { fs, fp, stderr_s, stderr_p, samples: window * trials }
}
