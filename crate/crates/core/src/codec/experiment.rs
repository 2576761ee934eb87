//! Bit/frame erasure rate measurement over many channel realisations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decode::{decode_chain, DecoderConfig};
use super::encode::{bec, encode_chain, Codeword, PunctureMasks, PunctureMode};
use super::instance::CodeInstance;
use crate::conv::Trellis;
use crate::error::Result;
use crate::numerics::derive_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub eps_list: Vec<f64>,
    /// Stop a point once this many information bits remain erased.
    pub min_errors: u64,
    /// Or once this many information bits were simulated.
    pub max_bits: u64,
    pub seed: u64,
    /// Frames decoded per parallel batch; stopping is checked between batches.
    pub batch: usize,
    pub puncture: PunctureMode,
    pub decoder: DecoderConfig,
    /// Send random data instead of the all-zero codeword.
    pub random_data: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            eps_list: Vec::new(),
            min_errors: 300,
            max_bits: 10_000_000,
            seed: 1,
            batch: 16,
            puncture: PunctureMode::Random,
            decoder: DecoderConfig::default(),
            random_data: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub eps: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// 95% Wilson interval for the bit erasure rate, treating bits as independent.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BerPoint {
    pub const CSV_HEADER: &'static str = "eps,frames,bits,bit_errors,frame_errors,ber,fer,ci_low,ci_high";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            self.eps, self.frames, self.bits, self.bit_errors, self.frame_errors, self.ber, self.fer, self.ci_low, self.ci_high
        )
    }
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054f64;
    let (n, p) = (n as f64, k as f64 / n as f64);
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    (lo, (centre + half).min(1.0))
}

/// Seed of frame `frame` at point `point`; identical across instances so runs can be paired.
pub fn frame_seed(seed: u64, point: usize, frame: u64) -> u64 {
    derive_seed(derive_seed(seed, point as u64), frame)
}

/// Decodes one frame and returns the number of erased information bits.
fn run_frame(inst: &CodeInstance, trellis: &Trellis, eps: f64, seed: u64, cfg: &ExperimentConfig) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks = PunctureMasks::draw(inst, cfg.puncture, &mut rng);
    let cw = if cfg.random_data {
        let info: Vec<u8> = (0..inst.k * inst.l()).map(|_| rng.gen_range(0..2)).collect();
        encode_chain(inst, trellis, &info, masks)?
    } else {
        Codeword::all_zero(inst, masks)
    };
    let obs = bec(&cw, eps, &mut rng);
    Ok(decode_chain(inst, trellis, &obs, &cfg.decoder)?.erased)
}

/// Measures the post-decoding erasure rate at every `ε` of `cfg`.
pub fn ber_experiment(inst: &CodeInstance, cfg: &ExperimentConfig) -> Result<Vec<BerPoint>> {
    let trellis = Trellis::new(&inst.params.code);
    let bits_per_frame = (inst.k * inst.l()) as u64;
    let batch = cfg.batch.max(1) as u64;
    let mut points = Vec::with_capacity(cfg.eps_list.len());
    for (pi, &eps) in cfg.eps_list.iter().enumerate() {
        let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
        while bit_errors < cfg.min_errors && frames * bits_per_frame < cfg.max_bits {
            let res: Result<Vec<usize>> = (frames..frames + batch)
                .into_par_iter()
                .map(|f| run_frame(inst, &trellis, eps, frame_seed(cfg.seed, pi, f), cfg))
                .collect();
            for e in res? {
                bit_errors += e as u64;
                frame_errors += (e > 0) as u64;
            }
            frames += batch;
        }
        let bits = frames * bits_per_frame;
        let (ci_low, ci_high) = wilson_interval(bit_errors, bits);
        points.push(BerPoint {
            eps,
            frames,
            bits,
            bit_errors,
            frame_errors,
            ber: if bits > 0 { bit_errors as f64 / bits as f64 } else { 0.0 },
            fer: if frames > 0 { frame_errors as f64 / frames as f64 } else { 0.0 },
            ci_low,
            ci_high,
        });
    }
    Ok(points)
}
