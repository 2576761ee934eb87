//! Tabulated transfer functions at fixed parity erasure probability `y`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closed::fs_closed_2state;
use super::exact::ExactTransfer;
use super::mc::{estimate_transfer, McConfig};
use crate::conv::ConvCodeSpec;
use crate::error::{Error, Result};
use crate::numerics::derive_seed;
use crate::scalar::Real;

/// Where the numbers in a table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableSource {
    /// 2-state closed form for `f_s`, exact chain for `f_p`.
    ClosedForm,
    /// Stationary Markov-chain evaluation.
    Exact,
    MonteCarlo(McConfig),
}

impl TableSource {
    pub fn label(&self) -> &'static str {
        match self {
            TableSource::ClosedForm => "closed_form",
            TableSource::Exact => "exact",
            TableSource::MonteCarlo(_) => "monte_carlo",
        }
    }
}

/// `n` uniformly spaced points on `[0, 1]`, endpoints included.
pub fn uniform_grid<T: Real>(n: usize) -> Vec<T> {
    assert!(n >= 2, "grid needs both endpoints");
    (0..n).map(|i| T::lit(i as f64 / (n - 1) as f64)).collect()
}

/// `f_s(., y)` and `f_p(., y)` sampled on an x-grid and projected onto
/// nondecreasing `[0,1]`-valued curves.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferTable<T: Real> {
    pub code: ConvCodeSpec,
    pub y: T,
    pub grid_x: Vec<T>,
    pub fs_values: Vec<T>,
    pub fp_values: Vec<T>,
    pub stderr_s: Vec<T>,
    pub stderr_p: Vec<T>,
    pub source: TableSource,
    /// `∫_0^{x_i} f_s` at every grid point.
    cum_fs: Vec<T>,
    /// Spacing when the grid is uniform; enables O(1) lookup.
    step: Option<T>,
}

/// Pool-adjacent-violators: least-squares nondecreasing fit.
pub fn isotonic<T: Real>(values: &[T]) -> Vec<T> {
    let mut blocks: Vec<(T, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a <= b {
                break;
            }
            blocks.pop();
            let n = na + nb;
            let mean = (a * T::lit(na as f64) + b * T::lit(nb as f64)) / T::lit(n as f64);
            *blocks.last_mut().unwrap() = (mean, n);
        }
    }
    blocks.into_iter().flat_map(|(v, n)| std::iter::repeat(v).take(n)).collect()
}

impl<T: Real> TransferTable<T> {
    /// Builds a table from raw samples, applying clamping, `f(0) = 0` and isotonic projection.
    #[allow(clippy::too_many_arguments)]
    pub fn from_samples(
        code: ConvCodeSpec,
        y: T,
        grid_x: Vec<T>,
        fs: Vec<T>,
        fp: Vec<T>,
        stderr_s: Vec<T>,
        stderr_p: Vec<T>,
        source: TableSource,
    ) -> Result<Self> {
        let n = grid_x.len();
        if n < 2 {
            return Err(Error::TableFormat("grid needs at least two points".into()));
        }
        for v in [&fs, &fp, &stderr_s, &stderr_p] {
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, actual: v.len() });
            }
        }
        if grid_x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::TableFormat("grid must be strictly increasing".into()));
        }
        if grid_x[0] < T::zero() || grid_x[n - 1] > T::one() {
            return Err(Error::TableFormat("grid must lie in [0,1]".into()));
        }
        let fix = |mut v: Vec<T>| {
            for e in v.iter_mut() {
                *e = e.clamp01();
            }
            if grid_x[0] == T::zero() {
                v[0] = T::zero();
            }
            isotonic(&v)
        };
        let fs_values = fix(fs);
        let fp_values = fix(fp);
        let mut t = Self {
            code,
            y,
            grid_x,
            fs_values,
            fp_values,
            stderr_s,
            stderr_p,
            source,
            cum_fs: Vec::new(),
            step: None,
        };
        t.finish();
        Ok(t)
    }

    fn finish(&mut self) {
        let n = self.grid_x.len();
        let half = T::lit(0.5);
        let mut cum = vec![T::zero(); n];
        for i in 1..n {
            let h = self.grid_x[i] - self.grid_x[i - 1];
            cum[i] = cum[i - 1] + half * h * (self.fs_values[i] + self.fs_values[i - 1]);
        }
        self.cum_fs = cum;
        let h = (self.grid_x[n - 1] - self.grid_x[0]) / T::lit((n - 1) as f64);
        let uniform = self
            .grid_x
            .iter()
            .enumerate()
            .all(|(i, &x)| (x - (self.grid_x[0] + h * T::lit(i as f64))).abs() <= T::lit(1e-5) * h);
        self.step = uniform.then_some(h);
    }

    pub fn len(&self) -> usize {
        self.grid_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid_x.is_empty()
    }

    /// Index `i` with `grid_x[i] <= x < grid_x[i+1]`, clamped to a valid segment.
    #[inline]
    fn segment(&self, x: T) -> usize {
        let n = self.grid_x.len();
        let i = match self.step {
            Some(h) => ((x - self.grid_x[0]) / h).to_usize().unwrap_or(0),
            None => self.grid_x.partition_point(|&g| g <= x).saturating_sub(1),
        };
        i.min(n - 2)
    }

    #[inline]
    fn interp(&self, values: &[T], x: T) -> T {
        let n = self.grid_x.len();
        if x <= self.grid_x[0] {
            return values[0];
        }
        if x >= self.grid_x[n - 1] {
            return values[n - 1];
        }
        let i = self.segment(x);
        let (x0, x1) = (self.grid_x[i], self.grid_x[i + 1]);
        let w = ((x - x0) / (x1 - x0)).clamp01();
        values[i] + w * (values[i + 1] - values[i])
    }

    /// Monotone piecewise-linear `f_s(x)`.
    #[inline]
    pub fn fs(&self, x: T) -> T {
        self.interp(&self.fs_values, x)
    }

    #[inline]
    pub fn fp(&self, x: T) -> T {
        self.interp(&self.fp_values, x)
    }

    /// Exact integral of the interpolant, `∫_0^w f_s(v) dv`.
    pub fn fs_integral(&self, w: T) -> T {
        let n = self.grid_x.len();
        if w <= self.grid_x[0] {
            return T::zero();
        }
        if w >= self.grid_x[n - 1] {
            return self.cum_fs[n - 1] + self.fs_values[n - 1] * (w - self.grid_x[n - 1]);
        }
        let i = self.segment(w);
        let x0 = self.grid_x[i];
        let v = self.fs(w);
        self.cum_fs[i] + T::lit(0.5) * (w - x0) * (self.fs_values[i] + v)
    }

    /// Slope of the interpolant at the first grid point.
    pub fn slope0(&self) -> T {
        (self.fs_values[1] - self.fs_values[0]) / (self.grid_x[1] - self.grid_x[0])
    }

    /// `|∫_0^1 f_s dx - y|` by the trapezoidal rule.
    pub fn integral_identity(&self) -> T {
        (self.cum_fs[self.grid_x.len() - 1] - self.y).abs()
    }

    /// Standard error of the trapezoidal integral, treating grid points as independent.
    pub fn integral_stderr(&self) -> T {
        let n = self.grid_x.len();
        let half = T::lit(0.5);
        let mut var = T::zero();
        for i in 0..n {
            let left = if i > 0 { self.grid_x[i] - self.grid_x[i - 1] } else { T::zero() };
            let right = if i + 1 < n { self.grid_x[i + 1] - self.grid_x[i] } else { T::zero() };
            let w = half * (left + right);
            var = var + w * w * self.stderr_s[i] * self.stderr_s[i];
        }
        var.sqrt()
    }

    /// Columnar text: `#` header lines with provenance, then `x fs fp stderr_s stderr_p` rows.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# code {}", self.code).unwrap();
        writeln!(s, "# y {:e}", self.y.as_f64()).unwrap();
        match &self.source {
            TableSource::MonteCarlo(c) => writeln!(
                s,
                "# source monte_carlo trellis_len={} trials={} seed={} burn_in={}",
                c.trellis_len, c.trials, c.seed, c.burn_in
            )
            .unwrap(),
            other => writeln!(s, "# source {}", other.label()).unwrap(),
        }
        writeln!(s, "x fs fp stderr_s stderr_p").unwrap();
        for i in 0..self.grid_x.len() {
            writeln!(
                s,
                "{:e} {:e} {:e} {:e} {:e}",
                self.grid_x[i].as_f64(),
                self.fs_values[i].as_f64(),
                self.fp_values[i].as_f64(),
                self.stderr_s[i].as_f64(),
                self.stderr_p[i].as_f64()
            )
            .unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::TableFormat(m.to_string());
        let mut code = None;
        let mut y = None;
        let mut source = None;
        let mut cols: [Vec<T>; 5] = Default::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                let (key, val) = rest.split_once(' ').unwrap_or((rest, ""));
                match key {
                    "code" => code = Some(val.parse::<ConvCodeSpec>()?),
                    "y" => y = Some(val.trim().parse::<f64>().map_err(|_| bad("bad y"))?),
                    "source" => source = Some(parse_source(val)?),
                    _ => {}
                }
                continue;
            }
            if line.starts_with('x') {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|_| bad("non-numeric cell")))
                .collect::<Result<_>>()?;
            if nums.len() != 5 {
                return Err(bad("expected 5 columns"));
            }
            for (c, v) in cols.iter_mut().zip(nums) {
                c.push(T::lit(v));
            }
        }
        let [x, fs, fp, ss, sp] = cols;
        Self::from_samples(
            code.ok_or_else(|| bad("missing code header"))?,
            T::lit(y.ok_or_else(|| bad("missing y header"))?),
            x,
            fs,
            fp,
            ss,
            sp,
            source.ok_or_else(|| bad("missing source header"))?,
        )
    }
}

fn parse_source(val: &str) -> Result<TableSource> {
    let mut it = val.split_whitespace();
    match it.next() {
        Some("closed_form") => Ok(TableSource::ClosedForm),
        Some("exact") => Ok(TableSource::Exact),
        Some("monte_carlo") => {
            let mut cfg = McConfig::default();
            for kv in it {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::TableFormat(kv.into()))?;
                let n: u64 = v.parse().map_err(|_| Error::TableFormat(kv.into()))?;
                match k {
                    "trellis_len" => cfg.trellis_len = n as usize,
                    "trials" => cfg.trials = n as usize,
                    "seed" => cfg.seed = n,
                    "burn_in" => cfg.burn_in = n as usize,
                    _ => return Err(Error::TableFormat(format!("unknown key {k}"))),
                }
            }
            Ok(TableSource::MonteCarlo(cfg))
        }
        _ => Err(Error::TableFormat(format!("unknown source {val:?}"))),
    }
}

/// Tabulates `f_s(., y)` and `f_p(., y)` on `grid` with the requested backend.
///
/// Monte-Carlo points use seeds derived from the configured seed and the grid index.
pub fn tabulate<T: Real>(code: &ConvCodeSpec, y: T, grid: &[T], source: TableSource) -> Result<TransferTable<T>> {
    let n = grid.len();
    let zeros = vec![T::zero(); n];
    let (fs, fp, ss, sp) = match source {
        TableSource::ClosedForm => {
            if code.num_states() != 2 {
                return Err(Error::InvalidSpec(format!("no closed form for {code}")));
            }
            let ex = ExactTransfer::new(code);
            let fs = grid.iter().map(|&x| fs_closed_2state(x, y)).collect();
            let fp = grid.iter().map(|&x| ex.fp(x, y)).collect();
            (fs, fp, zeros.clone(), zeros)
        }
        TableSource::Exact => {
            let ex = ExactTransfer::new(code);
            let (fs, fp) = grid.iter().map(|&x| ex.eval(x, y)).unzip();
            (fs, fp, zeros.clone(), zeros)
        }
        TableSource::MonteCarlo(cfg) => {
            let yf = y.as_f64();
            let est: Vec<_> = grid
                .par_iter()
                .enumerate()
                .map(|(i, &x)| {
                    let c = McConfig { seed: derive_seed(cfg.seed, i as u64), ..cfg };
                    estimate_transfer(code, x.as_f64(), yf, &c)
                })
                .collect();
            let lift = |f: fn(&super::mc::TransferEstimate) -> f64| est.iter().map(|e| T::lit(f(e))).collect::<Vec<T>>();
            (lift(|e| e.fs), lift(|e| e.fp), lift(|e| e.stderr_s), lift(|e| e.stderr_p))
        }
    };
    TransferTable::from_samples(code.clone(), y, grid.to_vec(), fs, fp, ss, sp, source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pava_projects_onto_monotone() {
        assert_eq!(isotonic(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(isotonic(&[3.0, 2.0, 1.0]), vec![2.0, 2.0, 2.0]);
        let v = [0.1, 0.2, 0.2, 0.5];
        assert_eq!(isotonic(&v), v.to_vec());
    }

    #[test]
    fn closed_table_tracks_formula_and_integrates_to_y() {
        let grid = uniform_grid::<f64>(201);
        let t = tabulate(&ConvCodeSpec::two_state(), 0.3, &grid, TableSource::ClosedForm).unwrap();
        for i in 0..=50 {
            let x = i as f64 / 50.0 + 0.0013;
            assert!((t.fs(x.min(1.0)) - fs_closed_2state(x.min(1.0), 0.3)).abs() < 2e-3);
        }
        assert!(t.integral_identity() < 1e-4);
    }

    #[test]
    fn endpoints_on_two_point_grid() {
        let t = tabulate(&ConvCodeSpec::four_state(), 1.0, &[0.0, 1.0], TableSource::Exact).unwrap();
        assert_eq!(t.fs_values, vec![0.0, 1.0]);
        let t = tabulate(&ConvCodeSpec::four_state(), 0.0, &uniform_grid(11), TableSource::Exact).unwrap();
        assert_eq!(t.integral_identity(), 0.0);
    }

    #[test]
    fn integral_of_interpolant_is_exact() {
        let grid = vec![0.0f64, 0.1, 0.4, 1.0];
        let f = vec![0.0f64, 0.2, 0.3, 0.9];
        let z = vec![0.0; 4];
        let t = TransferTable::from_samples(
            ConvCodeSpec::four_state(),
            0.5,
            grid,
            f.clone(),
            f,
            z.clone(),
            z,
            TableSource::Exact,
        )
        .unwrap();
        // 0.01 + 0.075 + 0.36
        assert!((t.fs_integral(1.0) - 0.445).abs() < 1e-15);
        assert!((t.fs_integral(0.25) - (0.01 + 0.15 * (0.2 + 0.25) / 2.0)).abs() < 1e-15);
        assert!((t.fs(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip() {
        let cfg = McConfig { trellis_len: 2000, trials: 1, seed: 9, burn_in: 50 };
        let t = tabulate(&ConvCodeSpec::eight_state(), 0.5, &uniform_grid::<f64>(6), TableSource::MonteCarlo(cfg)).unwrap();
        let back = TransferTable::<f64>::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert!(TransferTable::<f64>::from_text("x fs\n0 0").is_err());
    }

    #[test]
    fn rejects_unsorted_grid() {
        let z = vec![0.0; 3];
        let r = TransferTable::from_samples(
            ConvCodeSpec::two_state(),
            0.5,
            vec![0.0, 0.6, 0.5],
            z.clone(),
            z.clone(),
            z.clone(),
            z,
            TableSource::Exact,
        );
        assert!(r.is_err());
    }
}
