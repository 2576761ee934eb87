//! Per-`y` transfer-function slices with caching, as consumed by density evolution.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::closed::{fs_closed_2state, fs_closed_2state_integral, fs_closed_2state_slope0};
use super::mc::McConfig;
use super::table::{tabulate, uniform_grid, TableSource, TransferTable};
use crate::conv::ConvCodeSpec;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// How transfer functions are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    /// Closed form for `f_s` (2-state code only), exact chain for `f_p`.
    ClosedForm,
    /// Exact stationary Markov-chain evaluation, tabulated on `grid_points` and interpolated.
    Exact { grid_points: usize },
    /// Monte-Carlo tables on `grid_points`, cached by `y` rounded to 1e-4.
    MonteCarlo { grid_points: usize, mc: McConfig },
}

impl Backend {
    pub const DEFAULT_EXACT: Backend = Backend::Exact { grid_points: 1001 };

    /// Default for a code: closed form for 2 states, exact chain otherwise.
    pub fn default_for(code: &ConvCodeSpec) -> Self {
        if code.num_states() == 2 {
            Backend::ClosedForm
        } else {
            Self::DEFAULT_EXACT
        }
    }

    pub fn monte_carlo(mc: McConfig) -> Self {
        Backend::MonteCarlo { grid_points: 201, mc }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Backend::ClosedForm => "closed_form",
            Backend::Exact { .. } => "exact",
            Backend::MonteCarlo { .. } => "monte_carlo",
        }
    }
}

/// `f_s(., y)`, `f_p(., y)` for one value of `y`.
#[derive(Clone, Debug)]
pub struct TransferSlice<T: Real> {
    y: T,
    closed: bool,
    table: Arc<TransferTable<T>>,
}

impl<T: Real> TransferSlice<T> {
    pub fn y(&self) -> T {
        self.y
    }

    #[inline]
    pub fn fs(&self, x: T) -> T {
        if self.closed {
            fs_closed_2state(x, self.y)
        } else {
            self.table.fs(x)
        }
    }

    #[inline]
    pub fn fp(&self, x: T) -> T {
        self.table.fp(x)
    }

    /// `∫_0^w f_s(v, y) dv`.
    pub fn fs_integral(&self, w: T) -> T {
        if self.closed {
            fs_closed_2state_integral(w, self.y)
        } else {
            self.table.fs_integral(w)
        }
    }

    /// `∂f_s/∂x` at `x = 0`.
    pub fn slope0(&self) -> T {
        if self.closed {
            fs_closed_2state_slope0(self.y)
        } else {
            self.table.slope0()
        }
    }

    pub fn table(&self) -> &TransferTable<T> {
        &self.table
    }
}

const CACHE_LIMIT: usize = 4096;

/// Transfer functions of one component code under a chosen backend.
#[derive(Debug)]
pub struct TransferModel<T: Real> {
    code: ConvCodeSpec,
    backend: Backend,
    cache: Mutex<HashMap<u64, Arc<TransferTable<T>>>>,
}

impl<T: Real> TransferModel<T> {
    pub fn new(code: ConvCodeSpec, backend: Backend) -> Result<Self> {
        match backend {
            Backend::ClosedForm if code.num_states() != 2 => {
                return Err(Error::InvalidSpec(format!("closed-form transfer only for the 2-state code, got {code}")))
            }
            Backend::Exact { grid_points } | Backend::MonteCarlo { grid_points, .. } if grid_points < 2 => {
                return Err(Error::InvalidParams("transfer grid needs at least 2 points".into()))
            }
            _ => {}
        }
        Ok(Self { code, backend, cache: Mutex::new(HashMap::new()) })
    }

    pub fn with_default_backend(code: ConvCodeSpec) -> Self {
        let b = Backend::default_for(&code);
        Self::new(code, b).expect("default backend is valid")
    }

    pub fn code(&self) -> &ConvCodeSpec {
        &self.code
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Returns the slice at `y`, building and caching its table on first use.
    pub fn slice(&self, y: T) -> TransferSlice<T> {
        let y = y.clamp01();
        let (key_y, grid_points, source) = match self.backend {
            // fp for the closed form comes from a modest exact table
            Backend::ClosedForm => (y, 1001, TableSource::Exact),
            Backend::Exact { grid_points } => (y, grid_points, TableSource::Exact),
            Backend::MonteCarlo { grid_points, mc } => {
                let r = (y.as_f64() * 1e4).round() / 1e4;
                (T::lit(r), grid_points, TableSource::MonteCarlo(mc))
            }
        };
        let key = key_y.as_f64().to_bits();
        let cached = self.cache.lock().unwrap().get(&key).cloned();
        let table = match cached {
            Some(t) => t,
            None => {
                let grid = uniform_grid::<T>(grid_points);
                let t = Arc::new(tabulate(&self.code, key_y, &grid, source).expect("backend validated at construction"));
                let mut cache = self.cache.lock().unwrap();
                if cache.len() >= CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(key, t.clone());
                t
            }
        };
        TransferSlice { y: key_y, closed: matches!(self.backend, Backend::ClosedForm), table }
    }

    pub fn describe(&self) -> String {
        match self.backend {
            Backend::ClosedForm => format!("{} closed form", self.code),
            Backend::Exact { grid_points } => format!("{} exact chain, {grid_points}-point grid", self.code),
            Backend::MonteCarlo { grid_points, mc } => format!(
                "{} monte carlo, {grid_points}-point grid, trellis_len={} trials={} seed={}",
                self.code, mc.trellis_len, mc.trials, mc.seed
            ),
        }
    }
}
