//! Small numerical kernels shared across modules.

use crate::scalar::Real;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T) -> T {
    if b <= a {
        return T::zero();
    }
    let two = T::lit(2.0);
    let m = (a + b) / two;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[inline]
fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let two = T::lit(2.0);
    let m = (a + b) / two;
    let (lm, rm) = ((a + m) / two, (m + b) / two);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= T::lit(15.0) * tol {
        return left + right + delta / T::lit(15.0);
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / two, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / two, depth - 1)
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`. Returns `(argmin, min)`.
pub fn golden_min<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T, tol: T) -> (T, T) {
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / T::lit(2.0);
    let fx = f(x);
    let best = [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |acc, p| if p.1 < acc.1 { p } else { acc });
    best
}

/// Bisection for the supremum of `{e in [lo, hi] : good(e)}` assuming `good`
/// holds on an initial segment. Returns the midpoint of the final bracket and
/// the number of predicate calls.
pub fn bisect_sup<F: FnMut(f64) -> bool>(mut lo: f64, mut hi: f64, tol: f64, mut good: F) -> (f64, usize) {
    let mut calls = 0;
    if good(hi) {
        return (hi, 1);
    }
    calls += 1;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        calls += 1;
        if good(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), calls)
}

/// Stationary distribution of a finite Markov chain given as a dense row-stochastic matrix.
///
/// Solves `pi (P - I) = 0, sum(pi) = 1` by Gaussian elimination; falls back to
/// Cesàro-averaged power iteration from `start` when the system is singular
/// (several closed classes, which only happens at degenerate probabilities).
pub fn stationary<T: Real>(p: &[Vec<T>], start: usize) -> Vec<T> {
    let n = p.len();
    if n == 1 {
        return vec![T::one()];
    }
    // rows of A = (P^T - I), last row replaced by all ones
    let mut a = vec![vec![T::zero(); n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            a[j][i] = p[i][j];
        }
        a[i][i] = a[i][i] - T::one();
    }
    for j in 0..n {
        a[n - 1][j] = T::one();
    }
    a[n - 1][n] = T::one();
    if let Some(x) = gauss_solve(a) {
        if x.iter().all(|v| *v > T::lit(-1e-9)) {
            return x.into_iter().map(|v| v.max(T::zero())).collect();
        }
    }
    power_average(p, start)
}

fn gauss_solve<T: Real>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < T::lit(1e-12) {
            return None;
        }
        a.swap(col, piv);
        for row in 0..n {
            if row != col {
                let factor = a[row][col] / a[col][col];
                if factor != T::zero() {
                    for k in col..=n {
                        let v = a[col][k];
                        a[row][k] = a[row][k] - factor * v;
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn power_average<T: Real>(p: &[Vec<T>], start: usize) -> Vec<T> {
    let n = p.len();
    let mut cur = vec![T::zero(); n];
    cur[start] = T::one();
    let mut acc = vec![T::zero(); n];
    let rounds = 20_000;
    for _ in 0..rounds {
        let mut nxt = vec![T::zero(); n];
        for i in 0..n {
            if cur[i] != T::zero() {
                for j in 0..n {
                    nxt[j] = nxt[j] + cur[i] * p[i][j];
                }
            }
        }
        cur = nxt;
        for j in 0..n {
            acc[j] = acc[j] + cur[j];
        }
    }
    let total = T::lit(rounds as f64);
    acc.into_iter().map(|v| v / total).collect()
}

/// SplitMix64 finalizer, used to derive independent seeds from `(seed, index)`.
#[inline]
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
