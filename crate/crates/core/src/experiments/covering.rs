//! Covering sums for `G(tau)` with `f = x^s`, `Psi(q) = q^tau`.
//!
//! Block `k` is `sum_{0 <= j < tau k} 2^{(2k+j)(1-s)} 2^{-(k+j) tau s}`. The
//! critical exponent `s*(K)` is the root of the block increment
//! `log2 B_K(s) - log2 B_{K-1}(s)`, which is decreasing in `s`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest block count accepted by the estimator.
pub const MIN_BLOCKS: u32 = 10;
/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct CoverRow {
    pub s: f64,
    pub k: u32,
    pub log2_block: f64,
    pub blocksum: f64,
    pub cumsum: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub tau: f64,
    pub k_max: u32,
    pub s_grid: Vec<f64>,
    pub rows: Vec<CoverRow>,
    /// `(K, s*(K))` for `K = MIN_BLOCKS..=k_max`.
    pub s_star: Vec<(u32, f64)>,
    pub reference: f64,
    pub error: f64,
}

impl CoverReport {
    pub fn estimate(&self) -> f64 {
        self.s_star.last().map(|r| r.1).unwrap_or(f64::NAN)
    }
}

fn inner_count(tau: f64, k: u32) -> u64 {
    (tau * f64::from(k)).ceil().max(0.0) as u64
}

/// `log2` of block `k` by a log-sum-exp over `j`.
pub fn log2_block(tau: f64, s: f64, k: u32) -> f64 {
    let n = inner_count(tau, k);
    let kf = f64::from(k);
    let base = kf * (2.0 - 2.0 * s - tau * s);
    let step = 1.0 - s - tau * s;
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let top = if step > 0.0 { base + step * (n - 1) as f64 } else { base };
    let mut acc = 0.0f64;
    for j in 0..n {
        acc += (base + step * j as f64 - top).exp2();
    }
    top + acc.log2()
}

fn increment(tau: f64, s: f64, k: u32) -> f64 {
    log2_block(tau, s, k) - log2_block(tau, s, k - 1)
}

/// Root of the increment at `k` on `s_grid`, refined by bisection inside the
/// bracketing grid cell. `None` if the grid does not bracket a sign change.
pub fn transition(tau: f64, k: u32, s_grid: &[f64]) -> Option<f64> {
    let signs: Vec<f64> = s_grid.iter().map(|&s| increment(tau, s, k)).collect();
    let cell = (1..s_grid.len()).find(|&i| signs[i - 1] > 0.0 && signs[i] <= 0.0)?;
    let (mut lo, mut hi) = (s_grid[cell - 1], s_grid[cell]);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if increment(tau, mid, k) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `0.01, 0.02, .., 1`.
pub fn default_s_grid() -> Vec<f64> {
    (1..=100).map(|i| f64::from(i) / 100.0).collect()
}

pub fn covering_critical_exponent(tau: f64, k_max: u32, s_grid: &[f64]) -> Result<CoverReport> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Degenerate(format!(
            "tau = {tau}: the inner range is empty, which is the dimension-one regime outside this estimator"
        )));
    }
    if k_max < MIN_BLOCKS {
        return Err(Error::Config(format!("K must be >= {MIN_BLOCKS}, got {k_max}")));
    }
    if s_grid.len() < 2 || s_grid.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
        return Err(Error::Config("s grid must have >= 2 points in (0, 1]".into()));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("s grid must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(s_grid.len() * k_max as usize);
    for &s in s_grid {
        let mut cumsum = 0.0;
        for k in 1..=k_max {
            let lb = log2_block(tau, s, k);
            let blocksum = lb.exp2();
            cumsum += blocksum;
            rows.push(CoverRow {
                s,
                k,
                log2_block: lb,
                blocksum,
                cumsum,
            });
        }
    }
    let s_star: Vec<(u32, f64)> = (MIN_BLOCKS..=k_max)
        .filter_map(|k| transition(tau, k, s_grid).map(|s| (k, s)))
        .collect();
    if s_star.is_empty() {
        return Err(Error::Degenerate("s grid does not bracket the transition".into()));
    }
    let reference = 2.0 / (2.0 + tau);
    let estimate = s_star.last().unwrap().1;
    Ok(CoverReport {
        tau,
        k_max,
        s_grid: s_grid.to_vec(),
        rows,
        s_star,
        reference,
        error: (estimate - reference).abs(),
    })
}
