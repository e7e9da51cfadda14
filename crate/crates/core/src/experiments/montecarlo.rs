//! Frequencies of G-events for points sampled under the Gauss measure.
//!
//! Partial quotients are drawn independently from the Gauss-Kuzmin law
//! `P(a = k) = log2(1 + 1/(k(k+2)))`. The Gauss measure and Lebesgue measure
//! have the same null sets, so full-measure and null statements carry over.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::approx::AuxiliaryFn;
use crate::classify::relation;
use crate::error::{Error, Result};

/// Quotients above this value are clamped to it; the law puts mass
/// `log2(1 + 2^-32) < 2^-31` beyond it.
pub const GK_CLAMP: u64 = 1 << 32;
/// Working precision of the `Psi` enclosures.
pub const MC_PRECISION: u32 = 64;
/// Smallest sample count accepted.
pub const MIN_SAMPLES: usize = 1000;

/// Inverse CDF of the Gauss-Kuzmin law at `u in (0, 1]`, using
/// `P(a >= k) = log2(1 + 1/k)`.
pub fn gauss_kuzmin(u: f64) -> u64 {
    let t = (u * std::f64::consts::LN_2).exp_m1();
    let k = (1.0 / t).floor();
    if k.is_nan() || k >= GK_CLAMP as f64 {
        GK_CLAMP
    } else {
        (k as u64).max(1)
    }
}

fn draw<R: Rng>(rng: &mut R) -> u64 {
    // uniform on (0, 1] with 53 bits
    let u = ((rng.random::<u64>() >> 11) + 1) as f64 / (1u64 << 53) as f64;
    gauss_kuzmin(u)
}

/// Quotients `a_1..=a_len` of sample `index`; stream `index` of the seeded
/// generator, so samples are independent of scheduling.
pub fn sample_quotients(seed: u64, index: u64, len: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..len).map(|_| draw(&mut rng)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyRow {
    pub window_start: usize,
    pub window_end: usize,
    pub hits: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyTable {
    #[serde(rename = "Psi")]
    pub aux: String,
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    pub rows: Vec<FrequencyRow>,
}

impl FrequencyTable {
    pub fn fraction(&self, start: usize, end: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.window_start == start && r.window_end == end)
            .map(|r| r.fraction)
    }
}

/// Dyadic windows `[50, 100]`, `[100, 200]`, `[200, 400]` and `[depth/2, depth]`,
/// keeping those inside `1..=depth`.
pub fn default_windows(depth: usize) -> Vec<(usize, usize)> {
    let mut w: Vec<(usize, usize)> = [(50, 100), (100, 200), (200, 400)]
        .into_iter()
        .filter(|&(_, e)| e <= depth / 2)
        .collect();
    w.push(((depth / 2).max(1), depth));
    w
}

/// Per window, whether the sample has a certified G-event in it.
fn scan(aux: &AuxiliaryFn, a: &[u64], windows: &[(usize, usize)]) -> Result<Vec<bool>> {
    let last = windows.iter().map(|w| w.1).max().unwrap_or(0);
    let mut hit = vec![false; windows.len()];
    let (mut q_prev, mut q) = (Integer::from(0), Integer::from(1));
    for n in 1..=last {
        let next = Integer::from(&q * a[n - 1]) + &q_prev;
        q_prev = std::mem::replace(&mut q, next);
        let open: Vec<usize> = (0..windows.len())
            .filter(|&i| !hit[i] && windows[i].0 <= n && n <= windows[i].1)
            .collect();
        if open.is_empty() {
            continue;
        }
        let psi = aux.enclose(&q, MC_PRECISION)?;
        if relation(&Integer::from(a[n - 1]), &Integer::from(a[n]), &psi).is_g_event() {
            for i in open {
                hit[i] = true;
            }
        }
    }
    Ok(hit)
}

pub fn mc_lebesgue(
    aux: &AuxiliaryFn,
    samples: usize,
    depth: usize,
    windows: &[(usize, usize)],
    seed: u64,
) -> Result<FrequencyTable> {
    if samples < MIN_SAMPLES {
        return Err(Error::Config(format!("samples must be >= {MIN_SAMPLES}, got {samples}")));
    }
    if windows.is_empty() {
        return Err(Error::Config("at least one window is required".into()));
    }
    if let Some(w) = windows.iter().find(|w| w.0 == 0 || w.0 > w.1 || w.1 > depth) {
        return Err(Error::Config(format!("window [{}, {}] must lie in 1..={depth}", w.0, w.1)));
    }
    let hits: Result<Vec<Vec<bool>>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| scan(aux, &sample_quotients(seed, i, depth + 1), windows))
        .collect();
    let hits = hits?;
    let rows = windows
        .iter()
        .enumerate()
        .map(|(i, &(s, e))| {
            let count = hits.iter().filter(|h| h[i]).count();
            FrequencyRow {
                window_start: s,
                window_end: e,
                hits: count,
                fraction: count as f64 / samples as f64,
            }
        })
        .collect();
    Ok(FrequencyTable {
        aux: aux.to_string(),
        samples,
        depth,
        seed,
        rows,
    })
}
