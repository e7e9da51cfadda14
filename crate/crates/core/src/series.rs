//! Partial sums and convergence evidence for the dichotomy series.
//!
//! q-indexed series are summed either directly up to `q_max` or through
//! Cauchy condensation, where dyadic block `k` is `2^k a(2^k)`. The main
//! double series is always dyadic: block `k` collects
//! `2^(2k+j) f(2^-(2k+j) / Psi(2^(k+j)))` over `0 <= j` with `2^j < Psi(2^k)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::approx::AuxiliaryFn;
use crate::dimfun::DimensionFunction;
use crate::error::{Error, Result};
use crate::precision::{log2_float, DEFAULT_PRECISION, GUARD_BITS};
use crate::probe::band;

/// Largest `q_max` for direct summation of single series.
pub const MAX_DIRECT_Q: u64 = 1 << 24;
/// Largest `q_max` for direct summation of the `(p, q)` double series.
pub const MAX_DIRECT_PQ: u64 = 1 << 12;
/// Largest dyadic block index.
pub const MAX_BLOCK: u32 = 4096;
/// Blocks inspected by the verdict rule.
pub const VERDICT_BLOCKS: usize = 8;
/// Fewer blocks than this give an inconclusive verdict.
pub const MIN_BLOCKS: usize = 4;
/// Geometric decay needed for a convergence verdict: ratio at most 0.9.
pub const DECAY_RATIO: f64 = 0.9;
/// Doubling exponents at or above this value count as convergent.
pub const CONVERGENT_EXPONENT: f64 = 1.1;
/// Default bound on `max r / min r` for bounded comparisons.
pub const RATIO_BOUND: f64 = 50.0;
/// Log-log slope of a ratio trajectory treated as unbounded growth.
pub const RATIO_SLOPE_LIMIT: f64 = 0.5;

pub const VERDICT_RULE: &str = "dyadic-tail-v1";
pub const COMPARE_RULE: &str = "per-scale-band50-slope0.5";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PRange {
    /// `1 <= p <= q`.
    Full,
    /// `q / Psi(q) < p <= q`.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    /// `sum_k sum_{2^j < Psi(2^k)} 2^(2k+j) f(2^-(2k+j) / Psi(2^(k+j)))`.
    Main,
    /// `sum_q log Psi(q) / (q Psi(q))`.
    Kw,
    /// `sum_q q f(1 / (q^2 Psi(q)))`.
    Jarnik,
    /// `sum_q q log Psi(q) f(1 / (q^2 Psi(q)))`.
    LogJarnik,
    /// `sum_q sum_p f(1 / (p q Psi(q)))`.
    Pq(PRange),
}

impl SeriesKind {
    pub fn needs_f(self) -> bool {
        !matches!(self, SeriesKind::Kw)
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Main => "MAIN",
            SeriesKind::Kw => "KW",
            SeriesKind::Jarnik => "JARNIK",
            SeriesKind::LogJarnik => "LOGJARNIK",
            SeriesKind::Pq(PRange::Full) => "PQ",
            SeriesKind::Pq(PRange::Restricted) => "PQ-RESTRICTED",
        })
    }
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "MAIN" => SeriesKind::Main,
            "KW" => SeriesKind::Kw,
            "JARNIK" => SeriesKind::Jarnik,
            "LOGJARNIK" => SeriesKind::LogJarnik,
            "PQ" => SeriesKind::Pq(PRange::Full),
            "PQ-RESTRICTED" => SeriesKind::Pq(PRange::Restricted),
            _ => {
                return Err(Error::parse(
                    "series kind",
                    s,
                    "expected MAIN, KW, JARNIK, LOGJARNIK, PQ or PQ-RESTRICTED",
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cutoff {
    /// Dyadic blocks `k <= k_max`; q-series are condensed.
    Blocks(u32),
    /// Direct summation over `q <= q_max`.
    Terms(u64),
}

#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub f: Option<DimensionFunction>,
    pub aux: AuxiliaryFn,
    pub cutoff: Cutoff,
    /// First block (or first `q` for direct sums); defaults to the first
    /// index with `Psi >= 1` where every term is defined.
    pub start: Option<u64>,
    pub precision: u32,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, f: Option<DimensionFunction>, aux: AuxiliaryFn, cutoff: Cutoff) -> Self {
        SeriesSpec {
            kind,
            f,
            aux,
            cutoff,
            start: None,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn blocks(kind: SeriesKind, f: Option<DimensionFunction>, aux: AuxiliaryFn, k_max: u32) -> Self {
        Self::new(kind, f, aux, Cutoff::Blocks(k_max))
    }

    fn validate(&self) -> Result<()> {
        if self.kind.needs_f() && self.f.is_none() {
            return Err(Error::Config(format!("{} needs a dimension function", self.kind)));
        }
        match self.cutoff {
            Cutoff::Blocks(k) if k > MAX_BLOCK => Err(Error::CapExceeded {
                what: format!("k_max = {k}"),
                cap: MAX_BLOCK.to_string(),
            }),
            Cutoff::Terms(_) if self.kind == SeriesKind::Main => {
                Err(Error::Config("MAIN is a dyadic series; use a block cutoff".into()))
            }
            Cutoff::Terms(q) if matches!(self.kind, SeriesKind::Pq(_)) && q > MAX_DIRECT_PQ => {
                Err(Error::CapExceeded {
                    what: format!("q_max = {q}"),
                    cap: MAX_DIRECT_PQ.to_string(),
                })
            }
            Cutoff::Terms(q) if q > MAX_DIRECT_Q => Err(Error::CapExceeded {
                what: format!("q_max = {q}"),
                cap: MAX_DIRECT_Q.to_string(),
            }),
            Cutoff::Terms(0) => Err(Error::Config("q_max must be positive".into())),
            _ => Ok(()),
        }
    }

    fn work_prec(&self) -> u32 {
        self.precision + GUARD_BITS
    }

    fn f(&self) -> &DimensionFunction {
        self.f.as_ref().expect("validated")
    }
}

/// One raw term. `index` is `k` for dyadic rows and `q` for direct rows;
/// `inner` is `j` (main series), the dyadic `p`-exponent (condensed `PQ`)
/// or `p` (direct `PQ`).
#[derive(Debug, Clone, PartialEq)]
pub struct TermRow {
    pub index: u64,
    pub inner: Option<u64>,
    pub term: Float,
}

fn pow2(prec: u32, e: u64) -> Float {
    Float::with_val(prec, 1) << e as u32
}

/// `a(q)` for the single q-series.
fn q_term(spec: &SeriesSpec, q: &Float) -> Result<Float> {
    let prec = spec.work_prec();
    let psi = spec.aux.eval(q)?;
    if psi <= 0 {
        return Err(Error::domain(format!("Psi = {}", spec.aux), q.to_f64()));
    }
    let arg = || -> Float {
        let q2 = Float::with_val(prec, q.square_ref());
        Float::with_val(prec, q2 * &psi).recip()
    };
    Ok(match spec.kind {
        SeriesKind::Kw => {
            let l = Float::with_val(prec, psi.ln_ref());
            l / (Float::with_val(prec, q * &psi))
        }
        SeriesKind::Jarnik => spec.f().eval(&arg())? * q,
        SeriesKind::LogJarnik => {
            let l = Float::with_val(prec, psi.ln_ref());
            spec.f().eval(&arg())? * q * l
        }
        SeriesKind::Main | SeriesKind::Pq(_) => unreachable!("not a single q-series"),
    })
}

/// Calls `visit` on every term of block `k` in ascending order.
fn visit_block(spec: &SeriesSpec, k: u64, visit: &mut dyn FnMut(TermRow)) -> Result<()> {
    let prec = spec.work_prec();
    match (spec.kind, spec.cutoff) {
        (SeriesKind::Main, _) => {
            let big = spec.aux.eval(&pow2(prec, k))?;
            let mut j = 0u64;
            while pow2(prec, j) < big {
                let scale = 2 * k + j;
                let psi = spec.aux.eval(&pow2(prec, k + j))?;
                let x = Float::with_val(prec, pow2(prec, scale) * &psi).recip();
                let term = spec.f().eval(&x)? << scale as u32;
                visit(TermRow {
                    index: k,
                    inner: Some(j),
                    term,
                });
                j += 1;
            }
        }
        (SeriesKind::Pq(range), Cutoff::Blocks(_)) => {
            let q = pow2(prec, k);
            let psi = spec.aux.eval(&q)?;
            let qpsi = Float::with_val(prec, &q * &psi);
            let floor_p = Float::with_val(prec, &q / &psi);
            for i in 0..=k {
                let p = pow2(prec, i);
                if range == PRange::Restricted && p <= floor_p {
                    continue;
                }
                let x = Float::with_val(prec, &p * &qpsi).recip();
                let term = spec.f().eval(&x)? << (k + i) as u32;
                visit(TermRow {
                    index: k,
                    inner: Some(i),
                    term,
                });
            }
        }
        (SeriesKind::Pq(range), Cutoff::Terms(q_max)) => {
            for q in block_q_range(spec, k, q_max)? {
                let qf = Float::with_val(prec, q);
                let psi = spec.aux.eval(&qf)?;
                let qpsi = Float::with_val(prec, &qf * &psi);
                let floor_p = Float::with_val(prec, &qf / &psi);
                for p in 1..=q {
                    if range == PRange::Restricted && Float::with_val(prec, p) <= floor_p {
                        continue;
                    }
                    let x = Float::with_val(prec, &qpsi * p).recip();
                    visit(TermRow {
                        index: q,
                        inner: Some(p),
                        term: spec.f().eval(&x)?,
                    });
                }
            }
        }
        (_, Cutoff::Blocks(_)) => {
            let q = pow2(prec, k);
            let term = q_term(spec, &q)? << k as u32;
            visit(TermRow {
                index: k,
                inner: None,
                term,
            });
        }
        (_, Cutoff::Terms(q_max)) => {
            for q in block_q_range(spec, k, q_max)? {
                let term = q_term(spec, &Float::with_val(prec, q))?;
                visit(TermRow {
                    index: q,
                    inner: None,
                    term,
                });
            }
        }
    }
    Ok(())
}

fn block_q_range(spec: &SeriesSpec, k: u64, q_max: u64) -> Result<std::ops::RangeInclusive<u64>> {
    let lo = (1u64 << k).max(spec.start.unwrap_or(1));
    let hi = ((1u64 << (k + 1)) - 1).min(q_max);
    Ok(lo..=hi)
}

fn block_sum(spec: &SeriesSpec, k: u64) -> Result<Float> {
    let mut acc = Float::new(spec.work_prec());
    visit_block(spec, k, &mut |row| acc += &row.term)?;
    Ok(acc)
}

/// Blocks `k_min..=k_max` covered by a series description.
fn block_range(spec: &SeriesSpec) -> Result<(u64, u64)> {
    let prec = spec.work_prec();
    let last = match spec.cutoff {
        Cutoff::Blocks(k) => u64::from(k),
        Cutoff::Terms(q) => u64::from(63 - q.leading_zeros()),
    };
    let first = match (spec.start, spec.cutoff) {
        (Some(s), Cutoff::Blocks(_)) => s,
        (Some(s), Cutoff::Terms(_)) => u64::from(63 - s.max(1).leading_zeros()),
        (None, _) => {
            let mut found = None;
            for k in 1..=last.min(64) {
                let psi = spec.aux.eval(&pow2(prec, k));
                let ok = matches!(psi, Ok(ref v) if *v >= 1);
                if ok && block_sum(spec, k).is_ok() {
                    found = Some(k);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::Degenerate(format!(
                    "{} has no block with Psi >= 1 and defined terms up to k = {}",
                    spec.kind,
                    last.min(64)
                ))
            })?
        }
    };
    if first > last {
        return Err(Error::Config(format!("start block {first} lies beyond the cutoff {last}")));
    }
    Ok((first, last))
}

/// All terms in summation order.
pub fn condensation_terms(spec: &SeriesSpec) -> Result<Vec<TermRow>> {
    spec.validate()?;
    let (first, last) = block_range(spec)?;
    let mut rows = Vec::new();
    for k in first..=last {
        visit_block(spec, k, &mut |row| rows.push(row))?;
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesVerdict {
    ConvergesEvidence,
    DivergesEvidence,
    Inconclusive,
}

impl fmt::Display for SeriesVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesVerdict::ConvergesEvidence => "converges-evidence",
            SeriesVerdict::DivergesEvidence => "diverges-evidence",
            SeriesVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockRow {
    pub k: u64,
    pub block: f64,
    pub cumsum: f64,
    #[serde(skip)]
    pub exact_block: Float,
    #[serde(skip)]
    pub exact_cumsum: Float,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub f: Option<String>,
    #[serde(rename = "Psi")]
    pub aux: String,
    pub cutoff: Cutoff,
    pub blocks: Vec<BlockRow>,
    /// Least-squares slope of `log2 block` against `k` over the tail.
    pub geometric_slope: Option<f64>,
    /// `-d log block / d log k` over the tail.
    pub doubling_exponent: Option<f64>,
    pub trivially_zero: bool,
    pub verdict: SeriesVerdict,
    pub rule: &'static str,
}

impl SeriesReport {
    pub fn total(&self) -> Option<&Float> {
        self.blocks.last().map(|b| &b.exact_cumsum)
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// The `dyadic-tail-v1` rule on block sums `(k, log2 b_k)` with `b_k > 0`.
fn decide(blocks: &[BlockRow]) -> (Option<f64>, Option<f64>, bool, SeriesVerdict) {
    if blocks.iter().all(|b| b.exact_block.is_zero()) {
        return (None, None, true, SeriesVerdict::ConvergesEvidence);
    }
    if blocks.len() < MIN_BLOCKS {
        return (None, None, false, SeriesVerdict::Inconclusive);
    }
    let tail = &blocks[blocks.len().saturating_sub(VERDICT_BLOCKS)..];
    let positive: Vec<&BlockRow> = tail.iter().filter(|b| !b.exact_block.is_zero()).collect();
    if positive.is_empty() {
        return (None, None, false, SeriesVerdict::ConvergesEvidence);
    }
    if positive.len() < MIN_BLOCKS {
        return (None, None, false, SeriesVerdict::Inconclusive);
    }
    let ks: Vec<f64> = positive.iter().map(|b| b.k as f64).collect();
    let l2: Vec<f64> = positive.iter().map(|b| log2_float(&b.exact_block)).collect();
    let g = slope(&ks, &l2);
    let lnk: Vec<f64> = ks.iter().map(|k| k.max(1.0).ln()).collect();
    let lnb: Vec<f64> = l2.iter().map(|l| l * std::f64::consts::LN_2).collect();
    let p = -slope(&lnk, &lnb);
    let verdict = if g <= DECAY_RATIO.log2() {
        SeriesVerdict::ConvergesEvidence
    } else if g >= 0.0 || p <= 1.0 {
        SeriesVerdict::DivergesEvidence
    } else if p >= CONVERGENT_EXPONENT {
        SeriesVerdict::ConvergesEvidence
    } else {
        SeriesVerdict::Inconclusive
    };
    (Some(g), Some(p), false, verdict)
}

fn block_rows(spec: &SeriesSpec) -> Result<Vec<BlockRow>> {
    let (first, last) = block_range(spec)?;
    let sums: Vec<Result<Float>> = (first..=last)
        .into_par_iter()
        .map(|k| block_sum(spec, k))
        .collect();
    let mut cum = Float::new(spec.work_prec());
    let mut rows = Vec::with_capacity(sums.len());
    for (k, s) in (first..=last).zip(sums) {
        let s = s?;
        cum += &s;
        rows.push(BlockRow {
            k,
            block: s.to_f64(),
            cumsum: cum.to_f64(),
            exact_block: s,
            exact_cumsum: cum.clone(),
        });
    }
    Ok(rows)
}

pub fn eval_series(spec: &SeriesSpec) -> Result<SeriesReport> {
    spec.validate()?;
    let blocks = block_rows(spec)?;
    let (g, p, trivially_zero, verdict) = decide(&blocks);
    Ok(SeriesReport {
        kind: spec.kind,
        f: spec.f.as_ref().map(|f| f.to_string()),
        aux: spec.aux.to_string(),
        cutoff: spec.cutoff,
        blocks,
        geometric_slope: g,
        doubling_exponent: p,
        trivially_zero,
        verdict,
        rule: VERDICT_RULE,
    })
}

/// Contributions grouped by dyadic scale `m`: for the main series the term
/// `(k, j)` sits at `m = k + j` (the substitution `R = QA`); for q-series
/// block `k` sits at `m = k`. Only complete scales are returned.
pub fn scale_sums(spec: &SeriesSpec) -> Result<BTreeMap<u64, Float>> {
    spec.validate()?;
    let (first, last) = block_range(spec)?;
    let prec = spec.work_prec();
    let mut out: BTreeMap<u64, Float> = BTreeMap::new();
    match spec.kind {
        SeriesKind::Main => {
            for k in first..=last {
                visit_block(spec, k, &mut |row| {
                    let m = row.index + row.inner.unwrap_or(0);
                    *out.entry(m).or_insert_with(|| Float::new(prec)) += &row.term;
                })?;
            }
            // scale m also needs blocks k <= m; k ranges up to `last`.
            out.retain(|&m, _| m <= last);
        }
        _ => {
            for row in block_rows(spec)? {
                out.insert(row.k, row.exact_block);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioVerdict {
    BoundedEvidence,
    UnboundedEvidence,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub a: String,
    pub b: String,
    pub window: (u64, u64),
    /// `(m, A_m / B_m)`.
    pub ratios: Vec<(u64, f64)>,
    pub band: f64,
    pub growth: f64,
    pub loglog_slope: f64,
    pub bound: f64,
    pub verdict: RatioVerdict,
    pub rule: &'static str,
}

/// Ratio trajectory of per-scale sums over `window`. Bounded evidence needs
/// `max r / min r <= bound` and a log-log slope of `r` against `m` below
/// [`RATIO_SLOPE_LIMIT`].
pub fn compare_series(a: &SeriesSpec, b: &SeriesSpec, window: (u64, u64), bound: f64) -> Result<CompareReport> {
    let (lo, hi) = window;
    if lo < 1 || hi < lo + 1 {
        return Err(Error::Config(format!("window [{lo}, {hi}] must span at least two scales")));
    }
    let sa = scale_sums(a)?;
    let sb = scale_sums(b)?;
    let mut ratios = Vec::new();
    for m in lo..=hi {
        let (Some(x), Some(y)) = (sa.get(&m), sb.get(&m)) else {
            return Err(Error::Config(format!("scale {m} is outside the cutoff of a compared series")));
        };
        if y.is_zero() {
            return Err(Error::ZeroPartialSum { block: m as u32 });
        }
        ratios.push((m, Float::with_val(x.prec(), x / y).to_f64()));
    }
    let values: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let band = band(&values);
    let growth = values[values.len() - 1] / values[0];
    let lm: Vec<f64> = ratios.iter().map(|r| (r.0 as f64).ln()).collect();
    let lr: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let loglog_slope = slope(&lm, &lr);
    let verdict = if band <= bound && loglog_slope.abs() < RATIO_SLOPE_LIMIT {
        RatioVerdict::BoundedEvidence
    } else {
        RatioVerdict::UnboundedEvidence
    };
    Ok(CompareReport {
        a: describe(a),
        b: describe(b),
        window,
        ratios,
        band,
        growth,
        loglog_slope,
        bound,
        verdict,
        rule: COMPARE_RULE,
    })
}

pub fn describe(spec: &SeriesSpec) -> String {
    match &spec.f {
        Some(f) => format!("{} f={} Psi={}", spec.kind, f, spec.aux),
        None => format!("{} Psi={}", spec.kind, spec.aux),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Option<DimensionFunction> {
        Some(s.parse().unwrap())
    }

    fn aux(s: &str) -> AuxiliaryFn {
        s.parse().unwrap()
    }

    #[test]
    fn main_with_constant_one_is_trivially_zero() {
        let spec = SeriesSpec::blocks(SeriesKind::Main, f("power:0.5"), aux("const:1"), 20);
        assert!(condensation_terms(&spec).unwrap().is_empty());
        let r = eval_series(&spec).unwrap();
        assert!(r.trivially_zero);
        assert_eq!(r.verdict, SeriesVerdict::ConvergesEvidence);
    }

    #[test]
    fn main_inner_range_is_strict() {
        let mut spec = SeriesSpec::blocks(SeriesKind::Main, f("power:0.5"), aux("pow:1"), 3);
        spec.start = Some(3);
        let js: Vec<u64> = condensation_terms(&spec)
            .unwrap()
            .iter()
            .map(|r| r.inner.unwrap())
            .collect();
        assert_eq!(js, vec![0, 1, 2]);
    }

    #[test]
    fn kw_term_matches_direct_evaluation() {
        // q = 15 ~ e^e
        let mut spec = SeriesSpec::new(SeriesKind::Kw, None, aux("logpow:1"), Cutoff::Terms(15));
        spec.start = Some(15);
        let rows = condensation_terms(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        let q = 15f64;
        let expect = q.ln().ln() / (q * q.ln());
        assert!((rows[0].term.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn default_start_skips_psi_below_one() {
        let spec = SeriesSpec::blocks(SeriesKind::Kw, None, aux("logpow:1"), 10);
        let r = eval_series(&spec).unwrap();
        assert_eq!(r.blocks[0].k, 2);
    }

    #[test]
    fn power_family_verdicts() {
        let below = SeriesSpec::blocks(SeriesKind::Main, f("power:0.4"), aux("pow:2"), 40);
        assert_eq!(eval_series(&below).unwrap().verdict, SeriesVerdict::DivergesEvidence);
        let above = SeriesSpec::blocks(SeriesKind::Main, f("power:0.6"), aux("pow:2"), 40);
        assert_eq!(eval_series(&above).unwrap().verdict, SeriesVerdict::ConvergesEvidence);
    }

    #[test]
    fn direct_and_condensed_pq_agree_on_verdict() {
        let direct = SeriesSpec::new(SeriesKind::Pq(PRange::Full), f("power:0.9"), aux("pow:1"), Cutoff::Terms(1 << 10));
        let condensed = SeriesSpec::blocks(SeriesKind::Pq(PRange::Full), f("power:0.9"), aux("pow:1"), 30);
        assert_eq!(eval_series(&direct).unwrap().verdict, SeriesVerdict::ConvergesEvidence);
        assert_eq!(eval_series(&condensed).unwrap().verdict, SeriesVerdict::ConvergesEvidence);
    }

    #[test]
    fn caps_enforced() {
        let spec = SeriesSpec::new(SeriesKind::Jarnik, f("power:0.5"), aux("pow:1"), Cutoff::Terms(MAX_DIRECT_Q + 1));
        assert!(matches!(eval_series(&spec), Err(Error::CapExceeded { .. })));
        let main = SeriesSpec::new(SeriesKind::Main, f("power:0.5"), aux("pow:1"), Cutoff::Terms(100));
        assert!(eval_series(&main).is_err());
    }
}
