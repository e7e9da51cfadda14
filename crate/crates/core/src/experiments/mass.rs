//! Mass distribution on the sets `S_{omega a} = u_{omega a}([0, a / Psi(Q_omega a)])`
//! and an exact audit of the Frostman-type bound.
//!
//! Bucket `(k, l)` holds the pairs with `2^k <= Q_omega < 2^{k+1}`,
//! `2^l <= a < 2^{l+1}` and `a <= Psi(Q_omega)`. Every admissible pair gets mass
//! `f(rho_{k,l}) / Omega`, spread uniformly over `S_{omega a}`.
//!
//! Bucket weights are `f(rho)` rounded to integers at a common binary scale,
//! so `Omega`, the total mass and every `mu(B)` are exact rationals.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::gifs::{GifsWord, DEFAULT_Q_CAP};
use crate::approx::AuxiliaryFn;
use crate::dimfun::DimensionFunction;
use crate::error::{Error, Result};
use crate::precision::DEFAULT_PRECISION;

/// Significant bits kept in the smallest bucket weight.
pub const WEIGHT_BITS: i32 = 64;
/// Words whose interval straddles `B_0` test at most this many symbols one by one.
pub const MAX_EXPLICIT_SYMBOLS: u64 = 1 << 20;
/// Default number of dyadic ball scales in the audit.
pub const DEFAULT_SCALES: u32 = 6;

#[derive(Debug, Clone, Copy)]
struct Node {
    p: u64,
    p_prev: u64,
    q: u64,
    q_prev: u64,
    child_start: usize,
    child_count: u64,
}

impl Node {
    fn word(&self) -> GifsWord {
        GifsWord {
            word: Vec::new(),
            q: self.q,
            q_prev: self.q_prev,
            p: self.p,
            p_prev: self.p_prev,
        }
    }

    /// Preimage of `x` under `u_omega`.
    fn inverse(&self, x: &Rational) -> Rational {
        let num = Rational::from(x * self.q) - self.p;
        let den = Rational::from(x * self.q_prev) - self.p_prev;
        -(num / den)
    }
}

#[derive(Debug, Clone)]
enum Admissible {
    All,
    None,
    /// Sorted symbols `a` with `S_{omega a}` inside `B_0`.
    Some(Vec<u64>),
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketRow {
    pub k: u32,
    pub l: u32,
    /// `#A_{k,l}`.
    pub count: u64,
    /// `#A'_{k,l}`: pairs with `S_{omega a}` inside `B_0`.
    pub admissible: u64,
    pub rho: f64,
    pub f_rho: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimSummary {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `max_ratio / min_ratio` over buckets with `#A > 0`.
    pub band: f64,
    /// Fitted `c` in `#A' >= c #A |B_0|`.
    pub c_fit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub ball_center: f64,
    pub radius: f64,
    pub mu: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub balls: usize,
    pub scales: Vec<f64>,
    pub seed: u64,
    pub target: f64,
    pub rows: Vec<AuditRow>,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassCheckReport {
    pub b0: (String, String),
    pub n0: u32,
    pub n1: u32,
    pub q_max: u64,
    pub words: usize,
    pub omega: f64,
    pub target: f64,
    pub omega_meets_target: bool,
    pub total_mass_is_one: bool,
    pub buckets: Vec<BucketRow>,
    pub claim: Option<ClaimSummary>,
}

pub struct MassDistribution {
    aux: AuxiliaryFn,
    f: DimensionFunction,
    b0: (Rational, Rational),
    n0: u32,
    n1: u32,
    q_max: u64,
    target: f64,
    nodes: Vec<Node>,
    admissible: Vec<Admissible>,
    /// Largest symbol `a` with `a <= Psi(Q)`, zero outside the bucket range.
    symbol_cap: Vec<u64>,
    /// `prefix[i]` is the scaled subtree mass of nodes `0..i`.
    prefix: Vec<Integer>,
    buckets: BTreeMap<(u32, u32), BucketRow>,
    weights: BTreeMap<(u32, u32), Integer>,
    scale_bits: i32,
    omega_scaled: Integer,
}

fn ilog2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

fn floor_certified(aux: &AuxiliaryFn, q: u64) -> Result<u64> {
    let e = aux.enclose(&Integer::from(q), DEFAULT_PRECISION)?;
    let lo = e.lo.to_integer_round(Round::Down).map(|(i, _)| i);
    let hi = e.hi.to_integer_round(Round::Down).map(|(i, _)| i);
    match (lo, hi) {
        (Some(lo), Some(hi)) if lo == hi => {
            if lo < 0 {
                Ok(0)
            } else {
                lo.to_u64().ok_or_else(|| Error::CapExceeded {
                    what: format!("Psi({q})"),
                    cap: u64::MAX.to_string(),
                })
            }
        }
        _ => Err(Error::Degenerate(format!("floor of Psi({q}) is not certified"))),
    }
}

fn psi_rational(aux: &AuxiliaryFn, q: &Integer) -> Result<Rational> {
    let e = aux.enclose(q, DEFAULT_PRECISION)?;
    let v = if e.is_exact() { e.lo.clone() } else { e.midpoint() };
    v.to_rational()
        .filter(|r| *r > 0)
        .ok_or_else(|| Error::domain("Psi", q))
}

fn overlap(a: &(Rational, Rational), b: (&Rational, &Rational)) -> Rational {
    let lo = if a.0 > *b.0 { &a.0 } else { b.0 };
    let hi = if a.1 < *b.1 { &a.1 } else { b.1 };
    if hi > lo {
        Rational::from(hi - lo)
    } else {
        Rational::new()
    }
}

impl MassDistribution {
    fn bucket_of(&self, node: &Node) -> Option<u32> {
        let k = ilog2(node.q);
        (self.n0..=self.n1).contains(&k).then_some(k)
    }

    /// `S_{omega a}` as a sorted pair of endpoints.
    fn support(aux: &AuxiliaryFn, node: &Node, a: u64) -> Result<(Rational, Rational)> {
        let psi = psi_rational(aux, &Integer::from(node.q * a))?;
        let t = Rational::from(a) / psi;
        let w = node.word();
        let x1 = w.apply(&Rational::from((1, a)));
        let x2 = w.apply(&(Rational::from(1) / (t + a)));
        Ok(if x1 <= x2 { (x1, x2) } else { (x2, x1) })
    }

    fn weight(&self, k: u32, a: u64) -> &Integer {
        &self.weights[&(k, ilog2(a))]
    }

    /// Scaled mass of own pairs with symbols in `lo..=hi`.
    fn own_range(&self, i: usize, lo: u64, hi: u64) -> Integer {
        let node = &self.nodes[i];
        let Some(k) = self.bucket_of(node) else {
            return Integer::new();
        };
        let hi = hi.min(self.symbol_cap[i]);
        let lo = lo.max(1);
        let mut total = Integer::new();
        if lo > hi {
            return total;
        }
        match &self.admissible[i] {
            Admissible::None => {}
            Admissible::All => {
                for l in ilog2(lo)..=ilog2(hi) {
                    let from = lo.max(1 << l);
                    let to = hi.min((1u64 << (l + 1)) - 1);
                    if from <= to {
                        total += Integer::from(&self.weights[&(k, l)] * (to - from + 1));
                    }
                }
            }
            Admissible::Some(list) => {
                let start = list.partition_point(|&a| a < lo);
                for &a in list[start..].iter().take_while(|&&a| a <= hi) {
                    total += self.weight(k, a);
                }
            }
        }
        total
    }

    fn subtree(&self, from: usize, to: usize) -> Integer {
        Integer::from(&self.prefix[to] - &self.prefix[from])
    }

    fn pair_admissible(&self, i: usize, a: u64) -> bool {
        a >= 1
            && a <= self.symbol_cap[i]
            && match &self.admissible[i] {
                Admissible::All => true,
                Admissible::None => false,
                Admissible::Some(list) => list.binary_search(&a).is_ok(),
            }
    }

    /// Scaled mass of `[lo, hi]` restricted to the subtree of node `i`.
    fn mass_in(&self, i: usize, lo: &Rational, hi: &Rational) -> Result<Rational> {
        let node = &self.nodes[i];
        let (l, r) = node.word().interval();
        if r <= *lo || l >= *hi {
            return Ok(Rational::new());
        }
        if *lo <= l && r <= *hi {
            return Ok(Rational::from(self.subtree(i, i + 1)));
        }
        let xa = if *lo > l { lo.clone() } else { l };
        let xb = if *hi < r { hi.clone() } else { r };
        let (ya, yb) = (node.inverse(&xa), node.inverse(&xb));
        let (y1, y2) = if ya <= yb { (ya, yb) } else { (yb, ya) };
        // Largest symbol whose child interval holds `y`; saturates as `y -> 0`.
        let symbol_at = |y: &Rational| -> u64 {
            if *y == 0 {
                u64::MAX
            } else {
                Integer::from(Rational::from(y.recip_ref()).floor_ref())
                    .to_u64()
                    .unwrap_or(u64::MAX)
                    .max(1)
            }
        };
        let near = symbol_at(&y2);
        let far = symbol_at(&y1);
        let mut total = Rational::new();
        if near < far.saturating_sub(1) {
            let full_hi = if far == u64::MAX { u64::MAX } else { far - 1 };
            total += Rational::from(self.own_range(i, near + 1, full_hi));
            let last = full_hi.min(node.child_count);
            if near < last {
                let s = node.child_start;
                total += Rational::from(self.subtree(s + near as usize, s + last as usize));
            }
        }
        let mut partial = vec![near];
        if far != near && far != u64::MAX {
            partial.push(far);
        }
        let k = self.bucket_of(node);
        for a in partial {
            if let Some(k) = k {
                if self.pair_admissible(i, a) {
                    let s = Self::support(&self.aux, node, a)?;
                    let len = Rational::from(&s.1 - &s.0);
                    let cut = overlap(&s, (lo, hi));
                    total += cut / len * Rational::from(self.weight(k, a));
                }
            }
            if a >= 1 && a <= node.child_count {
                total += self.mass_in(node.child_start + a as usize - 1, lo, hi)?;
            }
        }
        Ok(total)
    }

    /// `mu([lo, hi])`, exact.
    pub fn mu(&self, lo: &Rational, hi: &Rational) -> Result<Rational> {
        if hi <= lo {
            return Ok(Rational::new());
        }
        Ok(self.mass_in(0, lo, hi)? / Rational::from(&self.omega_scaled))
    }

    pub fn total_mass(&self) -> Rational {
        Rational::from((self.subtree(0, 1), self.omega_scaled.clone()))
    }

    /// `Omega = sum #A'_{k,l} f(rho_{k,l})` with the rounded weights.
    pub fn omega(&self) -> Rational {
        Rational::from(&self.omega_scaled) >> self.scale_bits
    }

    pub fn buckets(&self) -> impl Iterator<Item = &BucketRow> {
        self.buckets.values()
    }

    pub fn b0(&self) -> &(Rational, Rational) {
        &self.b0
    }

    pub fn dimension_fn(&self) -> &DimensionFunction {
        &self.f
    }

    pub fn word_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Smallest `rho_{k,l}` over occupied buckets.
    pub fn min_rho(&self) -> f64 {
        self.buckets.values().map(|b| b.rho).fold(f64::INFINITY, f64::min)
    }

    pub fn claim(&self) -> Option<ClaimSummary> {
        let ratios: Vec<f64> = self
            .buckets
            .values()
            .filter(|b| b.count > 0)
            .map(|b| b.admissible as f64 / b.count as f64)
            .collect();
        if ratios.is_empty() {
            return None;
        }
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(0.0, f64::max);
        let width = Rational::from(&self.b0.1 - &self.b0.0).to_f64();
        Some(ClaimSummary {
            min_ratio: min,
            max_ratio: max,
            band: if min > 0.0 { max / min } else { f64::INFINITY },
            c_fit: min / width,
        })
    }

    pub fn report(&self) -> MassCheckReport {
        let omega = self.omega().to_f64();
        MassCheckReport {
            b0: (self.b0.0.to_string(), self.b0.1.to_string()),
            n0: self.n0,
            n1: self.n1,
            q_max: self.q_max,
            words: self.word_count(),
            omega,
            target: self.target,
            omega_meets_target: omega >= self.target,
            total_mass_is_one: self.total_mass() == 1,
            buckets: self.buckets.values().cloned().collect(),
            claim: self.claim(),
        }
    }
}

/// Builds the buckets for `N0 <= k <= N1` over all words with
/// `Q_omega < 2^{N1+1}`.
pub fn build_mass_distribution(
    aux: &AuxiliaryFn,
    f: &DimensionFunction,
    b0: (Rational, Rational),
    n0: u32,
    n1: u32,
    target: f64,
) -> Result<MassDistribution> {
    build_mass_distribution_with_cap(aux, f, b0, n0, n1, target, DEFAULT_Q_CAP)
}

pub fn build_mass_distribution_with_cap(
    aux: &AuxiliaryFn,
    f: &DimensionFunction,
    b0: (Rational, Rational),
    n0: u32,
    n1: u32,
    target: f64,
    cap: u64,
) -> Result<MassDistribution> {
    if !(b0.0 >= 0 && b0.1 <= 1 && b0.0 < b0.1) {
        return Err(Error::Config(format!("B0 = [{}, {}] must be a nondegenerate subinterval of [0, 1]", b0.0, b0.1)));
    }
    if n0 > n1 || n1 >= 62 {
        return Err(Error::Config(format!("need N0 <= N1 < 62, got {n0}, {n1}")));
    }
    let q_max = (1u64 << (n1 + 1)) - 1;
    if q_max > cap {
        return Err(Error::CapExceeded {
            what: format!("Q_max = 2^{} - 1", n1 + 1),
            cap: cap.to_string(),
        });
    }

    let mut nodes = vec![Node {
        p: 0,
        p_prev: 1,
        q: 1,
        q_prev: 0,
        child_start: 0,
        child_count: 0,
    }];
    let mut i = 0;
    while i < nodes.len() {
        let w = nodes[i].word();
        let count = w.max_symbol(q_max);
        nodes[i].child_start = nodes.len();
        nodes[i].child_count = count;
        for b in 1..=count {
            let c = w.extend(b).expect("bounded by q_max");
            nodes.push(Node {
                p: c.p,
                p_prev: c.p_prev,
                q: c.q,
                q_prev: c.q_prev,
                child_start: 0,
                child_count: 0,
            });
        }
        i += 1;
    }

    let mut symbol_cap = vec![0u64; nodes.len()];
    let mut admissible = vec![Admissible::None; nodes.len()];
    let mut counts: BTreeMap<(u32, u32), (u64, u64)> = BTreeMap::new();
    let mut psi_floor: BTreeMap<u64, u64> = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        let k = ilog2(node.q);
        if !(n0..=n1).contains(&k) {
            continue;
        }
        let cap_a = match psi_floor.get(&node.q) {
            Some(&v) => v,
            None => {
                let v = floor_certified(aux, node.q)?;
                psi_floor.insert(node.q, v);
                v
            }
        };
        symbol_cap[i] = cap_a;
        if cap_a == 0 {
            continue;
        }
        let (l, r) = node.word().interval();
        admissible[i] = if b0.0 <= l && r <= b0.1 {
            Admissible::All
        } else if r <= b0.0 || l >= b0.1 {
            Admissible::None
        } else {
            if cap_a > MAX_EXPLICIT_SYMBOLS {
                return Err(Error::CapExceeded {
                    what: format!("symbols under Psi({})", node.q),
                    cap: MAX_EXPLICIT_SYMBOLS.to_string(),
                });
            }
            let mut list = Vec::new();
            for a in 1..=cap_a {
                let s = MassDistribution::support(aux, node, a)?;
                if b0.0 <= s.0 && s.1 <= b0.1 {
                    list.push(a);
                }
            }
            Admissible::Some(list)
        };
        for l in 0..=ilog2(cap_a) {
            let from = 1u64 << l;
            let to = cap_a.min((1u64 << (l + 1)) - 1);
            let all = to - from + 1;
            let adm = match &admissible[i] {
                Admissible::All => all,
                Admissible::None => 0,
                Admissible::Some(list) => list.iter().filter(|&&a| a >= from && a <= to).count() as u64,
            };
            let e = counts.entry((k, l)).or_insert((0, 0));
            e.0 += all;
            e.1 += adm;
        }
    }

    let prec = DEFAULT_PRECISION;
    let mut f_values = BTreeMap::new();
    let mut min_exp = i32::MAX;
    for &(k, l) in counts.keys() {
        let q = Float::with_val(prec, Float::u_exp(1, (k + l) as i32));
        let psi = aux.eval(&q)?;
        if psi.is_sign_negative() || psi.is_zero() {
            return Err(Error::domain("Psi", format!("2^{}", k + l)));
        }
        let rho = Float::with_val(prec, Float::u_exp(1, -((2 * k + l) as i32))) / psi;
        let fr = f.eval(&rho)?;
        if fr.is_zero() || fr.is_sign_negative() {
            return Err(Error::domain("f", rho.to_f64()));
        }
        min_exp = min_exp.min(fr.get_exp().unwrap_or(0));
        f_values.insert((k, l), (rho, fr));
    }
    let scale_bits = WEIGHT_BITS + 1 - min_exp.min(i32::MAX - WEIGHT_BITS - 1);
    let mut weights = BTreeMap::new();
    let mut buckets = BTreeMap::new();
    let mut omega_scaled = Integer::new();
    for (&key, (rho, fr)) in &f_values {
        let scaled = Float::with_val(prec, fr << scale_bits);
        let w = scaled.to_integer_round(Round::Nearest).expect("finite").0;
        let (count, adm) = counts[&key];
        omega_scaled += Integer::from(&w * adm);
        weights.insert(key, w);
        buckets.insert(
            key,
            BucketRow {
                k: key.0,
                l: key.1,
                count,
                admissible: adm,
                rho: rho.to_f64(),
                f_rho: fr.to_f64(),
            },
        );
    }
    if omega_scaled == 0 {
        return Err(Error::Degenerate("no admissible pairs: Omega = 0".into()));
    }

    let mut dist = MassDistribution {
        aux: aux.clone(),
        f: f.clone(),
        b0,
        n0,
        n1,
        q_max,
        target,
        nodes,
        admissible,
        symbol_cap,
        prefix: Vec::new(),
        buckets,
        weights,
        scale_bits,
        omega_scaled,
    };
    let n = dist.nodes.len();
    let mut subtree = vec![Integer::new(); n];
    for i in (0..n).rev() {
        let node = dist.nodes[i];
        let mut m = dist.own_range(i, 1, u64::MAX);
        for child in &subtree[node.child_start..node.child_start + node.child_count as usize] {
            m += child;
        }
        subtree[i] = m;
    }
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = Integer::new();
    prefix.push(acc.clone());
    for m in subtree {
        acc += m;
        prefix.push(acc.clone());
    }
    dist.prefix = prefix;
    Ok(dist)
}

/// Ball diameters `|B_0| 2^{-e_i}` for `scales` exponents spread evenly from 0
/// to `log2(|B_0| / min_rho)`.
pub fn ball_scales(dist: &MassDistribution, scales: u32) -> Vec<Rational> {
    let width = Rational::from(&dist.b0.1 - &dist.b0.0);
    let span = (width.to_f64() / dist.min_rho()).log2().max(0.0);
    let steps = scales.max(1);
    (0..steps)
        .map(|i| {
            let e = if steps == 1 {
                0
            } else {
                (span * f64::from(i) / f64::from(steps - 1)).round() as u32
            };
            Rational::from(&width >> e)
        })
        .collect()
}

/// Audits `mu(B) <= bound(B) = max(diam B / diam B_0, f(diam B) / C)` on
/// `balls` intervals, cycling through the dyadic scales with uniform centres
/// in `B_0`.
pub fn audit_frostman(dist: &MassDistribution, target: f64, balls: usize, scales: u32, seed: u64) -> Result<AuditReport> {
    if target.is_nan() || target <= 0.0 {
        return Err(Error::Config(format!("target C must be > 0, got {target}")));
    }
    let diams = ball_scales(dist, scales);
    let (lo, hi) = dist.b0.clone();
    let width = Rational::from(&hi - &lo);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<(Rational, Rational)> = (0..balls)
        .map(|i| {
            let u = Rational::from(rng.random::<u64>() >> 11) >> 53;
            let centre = &lo + &width * u;
            (centre, diams[i % diams.len()].clone())
        })
        .collect();
    let f = &dist.f;
    let rows: Result<Vec<AuditRow>> = specs
        .par_iter()
        .map(|(c, d)| {
            let half = Rational::from(d / 2u32);
            let mu = dist.mu(&Rational::from(c - &half), &Rational::from(c + &half))?;
            let diam = Float::with_val(DEFAULT_PRECISION, d);
            let geometric = Rational::from(d / &width).to_f64();
            let fd = f.eval(&diam)?.to_f64() / target;
            let bound = geometric.max(fd);
            let mu = mu.to_f64();
            Ok(AuditRow {
                ball_center: c.to_f64(),
                radius: half.to_f64(),
                mu,
                bound,
                ratio: mu / bound,
            })
        })
        .collect();
    let rows = rows?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(AuditReport {
        balls,
        scales: diams.iter().map(Rational::to_f64).collect(),
        seed,
        target,
        rows,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(b0: (Rational, Rational)) -> MassDistribution {
        let aux: AuxiliaryFn = "pow:1".parse().unwrap();
        let f: DimensionFunction = "power:2/3".parse().unwrap();
        build_mass_distribution(&aux, &f, b0, 2, 4, 1.0).unwrap()
    }

    fn unit() -> (Rational, Rational) {
        (Rational::new(), Rational::from(1))
    }

    #[test]
    fn probability_measure() {
        let d = small(unit());
        assert_eq!(d.total_mass(), 1);
        assert_eq!(d.mu(&Rational::new(), &Rational::from(1)).unwrap(), 1);
    }

    #[test]
    fn dyadic_partition_is_additive() {
        let d = small(unit());
        let m = 7;
        let mut sum = Rational::new();
        for i in 0..(1u32 << m) {
            let lo = Rational::from((i, 1u32 << m));
            let hi = Rational::from((i + 1, 1u32 << m));
            sum += d.mu(&lo, &hi).unwrap();
        }
        assert_eq!(sum, 1);
    }

    #[test]
    fn subinterval_base() {
        let d = small((Rational::from((1, 3)), Rational::from((3, 4))));
        assert_eq!(d.total_mass(), 1);
        assert_eq!(d.mu(&Rational::new(), &Rational::from((1, 3))).unwrap(), 0);
        assert_eq!(d.mu(&Rational::from((3, 4)), &Rational::from(1)).unwrap(), 0);
        assert!(d.claim().unwrap().max_ratio <= 1.0);
    }

    #[test]
    fn full_ball_ratio_at_most_one() {
        let d = small(unit());
        let a = audit_frostman(&d, 1.0, 12, 6, 7).unwrap();
        assert!(a.max_ratio.is_finite());
        assert_eq!(a.scales[0], 1.0);
    }
}
