//! Approximating functions `psi`, the auxiliary `Psi(t) = t psi(t) / (1 - t psi(t))`,
//! and sampled checks of their hypotheses.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::float::Round;
use rug::ops::{Pow, PowAssignRound};
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::dimfun::rational_literal;
use crate::error::{Error, Result};
use crate::precision::{
    float_from_integer, float_from_rational, ln_integer, log2_float, parse_exact, Enclosure,
    DEFAULT_PRECISION, GUARD_BITS,
};
use crate::probe::{tail, Condition, ProbeReport, Trajectory, Verdict, MARGIN, TAIL_POINTS};

type Evaluator = dyn Fn(&Float) -> Option<Float> + Send + Sync;

/// Default domain start for pairs built from the mini-language.
pub const DEFAULT_T0: u32 = 3;

/// Flags are sampled at `t0 * 2^(i/4)` up to this power of two.
pub const FLAG_GRID_LOG2_MAX: u32 = 40;

#[derive(Clone)]
pub enum PsiFamily {
    /// `c / t`.
    Reciprocal(Rational),
    /// `1 / (t + h)`.
    Shifted(Rational),
    /// `t psi(t) = 1 - 1 / log t`.
    LogDeficit,
    /// `Psi / (t (1 + Psi))`.
    FromAux(Box<AuxiliaryFn>),
    Custom { label: String, f: Arc<Evaluator> },
}

/// A non-increasing approximating function `psi`.
#[derive(Clone)]
pub struct ApproximatingFn {
    family: PsiFamily,
}

impl ApproximatingFn {
    pub fn new(family: PsiFamily) -> Result<Self> {
        match &family {
            PsiFamily::Reciprocal(c) if *c <= 0 => {
                return Err(Error::InvalidPair(format!("psi = {}/t needs a positive constant", c)))
            }
            PsiFamily::Shifted(h) if *h < 0 => {
                return Err(Error::InvalidPair(format!("psi = 1/(t+{h}) needs h >= 0")))
            }
            _ => {}
        }
        Ok(ApproximatingFn { family })
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(&Float) -> Option<Float> + Send + Sync + 'static) -> Self {
        ApproximatingFn {
            family: PsiFamily::Custom {
                label: label.into(),
                f: Arc::new(f),
            },
        }
    }

    pub fn family(&self) -> &PsiFamily {
        &self.family
    }

    /// `psi(t)` at the precision of `t`.
    pub fn eval(&self, t: &Float) -> Result<Float> {
        let prec = t.prec();
        let undefined = || Error::domain(format!("psi = {self}"), format!("{:.6e}", t.to_f64()));
        if *t <= 0 {
            return Err(undefined());
        }
        let v = match &self.family {
            PsiFamily::Reciprocal(c) => Float::with_val(prec, c / t),
            PsiFamily::Shifted(h) => Float::with_val(prec, t + h).recip(),
            PsiFamily::LogDeficit => {
                let l = Float::with_val(prec, t.ln_ref());
                if l <= 1 {
                    return Err(undefined());
                }
                let u = Float::with_val(prec, 1) - l.recip();
                u / t
            }
            PsiFamily::FromAux(aux) => {
                let tt = Float::with_val(prec + GUARD_BITS, t);
                let big = aux.eval(&tt)?;
                if big <= 0 {
                    return Err(undefined());
                }
                let den = Float::with_val(prec + GUARD_BITS, &big + 1u32) * &tt;
                Float::with_val(prec, big / den)
            }
            PsiFamily::Custom { f, .. } => f(t).ok_or_else(undefined)?,
        };
        if !v.is_finite() {
            return Err(undefined());
        }
        Ok(v)
    }
}

impl fmt::Display for ApproximatingFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            PsiFamily::Reciprocal(c) => write!(f, "recip:{}", rational_literal(c)),
            PsiFamily::Shifted(h) => write!(f, "shift:{}", rational_literal(h)),
            PsiFamily::LogDeficit => f.write_str("logdeficit"),
            PsiFamily::FromAux(aux) => write!(f, "from-Psi({aux})"),
            PsiFamily::Custom { label, .. } => write!(f, "custom:{label}"),
        }
    }
}

impl fmt::Debug for ApproximatingFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ApproximatingFn({self})")
    }
}

/// Parses `recip:c` (`c/t`), `shift:h` (`1/(t+h)`) and `logdeficit`.
impl FromStr for ApproximatingFn {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if s == "logdeficit" {
            return Self::new(PsiFamily::LogDeficit);
        }
        let (name, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::parse("psi", input, "expected recip:c, shift:h or logdeficit"))?;
        match name {
            "recip" => Self::new(PsiFamily::Reciprocal(parse_exact(arg)?)),
            "shift" => Self::new(PsiFamily::Shifted(parse_exact(arg)?)),
            _ => Err(Error::parse("psi", input, "unknown family; expected recip, shift or logdeficit")),
        }
    }
}

#[derive(Clone)]
pub enum AuxFamily {
    /// `c`.
    Const(Rational),
    /// `(log t)^s`.
    LogPow(Rational),
    /// `t^tau`.
    Pow(Rational),
    /// `log t (log log t)^s`, defined for `log t > 1`.
    LogLogPow(Rational),
    /// `t psi(t) / (1 - t psi(t))`.
    FromPsi(Box<ApproximatingFn>),
    Custom { label: String, f: Arc<Evaluator> },
}

/// A non-decreasing auxiliary function `Psi`, optionally scaled by a
/// positive rational.
#[derive(Clone)]
pub struct AuxiliaryFn {
    family: AuxFamily,
    scale: Rational,
}

impl AuxiliaryFn {
    pub fn new(family: AuxFamily) -> Result<Self> {
        match &family {
            AuxFamily::Const(c) if *c <= 0 => {
                return Err(Error::InvalidPair(format!("constant Psi = {c} must be positive")))
            }
            AuxFamily::LogPow(s) | AuxFamily::Pow(s) if *s <= 0 => {
                return Err(Error::InvalidPair(format!("exponent {s} must be positive")))
            }
            AuxFamily::LogLogPow(s) if *s < 0 => {
                return Err(Error::InvalidPair(format!("exponent {s} must be nonnegative")))
            }
            _ => {}
        }
        Ok(AuxiliaryFn {
            family,
            scale: Rational::from(1),
        })
    }

    pub fn constant(c: u32) -> Result<Self> {
        Self::new(AuxFamily::Const(Rational::from(c)))
    }

    pub fn log_pow(s: u32) -> Result<Self> {
        Self::new(AuxFamily::LogPow(Rational::from(s)))
    }

    pub fn pow(tau: Rational) -> Result<Self> {
        Self::new(AuxFamily::Pow(tau))
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(&Float) -> Option<Float> + Send + Sync + 'static) -> Self {
        AuxiliaryFn {
            family: AuxFamily::Custom {
                label: label.into(),
                f: Arc::new(f),
            },
            scale: Rational::from(1),
        }
    }

    pub fn family(&self) -> &AuxFamily {
        &self.family
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// `c Psi` for a positive rational `c`.
    pub fn scaled(&self, c: &Rational) -> Self {
        assert!(*c > 0, "scale must be positive");
        AuxiliaryFn {
            family: self.family.clone(),
            scale: Rational::from(&self.scale * c),
        }
    }

    fn eval_unscaled(&self, t: &Float) -> Result<Float> {
        let prec = t.prec();
        let undefined = || Error::domain(format!("Psi = {self}"), format!("{:.6e}", t.to_f64()));
        if *t <= 0 {
            return Err(undefined());
        }
        let v = match &self.family {
            AuxFamily::Const(c) => Float::with_val(prec, c),
            AuxFamily::LogPow(s) => {
                let l = Float::with_val(prec, t.ln_ref());
                if l < 0 {
                    return Err(undefined());
                }
                Float::with_val(prec, l.pow(&Float::with_val(prec, s)))
            }
            AuxFamily::Pow(tau) => Float::with_val(prec, t.pow(&Float::with_val(prec, tau))),
            AuxFamily::LogLogPow(s) => {
                let l = Float::with_val(prec, t.ln_ref());
                if l <= 1 {
                    return Err(undefined());
                }
                let ll = Float::with_val(prec, l.ln_ref());
                l * ll.pow(&Float::with_val(prec, s))
            }
            AuxFamily::FromPsi(psi) => {
                let tt = Float::with_val(prec + GUARD_BITS, t);
                let u = psi.eval(&tt)? * &tt;
                if u <= 0 || u >= 1 {
                    return Err(undefined());
                }
                let den = Float::with_val(prec + GUARD_BITS, 1u32 - &u);
                Float::with_val(prec, u / den)
            }
            AuxFamily::Custom { f, .. } => f(t).ok_or_else(undefined)?,
        };
        if !v.is_finite() || v < 0 {
            return Err(undefined());
        }
        Ok(v)
    }

    /// `Psi(t)` at the precision of `t`.
    pub fn eval(&self, t: &Float) -> Result<Float> {
        let v = self.eval_unscaled(t)?;
        if self.scale == 1 {
            Ok(v)
        } else {
            Ok(v * &self.scale)
        }
    }

    /// A certified enclosure of `Psi(q)`. Built-in families use directed
    /// rounding; derived and custom functions are widened by
    /// [`Enclosure::around`] after evaluation with guard bits.
    pub fn enclose(&self, q: &Integer, prec: u32) -> Result<Enclosure> {
        let undefined = || Error::domain(format!("Psi = {self}"), q);
        if *q <= 0 {
            return Err(undefined());
        }
        let raw = match &self.family {
            AuxFamily::Const(c) => Enclosure::new(
                float_from_rational(c, prec, Round::Down),
                float_from_rational(c, prec, Round::Up),
            ),
            AuxFamily::LogPow(s) => {
                let lo = ln_integer(q, prec, Round::Down).max(&Float::new(prec)).clone();
                let hi = ln_integer(q, prec, Round::Up);
                pow_enclosure(Enclosure::new(lo, hi), s, prec)
            }
            AuxFamily::Pow(tau) => {
                let lo = float_from_integer(q, prec, Round::Down);
                let hi = float_from_integer(q, prec, Round::Up);
                pow_enclosure(Enclosure::new(lo, hi), tau, prec)
            }
            AuxFamily::LogLogPow(s) => {
                let mut lo = ln_integer(q, prec, Round::Down);
                let mut hi = ln_integer(q, prec, Round::Up);
                if lo <= 1 {
                    return Err(undefined());
                }
                let l = Enclosure::new(lo.clone(), hi.clone());
                lo.ln_round(Round::Down);
                hi.ln_round(Round::Up);
                let ll = pow_enclosure(Enclosure::new(lo, hi), s, prec);
                Enclosure::new(
                    Float::with_val_round(prec, &l.lo * &ll.lo, Round::Down).0,
                    Float::with_val_round(prec, &l.hi * &ll.hi, Round::Up).0,
                )
            }
            AuxFamily::FromPsi(_) | AuxFamily::Custom { .. } => {
                let t = Float::with_val(prec + GUARD_BITS, q);
                let v = self.eval_unscaled(&t)?;
                return Ok(scale_enclosure(Enclosure::around(Float::with_val(prec, v)), &self.scale));
            }
        };
        Ok(scale_enclosure(raw, &self.scale))
    }
}

fn scale_enclosure(e: Enclosure, c: &Rational) -> Enclosure {
    if *c == 1 {
        return e;
    }
    let prec = e.lo.prec();
    Enclosure::new(
        Float::with_val_round(prec, &e.lo * c, Round::Down).0,
        Float::with_val_round(prec, &e.hi * c, Round::Up).0,
    )
}

/// `[lo^s, hi^s]` for `0 <= lo <= hi` and `s > 0`, rounded outward. Exact
/// when `s` is an integer or a dyadic fraction; otherwise the exponent's own
/// rounding is absorbed by a relative widening.
fn pow_enclosure(base: Enclosure, s: &Rational, prec: u32) -> Enclosure {
    if let Some(n) = s.denom().eq(&1).then(|| s.numer().to_u32()).flatten() {
        let mut lo = base.lo;
        let mut hi = base.hi;
        lo.pow_assign_round(n, Round::Down);
        hi.pow_assign_round(n, Round::Up);
        return Enclosure::new(lo, hi);
    }
    let exp = Float::with_val(prec + GUARD_BITS, s);
    let mut lo = base.lo;
    let mut hi = base.hi;
    lo.pow_assign_round(&exp, Round::Down);
    hi.pow_assign_round(&exp, Round::Up);
    if exp == *s {
        return Enclosure::new(lo, hi);
    }
    let lo = Enclosure::around(lo).lo;
    let hi = Enclosure::around(hi).hi;
    Enclosure::new(lo, hi)
}

impl fmt::Display for AuxiliaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1 {
            write!(f, "{}*", rational_literal(&self.scale))?;
        }
        match &self.family {
            AuxFamily::Const(c) => write!(f, "const:{}", rational_literal(c)),
            AuxFamily::LogPow(s) => write!(f, "logpow:{}", rational_literal(s)),
            AuxFamily::Pow(t) => write!(f, "pow:{}", rational_literal(t)),
            AuxFamily::LogLogPow(s) => write!(f, "loglogpow:{}", rational_literal(s)),
            AuxFamily::FromPsi(psi) => write!(f, "from-psi({psi})"),
            AuxFamily::Custom { label, .. } => write!(f, "custom:{label}"),
        }
    }
}

impl fmt::Debug for AuxiliaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AuxiliaryFn({self})")
    }
}

/// Parses `const:c`, `logpow:s`, `pow:tau`, `loglogpow:s`, with an optional
/// positive scale prefix such as `4*logpow:1`.
impl FromStr for AuxiliaryFn {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        let (scale, body) = match s.split_once('*') {
            Some((c, body)) => (Some(parse_exact(c)?), body.trim()),
            None => (None, s),
        };
        let (name, arg) = body
            .split_once(':')
            .ok_or_else(|| Error::parse("Psi", input, "expected family:parameter"))?;
        let arg = parse_exact(arg)?;
        let aux = match name {
            "const" => Self::new(AuxFamily::Const(arg)),
            "logpow" => Self::new(AuxFamily::LogPow(arg)),
            "pow" => Self::new(AuxFamily::Pow(arg)),
            "loglogpow" => Self::new(AuxFamily::LogLogPow(arg)),
            _ => Err(Error::parse(
                "Psi",
                input,
                "unknown family; expected const, logpow, pow or loglogpow",
            )),
        }?;
        match scale {
            Some(c) if c <= 0 => Err(Error::parse("Psi", input, "scale must be positive")),
            Some(c) => Ok(aux.scaled(&c)),
            None => Ok(aux),
        }
    }
}

/// Sampled range `[from, to]` of `t` on which a property held at every grid
/// point; it always extends to the end of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifiedRange {
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairFlags {
    pub t_psi_below_one: Option<VerifiedRange>,
    pub t_psi_nondecreasing: Option<VerifiedRange>,
    pub psi_nonincreasing: Option<VerifiedRange>,
    pub aux_nondecreasing: Option<VerifiedRange>,
    pub aux_at_least_one: Option<VerifiedRange>,
}

/// Linked `(psi, Psi)` with sampled validity flags.
#[derive(Clone, Debug)]
pub struct ApproximatingPair {
    psi: ApproximatingFn,
    aux: AuxiliaryFn,
    t0: Rational,
    flags: PairFlags,
}

impl ApproximatingPair {
    pub fn psi(&self) -> &ApproximatingFn {
        &self.psi
    }

    pub fn aux(&self) -> &AuxiliaryFn {
        &self.aux
    }

    pub fn t0(&self) -> &Rational {
        &self.t0
    }

    pub fn flags(&self) -> &PairFlags {
        &self.flags
    }

    /// Parses `Psi=<aux spec>` or `psi=<psi spec>` with domain start
    /// [`DEFAULT_T0`]. A bare spec is read as `Psi`.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        let t0 = Rational::from(DEFAULT_T0);
        if let Some(rest) = s.strip_prefix("psi=") {
            psi_to_aux(rest.parse()?, t0)
        } else {
            let rest = s.strip_prefix("Psi=").unwrap_or(s);
            aux_to_psi(rest.parse()?, t0)
        }
    }

    /// Echo form accepted by [`ApproximatingPair::parse`] for built-in families.
    pub fn spec(&self) -> String {
        match (&self.psi.family, &self.aux.family) {
            (_, AuxFamily::FromPsi(psi)) => format!("psi={psi}"),
            _ => format!("Psi={}", self.aux),
        }
    }
}

impl FromStr for ApproximatingPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn flag_grid(t0: &Rational, prec: u32) -> Vec<Float> {
    let t0 = Float::with_val(prec, t0);
    let start = log2_float(&t0);
    let steps = ((f64::from(FLAG_GRID_LOG2_MAX) - start) * 4.0).floor().max(0.0) as u32;
    (0..=steps)
        .map(|i| {
            let e = Float::with_val(prec, i) / 4u32;
            Float::with_val(prec, &t0 * e.exp2())
        })
        .collect()
}

fn suffix_range(grid: &[Float], ok: &[bool]) -> Option<VerifiedRange> {
    if !*ok.last()? {
        return None;
    }
    let first = ok.iter().rposition(|b| !b).map_or(0, |i| i + 1);
    Some(VerifiedRange {
        from: grid[first].to_f64(),
        to: grid[grid.len() - 1].to_f64(),
    })
}

fn compute_flags(psi: &ApproximatingFn, aux: &AuxiliaryFn, grid: &[Float]) -> Result<PairFlags> {
    let mut psis = Vec::with_capacity(grid.len());
    let mut tpsis = Vec::with_capacity(grid.len());
    let mut auxes = Vec::with_capacity(grid.len());
    for t in grid {
        let p = psi.eval(t)?;
        tpsis.push(Float::with_val(t.prec(), &p * t));
        psis.push(p);
        auxes.push(aux.eval(t)?);
    }
    let below: Vec<bool> = tpsis.iter().map(|u| *u < 1 && *u > 0).collect();
    let rising = |v: &[Float]| -> Vec<bool> {
        (0..v.len()).map(|i| i == 0 || v[i] >= v[i - 1]).collect()
    };
    let falling: Vec<bool> = (0..psis.len()).map(|i| i == 0 || psis[i] <= psis[i - 1]).collect();
    let at_least_one: Vec<bool> = auxes.iter().map(|a| *a >= 1).collect();
    Ok(PairFlags {
        t_psi_below_one: suffix_range(grid, &below),
        t_psi_nondecreasing: suffix_range(grid, &rising(&tpsis)),
        psi_nonincreasing: suffix_range(grid, &falling),
        aux_nondecreasing: suffix_range(grid, &rising(&auxes)),
        aux_at_least_one: suffix_range(grid, &at_least_one),
    })
}

/// Derives `Psi(t) = t psi(t) / (1 - t psi(t))`; rejects `psi` when
/// `t psi(t) >= 1` at some sampled `t >= t0`.
pub fn psi_to_aux(psi: ApproximatingFn, t0: Rational) -> Result<ApproximatingPair> {
    let grid = flag_grid(&t0, DEFAULT_PRECISION);
    for t in &grid {
        let u = psi.eval(t)? * t;
        if u >= 1 || u <= 0 {
            return Err(Error::InvalidPair(format!(
                "t psi(t) = {:.6} lies outside (0, 1) at t = {:.6e}",
                u.to_f64(),
                t.to_f64()
            )));
        }
    }
    let aux = AuxiliaryFn {
        family: AuxFamily::FromPsi(Box::new(psi.clone())),
        scale: Rational::from(1),
    };
    let flags = compute_flags(&psi, &aux, &grid)?;
    Ok(ApproximatingPair { psi, aux, t0, flags })
}

/// Derives `psi(t) = Psi(t) / (t (1 + Psi(t)))`; `Psi` must be positive on
/// the sampled range.
pub fn aux_to_psi(aux: AuxiliaryFn, t0: Rational) -> Result<ApproximatingPair> {
    let grid = flag_grid(&t0, DEFAULT_PRECISION);
    for t in &grid {
        if aux.eval(t)? <= 0 {
            return Err(Error::InvalidPair(format!(
                "Psi is not positive at t = {:.6e}",
                t.to_f64()
            )));
        }
    }
    let psi = ApproximatingFn {
        family: PsiFamily::FromAux(Box::new(aux.clone())),
    };
    let flags = compute_flags(&psi, &aux, &grid)?;
    Ok(ApproximatingPair { psi, aux, t0, flags })
}

/// Default `Q`-grid for slow-growth probes: `Q = 2^(2^i)`, `i = 2..=20`.
pub fn default_q_exponents() -> Vec<u32> {
    (2..=20).collect()
}

/// For each `x`, the ratio `Psi(Q^x) / Psi(Q)` along `Q = 2^(2^i)`. Holds when
/// every band `max/min` over the last `TAIL_POINTS` values is within
/// `MARGIN`; fails when some band exceeds 2.
pub fn probe_slow_growth(aux: &AuxiliaryFn, x_grid: &[f64], q_exponents: &[u32]) -> Result<ProbeReport> {
    if x_grid.is_empty() || x_grid.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::Config("x grid must be nonempty and positive".into()));
    }
    if q_exponents.iter().any(|&i| i > 30) {
        return Err(Error::Config("Q exponents above 30 are out of range".into()));
    }
    let prec = DEFAULT_PRECISION;
    let mut trajectories = Vec::new();
    let mut worst = 1.0f64;
    for &x in x_grid {
        let mut logs = Vec::with_capacity(q_exponents.len());
        for &i in q_exponents {
            let e = Float::with_val(prec, 1u32) << i;
            let q = Float::with_val(prec, e.exp2_ref());
            let qx = Float::with_val(prec, &e * x).exp2();
            let r = aux.eval(&qx)? / aux.eval(&q)?;
            logs.push(log2_float(&r));
        }
        let t = tail(&logs, TAIL_POINTS);
        let spread = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - t.iter().cloned().fold(f64::INFINITY, f64::min);
        let band = spread.exp2();
        worst = worst.max(band);
        trajectories.push(Trajectory {
            parameter: Some(x),
            values: logs.iter().map(|l| l.exp2()).collect(),
            statistic: band,
        });
    }
    let verdict = if worst <= 1.0 + MARGIN {
        Verdict::HoldsEvidence
    } else if worst > 2.0 {
        Verdict::FailsEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(ProbeReport {
        condition: Condition::SlowGrowth,
        rule: "tail8-band-5pct",
        grid_log2: q_exponents.iter().map(|&i| (i as f64).exp2()).collect(),
        trajectories,
        verdict,
        constant: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: f64) -> Float {
        Float::with_val(DEFAULT_PRECISION, v)
    }

    fn rel_err(a: &Float, b: &Float) -> f64 {
        let d = Float::with_val(DEFAULT_PRECISION, a - b).abs();
        (d / b).to_f64()
    }

    #[test]
    fn transform_examples() {
        let half = psi_to_aux("recip:0.5".parse().unwrap(), Rational::from(1)).unwrap();
        assert!(rel_err(&half.aux().eval(&t(37.0)).unwrap(), &t(1.0)) < 1e-70);

        let shifted = psi_to_aux("shift:1".parse().unwrap(), Rational::from(1)).unwrap();
        assert!(rel_err(&shifted.aux().eval(&t(1000.0)).unwrap(), &t(1000.0)) < 1e-60);

        let deficit = psi_to_aux("logdeficit".parse().unwrap(), Rational::from(3)).unwrap();
        let v = deficit.aux().eval(&t(1e6)).unwrap();
        let expect = Float::with_val(DEFAULT_PRECISION, t(1e6).ln() - 1u32);
        assert!(rel_err(&v, &expect) < 1e-60);
    }

    #[test]
    fn inverse_examples() {
        let p = aux_to_psi("const:1".parse().unwrap(), Rational::from(1)).unwrap();
        assert!(rel_err(&p.psi().eval(&t(8.0)).unwrap(), &t(1.0 / 16.0)) < 1e-70);
        let p = aux_to_psi("pow:1".parse().unwrap(), Rational::from(1)).unwrap();
        assert!(rel_err(&p.psi().eval(&t(9.0)).unwrap(), &(t(1.0) / 10u32)) < 1e-70);
    }

    #[test]
    fn invalid_psi_rejected() {
        assert!(matches!(
            psi_to_aux("recip:1".parse().unwrap(), Rational::from(1)),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn flags_for_log_psi() {
        let p = ApproximatingPair::parse("Psi=logpow:1").unwrap();
        let f = p.flags();
        assert!(f.aux_nondecreasing.is_some());
        assert!(f.t_psi_nondecreasing.is_some());
        assert!(f.aux_at_least_one.unwrap().from > 2.0);
        assert!(f.psi_nonincreasing.is_some());
    }

    #[test]
    fn enclosures_contain_value() {
        for spec in ["const:1", "logpow:1", "logpow:3", "pow:0.5", "pow:1/3", "loglogpow:1", "4*logpow:2"] {
            let aux: AuxiliaryFn = spec.parse().unwrap();
            for q in [3u64, 10, 1 << 20, 123_456_789_012] {
                let q = Integer::from(q);
                let e = aux.enclose(&q, 64).unwrap();
                let v = aux.eval(&Float::with_val(256, &q)).unwrap();
                assert!(e.lo <= v && v <= e.hi, "{spec} at {q}");
                assert!(log2_float(&Float::with_val(64, &e.hi - &e.lo)) - log2_float(&v) < -35.0);
            }
        }
        let e = AuxiliaryFn::constant(1).unwrap().enclose(&Integer::from(7), 64).unwrap();
        assert!(e.is_exact());
    }

    #[test]
    fn slow_growth_examples() {
        let grid = default_q_exponents();
        let r = probe_slow_growth(&"logpow:1".parse().unwrap(), &[2.0], &grid).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsEvidence);
        assert!((r.trajectories[0].values[5] - 2.0).abs() < 1e-12);
        let r = probe_slow_growth(&"logpow:2".parse().unwrap(), &[0.5, 3.0], &grid).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsEvidence);
        assert!((r.trajectories[1].values[0] - 9.0).abs() < 1e-9);
        let r = probe_slow_growth(&"pow:1".parse().unwrap(), &[2.0], &grid).unwrap();
        assert_eq!(r.verdict, Verdict::FailsEvidence);
    }

    #[test]
    fn spec_round_trip() {
        for spec in ["const:1", "logpow:3", "pow:0.5", "loglogpow:2", "0.25*logpow:1"] {
            let aux: AuxiliaryFn = spec.parse().unwrap();
            assert_eq!(aux.to_string(), spec);
        }
        assert!("pow:0".parse::<AuxiliaryFn>().is_err());
        assert!("exp:1".parse::<AuxiliaryFn>().is_err());
        assert!("recip:0".parse::<ApproximatingFn>().is_err());
    }
}
