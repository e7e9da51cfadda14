//! Dimension functions and probes of their growth conditions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{log2_float, parse_exact, DEFAULT_PRECISION};
use crate::probe::{
    is_nondecreasing, tail, Condition, ProbeReport, Trajectory, Verdict, MARGIN, TAIL_POINTS,
};

type Evaluator = dyn Fn(&Float) -> Option<Float> + Send + Sync;

#[derive(Clone)]
pub enum Family {
    /// `x^s`.
    Power(Rational),
    /// `x (log 1/x)^{a_1} (log log 1/x)^{a_2} ...`; every nested log must exceed 1.
    IteratedLog(Vec<Rational>),
    /// `x exp((log 1/x)^beta)`.
    Exotic(Rational),
    Custom { label: String, f: Arc<Evaluator> },
}

/// An increasing function with `f(r) -> 0` as `r -> 0`, optionally scaled by
/// a positive constant.
#[derive(Clone)]
pub struct DimensionFunction {
    family: Family,
    scale: Rational,
}

impl DimensionFunction {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Power(s) if *s <= 0 => {
                return Err(Error::Config(format!("power exponent {s} must be positive")))
            }
            Family::IteratedLog(a) if a.is_empty() || a.iter().all(|x| *x == 0) => {
                return Err(Error::Config("iterated-log family needs a nonzero exponent".into()))
            }
            Family::Exotic(b) if *b <= 0 || *b >= 1 => {
                return Err(Error::Config(format!("exotic exponent {b} must lie in (0, 1)")))
            }
            _ => {}
        }
        Ok(DimensionFunction {
            family,
            scale: Rational::from(1),
        })
    }

    pub fn power(s: Rational) -> Result<Self> {
        Self::new(Family::Power(s))
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(&Float) -> Option<Float> + Send + Sync + 'static) -> Self {
        DimensionFunction {
            family: Family::Custom {
                label: label.into(),
                f: Arc::new(f),
            },
            scale: Rational::from(1),
        }
    }

    /// `c f` for a positive rational `c`.
    pub fn scaled(&self, c: Rational) -> Result<Self> {
        if c <= 0 {
            return Err(Error::Config("scale must be positive".into()));
        }
        Ok(DimensionFunction {
            family: self.family.clone(),
            scale: Rational::from(&self.scale * &c),
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `f(x)` at the precision of `x`.
    pub fn eval(&self, x: &Float) -> Result<Float> {
        let prec = x.prec();
        let undefined = || Error::domain(format!("f = {self}"), format!("2^{:.3}", log2_float(x)));
        if *x <= 0 || !x.is_finite() {
            return Err(undefined());
        }
        let value = match &self.family {
            Family::Power(s) => {
                let s = Float::with_val(prec, s);
                Float::with_val(prec, x.pow(&s))
            }
            Family::IteratedLog(exponents) => {
                let mut value = x.clone();
                let mut level = Float::with_val(prec, x.recip_ref());
                for a in exponents {
                    level.ln_mut();
                    if level <= 1 {
                        return Err(undefined());
                    }
                    if *a != 0 {
                        let a = Float::with_val(prec, a);
                        value *= Float::with_val(prec, (&level).pow(&a));
                    }
                }
                value
            }
            Family::Exotic(beta) => {
                let l = Float::with_val(prec, x.recip_ref()).ln();
                if l <= 0 {
                    return Err(undefined());
                }
                let beta = Float::with_val(prec, beta);
                let e = Float::with_val(prec, l.pow(&beta)).exp();
                Float::with_val(prec, x * e)
            }
            Family::Custom { f, .. } => f(x).ok_or_else(undefined)?,
        };
        if !value.is_finite() || value < 0 {
            return Err(undefined());
        }
        if self.scale == 1 {
            Ok(value)
        } else {
            Ok(value * &self.scale)
        }
    }

    /// Sampled monotonicity check on a decreasing grid: `f` must decrease
    /// strictly along it.
    pub fn check_increasing(&self, grid: &[Float]) -> Result<bool> {
        let mut prev: Option<Float> = None;
        for x in grid {
            let v = self.eval(x)?;
            if let Some(p) = &prev {
                if v >= *p {
                    return Ok(false);
                }
            }
            prev = Some(v);
        }
        Ok(true)
    }
}

impl fmt::Display for DimensionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1 {
            write!(f, "{}*", rational_literal(&self.scale))?;
        }
        match &self.family {
            Family::Power(s) => write!(f, "power:{}", rational_literal(s)),
            Family::IteratedLog(a) => {
                let parts: Vec<String> = a.iter().map(rational_literal).collect();
                write!(f, "ilog:{}", parts.join(","))
            }
            Family::Exotic(b) => write!(f, "exotic:{}", rational_literal(b)),
            Family::Custom { label, .. } => write!(f, "custom:{label}"),
        }
    }
}

impl fmt::Debug for DimensionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DimensionFunction({self})")
    }
}

/// Parses `power:0.5`, `ilog:1,0.5`, `exotic:0.5`, with an optional
/// positive scale prefix such as `3*power:0.5`.
impl FromStr for DimensionFunction {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        let err = |reason: &str| Error::parse("dimension function", input, reason);
        let (scale, body) = match s.split_once('*') {
            Some((c, body)) => (Some(parse_exact(c)?), body.trim()),
            None => (None, s),
        };
        let (name, args) = body.split_once(':').ok_or_else(|| err("expected family:parameters"))?;
        let family = match name.trim() {
            "power" => Family::Power(parse_exact(args)?),
            "ilog" => {
                let list = args
                    .split(',')
                    .map(parse_exact)
                    .collect::<Result<Vec<_>>>()?;
                if list.len() > 8 {
                    return Err(err("at most 8 nested logarithms"));
                }
                Family::IteratedLog(list)
            }
            "exotic" => Family::Exotic(parse_exact(args)?),
            _ => return Err(err("unknown family; expected power, ilog or exotic")),
        };
        let f = DimensionFunction::new(family)?;
        match scale {
            Some(c) => f.scaled(c),
            None => Ok(f),
        }
    }
}

/// Exact literal: a decimal when the rational terminates, `p/q` otherwise.
pub(crate) fn rational_literal(r: &Rational) -> String {
    let mut den = r.denom().clone();
    let twos = den.find_one(0).unwrap_or(0);
    den >>= twos;
    let mut fives = 0u32;
    while den.is_divisible_u(5) {
        den /= 5u32;
        fives += 1;
    }
    if den != 1 {
        return r.to_string();
    }
    let places = twos.max(fives);
    if places == 0 {
        return r.numer().to_string();
    }
    let scaled = Rational::from(r * Integer::from(10u32).pow(places));
    let digits = scaled.numer().clone().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - places as usize);
    let sign = if *r < 0 { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

fn grid_points(exponents: &[u32], prec: u32) -> Vec<Float> {
    exponents
        .iter()
        .map(|&m| Float::with_val(prec, 1) >> m)
        .collect()
}

fn to_f64(x: &Float) -> f64 {
    x.to_f64()
}

/// Trajectory of `f(x)/x`; holds when it is non-decreasing over the last
/// `TAIL_POINTS` points and grows by more than `MARGIN` across them.
pub fn probe_superlinear(f: &DimensionFunction, x_exponents: &[u32]) -> Result<ProbeReport> {
    let prec = DEFAULT_PRECISION;
    let values = grid_points(x_exponents, prec)
        .iter()
        .map(|x| Ok(to_f64(&(f.eval(x)? / x))))
        .collect::<Result<Vec<f64>>>()?;
    let t = tail(&values, TAIL_POINTS);
    let growth = t[t.len() - 1] / t[0];
    let verdict = if is_nondecreasing(t) && growth >= 1.0 + MARGIN {
        Verdict::HoldsEvidence
    } else if growth < 1.0 + MARGIN {
        Verdict::FailsEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(ProbeReport {
        condition: Condition::Superlinear,
        rule: "tail8-growth-5pct",
        grid_log2: x_exponents.iter().map(|&m| -f64::from(m)).collect(),
        trajectories: vec![Trajectory {
            parameter: None,
            values,
            statistic: growth,
        }],
        verdict,
        constant: None,
    })
}

/// Largest `g(x2) / g(x1)` with `x1 < x2` among the given points of
/// `g = f(x)/x`, sampled in decreasing `x`.
fn max_pair_ratio(g: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            best = best.max(g[i] / g[j]);
        }
    }
    best
}

/// Estimates `C` over the last `TAIL_POINTS` points and over twice as many;
/// holds when the two estimates agree within `MARGIN`.
pub fn probe_quasi_monotone(f: &DimensionFunction, x_exponents: &[u32]) -> Result<ProbeReport> {
    let prec = DEFAULT_PRECISION;
    let values = grid_points(x_exponents, prec)
        .iter()
        .map(|x| Ok(to_f64(&(f.eval(x)? / x))))
        .collect::<Result<Vec<f64>>>()?;
    let c_tail = max_pair_ratio(tail(&values, TAIL_POINTS)).max(1.0);
    let c_wide = max_pair_ratio(tail(&values, 2 * TAIL_POINTS)).max(1.0);
    let verdict = if c_wide <= c_tail * (1.0 + MARGIN) {
        Verdict::HoldsEvidence
    } else if c_tail > 1.0 + MARGIN {
        Verdict::FailsEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(ProbeReport {
        condition: Condition::QuasiMonotone,
        rule: "tail8-vs-tail16-max-ratio",
        grid_log2: x_exponents.iter().map(|&m| -f64::from(m)).collect(),
        trajectories: vec![Trajectory {
            parameter: None,
            values,
            statistic: c_wide / c_tail,
        }],
        verdict,
        constant: Some(c_tail),
    })
}

/// For each `B`, `L(B)` is the largest `f(Bx)/f(x)` over the last
/// `TAIL_POINTS` grid points. ESL (holds) when some `B` has
/// `L(B) < (1 - MARGIN) B` and a non-increasing trajectory; NESL (fails)
/// when every `B` has `L(B) >= (1 - MARGIN) B`.
pub fn probe_esl(f: &DimensionFunction, b_grid: &[u32], x_exponents: &[u32]) -> Result<ProbeReport> {
    if b_grid.is_empty() || b_grid.iter().any(|&b| b < 2) {
        return Err(Error::Config("B grid must be nonempty with every B > 1".into()));
    }
    let prec = DEFAULT_PRECISION;
    let xs = grid_points(x_exponents, prec);
    let mut trajectories = Vec::with_capacity(b_grid.len());
    let mut witness = None;
    let mut all_nesl = true;
    for &b in b_grid {
        let values = xs
            .iter()
            .map(|x| {
                let bx = Float::with_val(prec, x * b);
                Ok(to_f64(&(f.eval(&bx)? / f.eval(x)?)))
            })
            .collect::<Result<Vec<f64>>>()?;
        let t = tail(&values, TAIL_POINTS);
        let limsup = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let bound = (1.0 - MARGIN) * f64::from(b);
        if limsup < bound {
            all_nesl = false;
            let creeping_up = is_nondecreasing(t) && t[t.len() - 1] > t[0] * (1.0 + 1e-12);
            if !creeping_up && witness.is_none() {
                witness = Some(f64::from(b));
            }
        }
        trajectories.push(Trajectory {
            parameter: Some(f64::from(b)),
            values,
            statistic: limsup,
        });
    }
    let verdict = match (witness, all_nesl) {
        (Some(_), _) => Verdict::HoldsEvidence,
        (None, true) => Verdict::FailsEvidence,
        (None, false) => Verdict::Inconclusive,
    };
    Ok(ProbeReport {
        condition: Condition::EssentiallySublinear,
        rule: "tail8-limsup-5pct",
        grid_log2: x_exponents.iter().map(|&m| -f64::from(m)).collect(),
        trajectories,
        verdict,
        constant: witness,
    })
}
