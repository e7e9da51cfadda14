//! Point-level improvability evidence from partial quotients.
//!
//! At each `n` the exact product `a_n a_{n+1}` is compared with a certified
//! enclosure of `Psi(q_n)`. A relation is recorded only when the enclosure
//! decides it; otherwise the index is `Undecided`.

use std::cmp::Ordering;

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::approx::AuxiliaryFn;
use crate::cf::{convergents, cylinder, Continuants, PartialQuotients};
use crate::error::{Error, Result};
use crate::precision::{ln_integer, Enclosure, DEFAULT_PRECISION};

/// Quotients beyond `a_{n+1}` used to enclose `T^{n+1} x` in K(3 Psi) checks.
pub const K3_LOOKAHEAD: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// `a_{n+1} > Psi(q_n)`; implies a G-event.
    G1,
    /// `a_n a_{n+1} > Psi(q_n)` with `a_{n+1} <= Psi(q_n)`.
    G,
    /// `a_n a_{n+1} <= Psi(q_n) / 4`.
    Witness,
    /// `Psi(q_n) / 4 < a_n a_{n+1} <= Psi(q_n)`: neither clause applies.
    Band,
    /// The enclosure of `Psi(q_n)` does not decide the comparison.
    Undecided,
}

impl EventKind {
    pub fn is_g_event(self) -> bool {
        matches!(self, EventKind::G1 | EventKind::G)
    }
}

/// Relation of `a_n a_{n+1}` (and `a_{n+1}`) to an enclosure of `Psi(q_n)`.
pub fn relation(an: &Integer, an1: &Integer, psi: &Enclosure) -> EventKind {
    if psi.locate_integer(an1) == Some(Ordering::Greater) {
        return EventKind::G1;
    }
    let product = Integer::from(an * an1);
    match psi.locate_integer(&product) {
        Some(Ordering::Greater) => EventKind::G,
        Some(_) => {
            let four = Integer::from(&product * 4u32);
            match psi.locate_integer(&four) {
                Some(Ordering::Less) | Some(Ordering::Equal) => EventKind::Witness,
                Some(Ordering::Greater) => EventKind::Band,
                None => EventKind::Undecided,
            }
        }
        None => EventKind::Undecided,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRecord {
    pub n: usize,
    #[serde(serialize_with = "as_string")]
    pub an: Integer,
    #[serde(serialize_with = "as_string")]
    pub an1: Integer,
    #[serde(skip)]
    pub qn: Integer,
    /// Decimal digit count of `q_n`.
    pub qn_digits: usize,
    /// Enclosure of `Psi(q_n)` rounded outward to `f64`.
    pub psi_qn: (f64, f64),
    pub kind: EventKind,
}

fn as_string<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn digit_count(q: &Integer) -> usize {
    if *q == 0 {
        1
    } else {
        q.to_string_radix(10).trim_start_matches('-').len()
    }
}

fn f64_bounds(e: &Enclosure) -> (f64, f64) {
    (e.lo.to_f64_round(Round::Down), e.hi.to_f64_round(Round::Up))
}

/// Scans `n = 1..=depth`; needs quotients certified to `depth + 1`.
pub fn detect_events(a: &PartialQuotients, aux: &AuxiliaryFn, depth: usize) -> Result<Vec<EventRecord>> {
    detect_events_with_precision(a, aux, depth, DEFAULT_PRECISION)
}

pub fn detect_events_with_precision(
    a: &PartialQuotients,
    aux: &AuxiliaryFn,
    depth: usize,
    prec: u32,
) -> Result<Vec<EventRecord>> {
    if depth == 0 {
        return Err(Error::Config("depth must be >= 1".into()));
    }
    a.require_certified(depth + 1)?;
    let c = convergents(&a.prefix(depth + 1))?;
    let mut out = Vec::with_capacity(depth);
    for n in 1..=depth {
        let qn = c.q(n as isize);
        let psi = aux.enclose(qn, prec)?;
        let an = a.get(n).expect("certified");
        let an1 = a.get(n + 1).expect("certified");
        out.push(EventRecord {
            n,
            an: an.clone(),
            an1: an1.clone(),
            qn: qn.clone(),
            qn_digits: digit_count(qn),
            psi_qn: f64_bounds(&psi),
            kind: relation(an, an1, &psi),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointVerdict {
    NonImprovableEvidence,
    ImprovableEvidence,
    Inconclusive,
}

impl std::fmt::Display for PointVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PointVerdict::NonImprovableEvidence => "non-improvable-evidence",
            PointVerdict::ImprovableEvidence => "improvable-evidence",
            PointVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub point_spec: String,
    #[serde(rename = "Psi")]
    pub aux: String,
    pub depth: usize,
    pub window: usize,
    pub events: Vec<EventRecord>,
    pub verdict: PointVerdict,
    pub tau_hat: Option<f64>,
}

impl ClassificationReport {
    /// Records with `n` in the tail window `[depth - window, depth]`.
    pub fn tail(&self) -> impl Iterator<Item = &EventRecord> {
        let start = self.depth.saturating_sub(self.window);
        self.events.iter().filter(move |r| r.n >= start)
    }

    pub fn g_event_count(&self) -> usize {
        self.events.iter().filter(|r| r.kind.is_g_event()).count()
    }
}

/// Default tail window: half the depth.
pub fn default_window(depth: usize) -> usize {
    (depth / 2).max(1)
}

/// Verdict over the tail window: a G-event gives non-improvable evidence;
/// only witnesses give improvable evidence; anything else is inconclusive.
pub fn classify_point(
    point_spec: &str,
    a: &PartialQuotients,
    aux: &AuxiliaryFn,
    depth: usize,
    window: Option<usize>,
) -> Result<ClassificationReport> {
    let window = window.unwrap_or_else(|| default_window(depth));
    if window == 0 || window > depth {
        return Err(Error::Config(format!("window {window} must lie in 1..={depth}")));
    }
    let events = detect_events(a, aux, depth)?;
    let tau_hat = order_statistic(a, depth, window)?.tau_hat;
    let mut report = ClassificationReport {
        point_spec: point_spec.to_owned(),
        aux: aux.to_string(),
        depth,
        window,
        events,
        verdict: PointVerdict::Inconclusive,
        tau_hat,
    };
    let tail: Vec<&EventRecord> = report.tail().collect();
    report.verdict = if tail.iter().any(|r| r.kind.is_g_event()) {
        PointVerdict::NonImprovableEvidence
    } else if !tail.is_empty() && tail.iter().all(|r| r.kind == EventKind::Witness) {
        PointVerdict::ImprovableEvidence
    } else {
        PointVerdict::Inconclusive
    };
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderStatistic {
    /// `(n, log(a_n a_{n+1}) / log q_n)` for `n = 2..=depth`.
    pub values: Vec<(usize, f64)>,
    /// `(N, max of values over [N - window, N])`.
    pub running: Vec<(usize, f64)>,
    /// Last entry of `running`.
    pub tau_hat: Option<f64>,
}

/// Running maxima of `log(a_n a_{n+1}) / log q_n`, starting at `n = 2`
/// where `q_n >= 2`.
pub fn order_statistic(a: &PartialQuotients, depth: usize, window: usize) -> Result<OrderStatistic> {
    if window == 0 || window > depth {
        return Err(Error::Config(format!("window {window} must lie in 1..={depth}")));
    }
    a.require_certified(depth + 1)?;
    let c = convergents(&a.prefix(depth + 1))?;
    let mut values = Vec::new();
    for n in 2..=depth {
        let product = Integer::from(a.get(n).unwrap() * a.get(n + 1).unwrap());
        values.push((n, log_ratio(&product, c.q(n as isize))));
    }
    let mut running = Vec::with_capacity(values.len());
    for (i, &(n, _)) in values.iter().enumerate() {
        let start = n.saturating_sub(window);
        let best = values[..=i]
            .iter()
            .filter(|(m, _)| *m >= start)
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max);
        running.push((n, best));
    }
    let tau_hat = running.last().map(|r| r.1);
    Ok(OrderStatistic {
        values,
        running,
        tau_hat,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum K3Outcome {
    Satisfied,
    NotSatisfied,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum K3Stage {
    /// Decided by `1/(3 a q^2) < |x - p/q| < 1/(a q^2)`.
    ErrorBounds,
    /// Decided by enclosing `a_{n+1} + q_{n-1}/q_n + T^{n+1} x`.
    Interval,
    /// `x` equals its terminal convergent.
    ExactHit,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K3Record {
    pub n: usize,
    pub outcome: K3Outcome,
    pub stage: K3Stage,
}

fn rational_enclosure_cmp(lo: &Rational, hi: &Rational, psi3: &Enclosure) -> K3Outcome {
    if *lo > psi3.hi {
        K3Outcome::Satisfied
    } else if *hi <= psi3.lo {
        K3Outcome::NotSatisfied
    } else {
        K3Outcome::Undecided
    }
}

/// Tests `|x - p_n/q_n| < 1 / (3 q_n^2 Psi(q_n))` for `n = 1..=depth`, which
/// is equivalent to `a_{n+1} + q_{n-1}/q_n + T^{n+1} x > 3 Psi(q_n)`.
pub fn check_k3psi(a: &PartialQuotients, aux: &AuxiliaryFn, depth: usize) -> Result<Vec<K3Record>> {
    let prec = DEFAULT_PRECISION;
    let terminal = a.is_terminated().then_some(a.len());
    let needed = match terminal {
        Some(len) if len <= depth => len,
        _ => depth + 1,
    };
    a.require_certified(needed)?;
    let c: Continuants = convergents(&a.prefix(needed))?;
    let mut out = Vec::with_capacity(depth);
    for n in 1..=depth.min(needed) {
        if terminal == Some(n) {
            out.push(K3Record {
                n,
                outcome: K3Outcome::Satisfied,
                stage: K3Stage::ExactHit,
            });
            break;
        }
        let qn = c.q(n as isize);
        let psi3 = aux.enclose(qn, prec)?.scale(3);
        let an1 = a.get(n + 1).expect("certified");
        // a_{n+1} >= 3 Psi => err < 1/(a q^2) <= 1/(3 q^2 Psi)
        let by_bounds = if psi3.locate_integer(an1).is_some_and(|o| o != Ordering::Less) {
            Some(K3Outcome::Satisfied)
        } else {
            // a_{n+1} <= Psi => err > 1/(3 a q^2) >= 1/(3 q^2 Psi)
            let psi1 = aux.enclose(qn, prec)?;
            matches!(psi1.locate_integer(an1), Some(Ordering::Less) | Some(Ordering::Equal))
                .then_some(K3Outcome::NotSatisfied)
        };
        if let Some(outcome) = by_bounds {
            out.push(K3Record {
                n,
                outcome,
                stage: K3Stage::ErrorBounds,
            });
            continue;
        }
        let base = Rational::from(an1) + Rational::from((c.q(n as isize - 1).clone(), qn.clone()));
        let (t_lo, t_hi) = tail_enclosure(a, n + 1)?;
        let lo = Rational::from(&base + &t_lo);
        let hi = Rational::from(&base + &t_hi);
        let outcome = rational_enclosure_cmp(&lo, &hi, &psi3);
        out.push(K3Record {
            n,
            outcome,
            stage: if outcome == K3Outcome::Undecided {
                K3Stage::Unresolved
            } else {
                K3Stage::Interval
            },
        });
    }
    Ok(out)
}

/// Closed enclosure of `T^m x` from the certified quotients after `a_m`.
fn tail_enclosure(a: &PartialQuotients, m: usize) -> Result<(Rational, Rational)> {
    let available = a.certified_depth().saturating_sub(m).min(K3_LOOKAHEAD);
    if available == 0 {
        if a.is_terminated() && a.len() == m {
            return Ok((Rational::new(), Rational::new()));
        }
        return Ok((Rational::new(), Rational::from(1)));
    }
    let next = PartialQuotients::new(a.entries()[m..m + available].to_vec())?;
    if a.is_terminated() && a.len() == m + available {
        let v = convergents(&next)?.last().value();
        return Ok((v.clone(), v));
    }
    let cyl = cylinder(&next)?;
    Ok((cyl.left().clone(), cyl.right().clone()))
}

/// `log(product) / log(q)` for exact integers `q >= 2`.
pub fn log_ratio(product: &Integer, q: &Integer) -> f64 {
    let num = ln_integer(product, 128, Round::Nearest);
    let den = ln_integer(q, 128, Round::Nearest);
    Float::with_val(128, num / den).to_f64()
}
