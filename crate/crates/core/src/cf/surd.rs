use std::collections::HashMap;
use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::cf::Continuants;
use crate::error::{Error, Result};
use crate::precision::Enclosure;

/// Cap on Gauss-map steps spent looking for the period of a surd.
pub const MAX_PERIOD_SEARCH: usize = 1_000_000;

/// The quadratic irrational `(P + sqrt(D)) / Q` with `D > 0` not a perfect
/// square, `Q != 0` and `Q | D - P^2`.
#[derive(Debug, Clone)]
pub struct QuadraticSurd {
    p: Integer,
    d: Integer,
    q: Integer,
}

impl QuadraticSurd {
    /// Accepts any `(P + sqrt(D)) / Q`; rescales when `Q` does not divide
    /// `D - P^2`.
    pub fn new(p: Integer, d: Integer, q: Integer) -> Result<Self> {
        if q == 0 {
            return Err(Error::Degenerate("surd with zero denominator".into()));
        }
        if d <= 0 || d.is_perfect_square() {
            return Err(Error::Degenerate(format!("sqrt({d}) is rational")));
        }
        let rem = Integer::from(&d - p.square_ref()) % &q;
        if rem == 0 {
            return Ok(QuadraticSurd { p, d, q });
        }
        // (P + sqrt D)/Q = (P|Q| + sqrt(D Q^2)) / (Q|Q|)
        let qa = Integer::from(q.abs_ref());
        let p2 = Integer::from(&p * &qa);
        let d2 = d * Integer::from(q.square_ref());
        let q2 = q * qa;
        Ok(QuadraticSurd { p: p2, d: d2, q: q2 })
    }

    /// `(sqrt 5 - 1) / 2`.
    pub fn golden() -> Self {
        QuadraticSurd {
            p: Integer::from(-1),
            d: Integer::from(5),
            q: Integer::from(2),
        }
    }

    /// `(A + B sqrt(d)) / C` with `B != 0`.
    fn from_general(a: Integer, b: Integer, d: Integer, c: Integer) -> Result<Self> {
        let (a, b, c) = if b < 0 { (-a, -b, -c) } else { (a, b, c) };
        if c == 0 {
            return Err(Error::Degenerate("surd with zero denominator".into()));
        }
        let ca = Integer::from(c.abs_ref());
        let p = a * &ca;
        let dd = Integer::from(b.square_ref()) * d * Integer::from(c.square_ref());
        let q = c * ca;
        Self::new(p, dd, q)
    }

    /// The value `[0; prefix, period, period, ...]`.
    pub fn from_periodic(prefix: &[Integer], period: &[Integer]) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Config("periodic pattern needs a nonempty period".into()));
        }
        if let Some((i, v)) = prefix.iter().chain(period).enumerate().find(|(_, a)| **a < 1) {
            return Err(Error::InvalidQuotient {
                index: i + 1,
                value: v.to_string(),
            });
        }
        // z = [period, z] solves q_{m-1} z^2 + (q_m - p_{m-1}) z - p_m = 0.
        let c = Continuants::from_entries(period);
        let m = period.len() as isize;
        let lin = Integer::from(c.q(m) - c.p(m - 1));
        let disc = Integer::from(lin.square_ref()) + Integer::from(c.q(m - 1) * c.p(m)) * 4u32;
        let z = (
            -lin,
            Integer::from(1),
            disc,
            Integer::from(c.q(m - 1) * 2u32),
        );
        // x = (p_k + z p_{k-1}) / (q_k + z q_{k-1}) over the prefix.
        let pc = Continuants::from_entries(prefix);
        let k = prefix.len() as isize;
        let (za, zb, d, zc) = z;
        let n1 = Integer::from(pc.p(k) * &zc) + Integer::from(pc.p(k - 1) * &za);
        let n2 = Integer::from(pc.p(k - 1) * &zb);
        let d1 = Integer::from(pc.q(k) * &zc) + Integer::from(pc.q(k - 1) * &za);
        let d2 = Integer::from(pc.q(k - 1) * &zb);
        // (n1 + n2 r)(d1 - d2 r) / (d1^2 - d2^2 d), r = sqrt d
        let a = Integer::from(&n1 * &d1) - Integer::from(&n2 * &d2) * &d;
        let b = Integer::from(&n2 * &d1) - Integer::from(&n1 * &d2);
        let cden = Integer::from(d1.square_ref()) - Integer::from(d2.square_ref()) * &d;
        if b == 0 {
            return Err(Error::Degenerate("periodic pattern collapsed to a rational".into()));
        }
        Self::from_general(a, b, d, cden)
    }

    pub fn parts(&self) -> (&Integer, &Integer, &Integer) {
        (&self.p, &self.d, &self.q)
    }

    fn isqrt_d(&self) -> Integer {
        Integer::from(self.d.sqrt_ref())
    }

    pub fn floor(&self) -> Integer {
        let s = self.isqrt_d();
        let num = if self.q > 0 {
            Integer::from(&self.p + &s)
        } else {
            Integer::from(&self.p + &s) + 1u32
        };
        num.div_rem_floor(self.q.clone()).0
    }

    /// `1 / x`; requires `x != 0`, which always holds for a surd.
    pub fn reciprocal(&self) -> Self {
        let p1 = Integer::from(-&self.p);
        let q1 = Integer::from(&self.d - self.p.square_ref()) / &self.q;
        QuadraticSurd {
            p: p1,
            d: self.d.clone(),
            q: q1,
        }
    }

    pub fn sub_integer(&self, a: &Integer) -> Self {
        QuadraticSurd {
            p: (&self.p - Integer::from(a * &self.q)),
            d: self.d.clone(),
            q: self.q.clone(),
        }
    }

    /// One Gauss-map step for `x` in `(0, 1)`: `(floor(1/x), T x)`.
    pub fn gauss_step(&self) -> (Integer, QuadraticSurd) {
        let r = self.reciprocal();
        let a = r.floor();
        let t = r.sub_integer(&a);
        (a, t)
    }

    pub fn in_unit_interval(&self) -> bool {
        self.floor() == 0
    }

    /// Rational part `P/Q` and signed radicand part `sign(Q) D / Q^2`; two
    /// surds are equal exactly when both agree.
    fn canonical(&self) -> (Rational, Rational) {
        let rat = Rational::from((self.p.clone(), self.q.clone()));
        let mut rad = Rational::from((self.d.clone(), Integer::from(self.q.square_ref())));
        if self.q < 0 {
            rad = -rad;
        }
        (rat, rad)
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let root = Float::with_val(prec + 16, &self.d).sqrt();
        Float::with_val(prec, (root + &self.p) / &self.q)
    }

    /// Certified enclosure using directed rounding.
    pub fn enclose(&self, prec: u32) -> Enclosure {
        let (r_lo, r_hi) = {
            let mut lo = Float::with_val_round(prec, &self.d, Round::Down).0;
            lo.sqrt_round(Round::Down);
            let mut hi = Float::with_val_round(prec, &self.d, Round::Up).0;
            hi.sqrt_round(Round::Up);
            (lo, hi)
        };
        let n_lo = Float::with_val_round(prec, &r_lo + &self.p, Round::Down).0;
        let n_hi = Float::with_val_round(prec, &r_hi + &self.p, Round::Up).0;
        if self.q > 0 {
            Enclosure::new(
                Float::with_val_round(prec, &n_lo / &self.q, Round::Down).0,
                Float::with_val_round(prec, &n_hi / &self.q, Round::Up).0,
            )
        } else {
            Enclosure::new(
                Float::with_val_round(prec, &n_hi / &self.q, Round::Down).0,
                Float::with_val_round(prec, &n_lo / &self.q, Round::Up).0,
            )
        }
    }

    /// Preperiod and period of the expansion of a surd in `(0, 1)`.
    pub fn periodic_pattern(&self) -> Result<(Vec<Integer>, Vec<Integer>)> {
        let mut seen: HashMap<(Integer, Integer), usize> = HashMap::new();
        let mut quotients = Vec::new();
        let mut x = self.clone();
        for step in 0..MAX_PERIOD_SEARCH {
            if let Some(&start) = seen.get(&(x.p.clone(), x.q.clone())) {
                let period = quotients.split_off(start);
                return Ok((quotients, period));
            }
            seen.insert((x.p.clone(), x.q.clone()), step);
            let (a, next) = x.gauss_step();
            quotients.push(a);
            x = next;
        }
        Err(Error::CapExceeded {
            what: "period search".into(),
            cap: MAX_PERIOD_SEARCH.to_string(),
        })
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+sqrt({}))/{}", self.p, self.d, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<Integer> {
        v.iter().map(|&a| Integer::from(a)).collect()
    }

    #[test]
    fn golden_is_fixed_by_gauss_map() {
        let g = QuadraticSurd::golden();
        let (a, t) = g.gauss_step();
        assert_eq!(a, 1);
        assert_eq!(t, g);
    }

    #[test]
    fn periodic_round_trip() {
        let g = QuadraticSurd::from_periodic(&[], &ints(&[1])).unwrap();
        assert_eq!(g, QuadraticSurd::golden());
        let x = QuadraticSurd::from_periodic(&ints(&[3, 1]), &ints(&[2, 5])).unwrap();
        let (pre, per) = x.periodic_pattern().unwrap();
        assert_eq!(pre, ints(&[3, 1]));
        assert_eq!(per, ints(&[2, 5]));
    }

    #[test]
    fn sqrt2_minus_one() {
        let x = QuadraticSurd::new(Integer::from(-1), Integer::from(2), Integer::from(1)).unwrap();
        let (pre, per) = x.periodic_pattern().unwrap();
        assert!(pre.is_empty());
        assert_eq!(per, ints(&[2]));
    }

    #[test]
    fn floor_negative_denominator() {
        // (1 + sqrt 2) / -1 = -2.414..
        let x = QuadraticSurd::new(Integer::from(1), Integer::from(2), Integer::from(-1)).unwrap();
        assert_eq!(x.floor(), -3);
        let e = x.enclose(64);
        assert!(e.lo < -2.414 && e.hi > -2.4143);
    }

    #[test]
    fn rejects_rational_radicand() {
        assert!(QuadraticSurd::new(Integer::from(0), Integer::from(9), Integer::from(4)).is_err());
    }
}
