use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::cf::{cylinder, DecimalInput, PartialQuotients, QuadraticSurd, RealInput};
use crate::error::{Error, Result};

/// Quotients used to enclose `T^k x` for generator inputs.
pub const ORBIT_LOOKAHEAD: usize = 8;

pub fn expand(x: &RealInput, depth: usize) -> Result<PartialQuotients> {
    if depth == 0 {
        return Err(Error::Config("expansion depth must be >= 1".into()));
    }
    match x {
        RealInput::Rational(r) => {
            let (entries, terminated) = euclid(r, depth);
            let n = entries.len();
            PartialQuotients::with_certification(entries, n, terminated)
        }
        RealInput::Quadratic(s) => {
            let mut entries = Vec::with_capacity(depth);
            let mut y = s.clone();
            for _ in 0..depth {
                let (a, next) = y.gauss_step();
                entries.push(a);
                y = next;
            }
            PartialQuotients::new(entries)
        }
        RealInput::Generator(g) => PartialQuotients::new(g.take(depth)?),
        RealInput::Decimal(d) => expand_decimal(d, depth),
    }
}

/// Euclid on `x = n / d`; the flag reports that the expansion ended.
fn euclid(x: &Rational, depth: usize) -> (Vec<Integer>, bool) {
    let (mut n, mut d) = x.clone().into_numer_denom();
    let mut entries = Vec::new();
    while entries.len() < depth {
        if n == 0 {
            return (entries, true);
        }
        let (a, r) = d.div_rem_floor(n.clone());
        entries.push(a);
        d = n;
        n = r;
    }
    (entries, n == 0)
}

/// Certified quotients from the interval Gauss map, continued with the
/// uncertified expansion of the midpoint up to `depth`.
fn expand_decimal(x: &DecimalInput, depth: usize) -> Result<PartialQuotients> {
    let mut certified = Vec::new();
    let mut exact_zero = false;
    let mut lo = Float::with_val_round(x.precision, Rational::from(&x.value - &x.radius), Round::Down).0;
    let mut hi = Float::with_val_round(x.precision, Rational::from(&x.value + &x.radius), Round::Up).0;
    while certified.len() < depth {
        if hi.is_zero() {
            exact_zero = true;
            break;
        }
        if lo <= 0 {
            break;
        }
        let Some((a, nlo, nhi)) = interval_step(&lo, &hi) else {
            break;
        };
        certified.push(a);
        lo = nlo;
        hi = nhi;
    }
    let (mid, mid_terminated) = euclid(&x.value, depth);
    let agrees = mid.len() >= certified.len() && mid[..certified.len()] == certified[..];
    let k = certified.len();
    if exact_zero || !agrees {
        return PartialQuotients::with_certification(certified, k, exact_zero);
    }
    let terminated = mid_terminated && mid.len() == k && x.radius == 0;
    PartialQuotients::with_certification(mid, k, terminated)
}

/// One Gauss-map step on `[lo, hi]` with `lo > 0`; `None` when the floors
/// of the reciprocal endpoints disagree.
fn interval_step(lo: &Float, hi: &Float) -> Option<(Integer, Float, Float)> {
    let prec = lo.prec();
    let r_lo = Float::with_val_round(prec, hi.recip_ref(), Round::Down).0;
    let r_hi = Float::with_val_round(prec, lo.recip_ref(), Round::Up).0;
    let a_lo = r_lo.clone().floor().to_integer()?;
    let a_hi = r_hi.clone().floor().to_integer()?;
    if a_lo != a_hi {
        return None;
    }
    let nlo = Float::with_val_round(prec, &r_lo - &a_lo, Round::Down).0;
    let nhi = Float::with_val_round(prec, &r_hi - &a_lo, Round::Up).0;
    Some((a_lo, nlo, nhi))
}

/// A point of a Gauss orbit.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitPoint {
    Exact(Rational),
    Surd(QuadraticSurd),
    /// The point lies in `[lo, hi]`.
    Enclosed { lo: Rational, hi: Rational },
}

/// `T^0 x, ..., T^steps x` for `T x = 1/x mod 1`, with `T 0 = 0`.
pub fn gauss_orbit(x: &RealInput, steps: usize) -> Result<Vec<OrbitPoint>> {
    let mut out = Vec::with_capacity(steps + 1);
    match x {
        RealInput::Rational(r) => {
            let mut y = r.clone();
            out.push(OrbitPoint::Exact(y.clone()));
            for _ in 0..steps {
                if y != 0 {
                    y = y.recip().fract_floor(Integer::new()).0;
                }
                out.push(OrbitPoint::Exact(y.clone()));
            }
        }
        RealInput::Quadratic(s) => {
            let mut y = s.clone();
            out.push(OrbitPoint::Surd(y.clone()));
            for _ in 0..steps {
                y = y.gauss_step().1;
                out.push(OrbitPoint::Surd(y.clone()));
            }
        }
        RealInput::Generator(g) => {
            let all = g.take(steps + ORBIT_LOOKAHEAD)?;
            for k in 0..=steps {
                let tail = PartialQuotients::new(all[k..k + ORBIT_LOOKAHEAD].to_vec())?;
                let c = cylinder(&tail)?;
                out.push(OrbitPoint::Enclosed {
                    lo: c.left().clone(),
                    hi: c.right().clone(),
                });
            }
        }
        RealInput::Decimal(d) => {
            let mut lo = Float::with_val_round(d.precision, Rational::from(&d.value - &d.radius), Round::Down).0;
            let mut hi = Float::with_val_round(d.precision, Rational::from(&d.value + &d.radius), Round::Up).0;
            if lo < 0 {
                lo = Float::with_val(d.precision, 0);
            }
            let unit = || OrbitPoint::Enclosed {
                lo: Rational::new(),
                hi: Rational::from(1),
            };
            let enclosed = |lo: &Float, hi: &Float| OrbitPoint::Enclosed {
                lo: lo.to_rational().expect("finite"),
                hi: hi.to_rational().expect("finite"),
            };
            out.push(enclosed(&lo, &hi));
            let mut lost = false;
            for _ in 0..steps {
                if lost {
                    out.push(unit());
                    continue;
                }
                if hi.is_zero() {
                    out.push(OrbitPoint::Exact(Rational::new()));
                    continue;
                }
                match (lo > 0).then(|| interval_step(&lo, &hi)).flatten() {
                    Some((_, nlo, nhi)) => {
                        lo = nlo;
                        hi = nhi;
                        out.push(enclosed(&lo, &hi));
                    }
                    None => {
                        lost = true;
                        out.push(unit());
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(s: &str) -> RealInput {
        s.parse().unwrap()
    }

    fn as_u64(a: &PartialQuotients) -> Vec<u64> {
        a.entries().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn rational_expansions() {
        assert_eq!(as_u64(&expand(&input("113/355"), 3).unwrap()), vec![3, 7, 16]);
        let third = expand(&input("1/3"), 5).unwrap();
        assert_eq!(as_u64(&third), vec![3]);
        assert_eq!(third.certified_depth(), 1);
        assert!(third.is_terminated());
    }

    #[test]
    fn golden_all_ones() {
        assert_eq!(as_u64(&expand(&RealInput::golden(), 10).unwrap()), vec![1; 10]);
    }

    #[test]
    fn decimal_certification_is_limited_by_radius() {
        // sqrt(2) - 1 = [2, 2, 2, ...]
        let x = input("0.41421356237309504880168872420969807856967187537694");
        let a = expand(&x, 200).unwrap();
        assert!(a.certified_depth() > 20, "{}", a.certified_depth());
        assert!(a.certified_depth() < 200);
        assert!(a.entries()[..a.certified_depth()].iter().all(|q| *q == 2));
    }

    #[test]
    fn decimal_that_straddles_a_boundary_certifies_nothing() {
        let a = expand(&input("0.5+-0.01"), 4).unwrap();
        assert_eq!(a.certified_depth(), 0);
    }

    #[test]
    fn orbits() {
        let zero = gauss_orbit(&input("0"), 5).unwrap();
        assert_eq!(zero, vec![OrbitPoint::Exact(Rational::new()); 6]);
        let third = gauss_orbit(&input("1/3"), 2).unwrap();
        assert_eq!(
            third,
            vec![
                OrbitPoint::Exact(Rational::from((1, 3))),
                OrbitPoint::Exact(Rational::new()),
                OrbitPoint::Exact(Rational::new())
            ]
        );
        let g = gauss_orbit(&RealInput::golden(), 3).unwrap();
        assert!(g.iter().all(|p| *p == OrbitPoint::Surd(QuadraticSurd::golden())));
    }

    #[test]
    fn generator_orbit_encloses_tail() {
        let orbit = gauss_orbit(&input("gen:const:1"), 2).unwrap();
        let golden = 0.6180339887498949_f64;
        for p in orbit {
            match p {
                OrbitPoint::Enclosed { lo, hi } => assert!(lo.to_f64() <= golden && golden <= hi.to_f64()),
                other => panic!("{other:?}"),
            }
        }
    }
}
