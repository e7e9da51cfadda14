use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::cf::QuadraticSurd;
use crate::error::{Error, Result};
use crate::precision::{decimal_places, parse_exact, DEFAULT_PRECISION};

/// A decimal approximation `value ± radius` of a point of `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecimalInput {
    pub value: Rational,
    pub radius: Rational,
    /// Working precision, in bits, of the interval Gauss map.
    pub precision: u32,
}

type QuotientFn = dyn Fn(usize, &[Integer]) -> Integer + Send + Sync;

/// A programmatic source of partial quotients.
#[derive(Clone)]
pub enum Generator {
    /// `e - 2 = [1, 2, 1, 1, 4, 1, 1, 6, ...]`: `a_{3k-1} = 2k`, otherwise 1.
    EMinusTwo,
    /// `a_n = n`.
    Linear,
    /// `a_n = c` for every `n`.
    Constant(Integer),
    /// `a_1 = 1`, `a_{n+1} = q_n`, so that `q_{n+1} = q_n^2 + q_{n-1}`.
    Continuant,
    /// `a_n = f(n, [a_1, ..., a_{n-1}])`; every value must be at least 1.
    Custom { label: String, f: Arc<QuotientFn> },
}

impl Generator {
    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(usize, &[Integer]) -> Integer + Send + Sync + 'static,
    ) -> Self {
        Generator::Custom {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    /// The first `depth` quotients.
    pub fn take(&self, depth: usize) -> Result<Vec<Integer>> {
        let mut out: Vec<Integer> = Vec::with_capacity(depth);
        let (mut q_prev, mut q) = (Integer::new(), Integer::from(1));
        for n in 1..=depth {
            let a = match self {
                Generator::EMinusTwo => {
                    if n % 3 == 2 {
                        Integer::from(2 * (n + 1) / 3)
                    } else {
                        Integer::from(1)
                    }
                }
                Generator::Linear => Integer::from(n),
                Generator::Constant(c) => c.clone(),
                Generator::Continuant => {
                    if n == 1 {
                        Integer::from(1)
                    } else {
                        q.clone()
                    }
                }
                Generator::Custom { f, .. } => f(n, &out),
            };
            if a < 1 {
                return Err(Error::InvalidQuotient {
                    index: n,
                    value: a.to_string(),
                });
            }
            if matches!(self, Generator::Continuant) {
                let next = Integer::from(&a * &q) + &q_prev;
                q_prev = std::mem::replace(&mut q, next);
            }
            out.push(a);
        }
        Ok(out)
    }

    pub fn label(&self) -> String {
        match self {
            Generator::EMinusTwo => "e-2".into(),
            Generator::Linear => "linear".into(),
            Generator::Constant(c) => format!("const:{c}"),
            Generator::Continuant => "continuant".into(),
            Generator::Custom { label, .. } => label.clone(),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({})", self.label())
    }
}

/// A point of `[0, 1)` in one of the representations the engine can expand.
#[derive(Debug, Clone)]
pub enum RealInput {
    Rational(Rational),
    Quadratic(QuadraticSurd),
    Decimal(DecimalInput),
    Generator(Generator),
}

impl RealInput {
    pub fn rational(value: Rational) -> Result<Self> {
        if !(0..1).contains(&value) {
            return Err(Error::OutOfUnitInterval {
                value: value.to_string(),
            });
        }
        Ok(RealInput::Rational(value))
    }

    pub fn quadratic(surd: QuadraticSurd) -> Result<Self> {
        if !surd.in_unit_interval() {
            return Err(Error::OutOfUnitInterval {
                value: surd.to_string(),
            });
        }
        Ok(RealInput::Quadratic(surd))
    }

    pub fn decimal(value: Rational, radius: Rational, precision: u32) -> Result<Self> {
        if !(0..1).contains(&value) {
            return Err(Error::OutOfUnitInterval {
                value: value.to_string(),
            });
        }
        if radius < 0 {
            return Err(Error::Config("negative error radius".into()));
        }
        if precision < 16 {
            return Err(Error::Config(format!("precision {precision} is below 16 bits")));
        }
        Ok(RealInput::Decimal(DecimalInput {
            value,
            radius,
            precision,
        }))
    }

    pub fn golden() -> Self {
        RealInput::Quadratic(QuadraticSurd::golden())
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RealInput::Decimal(_))
    }

    /// Parses the input grammar:
    ///
    /// ```text
    /// 113/355 | 0           exact rational
    /// cf:3,7,16             rational with the given expansion
    /// golden                (sqrt 5 - 1) / 2
    /// quad:P,D,Q            (P + sqrt D) / Q
    /// periodic:3,1;2,5      [0; 3, 1, (2, 5) repeated]
    /// 0.7071 | 0.7071+-1e-4 decimal; radius defaults to half a unit in the last place
    /// gen:e-2 | gen:linear | gen:const:5 | gen:continuant
    /// ```
    pub fn parse_with_precision(input: &str, precision: u32) -> Result<Self> {
        let s = input.trim();
        let err = |reason: &str| Error::parse("real input", input, reason);
        if s == "golden" {
            return Ok(Self::golden());
        }
        if let Some(rest) = s.strip_prefix("gen:") {
            let g = match rest {
                "e-2" => Generator::EMinusTwo,
                "linear" => Generator::Linear,
                "continuant" => Generator::Continuant,
                _ => match rest.strip_prefix("const:") {
                    Some(c) => {
                        let c = Integer::from_str(c.trim()).map_err(|_| err("bad constant"))?;
                        if c < 1 {
                            return Err(err("constant quotient must be >= 1"));
                        }
                        Generator::Constant(c)
                    }
                    None => return Err(err("unknown generator")),
                },
            };
            return Ok(RealInput::Generator(g));
        }
        if let Some(rest) = s.strip_prefix("cf:") {
            let entries = parse_int_list(rest, input)?;
            if entries.iter().any(|a| *a < 1) {
                return Err(err("quotients must be >= 1"));
            }
            let c = crate::cf::Continuants::from_entries(&entries);
            if entries.is_empty() {
                return Self::rational(Rational::new());
            }
            return Self::rational(c.last().value());
        }
        if let Some(rest) = s.strip_prefix("quad:") {
            let parts = parse_int_list(rest, input)?;
            let [p, d, q]: [Integer; 3] = parts.try_into().map_err(|_| err("expected P,D,Q"))?;
            let surd = QuadraticSurd::new(p, d, q)?;
            return Self::quadratic(surd);
        }
        if let Some(rest) = s.strip_prefix("periodic:") {
            let (pre, per) = rest.split_once(';').ok_or_else(|| err("expected prefix;period"))?;
            let pre = parse_int_list(pre, input)?;
            let per = parse_int_list(per, input)?;
            let surd = QuadraticSurd::from_periodic(&pre, &per)?;
            return Self::quadratic(surd);
        }
        let (body, radius) = match s.split_once("+-").or_else(|| s.split_once('±')) {
            Some((b, r)) => (b.trim(), Some(parse_exact(r)?)),
            None => (s, None),
        };
        let is_decimal = radius.is_some() || body.contains(['.', 'e', 'E']);
        let value = parse_exact(body)?;
        if !is_decimal {
            return Self::rational(value);
        }
        let radius = match radius {
            Some(r) => r,
            None => {
                let places = decimal_places(body).unwrap_or(0);
                if places > 10_000 {
                    return Err(err("too many decimal places"));
                }
                Rational::from((1, 2)) / Integer::from(10u32).pow(places)
            }
        };
        Self::decimal(value, radius, precision)
    }
}

impl FromStr for RealInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_precision(s, DEFAULT_PRECISION)
    }
}

fn parse_int_list(s: &str, original: &str) -> Result<Vec<Integer>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.len() > 4096 {
                return Err(Error::parse("real input", original, "integer too long"));
            }
            Integer::from_str(t).map_err(|_| Error::parse("real input", original, "malformed integer"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        assert!(matches!("113/355".parse::<RealInput>().unwrap(), RealInput::Rational(_)));
        assert!(matches!("golden".parse::<RealInput>().unwrap(), RealInput::Quadratic(_)));
        assert!(matches!("quad:-1,2,1".parse::<RealInput>().unwrap(), RealInput::Quadratic(_)));
        assert!(matches!("periodic:;1".parse::<RealInput>().unwrap(), RealInput::Quadratic(_)));
        assert!(matches!("gen:e-2".parse::<RealInput>().unwrap(), RealInput::Generator(_)));
        match "0.25".parse::<RealInput>().unwrap() {
            RealInput::Decimal(d) => assert_eq!(d.radius, Rational::from((1, 200))),
            other => panic!("{other:?}"),
        }
        match "0.25+-1e-3".parse::<RealInput>().unwrap() {
            RealInput::Decimal(d) => assert_eq!(d.radius, Rational::from((1, 1000))),
            other => panic!("{other:?}"),
        }
        match "cf:3,7,16".parse::<RealInput>().unwrap() {
            RealInput::Rational(r) => assert_eq!(r, Rational::from((113, 355))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_points_outside_unit_interval() {
        for bad in ["1", "3/2", "-1/4", "quad:1,2,1", "1.5"] {
            assert!(
                matches!(bad.parse::<RealInput>(), Err(Error::OutOfUnitInterval { .. })),
                "{bad}"
            );
        }
        assert!("gen:const:0".parse::<RealInput>().is_err());
        assert!("quad:0,4,3".parse::<RealInput>().is_err());
    }

    #[test]
    fn e_minus_two_pattern() {
        let a = Generator::EMinusTwo.take(9).unwrap();
        let v: Vec<u64> = a.iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(v, vec![1, 2, 1, 1, 4, 1, 1, 6, 1]);
    }

    #[test]
    fn continuant_generator_squares() {
        let a = Generator::Continuant.take(5).unwrap();
        let v: Vec<u64> = a.iter().map(|x| x.to_u64().unwrap()).collect();
        // q: 1, 2, 5, 27, 734
        assert_eq!(v, vec![1, 1, 2, 5, 27]);
    }

    #[test]
    fn custom_generator_validated() {
        let g = Generator::custom("zero", |_, _| Integer::new());
        assert!(g.take(1).is_err());
    }
}
