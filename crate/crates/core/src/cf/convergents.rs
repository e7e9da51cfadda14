use rug::{Integer, Rational};

use crate::cf::PartialQuotients;
use crate::error::{Error, Result};

/// A convergent `p_n / q_n`; `index` may be `-1` or `0` for the seeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: Integer,
    pub q: Integer,
    pub index: isize,
}

impl Convergent {
    /// `p_n / q_n` as an exact rational. Panics for the `n = -1` seed.
    pub fn value(&self) -> Rational {
        Rational::from((self.p.clone(), self.q.clone()))
    }
}

/// Numerator and denominator continuants `p_n`, `q_n` for `n = -1..=N`,
/// generated by `p_{n+1} = a_{n+1} p_n + p_{n-1}` from the seeds
/// `p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuants {
    p: Vec<Integer>,
    q: Vec<Integer>,
}

impl Continuants {
    pub fn from_entries(entries: &[Integer]) -> Self {
        let mut p = Vec::with_capacity(entries.len() + 2);
        let mut q = Vec::with_capacity(entries.len() + 2);
        p.push(Integer::from(1));
        p.push(Integer::new());
        q.push(Integer::new());
        q.push(Integer::from(1));
        for a in entries {
            let n = p.len();
            let next_p = Integer::from(a * &p[n - 1]) + &p[n - 2];
            let next_q = Integer::from(a * &q[n - 1]) + &q[n - 2];
            p.push(next_p);
            q.push(next_q);
        }
        Continuants { p, q }
    }

    /// Largest index `N`.
    pub fn depth(&self) -> usize {
        self.p.len() - 2
    }

    fn slot(&self, n: isize) -> usize {
        let slot = usize::try_from(n + 1).expect("continuant index below -1");
        assert!(slot < self.p.len(), "continuant index {n} beyond depth {}", self.depth());
        slot
    }

    pub fn p(&self, n: isize) -> &Integer {
        &self.p[self.slot(n)]
    }

    pub fn q(&self, n: isize) -> &Integer {
        &self.q[self.slot(n)]
    }

    pub fn convergent(&self, n: isize) -> Convergent {
        Convergent {
            p: self.p(n).clone(),
            q: self.q(n).clone(),
            index: n,
        }
    }

    pub fn last(&self) -> Convergent {
        self.convergent(self.depth() as isize)
    }

    /// Convergents `n = 1..=N`.
    pub fn iter(&self) -> impl Iterator<Item = Convergent> + '_ {
        (1..=self.depth() as isize).map(move |n| self.convergent(n))
    }

    /// `p_{n-1} q_n - p_n q_{n-1}`, equal to `(-1)^n`.
    pub fn determinant(&self, n: isize) -> Integer {
        Integer::from(self.p(n - 1) * self.q(n)) - Integer::from(self.p(n) * self.q(n - 1))
    }
}

pub fn convergents(a: &PartialQuotients) -> Result<Continuants> {
    if a.is_empty() {
        return Err(Error::EmptyAddress);
    }
    Ok(Continuants::from_entries(a.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_denominators() {
        let a = PartialQuotients::from_slice(&[1, 1, 1, 1, 1]).unwrap();
        let c = convergents(&a).unwrap();
        let qs: Vec<u64> = c.iter().map(|cv| cv.q.to_u64().unwrap()).collect();
        assert_eq!(qs, vec![1, 2, 3, 5, 8]);
    }

    #[test]
    fn euclid_round_trip() {
        let a = PartialQuotients::from_slice(&[3, 7, 16]).unwrap();
        let c = convergents(&a).unwrap();
        assert_eq!(c.last().value(), Rational::from((113, 355)));
    }

    #[test]
    fn seeds_follow_convention() {
        let c = Continuants::from_entries(&[Integer::from(4)]);
        assert_eq!(*c.p(-1), 1);
        assert_eq!(*c.q(-1), 0);
        assert_eq!(*c.p(0), 0);
        assert_eq!(*c.q(0), 1);
        assert_eq!(c.determinant(1), -1);
    }

    #[test]
    fn empty_address_rejected() {
        let a = PartialQuotients::new(Vec::new()).unwrap();
        assert_eq!(convergents(&a).unwrap_err(), Error::EmptyAddress);
    }
}
