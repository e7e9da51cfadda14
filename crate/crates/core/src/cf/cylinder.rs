use rug::{Integer, Rational};

use crate::cf::{convergents, PartialQuotients};
use crate::error::{Error, Result};

/// Which endpoint of a cylinder belongs to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedEnd {
    Left,
    Right,
}

/// The cylinder `I_n(a_1, ..., a_n)`: all points of `[0, 1)` whose expansion
/// starts with the address. Even `n` gives `[p_n/q_n, (p_n+p_{n-1})/(q_n+q_{n-1}))`,
/// odd `n` gives `((p_n+p_{n-1})/(q_n+q_{n-1}), p_n/q_n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    address: PartialQuotients,
    left: Rational,
    right: Rational,
    closed: ClosedEnd,
    q_n: Integer,
    q_prev: Integer,
}

impl Cylinder {
    pub fn address(&self) -> &PartialQuotients {
        &self.address
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn closed_end(&self) -> ClosedEnd {
        self.closed
    }

    pub fn order(&self) -> usize {
        self.address.len()
    }

    pub fn q_n(&self) -> &Integer {
        &self.q_n
    }

    pub fn length(&self) -> Rational {
        Rational::from(&self.right - &self.left)
    }

    /// `1 / (q_n (q_n + q_{n-1}))`, computed from the continuants alone.
    pub fn length_from_continuants(&self) -> Rational {
        let den = Integer::from(&self.q_n + &self.q_prev) * &self.q_n;
        Rational::from((Integer::from(1), den))
    }

    /// `[1 / (2 q_n^2), 1 / q_n^2]`.
    pub fn length_bounds(&self) -> (Rational, Rational) {
        let q2 = Integer::from(self.q_n.square_ref());
        (
            Rational::from((Integer::from(1), Integer::from(&q2 * 2u32))),
            Rational::from((Integer::from(1), q2)),
        )
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self.closed {
            ClosedEnd::Left => *x >= self.left && *x < self.right,
            ClosedEnd::Right => *x > self.left && *x <= self.right,
        }
    }

    /// Inclusion of closed hulls, decided from exact endpoints. The closure
    /// flags are formula-level: the closed end of `[.., a_n, 1]` is the
    /// rational `[.., a_n + 1]`, which sits on the open end of the parent.
    pub fn is_subset_of(&self, other: &Cylinder) -> bool {
        self.left >= other.left && self.right <= other.right
    }

    /// True when the open interiors are disjoint.
    pub fn is_disjoint_from(&self, other: &Cylinder) -> bool {
        self.right <= other.left || other.right <= self.left
    }
}

pub fn cylinder(a: &PartialQuotients) -> Result<Cylinder> {
    if !a.is_fully_certified() {
        return Err(Error::InsufficientDepth {
            required: a.len(),
            certified: a.certified_depth(),
        });
    }
    let c = convergents(a)?;
    let n = c.depth() as isize;
    let near = Rational::from((c.p(n).clone(), c.q(n).clone()));
    let far = Rational::from((
        Integer::from(c.p(n) + c.p(n - 1)),
        Integer::from(c.q(n) + c.q(n - 1)),
    ));
    let (left, right, closed) = if n % 2 == 0 {
        (near, far, ClosedEnd::Left)
    } else {
        (far, near, ClosedEnd::Right)
    };
    Ok(Cylinder {
        address: a.clone(),
        left,
        right,
        closed,
        q_n: c.q(n).clone(),
        q_prev: c.q(n - 1).clone(),
    })
}

/// Bounds `(1 / (3 a_{n+1} q_n^2), 1 / (a_{n+1} q_n^2))` on `|x - p_n/q_n|`.
///
/// Both inequalities are strict for irrational `x`. For rational `x` the
/// upper one is attained at `n = 0` when `x = 1/a_1`.
pub fn approx_error_bounds(a: &PartialQuotients, n: usize) -> Result<(Rational, Rational)> {
    a.require_certified(n + 1)?;
    let c = convergents(&a.prefix(n + 1))?;
    let next = a.get(n + 1).expect("certified entry");
    let denom = Integer::from(c.q(n as isize).square_ref()) * next;
    let upper = Rational::from((Integer::from(1), denom.clone()));
    let lower = Rational::from((Integer::from(1), denom * 3u32));
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(entries: &[u64]) -> PartialQuotients {
        PartialQuotients::from_slice(entries).unwrap()
    }

    #[test]
    fn order_one_cylinder_is_left_open() {
        let c = cylinder(&pq(&[2])).unwrap();
        assert_eq!(*c.left(), Rational::from((1, 3)));
        assert_eq!(*c.right(), Rational::from((1, 2)));
        assert_eq!(c.closed_end(), ClosedEnd::Right);
        assert!(c.contains(&Rational::from((1, 2))));
        assert!(!c.contains(&Rational::from((1, 3))));
    }

    #[test]
    fn order_two_cylinder() {
        let c = cylinder(&pq(&[1, 1])).unwrap();
        assert_eq!(*c.left(), Rational::from((1, 2)));
        assert_eq!(*c.right(), Rational::from((2, 3)));
        assert_eq!(c.closed_end(), ClosedEnd::Left);
        assert_eq!(c.length(), Rational::from((1, 6)));
        assert_eq!(c.length_from_continuants(), Rational::from((1, 6)));
    }

    #[test]
    fn uncertified_address_rejected() {
        let a = PartialQuotients::with_certification(vec![Integer::from(3), Integer::from(4)], 1, false)
            .unwrap();
        assert!(matches!(cylinder(&a), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn nested_extension() {
        let parent = cylinder(&pq(&[2, 3])).unwrap();
        for b in 1..20 {
            let child = cylinder(&pq(&[2, 3, b])).unwrap();
            assert!(child.is_subset_of(&parent));
            assert!(!parent.is_subset_of(&child));
            let sibling = cylinder(&pq(&[2, 3, b + 1])).unwrap();
            assert!(child.is_disjoint_from(&sibling));
        }
    }

    #[test]
    fn error_bounds_need_next_quotient() {
        let a = pq(&[1, 2]);
        assert!(approx_error_bounds(&a, 1).is_ok());
        assert!(matches!(
            approx_error_bounds(&a, 2),
            Err(Error::InsufficientDepth { required: 3, .. })
        ));
    }
}
