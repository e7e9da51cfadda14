//! Words of the Gauss IFS `u_a(x) = 1/(a + x)` with continuants `Q_omega`.
//!
//! Conventions: `Q_empty = 1` and the continuant before the empty word is 0,
//! so `Q_omega = q_n` for `omega = (a_1, .., a_n)`.

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default bound on `Q_max`.
pub const DEFAULT_Q_CAP: u64 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GifsWord {
    pub word: Vec<u64>,
    pub q: u64,
    pub q_prev: u64,
    pub p: u64,
    pub p_prev: u64,
}

impl GifsWord {
    pub fn empty() -> Self {
        GifsWord {
            word: Vec::new(),
            q: 1,
            q_prev: 0,
            p: 0,
            p_prev: 1,
        }
    }

    /// `omega b` via `Q_{omega b} = b Q_omega + Q_{omega'}`.
    pub fn extend(&self, b: u64) -> Option<GifsWord> {
        let q = b.checked_mul(self.q)?.checked_add(self.q_prev)?;
        let p = b.checked_mul(self.p)?.checked_add(self.p_prev)?;
        let mut word = self.word.clone();
        word.push(b);
        Some(GifsWord {
            word,
            q,
            q_prev: self.q,
            p,
            p_prev: self.p,
        })
    }

    /// `u_omega(y) = (p + y p') / (q + y q')`.
    pub fn apply(&self, y: &Rational) -> Rational {
        let num = Rational::from(y * self.p_prev) + self.p;
        let den = Rational::from(y * self.q_prev) + self.q;
        num / den
    }

    /// `u_omega([0, 1])` as `(left, right)` with `left <= right`.
    pub fn interval(&self) -> (Rational, Rational) {
        let a = Rational::from((self.p, self.q));
        let b = Rational::from((self.p + self.p_prev, self.q + self.q_prev));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Largest `b` with `Q_{omega b} <= q_max`.
    pub fn max_symbol(&self, q_max: u64) -> u64 {
        q_max.saturating_sub(self.q_prev) / self.q
    }
}

/// All nonempty words with `Q_omega <= q_max`, in depth-first lexicographic order.
pub fn enumerate_gifs(q_max: u64, cap: u64) -> Result<Vec<GifsWord>> {
    if q_max > cap {
        return Err(Error::CapExceeded {
            what: format!("Q_max = {q_max}"),
            cap: cap.to_string(),
        });
    }
    let mut out = Vec::new();
    let mut stack = vec![GifsWord::empty()];
    while let Some(w) = stack.pop() {
        if !w.word.is_empty() {
            out.push(w.clone());
        }
        let top = w.max_symbol(q_max);
        for b in (1..=top).rev() {
            stack.push(w.extend(b).expect("bounded by q_max"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_max_two() {
        let words: Vec<Vec<u64>> = enumerate_gifs(2, DEFAULT_Q_CAP)
            .unwrap()
            .into_iter()
            .map(|w| w.word)
            .collect();
        assert_eq!(words, vec![vec![1], vec![1, 1], vec![2]]);
    }

    #[test]
    fn unit_words_are_fibonacci() {
        let mut w = GifsWord::empty();
        let (mut f0, mut f1) = (1u64, 1u64);
        for _ in 0..20 {
            w = w.extend(1).unwrap();
            assert_eq!(w.q, f1);
            (f0, f1) = (f1, f0 + f1);
        }
    }

    #[test]
    fn interval_endpoints_are_images() {
        let w = GifsWord::empty().extend(3).unwrap().extend(7).unwrap();
        let (l, r) = w.interval();
        let a = w.apply(&Rational::new());
        let b = w.apply(&Rational::from(1));
        assert_eq!((l, r), if a < b { (a, b) } else { (b, a) });
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(enumerate_gifs(2048, DEFAULT_Q_CAP), Err(Error::CapExceeded { .. })));
    }
}
