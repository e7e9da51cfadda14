use std::fmt;

use rug::Integer;

use crate::error::{Error, Result};

/// A finite continued-fraction address `a_1, ..., a_N`.
///
/// Only the first `certified_depth` entries are guaranteed to be the true
/// partial quotients of the input they were expanded from; exact inputs are
/// always fully certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialQuotients {
    entries: Vec<Integer>,
    certified_depth: usize,
    terminated: bool,
}

impl PartialQuotients {
    /// A fully certified address.
    pub fn new(entries: Vec<Integer>) -> Result<Self> {
        let n = entries.len();
        Self::with_certification(entries, n, false)
    }

    pub fn from_slice(entries: &[u64]) -> Result<Self> {
        Self::new(entries.iter().map(|&a| Integer::from(a)).collect())
    }

    /// `terminated` records that the expansion ended exactly after the last
    /// entry (a rational input).
    pub fn with_certification(
        entries: Vec<Integer>,
        certified_depth: usize,
        terminated: bool,
    ) -> Result<Self> {
        if let Some((index, value)) = entries.iter().enumerate().find(|(_, a)| **a < 1) {
            return Err(Error::InvalidQuotient {
                index: index + 1,
                value: value.to_string(),
            });
        }
        if certified_depth > entries.len() {
            return Err(Error::Config(format!(
                "certified depth {certified_depth} exceeds {} entries",
                entries.len()
            )));
        }
        Ok(PartialQuotients {
            entries,
            certified_depth,
            terminated,
        })
    }

    pub fn entries(&self) -> &[Integer] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Integer> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn certified_depth(&self) -> usize {
        self.certified_depth
    }

    pub fn is_fully_certified(&self) -> bool {
        self.certified_depth == self.entries.len()
    }

    /// True when the input was rational and its expansion ends here.
    pub fn is_terminated(&self) -> bool {
        self.terminated && self.is_fully_certified()
    }

    /// `a_n` with the 1-based index used throughout the theory.
    pub fn get(&self, n: usize) -> Option<&Integer> {
        n.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    /// The first `n` entries, keeping their certification.
    pub fn prefix(&self, n: usize) -> PartialQuotients {
        let n = n.min(self.entries.len());
        PartialQuotients {
            entries: self.entries[..n].to_vec(),
            certified_depth: self.certified_depth.min(n),
            terminated: self.terminated && n == self.entries.len(),
        }
    }

    pub fn require_certified(&self, depth: usize) -> Result<()> {
        if self.certified_depth < depth {
            Err(Error::InsufficientDepth {
                required: depth,
                certified: self.certified_depth,
            })
        } else {
            Ok(())
        }
    }

    /// The alternative expansion of a rational: `[.., a_n]` becomes
    /// `[.., a_n - 1, 1]`. Returns `None` when `a_n = 1`, where the rewrite
    /// would produce a zero quotient.
    pub fn split_last(&self) -> Option<PartialQuotients> {
        let last = self.entries.last()?;
        if *last <= 1 {
            return None;
        }
        let mut entries = self.entries.clone();
        *entries.last_mut().unwrap() -= 1u32;
        entries.push(Integer::from(1));
        let certified = if self.is_fully_certified() {
            entries.len()
        } else {
            self.certified_depth
        };
        Some(PartialQuotients {
            entries,
            certified_depth: certified,
            terminated: self.terminated,
        })
    }
}

impl fmt::Display for PartialQuotients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_entries() {
        let err = PartialQuotients::from_slice(&[3, 0, 2]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidQuotient {
                index: 2,
                value: "0".into()
            }
        );
    }

    #[test]
    fn certified_depth_bounded_by_length() {
        let entries = vec![Integer::from(1), Integer::from(2)];
        assert!(PartialQuotients::with_certification(entries, 3, false).is_err());
    }

    #[test]
    fn split_last_normalization() {
        let a = PartialQuotients::from_slice(&[3, 7, 16]).unwrap();
        assert_eq!(a.split_last().unwrap().to_string(), "[3,7,15,1]");
        let b = PartialQuotients::from_slice(&[2, 1]).unwrap();
        assert!(b.split_last().is_none());
    }
}
