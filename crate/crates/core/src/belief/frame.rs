use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest frame a [`Subset`] bitmask can address.
pub const MAX_OUTCOMES: usize = 64;

/// Largest frame for which set functions are tabulated densely (2^16 entries).
pub const DENSE_LIMIT: usize = 16;

/// A subset of a frame, stored as a bitmask over outcome indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        debug_assert!(index < MAX_OUTCOMES);
        Subset(1u64 << index)
    }

    /// The full set over a frame of `n` outcomes.
    pub fn full(n: usize) -> Self {
        if n >= MAX_OUTCOMES {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(Subset::EMPTY, |acc, i| acc.union(Subset::singleton(i)))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < MAX_OUTCOMES && self.0 & (1u64 << index) != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement relative to a frame of `n` outcomes.
    pub fn complement(self, n: usize) -> Subset {
        Subset::full(n).difference(self)
    }

    /// Outcome indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn first(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }
}

/// A finite, ordered set of distinct outcome labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidFrame(
                "a frame needs at least one outcome".into(),
            ));
        }
        if labels.len() > MAX_OUTCOMES {
            return Err(Error::FrameTooLarge {
                size: labels.len(),
                limit: MAX_OUTCOMES,
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidFrame(format!("duplicate outcome `{l}`")));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn complement(&self, s: Subset) -> Subset {
        s.complement(self.len())
    }

    /// Builds a subset from outcome labels. Repeated labels are tolerated.
    pub fn subset<I, S>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels.into_iter().try_fold(Subset::EMPTY, |acc, l| {
            let l = l.as_ref();
            self.index_of(l)
                .map(|i| acc.union(Subset::singleton(i)))
                .ok_or_else(|| Error::UnknownOutcome(l.to_string()))
        })
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<String> {
        s.indices().map(|i| self.labels[i].clone()).collect()
    }

    /// `{a,b}` rendering used in messages and tables.
    pub fn format_subset(&self, s: Subset) -> String {
        let names: Vec<&str> = s.indices().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn ensure_dense(&self) -> Result<()> {
        if self.len() > DENSE_LIMIT {
            Err(Error::FrameTooLarge {
                size: self.len(),
                limit: DENSE_LIMIT,
            })
        } else {
            Ok(())
        }
    }

    /// Every subset of the frame in bitmask order. Requires a dense-sized frame.
    pub fn all_subsets(&self) -> impl Iterator<Item = Subset> {
        let count = 1u64 << self.len().min(DENSE_LIMIT);
        (0..count).map(Subset::from_bits)
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicate_frames() {
        assert!(matches!(
            Frame::new(Vec::<String>::new()),
            Err(Error::InvalidFrame(_))
        ));
        assert!(matches!(
            Frame::new(["a", "a"]),
            Err(Error::InvalidFrame(_))
        ));
        let big: Vec<String> = (0..65).map(|i| format!("o{i}")).collect();
        assert!(matches!(Frame::new(big), Err(Error::FrameTooLarge { .. })));
    }

    #[test]
    fn subset_algebra() {
        let f = Frame::new(["a", "b", "c"]).unwrap();
        let ab = f.subset(["a", "b"]).unwrap();
        let bc = f.subset(["b", "c"]).unwrap();
        assert_eq!(ab.intersection(bc), f.subset(["b"]).unwrap());
        assert_eq!(f.complement(ab), f.subset(["c"]).unwrap());
        assert_eq!(ab.indices().collect::<Vec<_>>(), vec![0, 1]);
        assert!(Subset::EMPTY.is_subset_of(ab));
        assert!(ab.is_subset_of(f.full()));
        assert_eq!(f.format_subset(bc), "{b,c}");
        assert!(matches!(f.subset(["z"]), Err(Error::UnknownOutcome(_))));
        assert_eq!(Subset::full(64).len(), 64);
    }
}
