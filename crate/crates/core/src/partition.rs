use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid partition: {0}")]
pub struct PartitionError(String);

/// An integer partition: parts in non-increasing order, all positive.
///
/// Ordering is lexicographic on the parts, so `(1,1) < (2)` and
/// `(2,2) < (3,1)`. The empty partition (weight 0) indexes the constant
/// monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Empty partition, the index of the constant term.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Sorts `parts` into non-increasing order. Zero parts are rejected.
    pub fn from_parts(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn single(part: u32) -> Self {
        assert!(part >= 1);
        Partition(vec![part])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Multiset union of parts: the index of `p_self * p_other`.
    pub fn union(&self, other: &Partition) -> Partition {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Partition(out)
    }

    /// Adds a single part.
    pub fn with_part(&self, part: u32) -> Partition {
        assert!(part >= 1);
        let pos = self.0.partition_point(|&x| x >= part);
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.extend_from_slice(&self.0[..pos]);
        out.push(part);
        out.extend_from_slice(&self.0[pos..]);
        Partition(out)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Comma-separated parts, e.g. `3,1,1`. The empty partition prints as "".
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.parse::<u32>().map_err(|_| PartitionError(format!("bad part {p:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError(format!("parts of {s:?} are not non-increasing")));
        }
        Partition::from_parts(parts)
    }
}
