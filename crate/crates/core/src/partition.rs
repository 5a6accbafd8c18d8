//! Integer partitions, stored with parts weakly decreasing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("partition parts must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<usize>),
    #[error("cannot parse partition {0:?}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts an arbitrary multiset of positive parts.
    pub fn from_multiset(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PartitionError;
    fn try_from(v: Vec<usize>) -> Result<Self, PartitionError> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, PartitionError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts: Option<Vec<usize>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
        Partition::new(parts.ok_or_else(|| PartitionError::Parse(s.to_string()))?)
    }
}

/// All partitions of `m` in reverse lexicographic order, starting from `(m)`.
/// `partitions_of(0)` is the single empty partition.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_four() {
        let got: Vec<String> = partitions_of(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        let counts: Vec<usize> = (0..=10).map(|m| partitions_of(m).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        for m in 0..=8 {
            for p in partitions_of(m) {
                assert_eq!(p.weight(), m);
            }
        }
    }

    #[test]
    fn validation_and_text() {
        assert_eq!(
            Partition::new(vec![1, 2]),
            Err(PartitionError::NotDecreasing(vec![1, 2]))
        );
        assert_eq!(Partition::new(vec![2, 0]), Err(PartitionError::ZeroPart));
        let p: Partition = "3,2,1,1,1".parse().unwrap();
        assert_eq!(p.weight(), 8);
        assert_eq!(p.to_string(), "3,2,1,1,1");
        assert_eq!(
            Partition::from_multiset(vec![1, 3, 2]).unwrap().to_string(),
            "3,2,1"
        );
        assert!("2,x".parse::<Partition>().is_err());
    }
}
