//! Permutations in one-line notation and the brute-force pattern layer.
//!
//! Everything here is deliberately naive: occurrence counting enumerates every
//! index subset. This layer is the reference the faster census code and the
//! tree-based counting are checked against.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binomial, factorial, Subsets};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..{len}: {detail}")]
    NotBijection { len: usize, detail: String },
    #[error("index {index} out of range for a permutation of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} repeated or out of order")]
    DuplicateIndex(usize),
    #[error("empty pattern")]
    EmptyPattern,
    #[error("empty permutation where a nonempty one is required")]
    Empty,
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
    #[error("unknown symmetry {0:?}")]
    UnknownSymmetry(String),
}

/// A permutation of `{1, …, n}` in one-line notation.
///
/// The empty permutation (`n = 0`) is allowed; it only shows up as the
/// constant term of generating functions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(PermError::NotBijection {
                    len: n,
                    detail: format!("value {v} out of range"),
                });
            }
            if seen[v] {
                return Err(PermError::NotBijection {
                    len: n,
                    detail: format!("value {v} repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    /// Standardisation of an arbitrary sequence of distinct values.
    pub fn from_order<T: Ord>(values: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
        let mut out = vec![0; values.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = rank + 1;
        }
        Permutation(out)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    /// `I(n) = 12…n`.
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// The pattern formed by the entries at the given 1-based positions.
    pub fn pattern_at(&self, indices: &[usize]) -> Result<Permutation, PermError> {
        let mut prev = 0;
        for &i in indices {
            if i == 0 || i > self.len() {
                return Err(PermError::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            if i <= prev {
                return Err(PermError::DuplicateIndex(i));
            }
            prev = i;
        }
        let picked: Vec<usize> = indices.iter().map(|&i| self.0[i - 1]).collect();
        Ok(Permutation::from_order(&picked))
    }

    /// `ν_σ(π)` with `σ = self` as the pattern, by exhaustive subset
    /// enumeration.
    pub fn occurrences_in(&self, pi: &Permutation) -> Result<u64, PermError> {
        occurrences(self, pi)
    }

    pub fn contains(&self, sigma: &Permutation) -> bool {
        !sigma.is_empty() && first_occurrence(sigma, self).is_some()
    }

    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len();
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + n));
        Permutation(v)
    }

    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let m = other.len();
        let mut v: Vec<usize> = self.0.iter().map(|&x| x + m).collect();
        v.extend_from_slice(&other.0);
        Permutation(v)
    }

    pub fn reverse(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// Entrywise complement `π^c(i) = n − π(i) + 1`.
    pub fn complement(&self) -> Permutation {
        let n = self.len();
        Permutation(self.0.iter().map(|&x| n + 1 - x).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v - 1] = i + 1;
        }
        Permutation(out)
    }

    pub fn apply(&self, g: Symmetry) -> Permutation {
        g.apply(self)
    }

    /// Splits at every `i` with `{π(1..=i)} = {1..=i}`. A single block means
    /// sum-indecomposable.
    pub fn sum_blocks(&self) -> Vec<Permutation> {
        self.blocks(|max_or_min, i, _n| max_or_min == i, true)
    }

    /// Splits at every `i` with `{π(1..=i)} = {n−i+1..=n}`.
    pub fn skew_blocks(&self) -> Vec<Permutation> {
        self.blocks(|min, i, n| min == n - i + 1, false)
    }

    fn blocks(&self, cut: impl Fn(usize, usize, usize) -> bool, use_max: bool) -> Vec<Permutation> {
        let n = self.len();
        let mut out = Vec::new();
        let mut start = 0;
        let mut ext = if use_max { 0 } else { usize::MAX };
        for i in 0..n {
            ext = if use_max {
                ext.max(self.0[i])
            } else {
                ext.min(self.0[i])
            };
            if cut(ext, i + 1, n) {
                out.push(Permutation::from_order(&self.0[start..=i]));
                start = i + 1;
            }
        }
        out
    }

    pub fn is_sum_decomposable(&self) -> bool {
        self.sum_blocks().len() >= 2
    }

    pub fn is_skew_decomposable(&self) -> bool {
        self.skew_blocks().len() >= 2
    }

    /// True iff the permutation avoids both 2413 and 3142.
    pub fn is_separable(&self) -> bool {
        let n = self.len();
        if n < 4 {
            return true;
        }
        let mut s = Subsets::new(n, 4);
        while let Some(idx) = s.next_subset() {
            let [a, b, c, d] = [idx[0], idx[1], idx[2], idx[3]].map(|i| self.0[i]);
            if is_basis_pattern(a, b, c, d) {
                return false;
            }
        }
        true
    }

    /// Delimited text form, e.g. `2 4 1 5 3`.
    pub fn to_delimited(&self, sep: &str) -> String {
        self.0
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Compact digit string (`24153`); `None` once some value exceeds 9.
    pub fn to_compact(&self) -> Option<String> {
        if self.len() > 9 {
            return None;
        }
        Some(self.0.iter().map(|v| char::from(b'0' + *v as u8)).collect())
    }

    /// Compact form when available, space-delimited otherwise.
    pub fn to_short_string(&self) -> String {
        self.to_compact().unwrap_or_else(|| self.to_delimited(" "))
    }
}

/// True if `(a, b, c, d)` is order isomorphic to 2413 or 3142.
#[inline]
pub(crate) fn is_basis_pattern<T: Ord>(a: T, b: T, c: T, d: T) -> bool {
    // 2413: c < a < d < b ; 3142: b < d < a < c
    (c < a && a < d && d < b) || (b < d && d < a && a < c)
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;
    fn try_from(v: Vec<usize>) -> Result<Self, PermError> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_delimited(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_short_string())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `24153`, `2 4 1 5 3` and `2,4,1,5,3`. The empty string parses
    /// as the empty permutation.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::empty());
        }
        let delimited = s.contains(|c: char| c == ',' || c.is_whitespace());
        let values: Option<Vec<usize>> = if delimited {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().ok())
                .collect()
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect()
        };
        let values = values.ok_or_else(|| PermError::Parse(s.to_string()))?;
        Permutation::new(values)
    }
}

/// `ν_σ(π)`: the number of index subsets of `π` whose pattern is `σ`.
pub fn occurrences(sigma: &Permutation, pi: &Permutation) -> Result<u64, PermError> {
    if sigma.is_empty() {
        return Err(PermError::EmptyPattern);
    }
    let k = sigma.len();
    let mut count = 0;
    let mut subsets = Subsets::new(pi.len(), k);
    while let Some(idx) = subsets.next_subset() {
        if matches_at(sigma, pi, idx) {
            count += 1;
        }
    }
    Ok(count)
}

fn first_occurrence(sigma: &Permutation, pi: &Permutation) -> Option<Vec<usize>> {
    let mut subsets = Subsets::new(pi.len(), sigma.len());
    while let Some(idx) = subsets.next_subset() {
        if matches_at(sigma, pi, idx) {
            return Some(idx.iter().map(|i| i + 1).collect());
        }
    }
    None
}

/// 0-based indices; pattern match by pairwise comparison.
fn matches_at(sigma: &Permutation, pi: &Permutation, idx: &[usize]) -> bool {
    let k = idx.len();
    for a in 0..k {
        for b in a + 1..k {
            let lt_pat = sigma.0[a] < sigma.0[b];
            let lt_txt = pi.0[idx[a]] < pi.0[idx[b]];
            if lt_pat != lt_txt {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    Direct,
    Skew,
}

/// `σ ⊕ τ` or `σ ⊖ τ`; both operands must be nonempty.
pub fn sum(
    sigma: &Permutation,
    tau: &Permutation,
    kind: SumKind,
) -> Result<Permutation, PermError> {
    if sigma.is_empty() || tau.is_empty() {
        return Err(PermError::Empty);
    }
    Ok(match kind {
        SumKind::Direct => sigma.direct_sum(tau),
        SumKind::Skew => sigma.skew_sum(tau),
    })
}

/// `ν_σ(𝔖ₙ) = n!/k! · C(n, k)`; zero when `k > n`.
pub fn symmetric_group_popularity(k: u64, n: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    factorial(n) / factorial(k) * binomial(n, k)
}

/// An element of the dihedral group of order eight acting on permutation
/// diagrams.
///
/// The element acts on the points `(i, π(i))` by first swapping the axes
/// (inverse) if `transpose` is set, then mirroring horizontally (reverse) if
/// `flip_x`, then vertically (complement) if `flip_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry {
    transpose: bool,
    flip_x: bool,
    flip_y: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry::new(false, false, false);
    pub const REVERSE: Symmetry = Symmetry::new(false, true, false);
    pub const COMPLEMENT: Symmetry = Symmetry::new(false, false, true);
    pub const INVERSE: Symmetry = Symmetry::new(true, false, false);

    const fn new(transpose: bool, flip_x: bool, flip_y: bool) -> Self {
        Symmetry {
            transpose,
            flip_x,
            flip_y,
        }
    }

    pub fn all() -> [Symmetry; 8] {
        let mut out = [Symmetry::IDENTITY; 8];
        for (bits, slot) in out.iter_mut().enumerate() {
            *slot = Symmetry::new(bits & 4 != 0, bits & 1 != 0, bits & 2 != 0);
        }
        out
    }

    pub fn generators() -> [Symmetry; 3] {
        [Symmetry::REVERSE, Symmetry::COMPLEMENT, Symmetry::INVERSE]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Symmetry) -> Symmetry {
        let (ox, oy) = if self.transpose {
            (other.flip_y, other.flip_x)
        } else {
            (other.flip_x, other.flip_y)
        };
        Symmetry::new(
            self.transpose ^ other.transpose,
            self.flip_x ^ ox,
            self.flip_y ^ oy,
        )
    }

    pub fn inverse_element(self) -> Symmetry {
        Symmetry::all()
            .into_iter()
            .find(|&h| self.compose(h) == Symmetry::IDENTITY)
            .expect("group element without inverse")
    }

    /// Factorisation into generators, applied left to right.
    pub fn generator_word(self) -> Vec<Symmetry> {
        let mut w = Vec::new();
        if self.transpose {
            w.push(Symmetry::INVERSE);
        }
        if self.flip_x {
            w.push(Symmetry::REVERSE);
        }
        if self.flip_y {
            w.push(Symmetry::COMPLEMENT);
        }
        w
    }

    pub fn apply(self, pi: &Permutation) -> Permutation {
        let mut p = pi.clone();
        if self.transpose {
            p = p.inverse();
        }
        if self.flip_x {
            p = p.reverse();
        }
        if self.flip_y {
            p = p.complement();
        }
        p
    }

    /// Name as a generator word: `id`, `r`, `c`, `i`, `ir`, `rc`, `ic`, `irc`.
    pub fn name(self) -> String {
        let w = self.generator_word();
        if w.is_empty() {
            return "id".into();
        }
        w.iter()
            .map(|g| match *g {
                Symmetry::INVERSE => 'i',
                Symmetry::REVERSE => 'r',
                _ => 'c',
            })
            .collect()
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Symmetry {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        match s {
            "id" | "identity" => return Ok(Symmetry::IDENTITY),
            "reverse" => return Ok(Symmetry::REVERSE),
            "complement" => return Ok(Symmetry::COMPLEMENT),
            "inverse" => return Ok(Symmetry::INVERSE),
            _ => {}
        }
        Symmetry::all()
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| PermError::UnknownSymmetry(s.to_string()))
    }
}

/// All permutations of length `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn pattern_at_examples() {
        assert_eq!(p("24153").pattern_at(&[2, 3, 5]).unwrap(), p("312"));
        assert_eq!(
            p("215643798").pattern_at(&[2, 3, 4, 8, 9]).unwrap(),
            p("12354")
        );
        let pi = p("3142");
        assert_eq!(pi.pattern_at(&[1, 2, 3, 4]).unwrap(), pi);
    }

    #[test]
    fn pattern_at_errors() {
        assert_eq!(
            p("123").pattern_at(&[1, 4]),
            Err(PermError::IndexOutOfRange { index: 4, len: 3 })
        );
        assert_eq!(
            p("123").pattern_at(&[2, 2]),
            Err(PermError::DuplicateIndex(2))
        );
        assert!(p("123").pattern_at(&[0]).is_err());
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&p("312"), &p("24153")).unwrap(), 1);
        assert_eq!(occurrences(&p("21"), &p("321")).unwrap(), 3);
        assert_eq!(occurrences(&p("123"), &p("2413")).unwrap(), 0);
        assert_eq!(
            occurrences(&Permutation::empty(), &p("21")),
            Err(PermError::EmptyPattern)
        );
        assert!(p("24153").contains(&p("312")));
        assert!(!p("2413").contains(&p("123")));
    }

    #[test]
    fn sums() {
        assert_eq!(sum(&p("21"), &p("21"), SumKind::Direct).unwrap(), p("2143"));
        assert_eq!(sum(&p("12"), &p("12"), SumKind::Skew).unwrap(), p("3412"));
        let one = p("1");
        let dec3 = one.skew_sum(&one).skew_sum(&one);
        let inner = dec3.direct_sum(&one);
        let right = one.direct_sum(&one);
        assert_eq!(inner.skew_sum(&right), p("543612"));
        assert_eq!(
            sum(&Permutation::empty(), &one, SumKind::Direct),
            Err(PermError::Empty)
        );
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(p("24153").apply(Symmetry::REVERSE), p("35142"));
        assert_eq!(p("2413").apply(Symmetry::COMPLEMENT), p("3142"));
        assert_eq!(p("24153").apply(Symmetry::IDENTITY), p("24153"));
        assert_eq!(p("2413").apply(Symmetry::INVERSE), p("3142"));
    }

    #[test]
    fn group_is_closed_and_faithful() {
        let all = Symmetry::all();
        let probe = p("13542"); // trivial stabiliser
        let images: std::collections::BTreeSet<_> = all.iter().map(|g| g.apply(&probe)).collect();
        assert_eq!(images.len(), 8);
        for g in all {
            for h in all {
                let gh = g.compose(h);
                assert!(all.contains(&gh));
                assert_eq!(gh.apply(&probe), g.apply(&h.apply(&probe)));
            }
            assert_eq!(g.compose(g.inverse_element()), Symmetry::IDENTITY);
            assert_eq!(g.name().parse::<Symmetry>().unwrap(), g);
        }
    }

    #[test]
    fn separability() {
        assert!(!p("2413").is_separable());
        assert!(!p("3142").is_separable());
        assert!(p("215643798").is_separable());
        assert!(p("1").is_separable());
        assert!(Permutation::empty().is_separable());
    }

    #[test]
    fn popularity_in_symmetric_group() {
        assert_eq!(symmetric_group_popularity(3, 4), BigUint::from(16u32));
        assert_eq!(symmetric_group_popularity(5, 5), BigUint::from(1u32));
        assert_eq!(symmetric_group_popularity(2, 3), BigUint::from(9u32));
        assert_eq!(symmetric_group_popularity(4, 3), BigUint::default());
        // brute-force cross-check: total inversions over 𝔖₃
        let inv: u64 = all_permutations(3)
            .iter()
            .map(|pi| occurrences(&p("21"), pi).unwrap())
            .sum();
        assert_eq!(inv, 9);
    }

    #[test]
    fn parsing_and_formatting() {
        assert_eq!(p("2 4 1 5 3"), p("24153"));
        assert_eq!(p("2,4,1,5,3"), p("24153"));
        assert_eq!(p("24153").to_string(), "2 4 1 5 3");
        assert_eq!(p("24153").to_short_string(), "24153");
        let long: Permutation = "10 9 8 7 6 5 4 3 2 1".parse().unwrap();
        assert_eq!(long.len(), 10);
        assert_eq!(long.to_compact(), None);
        assert!("1a3".parse::<Permutation>().is_err());
        assert!("113".parse::<Permutation>().is_err());
        assert!("0".parse::<Permutation>().is_err());
    }

    #[test]
    fn decomposability() {
        assert!(p("2143").is_sum_decomposable());
        assert!(!p("2143").is_skew_decomposable());
        assert!(p("3412").is_skew_decomposable());
        assert!(!p("1").is_sum_decomposable());
        assert!(!p("1").is_skew_decomposable());
        assert!(!p("2413").is_sum_decomposable() && !p("2413").is_skew_decomposable());
        assert_eq!(
            p("215643798").sum_blocks(),
            vec![p("21"), p("3421"), p("1"), p("21")]
        );
    }
}
