//! Enumeration of separable permutations and the simultaneous pattern census.
//!
//! The census visits every separable permutation of each length `n ≤ N` once
//! and, for every `k`-subset of its positions, increments a dense counter
//! indexed by the lexicographic rank of the pattern. Workers own private
//! counters, and the shards are merged by exact addition, so the result does
//! not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::combinat::binomial;
use crate::dectree::{decompose, signature, wedge};
use crate::partition::{partitions_of, Partition};
use crate::perm::{is_basis_pattern, Permutation};
use crate::series::TruncatedSeries;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("pattern length must be positive")]
    ZeroLength,
    #[error("pattern length {k} exceeds the horizon {max_len}")]
    LengthExceedsHorizon { k: usize, max_len: usize },
    #[error("census needs {required} windows at the top length, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },
    #[error("{0} is not separable")]
    NotSeparable(Permutation),
    #[error("lengths above {0} are not supported")]
    TooLong(usize),
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
}

/// Largest permutation length the census handles (values are stored as `u8`
/// and the used set as a `u64` mask).
pub const MAX_LEN: usize = 63;

/// Streams separable permutations in lexicographic order by depth-first
/// extension. `forbidden[d]` holds the values that would complete a 2413 or
/// 3142 if placed at position `d`.
pub struct Separables {
    n: usize,
    base: usize,
    perm: Vec<u8>,
    // next[d]: smallest value still to try at depth d
    next: Vec<u8>,
    forbidden: Vec<u64>,
    used: u64,
    done: bool,
    fresh: bool,
}

/// Bits strictly between `a` and `b`.
fn open_interval(a: u8, b: u8) -> u64 {
    if b <= a + 1 {
        return 0;
    }
    ((1u64 << b) - 1) & !((1u64 << (a + 1)) - 1)
}

impl Separables {
    fn with_prefix(n: usize, prefix: &[u8]) -> Self {
        assert!(n <= MAX_LEN && prefix.len() <= n);
        let mut it = Separables {
            n,
            base: prefix.len(),
            perm: Vec::with_capacity(n),
            next: vec![1u8; n + 1],
            forbidden: vec![0u64; n + 1],
            used: 0,
            done: !prefix_is_separable(prefix),
            fresh: true,
        };
        for &v in prefix {
            it.push(v);
        }
        it
    }

    /// Appends `v` and records the values it rules out at the next position:
    /// with `v = p[l]` and `i < l`, a later value in `(p[i], max p(i..l))`
    /// completes 2413 when `p[l] < p[i]`, and one in `(min p(i..l), p[i])`
    /// completes 3142 when `p[l] > p[i]`.
    fn push(&mut self, v: u8) {
        let l = self.perm.len();
        let mut f = self.forbidden[l];
        let (mut hi, mut lo) = (0u8, u8::MAX);
        for i in (0..l).rev() {
            let pi = self.perm[i];
            if v < pi && hi > pi {
                f |= open_interval(pi, hi);
            }
            if v > pi && lo < pi {
                f |= open_interval(lo, pi);
            }
            hi = hi.max(pi);
            lo = lo.min(pi);
        }
        self.next[l] = v + 1;
        self.next[l + 1] = 1;
        self.forbidden[l + 1] = f;
        self.perm.push(v);
        self.used |= 1 << v;
    }

    /// Advances to the next complete permutation; the slice is valid until
    /// the following call.
    fn advance(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            if self.perm.len() == self.n {
                return Some(&self.perm);
            }
        } else if !self.pop() {
            return None;
        }
        loop {
            let d = self.perm.len();
            let blocked = self.used | self.forbidden[d];
            match (self.next[d]..=self.n as u8).find(|&v| blocked & (1 << v) == 0) {
                Some(v) => {
                    self.push(v);
                    if self.perm.len() == self.n {
                        return Some(&self.perm);
                    }
                }
                None => {
                    if !self.pop() {
                        return None;
                    }
                }
            }
        }
    }

    fn pop(&mut self) -> bool {
        if self.perm.len() <= self.base {
            self.done = true;
            return false;
        }
        let v = self.perm.pop().unwrap();
        self.used &= !(1 << v);
        true
    }
}

impl Iterator for Separables {
    type Item = Permutation;
    fn next(&mut self) -> Option<Permutation> {
        let p = self.advance()?;
        Some(Permutation::from_order(p))
    }
}

fn prefix_is_separable(p: &[u8]) -> bool {
    let d = p.len();
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                for e in c + 1..d {
                    if is_basis_pattern(p[a], p[b], p[c], p[e]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All separable permutations of length `n` in lexicographic order.
pub fn enumerate_separable(n: usize) -> Separables {
    Separables::with_prefix(n, &[])
}

/// The large Schröder number `s_n`, with `s_0 = 1`.
pub fn schroder_count(n: usize) -> BigUint {
    // d[i]: sum-decomposable separables of length i; s_i = 2 d[i] for i >= 2
    let mut s = vec![BigUint::from(1u32); n.max(1) + 1];
    let mut d = vec![BigUint::from(0u32); n.max(1) + 1];
    for m in 2..=n {
        let mut acc = BigUint::from(0u32);
        for i in 1..m {
            let first = if i == 1 {
                BigUint::from(1u32)
            } else {
                d[i].clone()
            };
            acc += first * &s[m - i];
        }
        s[m] = &acc * 2u32;
        d[m] = acc;
    }
    s[n].clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StructuralFilter {
    #[default]
    All,
    SumDecomposable,
    SkewDecomposable,
    SumIndecomposable,
    SkewIndecomposable,
}

impl StructuralFilter {
    pub const ALL: [StructuralFilter; 5] = [
        StructuralFilter::All,
        StructuralFilter::SumDecomposable,
        StructuralFilter::SkewDecomposable,
        StructuralFilter::SumIndecomposable,
        StructuralFilter::SkewIndecomposable,
    ];

    /// `p` holds the values `1..=p.len()`. Length 1 is indecomposable both ways.
    pub fn accepts(self, p: &[u8]) -> bool {
        match self {
            StructuralFilter::All => true,
            StructuralFilter::SumDecomposable => sum_decomposable(p),
            StructuralFilter::SkewDecomposable => skew_decomposable(p),
            StructuralFilter::SumIndecomposable => !sum_decomposable(p),
            StructuralFilter::SkewIndecomposable => !skew_decomposable(p),
        }
    }

    fn name(self) -> &'static str {
        match self {
            StructuralFilter::All => "all",
            StructuralFilter::SumDecomposable => "sum-decomposable",
            StructuralFilter::SkewDecomposable => "skew-decomposable",
            StructuralFilter::SumIndecomposable => "sum-indecomposable",
            StructuralFilter::SkewIndecomposable => "skew-indecomposable",
        }
    }
}

impl fmt::Display for StructuralFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructuralFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        StructuralFilter::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown filter {s:?}"))
    }
}

fn sum_decomposable(p: &[u8]) -> bool {
    let mut max = 0u8;
    for (i, &v) in p[..p.len().saturating_sub(1)].iter().enumerate() {
        max = max.max(v);
        if max as usize == i + 1 {
            return true;
        }
    }
    false
}

fn skew_decomposable(p: &[u8]) -> bool {
    let n = p.len();
    let mut min = u8::MAX;
    for (i, &v) in p[..n.saturating_sub(1)].iter().enumerate() {
        min = min.min(v);
        if min as usize == n - i {
            return true;
        }
    }
    false
}

/// Builder for a census run.
#[derive(Debug, Clone)]
pub struct Census {
    k: usize,
    max_len: usize,
    filter: StructuralFilter,
    budget: u64,
    threads: Option<usize>,
}

impl Census {
    pub fn new(k: usize, max_len: usize) -> Self {
        Census {
            k,
            max_len,
            filter: StructuralFilter::All,
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }

    pub fn filter(mut self, filter: StructuralFilter) -> Self {
        self.filter = filter;
        self
    }

    /// Maximum `s_N · C(N, k)` windows allowed.
    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Worker count; `None` uses the global pool.
    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    /// Windows scanned at the top length.
    pub fn windows(&self) -> BigUint {
        schroder_count(self.max_len) * binomial(self.max_len as u64, self.k as u64)
    }

    pub fn run(&self) -> Result<PopularityTable, CensusError> {
        let (k, max_len) = (self.k, self.max_len);
        if k == 0 {
            return Err(CensusError::ZeroLength);
        }
        if k > max_len {
            return Err(CensusError::LengthExceedsHorizon { k, max_len });
        }
        if max_len > MAX_LEN {
            return Err(CensusError::TooLong(MAX_LEN));
        }
        let required = self.windows();
        if required > BigUint::from(self.budget) {
            return Err(CensusError::BudgetExceeded {
                required,
                budget: self.budget,
            });
        }
        let rows = match self.threads {
            None => self.count_all(),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CensusError::ThreadPool(e.to_string()))?
                .install(|| self.count_all()),
        };

        let mut counts = BTreeMap::new();
        for sigma in enumerate_separable(k) {
            let v: Vec<u8> = sigma.values().iter().map(|&x| x as u8).collect();
            let r = window_code(&v);
            counts.insert(sigma, rows.iter().map(|row| row[r]).collect());
        }
        Ok(PopularityTable {
            k,
            max_len,
            filter: self.filter,
            counts,
        })
    }

    fn count_all(&self) -> Vec<Vec<u64>> {
        (self.k..=self.max_len)
            .map(|n| self.count_length(n))
            .collect()
    }

    fn count_length(&self, n: usize) -> Vec<u64> {
        let k = self.k;
        let size = (1..=k).product::<usize>();
        let depth = n.min(3);
        let prefixes = injections(n, depth);
        let filter = self.filter;
        let weights = code_weights(k);
        prefixes
            .par_iter()
            .fold(
                || vec![0u64; size],
                |mut acc, prefix| {
                    let mut it = Separables::with_prefix(n, prefix);
                    while let Some(p) = it.advance() {
                        if filter.accepts(p) {
                            count_windows(p, k, 0, 0, 0, &weights, &mut acc);
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; size],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }
}

/// Code of a pattern in the factorial number system: the digit for the
/// entry at position `d` counts earlier entries with smaller value and has
/// weight `d!`. A bijection from patterns of length `k` onto `0..k!`.
fn window_code(p: &[u8]) -> usize {
    let weights = code_weights(p.len());
    let mut mask = 0u64;
    let mut code = 0;
    for (d, &v) in p.iter().enumerate() {
        code += (mask & ((1u64 << v) - 1)).count_ones() as usize * weights[d];
        mask |= 1 << v;
    }
    code
}

fn code_weights(k: usize) -> Vec<usize> {
    (0..k)
        .scan(1usize, |f, d| {
            let w = *f;
            *f *= d + 1;
            Some(w)
        })
        .collect()
}

/// Adds one to the code of every `k`-subsequence of `p[start..]` extending
/// the `depth` entries already chosen (value set `mask`, partial `code`).
fn count_windows(
    p: &[u8],
    k: usize,
    start: usize,
    mask: u64,
    code: usize,
    weights: &[usize],
    acc: &mut [u64],
) {
    let depth = mask.count_ones() as usize;
    if depth == k {
        acc[code] += 1;
        return;
    }
    for i in start..=p.len() - (k - depth) {
        let v = p[i];
        let digit = (mask & ((1u64 << v) - 1)).count_ones() as usize;
        count_windows(
            p,
            k,
            i + 1,
            mask | 1 << v,
            code + digit * weights[depth],
            weights,
            acc,
        );
    }
}

/// All sequences of `d` distinct values from `1..=n`, in lexicographic order.
fn injections(n: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                let free: Vec<u8> = (1..=n as u8).filter(|v| !p.contains(v)).collect();
                free.into_iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Popularity of every separable pattern of length `k` over lengths `k..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularityTable {
    k: usize,
    max_len: usize,
    filter: StructuralFilter,
    counts: BTreeMap<Permutation, Vec<u64>>,
}

impl PopularityTable {
    pub fn pattern_length(&self) -> usize {
        self.k
    }

    pub fn max_length(&self) -> usize {
        self.max_len
    }

    pub fn filter(&self) -> StructuralFilter {
        self.filter
    }

    /// Pattern to counts at `n = k..=N`, patterns in lexicographic order.
    pub fn counts(&self) -> &BTreeMap<Permutation, Vec<u64>> {
        &self.counts
    }

    pub fn get(&self, sigma: &Permutation) -> Option<&[u64]> {
        self.counts.get(sigma).map(|v| v.as_slice())
    }

    /// `Σ_n counts[σ][n] tⁿ` truncated at order `N`.
    pub fn series(&self, sigma: &Permutation) -> Option<TruncatedSeries> {
        let row = self.get(sigma)?;
        let mut c = vec![0u64; self.k];
        c.extend_from_slice(row);
        Some(TruncatedSeries::from_u64(&c, self.max_len))
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["pattern".to_string()];
        header.extend((self.k..=self.max_len).map(|n| format!("n={n}")));
        out.write_record(&header)?;
        for (sigma, row) in &self.counts {
            let mut rec = vec![sigma.to_short_string()];
            rec.extend(row.iter().map(|c| c.to_string()));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

pub fn popularity_table(k: usize, max_len: usize) -> Result<PopularityTable, CensusError> {
    Census::new(k, max_len).run()
}

pub fn popularity_series(
    sigma: &Permutation,
    max_len: usize,
) -> Result<TruncatedSeries, CensusError> {
    restricted_popularity_series(sigma, max_len, StructuralFilter::All)
}

/// Popularity of `sigma` summed only over permutations passing `filter`.
pub fn restricted_popularity_series(
    sigma: &Permutation,
    max_len: usize,
    filter: StructuralFilter,
) -> Result<TruncatedSeries, CensusError> {
    if !sigma.is_separable() {
        return Err(CensusError::NotSeparable(sigma.clone()));
    }
    let table = Census::new(sigma.len(), max_len).filter(filter).run()?;
    Ok(table
        .series(sigma)
        .expect("table holds every separable pattern"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularityClass {
    pub popularity: Vec<u64>,
    pub patterns: Vec<Permutation>,
    /// Shared signature, or `None` when members disagree.
    pub signature: Option<Partition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureClass {
    pub signature: Partition,
    pub patterns: Vec<Permutation>,
}

/// Patterns of one length grouped by popularity vector (up to the horizon)
/// and by signature. Distinct vectors are proof of distinct popularity;
/// equal vectors are certified only up to `horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub pattern_length: usize,
    pub horizon: usize,
    pub classes: Vec<PopularityClass>,
    pub signature_classes: Vec<SignatureClass>,
}

impl ClassReport {
    pub fn from_table(table: &PopularityTable) -> Self {
        let mut by_vector: Vec<PopularityClass> = Vec::new();
        let mut sigs: BTreeMap<Permutation, Partition> = BTreeMap::new();
        for (sigma, row) in table.counts() {
            let sig = signature(&decompose(sigma).expect("census patterns are separable"));
            sigs.insert(sigma.clone(), sig);
            match by_vector.iter_mut().find(|c| &c.popularity == row) {
                Some(c) => c.patterns.push(sigma.clone()),
                None => by_vector.push(PopularityClass {
                    popularity: row.clone(),
                    patterns: vec![sigma.clone()],
                    signature: None,
                }),
            }
        }
        for c in &mut by_vector {
            let first = &sigs[&c.patterns[0]];
            if c.patterns.iter().all(|p| &sigs[p] == first) {
                c.signature = Some(first.clone());
            }
        }
        let signature_classes = partitions_of(table.pattern_length() - 1)
            .into_iter()
            .map(|lambda| SignatureClass {
                patterns: sigs
                    .iter()
                    .filter(|(_, s)| **s == lambda)
                    .map(|(p, _)| p.clone())
                    .collect(),
                signature: lambda,
            })
            .filter(|c| !c.patterns.is_empty())
            .collect();
        ClassReport {
            pattern_length: table.pattern_length(),
            horizon: table.max_length(),
            classes: by_vector,
            signature_classes,
        }
    }

    /// True if the popularity classes and signature classes are the same
    /// partition of the pattern set.
    pub fn coincide(&self) -> bool {
        self.classes.len() == self.signature_classes.len()
            && self.classes.iter().all(|c| {
                c.signature.as_ref().is_some_and(|lambda| {
                    self.signature_classes
                        .iter()
                        .any(|s| &s.signature == lambda && s.patterns == c.patterns)
                })
            })
    }

    /// The popularity class containing `sigma`.
    pub fn class_of(&self, sigma: &Permutation) -> Option<&PopularityClass> {
        self.classes.iter().find(|c| c.patterns.contains(sigma))
    }

    pub fn to_json(&self) -> Value {
        let names = |ps: &[Permutation]| ps.iter().map(|p| p.to_short_string()).collect::<Vec<_>>();
        json!({
            "pattern_length": self.pattern_length,
            "horizon": self.horizon,
            "coincide": self.coincide(),
            "classes": self.classes.iter().map(|c| json!({
                "signature": c.signature.as_ref().map(|s| s.to_string()),
                "popularity": c.popularity,
                "patterns": names(&c.patterns),
            })).collect::<Vec<_>>(),
            "signature_classes": self.signature_classes.iter().map(|c| json!({
                "signature": c.signature.to_string(),
                "patterns": names(&c.patterns),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn equipopularity_classes(k: usize, max_len: usize) -> Result<ClassReport, CensusError> {
    Ok(ClassReport::from_table(&popularity_table(k, max_len)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationCheck {
    pub report: ClassReport,
    /// `p(k − 1)`.
    pub expected_classes: usize,
    pub class_count_ok: bool,
    pub coincide: bool,
    /// Every `ω(λ)` lies in the class of signature `λ`.
    pub wedge_representatives_ok: bool,
}

impl ClassificationCheck {
    pub fn from_report(report: ClassReport) -> Self {
        let expected_classes = partitions_of(report.pattern_length - 1).len();
        let wedge_representatives_ok = report.signature_classes.iter().all(|s| {
            let omega = wedge(&s.signature)
                .expect("signature classes are nonempty partitions")
                .1;
            report
                .class_of(&omega)
                .is_some_and(|c| c.signature.as_ref() == Some(&s.signature))
        });
        ClassificationCheck {
            class_count_ok: report.classes.len() == expected_classes,
            coincide: report.coincide(),
            wedge_representatives_ok,
            expected_classes,
            report,
        }
    }

    pub fn pass(&self) -> bool {
        self.class_count_ok && self.coincide && self.wedge_representatives_ok
    }
}

pub fn verify_classification(k: usize, max_len: usize) -> Result<ClassificationCheck, CensusError> {
    Ok(ClassificationCheck::from_report(equipopularity_classes(
        k, max_len,
    )?))
}
