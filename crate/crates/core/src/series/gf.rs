//! Generating functions for separable permutations and for the popularity of
//! monotone and wedge patterns.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{q, q_polynomial, BivariateSeries, SeriesError, TruncatedSeries};
use crate::partition::{partitions_of, Partition};
use crate::perm::Permutation;
use crate::popularity::{
    popularity_series, restricted_popularity_series, schroder_count, StructuralFilter,
};

fn schroder_with_radicand(order: usize, t2: i64) -> TruncatedSeries {
    let root = TruncatedSeries::from_i64(&[1, -6, t2], order)
        .sqrt()
        .expect("constant term is 1");
    (&TruncatedSeries::from_i64(&[3, -1], order) - &root)
        .scale(&BigRational::new(1.into(), 2.into()))
}

/// `S = (3 − t − √(1 − 6t + t²)) / 2`, the large Schröder numbers.
pub fn schroder_series(order: usize) -> TruncatedSeries {
    schroder_with_radicand(order, 1)
}

/// The same expression with radicand `1 − 6t − t²`. Its `t²` coefficient is
/// `5/2`, so it does not count anything.
pub fn schroder_series_minus_radicand(order: usize) -> TruncatedSeries {
    schroder_with_radicand(order, -1)
}

fn bi(slices: &[&[i64]], u_degree: usize, order: usize) -> BivariateSeries {
    let s = slices
        .iter()
        .map(|c| TruncatedSeries::from_i64(c, order))
        .collect();
    BivariateSeries::from_slices(s, u_degree)
}

/// `[u^k tⁿ] P` by census: `sₙ` for `k = 0`, `ν_{I(k)}(𝒮ₙ)` otherwise.
pub fn bivariate_p_brute(u_degree: usize, order: usize) -> Result<BivariateSeries, SeriesError> {
    let mut slices = Vec::with_capacity(u_degree + 1);
    let s: Vec<BigRational> = (0..=order)
        .map(|n| BigRational::from_integer(BigInt::from(schroder_count(n))))
        .collect();
    slices.push(TruncatedSeries::new(s, order));
    for k in 1..=u_degree {
        if k > order {
            slices.push(TruncatedSeries::zero(order));
        } else {
            slices.push(popularity_series(&Permutation::identity(k), order)?);
        }
    }
    Ok(BivariateSeries::from_slices(slices, u_degree))
}

/// Solves `P = 1 + (u+1)t + P⊕ + P⊖` with `P⊕ = (P − 1)²/P` and
/// `P⊖ = (H + M·(S² − 1))/S²` by fixed-point iteration, where
/// `H = (S − t − 1)/2` counts unmarked skew-decomposables and
/// `M = P − P⊖ − H − 1 − t` counts marked non-skew-decomposables. Each round
/// fixes one more power of `t`.
pub fn bivariate_p_system(u_degree: usize, order: usize) -> Result<BivariateSeries, SeriesError> {
    solve_p_system(u_degree, order, true)
}

/// With `exclude_point = false` the unmarked length-1 permutation is left
/// inside `M`, which breaks the `u⁰` slice.
fn solve_p_system(
    u_degree: usize,
    order: usize,
    exclude_point: bool,
) -> Result<BivariateSeries, SeriesError> {
    let s = schroder_series(order);
    let s2 = &s * &s;
    let s2_inv = s2.inverse()?;
    let s2_minus_1 = &s2 - &TruncatedSeries::one(order);
    let h = (&s - &TruncatedSeries::from_i64(&[1, 1], order))
        .scale(&BigRational::new(1.into(), 2.into()));
    let one = bi(&[&[1]], u_degree, order);
    let base = bi(&[&[1, 1], &[0, 1]], u_degree, order);
    let unmarked_rest = if exclude_point {
        &h + &TruncatedSeries::from_i64(&[1, 1], order)
    } else {
        &h + &TruncatedSeries::one(order)
    };
    let h_bi = BivariateSeries::from_series(h, u_degree);
    let unmarked_rest = BivariateSeries::from_series(unmarked_rest, u_degree);

    let rounds = order + 2;
    let mut p = base.clone();
    for _ in 0..rounds {
        let pm1 = &p - &one;
        let plus = &(&pm1 * &pm1) * &p.inverse()?;
        let minus = (&h_bi + &(&p - &unmarked_rest).mul_series(&s2_minus_1)).mul_series(&s2_inv);
        let next = &(&base + &plus) + &minus;
        if next == p {
            return Ok(p);
        }
        p = next;
    }
    Err(SeriesError::NonConvergence(rounds))
}

/// Evaluates the closed form
/// `P = (A·r − (3u−17)t − 3(2u+3)t² + (u+1)t³ + (r(t−3) − 6t + t² − 3)·s + 3) / (24t − 4t²)`
/// with `A = (u+1)t² − 3(u+2)t + 3`, `r = √(1 − 6t + t²)` and
/// `s = √(1 + (ur − 3u − 6)t + (u² + u + 1)t²)`. The final division needs
/// the numerator to vanish at `t⁰`.
pub fn bivariate_p_closed(u_degree: usize, order: usize) -> Result<BivariateSeries, SeriesError> {
    let n1 = order + 1;
    let u = u_degree;
    let r = TruncatedSeries::from_i64(&[1, -6, 1], n1).sqrt()?;
    let t = TruncatedSeries::t(n1);
    let r_bi = BivariateSeries::from_series(r.clone(), u);

    let inner_u1 = &(&t * &r) + &TruncatedSeries::from_i64(&[0, -3, 1], n1);
    let inner = BivariateSeries::from_slices(
        vec![
            TruncatedSeries::from_i64(&[1, -6, 1], n1),
            inner_u1,
            TruncatedSeries::from_i64(&[0, 0, 1], n1),
        ],
        u,
    );
    let s = inner.sqrt()?;

    let a = bi(&[&[3, -6, 1], &[0, -3, 1]], u, n1);
    let poly = bi(&[&[3, 17, -9, 1], &[0, -3, -6, 1]], u, n1);
    let r_coef = &(&r * &TruncatedSeries::from_i64(&[-3, 1], n1))
        + &TruncatedSeries::from_i64(&[-3, -6, 1], n1);
    let num = &(&(&a * &r_bi) + &poly) + &s.mul_series(&r_coef);
    num.div_series(&TruncatedSeries::from_i64(&[0, 24, -4], n1))
}

/// `P_{I(n)} = S^{3n−3} tⁿ q_{n−1}(S⁻²) / (2 − S²)^{2n−1}`.
pub fn increasing_popularity_formula(
    n: usize,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    if n == 0 {
        return Err(SeriesError::InvalidArgument(
            "pattern length must be positive".into(),
        ));
    }
    let s = schroder_series(order);
    let s2 = &s * &s;
    let x = s2.inverse()?;
    let qv = q_polynomial(n as u64 - 1).eval_series(&x)?;
    let den = (&TruncatedSeries::constant(q(2), order) - &s2).pow(2 * n as u32 - 1);
    let num = &(&s.pow(3 * n as u32 - 3) * &qv).shift(n) * &den.inverse()?;
    Ok(num)
}

/// `F_m = P_{I(m+1)} / P_1`, with valuation `m`.
pub fn factor_f(m: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let num = increasing_popularity_formula(m + 1, order + 1)?;
    let den = increasing_popularity_formula(1, order + 1)?;
    num.div(&den)
}

/// `P_{ω(λ)} = Π P_{I(λ_i+1)} / P_1^{k−1}` for `λ = (λ_1, …, λ_k)`.
pub fn wedge_popularity(lambda: &Partition, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let k = lambda.len();
    if k == 0 {
        return increasing_popularity_formula(1, order);
    }
    let work = order + k - 1;
    let mut out = TruncatedSeries::one(work);
    for &part in lambda.parts() {
        out = &out * &increasing_popularity_formula(part + 1, work)?;
    }
    let p1 = increasing_popularity_formula(1, work)?;
    for _ in 1..k {
        out = out.div(&p1)?;
    }
    Ok(out)
}

/// Census comparison of `P_{I(m)⊕π}` with `F_m·P_π`, and for `m ≥ 1` of the
/// skew-decomposable part with `(S² − 1)` times the sum-decomposable part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub m: usize,
    pub pi: Permutation,
    pub pattern: Permutation,
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
    /// `None` for `m = 0`, where the pattern is sum-indecomposable.
    pub skew_identity: Option<bool>,
}

impl FactorizationReport {
    pub fn product_holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn pass(&self) -> bool {
        self.product_holds() && self.skew_identity != Some(false)
    }
}

pub fn factorization_check(
    m: usize,
    pi: &Permutation,
    order: usize,
) -> Result<FactorizationReport, SeriesError> {
    if pi.is_empty() || pi.is_sum_decomposable() {
        return Err(SeriesError::NotSumIndecomposable(pi.clone()));
    }
    let pattern = Permutation::identity(m).direct_sum(pi);
    let lhs = popularity_series(&pattern, order)?;
    let rhs = &factor_f(m, order)? * &popularity_series(pi, order)?;
    let skew_identity = if m == 0 {
        None
    } else {
        let s = schroder_series(order);
        let factor = &(&s * &s) - &TruncatedSeries::one(order);
        let plus =
            restricted_popularity_series(&pattern, order, StructuralFilter::SumDecomposable)?;
        let minus =
            restricted_popularity_series(&pattern, order, StructuralFilter::SkewDecomposable)?;
        Some(minus == &factor * &plus)
    };
    Ok(FactorizationReport {
        m,
        pi: pi.clone(),
        pattern,
        lhs,
        rhs,
        skew_identity,
    })
}

/// Finds the unique `λ ⊢ n−1` with `wedge_popularity(λ, N) = series` to
/// order `N`. Candidates are first checked to be pairwise distinct.
pub fn identify_partition(
    series: &TruncatedSeries,
    n: usize,
    order: usize,
) -> Result<Partition, SeriesError> {
    if n == 0 {
        return Err(SeriesError::InvalidArgument(
            "pattern length must be positive".into(),
        ));
    }
    let need = n + 3;
    if order < need || series.order() < order {
        return Err(SeriesError::InsufficientHorizon {
            need: need.max(order),
            got: order.min(series.order()),
        });
    }
    let target = series.truncate(order);
    let candidates: Vec<(Partition, TruncatedSeries)> = partitions_of(n - 1)
        .into_iter()
        .map(|lambda| wedge_popularity(&lambda, order).map(|s| (lambda, s)))
        .collect::<Result<_, _>>()?;
    for (i, (a, sa)) in candidates.iter().enumerate() {
        for (b, sb) in &candidates[i + 1..] {
            if sa == sb {
                return Err(SeriesError::Ambiguous(vec![a.clone(), b.clone()]));
            }
        }
    }
    let mut hits = candidates
        .into_iter()
        .filter(|(_, s)| *s == target)
        .map(|(l, _)| l);
    match (hits.next(), hits.next()) {
        (Some(l), None) => Ok(l),
        (None, _) => Err(SeriesError::NoMatch),
        (Some(a), Some(b)) => Err(SeriesError::Ambiguous(vec![a, b])),
    }
}
