//! Exact truncated power series and the generating functions built on them.
//!
//! A [`TruncatedSeries`] of order `N` stands for a power series in `t` modulo
//! `t^{N+1}`. Binary operations on operands of different orders work at the
//! smaller order. Division by a series of valuation `v` loses `v` orders.

mod bivariate;
mod gf;
mod laurent;
mod qpoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dectree::TreeError;
use crate::partition::Partition;
use crate::perm::Permutation;
use crate::popularity::CensusError;

pub use bivariate::BivariateSeries;
pub use gf::{
    bivariate_p_brute, bivariate_p_closed, bivariate_p_system, factor_f, factorization_check,
    identify_partition, increasing_popularity_formula, schroder_series,
    schroder_series_minus_radicand, wedge_popularity, FactorizationReport,
};
pub use laurent::LaurentPolynomial;
pub use qpoly::{
    gegenbauer, gegenbauer_generating_function, narayana, narayana_gf, q_gegenbauer_relation,
    q_polynomial, q_via_hypergeometric, QGegenbauerReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("division by zero series")]
    DivisionByZero,
    #[error(
        "dividend has a nonzero coefficient at t^{index} below the divisor valuation {valuation}"
    )]
    UncancelledValuation { index: usize, valuation: usize },
    #[error("square root needs constant term 1, found {0}")]
    SqrtConstantTerm(BigRational),
    #[error("exponent {0} is below the supported minimum -1")]
    ExponentOutOfRange(i64),
    #[error("fixed-point iteration did not settle after {0} rounds")]
    NonConvergence(usize),
    #[error("{0} is not sum-indecomposable")]
    NotSumIndecomposable(Permutation),
    #[error("horizon {got} is too small, need at least {need}")]
    InsufficientHorizon { need: usize, got: usize },
    #[error("series matches no partition candidate")]
    NoMatch,
    #[error("several partitions match at this horizon: {0:?}")]
    Ambiguous(Vec<Partition>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

pub(crate) fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficients `c_0 … c_N` of a power series in `t`, modulo `t^{N+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    c: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates `coeffs` to length `order + 1`.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { c: coeffs }
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&x| q(x)).collect(), order)
    }

    pub fn from_u64(coeffs: &[u64], order: usize) -> Self {
        let c = coeffs
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        Self::new(c, order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `c·t^e`; zero when `e > order`.
    pub fn monomial(c: BigRational, e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.c[e] = c;
        }
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::monomial(BigRational::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    /// `[tⁿ]`, zero past the order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.c.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot raise order {} to {order}",
            self.order()
        );
        Self::new(self.c[..=order].to_vec(), order)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        TruncatedSeries {
            c: self.c.iter().map(|x| x * k).collect(),
        }
    }

    /// Multiplies by `t^e`, keeping the order.
    pub fn shift(&self, e: usize) -> Self {
        let mut c = vec![BigRational::zero(); e];
        c.extend_from_slice(&self.c);
        Self::new(c, self.order())
    }

    /// Divides by `t^e`; the order drops by `e`.
    pub fn unshift(&self, e: usize) -> Result<Self, SeriesError> {
        if e > self.order() {
            return Err(SeriesError::InvalidArgument(format!(
                "cannot divide order {} series by t^{e}",
                self.order()
            )));
        }
        if let Some(index) = self.c[..e].iter().position(|x| !x.is_zero()) {
            return Err(SeriesError::UncancelledValuation {
                index,
                valuation: e,
            });
        }
        Ok(Self::new(self.c[e..].to_vec(), self.order() - e))
    }

    /// Integer coefficients, if all are integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.c
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let a0 = &self.c[0];
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
        b.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &self.c[i] * &b[k - i];
            }
            b.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { c: b })
    }

    /// `self / d`. When `d` has valuation `v`, the low `v` coefficients of
    /// `self` must vanish and the result has order `min(orders) − v`.
    pub fn div(&self, d: &TruncatedSeries) -> Result<Self, SeriesError> {
        let v = d.valuation().ok_or(SeriesError::DivisionByZero)?;
        let order = self.order().min(d.order());
        let num = self.truncate(order).unshift(v)?;
        let den = d.truncate(order).unshift(v)?;
        Ok(&num * &den.inverse()?)
    }

    /// The square root with constant term 1.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if !self.c[0].is_one() {
            return Err(SeriesError::SqrtConstantTerm(self.c[0].clone()));
        }
        let half = BigRational::new(1.into(), 2.into());
        let mut b = vec![BigRational::one()];
        for n in 1..=self.order() {
            let mut acc = self.c[n].clone();
            for i in 1..n {
                acc -= &b[i] * &b[n - i];
            }
            b.push(acc * &half);
        }
        Ok(TruncatedSeries { c: b })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Integer power; negative exponents need an invertible series.
    pub fn powi(&self, e: i64) -> Result<Self, SeriesError> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.inverse()
        } else {
            Ok(p)
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            c: (0..=order).map(|i| &self.c[i] + &rhs.c[i]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            c: (0..=order).map(|i| &self.c[i] - &rhs.c[i]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut c = vec![BigRational::zero(); order + 1];
        for (i, a) in self.c[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c[..=order - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        TruncatedSeries { c }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

/// Writes `c·v^e` terms in increasing exponent, e.g. `1 - 3*t + 5/2*t^2`.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a BigRational)>,
    var: &str,
    unit_coefficients: bool,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if c.is_negative() { " - " } else { " + " })?;
        }
        first = false;
        let monomial = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        if monomial.is_empty() {
            write!(f, "{mag}")?;
        } else if unit_coefficients && mag.is_one() {
            f.write_str(&monomial)?;
        } else {
            write!(f, "{mag}*{monomial}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.c.iter().enumerate().map(|(i, c)| (i as i64, c)),
            "t",
            false,
        )
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(t^{})", self.order() + 1)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.c.iter().map(|x| x.to_string()))
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom(
                "series needs at least one coefficient",
            ));
        }
        let c: Result<Vec<BigRational>, _> = raw.iter().map(|s| s.parse::<BigRational>()).collect();
        let c = c.map_err(serde::de::Error::custom)?;
        let order = c.len() - 1;
        Ok(TruncatedSeries::new(c, order))
    }
}
