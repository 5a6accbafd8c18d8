use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{write_terms, SeriesError, TruncatedSeries};

const MIN_EXP: i64 = -1;

/// Polynomial in `x` and `x⁻¹` with no power below `x⁻¹`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    // c[i] is the coefficient of x^{i-1}; no trailing zeros
    c: Vec<BigRational>,
}

impl LaurentPolynomial {
    fn from_raw(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        LaurentPolynomial { c }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_raw(vec![BigRational::zero(), c])
    }

    /// `c·x^e`.
    pub fn monomial(c: BigRational, e: i64) -> Result<Self, SeriesError> {
        if e < MIN_EXP {
            return Err(SeriesError::ExponentOutOfRange(e));
        }
        let mut v = vec![BigRational::zero(); (e - MIN_EXP) as usize + 1];
        *v.last_mut().unwrap() = c;
        Ok(Self::from_raw(v))
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1).unwrap()
    }

    /// Polynomial with `coeffs[i]` on `x^i`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut c = vec![BigRational::zero()];
        c.extend(coeffs);
        Self::from_raw(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        if e < MIN_EXP {
            return BigRational::zero();
        }
        self.c
            .get((e - MIN_EXP) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.c.len() as i64 - 1 + MIN_EXP)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.c
            .iter()
            .position(|x| !x.is_zero())
            .map(|i| i as i64 + MIN_EXP)
    }

    /// `(exponent, coefficient)` for every nonzero term, increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 + MIN_EXP, c))
    }

    /// Coefficients of `x⁰ … x^deg`, or `None` if an `x⁻¹` term is present.
    pub fn polynomial_coeffs(&self) -> Option<Vec<BigRational>> {
        match self.c.first() {
            None => Some(Vec::new()),
            Some(c) if !c.is_zero() => None,
            Some(_) => Some(self.c[1..].to_vec()),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_raw(self.c.iter().map(|x| x * k).collect())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        let lo = self.min_exponent().unwrap() + rhs.min_exponent().unwrap();
        if lo < MIN_EXP {
            return Err(SeriesError::ExponentOutOfRange(lo));
        }
        let mut c = vec![BigRational::zero(); self.c.len() + rhs.c.len()];
        for (ea, a) in self.terms() {
            for (eb, b) in rhs.terms() {
                c[(ea + eb - MIN_EXP) as usize] += a * b;
            }
        }
        Ok(Self::from_raw(c))
    }

    pub fn pow(&self, e: u32) -> Result<Self, SeriesError> {
        (0..e).try_fold(Self::one(), |acc, _| acc.try_mul(self))
    }

    /// Substitutes a series for `x`; an `x⁻¹` term needs `x` invertible.
    pub fn eval_series(&self, x: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        let order = x.order();
        let mut out = TruncatedSeries::zero(order);
        let mut power = TruncatedSeries::one(order);
        for (i, c) in self.c.iter().enumerate().skip(1) {
            if i > 1 {
                power = &power * x;
            }
            out = out + power.scale(c);
        }
        if !self.c.is_empty() && !self.c[0].is_zero() {
            out = out + x.inverse()?.scale(&self.c[0]);
        }
        Ok(out)
    }

    /// `den^d · p(num/den)` for a polynomial `p` of degree at most `d`.
    pub fn homogenized_substitution(
        &self,
        num: &Self,
        den: &Self,
        d: u32,
    ) -> Result<Self, SeriesError> {
        let coeffs = self.polynomial_coeffs().ok_or_else(|| {
            SeriesError::InvalidArgument("substitution needs a polynomial".into())
        })?;
        if coeffs.len() > d as usize + 1 {
            return Err(SeriesError::InvalidArgument(format!("degree exceeds {d}")));
        }
        let mut out = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let term = num.pow(i as u32)?.try_mul(&den.pow(d - i as u32)?)?;
            out = &out + &term.scale(c);
        }
        Ok(out)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let n = self.c.len().max(rhs.c.len());
        let zero = BigRational::zero();
        LaurentPolynomial::from_raw(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&zero) + rhs.c.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial::from_raw(self.c.iter().map(|x| -x).collect())
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

/// Panics if the product would have a term below `x⁻¹`; see
/// [`LaurentPolynomial::try_mul`].
impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_mul(rhs).expect("Laurent product below x^-1")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms(), "x", true)
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}
