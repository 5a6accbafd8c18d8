//! Narayana numbers, the polynomials `q_n`, and Gegenbauer polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{q, BivariateSeries, LaurentPolynomial, SeriesError, TruncatedSeries};
use crate::combinat::binomial;

/// `N_{n,k} = C(n,k)·C(n,k−1)/n`, with `N_{0,0} = 1`.
pub fn narayana(n: u64, k: u64) -> BigRational {
    if n == 0 {
        return if k == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
    }
    if k == 0 || k > n {
        return BigRational::zero();
    }
    let num = BigInt::from(binomial(n, k) * binomial(n, k - 1));
    BigRational::new(num, BigInt::from(n))
}

/// `(1 − t − tu − √((1 − t − tu)² − 4t²u)) / 2t`, expanded to `u^U`, `t^N`.
/// The expression has no constant term, so it is `Σ N_{n,k} tⁿ u^k` over
/// `n ≥ 1` only; `N_{0,0}` is not included.
pub fn narayana_gf(u_degree: usize, order: usize) -> Result<BivariateSeries, SeriesError> {
    let n1 = order + 1;
    let lin = BivariateSeries::from_slices(
        vec![
            TruncatedSeries::from_i64(&[1, -1], n1),
            TruncatedSeries::from_i64(&[0, -1], n1),
        ],
        u_degree,
    );
    let four_t2u = BivariateSeries::from_slices(
        vec![
            TruncatedSeries::zero(n1),
            TruncatedSeries::from_i64(&[0, 0, 4], n1),
        ],
        u_degree,
    );
    let root = (&(&lin * &lin) - &four_t2u).sqrt()?;
    (&lin - &root).div_series(&TruncatedSeries::from_i64(&[0, 2], n1))
}

/// `q_n(x) = Σ_k N_{n,k} x^{k−1} (1−x)^{n−k}`; `q_0 = x⁻¹`.
pub fn q_polynomial(n: u64) -> LaurentPolynomial {
    let one_minus_x = &LaurentPolynomial::one() - &LaurentPolynomial::x();
    let mut out = LaurentPolynomial::zero();
    for k in 0..=n {
        let c = narayana(n, k);
        if c.is_zero() {
            continue;
        }
        let term = LaurentPolynomial::monomial(c, k as i64 - 1)
            .and_then(|m| m.try_mul(&one_minus_x.pow((n - k) as u32)?))
            .expect("exponents stay at or above -1");
        out = &out + &term;
    }
    out
}

/// `(a)_j`, the rising factorial.
fn rising(a: i64, j: u64) -> BigRational {
    (0..j as i64).fold(BigRational::one(), |acc, i| acc * q(a + i))
}

/// `(1−x)^{n−1} · ₂F₁(1−n, −n; 2; x/(1−x))`, cleared to a polynomial. The
/// hypergeometric series stops after `j = n−1` because `(1−n)_j` vanishes.
pub fn q_via_hypergeometric(n: u64) -> Result<LaurentPolynomial, SeriesError> {
    if n == 0 {
        return Err(SeriesError::InvalidArgument(
            "hypergeometric form needs n >= 1".into(),
        ));
    }
    let n_i = n as i64;
    let one_minus_x = &LaurentPolynomial::one() - &LaurentPolynomial::x();
    let mut out = LaurentPolynomial::zero();
    for j in 0..n {
        let coeff = rising(1 - n_i, j) * rising(-n_i, j) / (rising(2, j) * rising(1, j));
        let term = LaurentPolynomial::x()
            .pow(j as u32)?
            .try_mul(&one_minus_x.pow((n - 1 - j) as u32)?)?;
        out = &out + &term.scale(&coeff);
    }
    Ok(out)
}

/// `C_n^{(α)}` from `C_0 = 1`, `C_1 = 2αx` and
/// `n·C_n = 2x(n+α−1)·C_{n−1} − (n+2α−2)·C_{n−2}`.
pub fn gegenbauer(n: u64, alpha: &BigRational) -> LaurentPolynomial {
    let two_x = LaurentPolynomial::x().scale(&q(2));
    let mut prev = LaurentPolynomial::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two_x.scale(alpha);
    for m in 2..=n {
        let mq = q(m as i64);
        let a = &mq + alpha - q(1);
        let b = &mq + alpha * q(2) - q(2);
        let next = (&(&two_x * &cur).scale(&a) - &prev.scale(&b)).scale(&mq.recip());
        prev = cur;
        cur = next;
    }
    cur
}

/// `(1 − c·x·t + t²)^{−α}` as a series in `x` (the `u` slot) and `t`,
/// via the binomial series in `w = −c·x·t + t²`.
pub fn gegenbauer_generating_function(
    alpha: &BigRational,
    x_coefficient: &BigRational,
    order: usize,
) -> BivariateSeries {
    let w = BivariateSeries::from_slices(
        vec![
            TruncatedSeries::from_i64(&[0, 0, 1], order),
            TruncatedSeries::monomial(-x_coefficient, 1, order),
        ],
        order,
    );
    let mut out = BivariateSeries::from_series(TruncatedSeries::one(order), order);
    let mut w_pow = out.clone();
    let mut binom = BigRational::one();
    for j in 1..=order as i64 {
        // C(−α, j) = C(−α, j−1)·(−α − j + 1)/j
        binom = binom * (-alpha - q(j - 1)) / q(j);
        w_pow = &w_pow * &w;
        out = &out + &w_pow.mul_series(&TruncatedSeries::constant(binom.clone(), order));
    }
    out
}

/// Both readings of the `q_n`–Gegenbauer relation, with the prefactor
/// `2/(n(n+1))` and `C = C_{n−1}^{(3/2)}`:
/// `printed = (1−2x)^{n−1} C(x/(1−2x))`, `corrected = (1−2x)^{n−1} C(1/(1−2x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGegenbauerReport {
    pub n: u64,
    pub q: LaurentPolynomial,
    pub printed: LaurentPolynomial,
    pub corrected: LaurentPolynomial,
}

impl QGegenbauerReport {
    pub fn printed_holds(&self) -> bool {
        self.printed == self.q
    }

    pub fn corrected_holds(&self) -> bool {
        self.corrected == self.q
    }
}

pub fn q_gegenbauer_relation(n: u64) -> Result<QGegenbauerReport, SeriesError> {
    if n == 0 {
        return Err(SeriesError::InvalidArgument("relation needs n >= 1".into()));
    }
    let c = gegenbauer(n - 1, &BigRational::new(3.into(), 2.into()));
    let den = LaurentPolynomial::from_coeffs(vec![q(1), q(-2)]);
    let pre = BigRational::new(2.into(), BigInt::from(n * (n + 1)));
    let d = (n - 1) as u32;
    let printed = c
        .homogenized_substitution(&LaurentPolynomial::x(), &den, d)?
        .scale(&pre);
    let corrected = c
        .homogenized_substitution(&LaurentPolynomial::one(), &den, d)?
        .scale(&pre);
    Ok(QGegenbauerReport {
        n,
        q: q_polynomial(n),
        printed,
        corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::from_coeffs(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn narayana_values() {
        assert_eq!(narayana(4, 2), q(6));
        assert_eq!(narayana(0, 0), q(1));
        assert_eq!((0..=3).map(|k| narayana(3, k)).sum::<BigRational>(), q(5));
    }

    #[test]
    fn narayana_gf_matches_formula() {
        let gf = narayana_gf(6, 6).unwrap();
        assert_eq!(gf.coeff(0, 0), q(0));
        for n in 1..=6u64 {
            for k in 0..=6u64 {
                assert_eq!(
                    gf.coeff(k as usize, n as usize),
                    narayana(n, k),
                    "N({n},{k})"
                );
            }
        }
    }

    #[test]
    fn q_examples() {
        assert_eq!(
            q_polynomial(0),
            LaurentPolynomial::monomial(q(1), -1).unwrap()
        );
        assert_eq!(q_polynomial(1), LaurentPolynomial::one());
        assert_eq!(q_polynomial(2), LaurentPolynomial::one());
        assert_eq!(q_polynomial(3), poly(&[1, 1, -1]));
        for n in 1..=8 {
            assert_eq!(q_via_hypergeometric(n).unwrap(), q_polynomial(n), "n = {n}");
        }
    }

    #[test]
    fn gegenbauer_examples() {
        let a = BigRational::new(3.into(), 2.into());
        assert_eq!(gegenbauer(0, &a), LaurentPolynomial::one());
        assert_eq!(gegenbauer(1, &a), poly(&[0, 3]));
        assert_eq!(
            gegenbauer(2, &a),
            poly(&[-3, 0, 15]).scale(&BigRational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn generating_function_needs_factor_two() {
        let a = BigRational::new(3.into(), 2.into());
        let matches = |c: i64| {
            let gf = gegenbauer_generating_function(&a, &q(c), 8);
            (0..=8u64).all(|n| {
                let cn = gegenbauer(n, &a);
                (0..=8).all(|i| gf.coeff(i as usize, n as usize) == cn.coeff(i))
            })
        };
        assert!(matches(2));
        assert!(!matches(1));
    }

    #[test]
    fn relation_small_cases() {
        let r1 = q_gegenbauer_relation(1).unwrap();
        assert!(r1.printed_holds() && r1.corrected_holds());
        let r2 = q_gegenbauer_relation(2).unwrap();
        assert_eq!(r2.printed, LaurentPolynomial::x());
        assert!(!r2.printed_holds());
        assert!(r2.corrected_holds());
        let r3 = q_gegenbauer_relation(3).unwrap();
        assert_eq!(r3.corrected, poly(&[1, 1, -1]));
        assert!(!r3.printed_holds());
    }
}
