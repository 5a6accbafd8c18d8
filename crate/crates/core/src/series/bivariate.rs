use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::{SeriesError, TruncatedSeries};

/// A series in `u` and `t`, stored as slices `[u^k]` for `k = 0..=U`, each a
/// [`TruncatedSeries`] in `t`. Products are truncated at `u^{U+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    slices: Vec<TruncatedSeries>,
}

impl BivariateSeries {
    /// Slices are padded with zeros or truncated to `u_degree + 1`; all are
    /// cut to the smallest order present.
    pub fn from_slices(mut slices: Vec<TruncatedSeries>, u_degree: usize) -> Self {
        assert!(!slices.is_empty(), "need at least one slice");
        let order = slices.iter().map(|s| s.order()).min().unwrap();
        slices.resize(u_degree + 1, TruncatedSeries::zero(order));
        BivariateSeries {
            slices: slices.into_iter().map(|s| s.truncate(order)).collect(),
        }
    }

    pub fn zero(u_degree: usize, order: usize) -> Self {
        Self::from_slices(vec![TruncatedSeries::zero(order)], u_degree)
    }

    /// A series independent of `u`.
    pub fn from_series(s: TruncatedSeries, u_degree: usize) -> Self {
        Self::from_slices(vec![s], u_degree)
    }

    pub fn u_degree(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn order(&self) -> usize {
        self.slices[0].order()
    }

    pub fn slices(&self) -> &[TruncatedSeries] {
        &self.slices
    }

    pub fn slice(&self, k: usize) -> &TruncatedSeries {
        &self.slices[k]
    }

    /// `[u^k tⁿ]`, zero outside the stored range.
    pub fn coeff(&self, k: usize, n: usize) -> BigRational {
        self.slices
            .get(k)
            .map(|s| s.coeff(n))
            .unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, u_degree: usize, order: usize) -> Self {
        let slices = self
            .slices
            .iter()
            .take(u_degree + 1)
            .map(|s| s.truncate(order))
            .collect();
        Self::from_slices(slices, u_degree)
    }

    /// Multiplies every slice by a series in `t` alone.
    pub fn mul_series(&self, s: &TruncatedSeries) -> Self {
        BivariateSeries {
            slices: self.slices.iter().map(|x| x * s).collect(),
        }
    }

    /// Divides every slice by a series in `t` alone.
    pub fn div_series(&self, s: &TruncatedSeries) -> Result<Self, SeriesError> {
        let slices = self
            .slices
            .iter()
            .map(|x| x.div(s))
            .collect::<Result<_, _>>()?;
        Ok(BivariateSeries { slices })
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.slices[0].inverse()?;
        let mut b = vec![inv0.clone()];
        for k in 1..self.slices.len() {
            let mut acc = TruncatedSeries::zero(self.order());
            for i in 1..=k {
                acc = acc + &self.slices[i] * &b[k - i];
            }
            b.push(-(&acc * &inv0));
        }
        Ok(BivariateSeries { slices: b })
    }

    /// Square root whose `u⁰t⁰` coefficient is 1.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let b0 = self.slices[0].sqrt()?;
        let half_inv = b0.scale(&BigRational::new(2.into(), 1.into())).inverse()?;
        let mut b = vec![b0];
        for k in 1..self.slices.len() {
            let mut acc = self.slices[k].clone();
            for i in 1..k {
                acc = acc - &b[i] * &b[k - i];
            }
            b.push(&acc * &half_inv);
        }
        Ok(BivariateSeries { slices: b })
    }

    /// Object keyed by `u`-power, each value a series coefficient array.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serialize to json")
    }
}

impl Serialize for BivariateSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, &TruncatedSeries> = self
            .slices
            .iter()
            .enumerate()
            .map(|(k, x)| (k.to_string(), x))
            .collect();
        map.serialize(s)
    }
}

fn zip_with(
    a: &BivariateSeries,
    b: &BivariateSeries,
    f: impl Fn(&TruncatedSeries, &TruncatedSeries) -> TruncatedSeries,
) -> BivariateSeries {
    let u = a.u_degree().min(b.u_degree());
    BivariateSeries {
        slices: (0..=u).map(|k| f(&a.slices[k], &b.slices[k])).collect(),
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;
    fn add(self, rhs: &BivariateSeries) -> BivariateSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &BivariateSeries {
    type Output = BivariateSeries;
    fn sub(self, rhs: &BivariateSeries) -> BivariateSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;
    fn mul(self, rhs: &BivariateSeries) -> BivariateSeries {
        let u = self.u_degree().min(rhs.u_degree());
        let order = self.order().min(rhs.order());
        let mut slices = vec![TruncatedSeries::zero(order); u + 1];
        for i in 0..=u {
            if self.slices[i].is_zero() {
                continue;
            }
            for j in 0..=u - i {
                slices[i + j] = &slices[i + j] + &(&self.slices[i] * &rhs.slices[j]);
            }
        }
        BivariateSeries { slices }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ser(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64(c, n)
    }

    #[test]
    fn product_truncates_in_u() {
        // (1 + u t)^2 = 1 + 2ut + u²t²
        let a = BivariateSeries::from_slices(vec![ser(&[1], 3), ser(&[0, 1], 3)], 1);
        let sq = &a * &a;
        assert_eq!(sq.u_degree(), 1);
        assert_eq!(sq.slice(1), &ser(&[0, 2], 3));
        let a2 = BivariateSeries::from_slices(vec![ser(&[1], 3), ser(&[0, 1], 3)], 2);
        assert_eq!((&a2 * &a2).slice(2), &ser(&[0, 0, 1], 3));
    }

    #[test]
    fn sqrt_and_inverse_round_trip() {
        let a = BivariateSeries::from_slices(
            vec![ser(&[1, -6, 1], 6), ser(&[0, 3, -1], 6), ser(&[0, 0, 1], 6)],
            3,
        );
        let r = a.sqrt().unwrap();
        assert_eq!(&r * &r, a);
        let inv = a.inverse().unwrap();
        let one = BivariateSeries::from_series(TruncatedSeries::one(6), 3);
        assert_eq!(&a * &inv, one);
    }

    #[test]
    fn json_shape() {
        let a = BivariateSeries::from_slices(vec![ser(&[1], 1), ser(&[0, 2], 1)], 1);
        assert_eq!(
            a.to_json(),
            serde_json::json!({"0": ["1", "0"], "1": ["0", "2"]})
        );
    }
}
