//! Truncated power series `c_0 + c_1 t + … + c_D t^D` with exact coefficients.

use num_traits::{FromPrimitive, Signed};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Scalar types usable as series coefficients (`i64`, `i128`, `BigInt`, …).
pub trait Coefficient: Clone + Signed + PartialOrd + FromPrimitive + fmt::Debug + fmt::Display {}

impl<T> Coefficient for T where T: Clone + Signed + PartialOrd + FromPrimitive + fmt::Debug + fmt::Display {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term is not a unit")]
    NotUnit,
    #[error("empty series")]
    Empty,
}

/// A power series modulo `t^{D+1}`; `D = coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> TruncatedSeries<T> {
    /// Panics on an empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    /// `Σ c_i t^i` from small integer coefficients, extended by zeros to `order`.
    pub fn from_i64s(cs: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, &c) in cs.iter().enumerate().take(order + 1) {
            s.coeffs[i] = T::from_i64(c).expect("coefficient fits");
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for i in 0..=order.min(self.order()) {
            s.coeffs[i] = self.coeffs[i].clone();
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=d)
                .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=d)
                .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.order().min(other.order());
        let mut out = Self::zero(d);
        for i in 0..=d {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=d - i {
                out.coeffs[i + j] =
                    out.coeffs[i + j].clone() + self.coeffs[i].clone() * other.coeffs[j].clone();
            }
        }
        out
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0].clone();
        if !(c0.is_one() || (-c0.clone()).is_one()) {
            return Err(SeriesError::NotUnit);
        }
        let d = self.order();
        let mut inv = Self::zero(d);
        inv.coeffs[0] = c0.clone();
        for k in 1..=d {
            let mut acc = T::zero();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * inv.coeffs[k - i].clone();
            }
            // c0 · inv_k = -acc and c0 = c0^{-1}
            inv.coeffs[k] = -(acc * c0.clone());
        }
        Ok(inv)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `base^e` for a possibly negative exponent.
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.order());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `1 + c t^k`, truncated to `order`.
    pub fn binomial_unit(order: usize, k: usize, c: i64) -> Self {
        let mut s = Self::one(order);
        if k <= order {
            s.coeffs[k] = s.coeffs[k].clone() + T::from_i64(c).unwrap();
        }
        s
    }

    /// `(1 - t^2)^e`.
    pub fn one_minus_t2_pow(order: usize, e: i64) -> Self {
        Self::binomial_unit(order, 2, -1).pow(e).unwrap()
    }

    /// `(1 + t)^e`.
    pub fn one_plus_t_pow(order: usize, e: i64) -> Self {
        Self::binomial_unit(order, 1, 1).pow(e).unwrap()
    }

    /// `(1 - t)^e`.
    pub fn one_minus_t_pow(order: usize, e: i64) -> Self {
        Self::binomial_unit(order, 1, -1).pow(e).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Coefficient-wise comparison of `a` against `b` (on the common truncation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Comparison {
    Equal,
    /// `a ≼ b` with `a_first < b_first` the first strict coefficient.
    Below { first: usize },
    /// `a ≽ b`, not equal.
    Above { first: usize },
    Incomparable { first_above: usize },
}

impl Comparison {
    /// `a ≼ b` holds.
    pub fn is_below_or_equal(self) -> bool {
        matches!(self, Comparison::Equal | Comparison::Below { .. })
    }
}

pub fn cmp_coefficientwise<T: Coefficient>(a: &TruncatedSeries<T>, b: &TruncatedSeries<T>) -> Comparison {
    let d = a.order().min(b.order());
    let mut below = None;
    let mut above = None;
    for i in 0..=d {
        if a.coeffs[i] < b.coeffs[i] {
            below.get_or_insert(i);
        } else if a.coeffs[i] > b.coeffs[i] {
            above.get_or_insert(i);
        }
    }
    match (below, above) {
        (None, None) => Comparison::Equal,
        (Some(first), None) => Comparison::Below { first },
        (None, Some(first)) => Comparison::Above { first },
        (Some(_), Some(first_above)) => Comparison::Incomparable { first_above },
    }
}

impl<T: Coefficient> fmt::Display for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PoincareSeries;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn comparison_examples() {
        let a = PoincareSeries::from_coeffs(vec![1, 2, 1]);
        assert_eq!(cmp_coefficientwise(&a, &a), Comparison::Equal);
        let b = PoincareSeries::from_coeffs(vec![1, 1, 1]);
        assert_eq!(cmp_coefficientwise(&b, &a), Comparison::Below { first: 1 });
        let c = PoincareSeries::from_coeffs(vec![1, 0]);
        let d = PoincareSeries::from_coeffs(vec![0, 1]);
        assert_eq!(cmp_coefficientwise(&c, &d), Comparison::Incomparable { first_above: 0 });
        assert!(!cmp_coefficientwise(&c, &d).is_below_or_equal());
    }

    #[test]
    fn closed_forms() {
        let s = PoincareSeries::one_plus_t_pow(6, 2).div(&PoincareSeries::one_minus_t2_pow(6, 1)).unwrap();
        // (1+t)^2/(1-t^2) = (1+t)/(1-t)
        assert_eq!(s.coeffs(), &[1, 2, 2, 2, 2, 2, 2]);
        let inv = PoincareSeries::one_minus_t2_pow(6, -2);
        assert_eq!(inv.coeffs(), &[1, 0, 2, 0, 3, 0, 4]);
        assert_eq!(s.to_string(), "1,2,2,2,2,2,2");
        let two = PoincareSeries::from_coeffs(vec![2, 1]);
        assert_eq!(two.inverse(), Err(SeriesError::NotUnit));
        let neg = PoincareSeries::from_coeffs(vec![-1, 1, 0]);
        assert_eq!(neg.mul(&neg.inverse().unwrap()), PoincareSeries::one(2));
    }

    #[test]
    fn mixed_orders_truncate_to_min() {
        let a = PoincareSeries::from_coeffs(vec![1, 1, 1, 1]);
        let b = PoincareSeries::from_coeffs(vec![1, 1]);
        assert_eq!(a.mul(&b).order(), 1);
        assert_eq!(a.add(&b).coeffs(), &[2, 2]);
    }

    #[test]
    fn bigint_coefficients() {
        // (1 - t)^{-40} has coefficients C(i + 39, 39), which overflow i64 well before i = 60
        let s = TruncatedSeries::<BigInt>::one_minus_t_pow(60, -40);
        let back = s.mul(&TruncatedSeries::<BigInt>::one_minus_t_pow(60, 40));
        assert_eq!(back, TruncatedSeries::<BigInt>::one(60));
        assert!(s.coeff(60) > BigInt::from(i64::MAX));
    }

    fn series() -> impl Strategy<Value = TruncatedSeries<i128>> {
        proptest::collection::vec(-20i128..20, 8).prop_map(TruncatedSeries::from_coeffs)
    }

    fn unit() -> impl Strategy<Value = TruncatedSeries<i128>> {
        (prop_oneof![Just(1i128), Just(-1i128)], proptest::collection::vec(-5i128..5, 7)).prop_map(|(c0, rest)| {
            let mut v = vec![c0];
            v.extend(rest);
            TruncatedSeries::from_coeffs(v)
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in series(), b in series(), c in series()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&TruncatedSeries::one(7)), a.clone());
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn division_inverts_multiplication(a in series(), u in unit()) {
            prop_assert_eq!(a.mul(&u).div(&u).unwrap(), a.clone());
            prop_assert_eq!(a.div(&u).unwrap().mul(&u), a);
        }
    }
}
