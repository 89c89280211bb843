use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{Coeff, DensePolynomial, FieldCoeff, Rational};
use crate::{Error, Result};

/// Power series known modulo `t^(order+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Builds a series from its first `order + 1` coefficients.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_polynomial(p: &DensePolynomial<C>, order: usize, zero: &C) -> Self {
        let coeffs = (0..=order)
            .map(|i| p.coeff(i).cloned().unwrap_or_else(|| zero.zero_like()))
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        TruncatedSeries { coeffs: (0..n).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect() }
    }
}

impl<C: FieldCoeff> TruncatedSeries<C> {
    /// Multiplicative inverse; `None` if the constant term is not invertible.
    pub fn inverse(&self) -> Option<Self> {
        let c0inv = self.coeffs[0].inv()?;
        let mut out: Vec<C> = vec![c0inv.clone()];
        for k in 1..self.coeffs.len() {
            let mut acc = c0inv.zero_like();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(acc * c0inv.clone()));
        }
        Some(TruncatedSeries { coeffs: out })
    }
}

impl<C: Coeff> Add for TruncatedSeries<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a.clone() + b.clone())
    }
}

impl<C: Coeff> Sub for TruncatedSeries<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a.clone() - b.clone())
    }
}

impl<C: Coeff> Neg for TruncatedSeries<C> {
    type Output = Self;
    fn neg(self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<C: Coeff> Mul for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn mul(self, rhs: Self) -> TruncatedSeries<C> {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 0..=k {
                acc = acc + self.coeffs[j].clone() * rhs.coeffs[k - j].clone();
            }
            out.push(acc);
        }
        TruncatedSeries { coeffs: out }
    }
}

impl<C: Coeff> Mul for TruncatedSeries<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Coefficient of `t^k` in the expansion of `numer / denom`, with integer
/// polynomials given lowest degree first. The denominator must have a
/// nonzero constant term.
pub fn series_coefficient(numer: &[BigInt], denom: &[BigInt], k: usize) -> Result<Rational> {
    let to_series = |c: &[BigInt]| {
        TruncatedSeries::from_coeffs(
            (0..=k)
                .map(|i| Rational::from_integer(c.get(i).cloned().unwrap_or_default()))
                .collect(),
        )
    };
    let d = to_series(denom);
    let dinv = d
        .inverse()
        .ok_or_else(|| Error::invalid("denominator has zero constant term"))?;
    Ok((&to_series(numer) * &dinv).coeffs[k].clone())
}

/// `exp(Σ_{m>=1} a_m t^m / m)` truncated at order `a.len()`, where `a[0]` is
/// `a_1`. This turns a sequence of point counts into a zeta series.
pub fn series_exp<C: FieldCoeff>(a: &[C], one: &C) -> TruncatedSeries<C> {
    // With Z' / Z = Σ a_m t^(m-1): k e_k = Σ_{j=1}^{k} a_j e_{k-j}.
    let mut e: Vec<C> = vec![one.one_like()];
    for k in 1..=a.len() {
        let mut acc = one.zero_like();
        for j in 1..=k {
            acc = acc + a[j - 1].clone() * e[k - j].clone();
        }
        let kinv = one.int_like(k as i64).inv().expect("characteristic zero");
        e.push(acc * kinv);
    }
    TruncatedSeries { coeffs: e }
}

/// Inverse of [`series_exp`]: recovers `a_1, ..., a_order` from a series with
/// constant term one.
pub fn series_log<C: FieldCoeff>(z: &TruncatedSeries<C>) -> Result<Vec<C>> {
    let one = z.coeffs[0].one_like();
    if z.coeffs[0] != one {
        return Err(Error::invalid("series must have constant term 1"));
    }
    let mut a: Vec<C> = Vec::with_capacity(z.order());
    for k in 1..=z.order() {
        // a_k = k e_k - Σ_{j=1}^{k-1} a_j e_{k-j}
        let mut acc = one.int_like(k as i64) * z.coeffs[k].clone();
        for j in 1..k {
            acc = acc - a[j - 1].clone() * z.coeffs[k - j].clone();
        }
        a.push(acc);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{binomial, rat, rat_int};

    #[test]
    fn geometric_coefficients() {
        // 1/(1-2t)^2 = Σ (k+1) 2^k t^k
        let num = vec![BigInt::from(1)];
        let den = vec![BigInt::from(1), BigInt::from(-4), BigInt::from(4)];
        for k in 0..8 {
            let c = series_coefficient(&num, &den, k).unwrap();
            assert_eq!(c, rat_int((k as i64 + 1) * (1 << k)));
        }
    }

    #[test]
    fn binomial_expansion() {
        // (1+t)^5 / 1
        let num: Vec<BigInt> = (0..=5).map(|i| binomial(5, i)).collect();
        let den = vec![BigInt::from(1)];
        assert_eq!(series_coefficient(&num, &den, 2).unwrap(), rat_int(10));
        assert_eq!(series_coefficient(&num, &den, 7).unwrap(), rat_int(0));
    }

    #[test]
    fn zero_constant_denominator_rejected() {
        let r = series_coefficient(&[BigInt::from(1)], &[BigInt::from(0), BigInt::from(1)], 3);
        assert!(r.is_err());
    }

    #[test]
    fn exp_of_affine_line_counts() {
        // N_m = q^m gives Z = 1/(1-qt).
        let q = 5i64;
        let counts: Vec<Rational> = (1..=6).map(|m| rat_int(q.pow(m))).collect();
        let z = series_exp(&counts, &rat(1, 1));
        for (k, c) in z.coeffs().iter().enumerate() {
            assert_eq!(*c, rat_int(q.pow(k as u32)));
        }
    }

    #[test]
    fn log_inverts_exp() {
        let a: Vec<Rational> = [3, -1, 7, 0, 2].iter().map(|&x| rat(x, 1)).collect();
        let z = series_exp(&a, &rat(1, 1));
        assert_eq!(series_log(&z).unwrap(), a);
    }

    #[test]
    fn inverse_times_self_is_one() {
        let s = TruncatedSeries::from_coeffs(vec![rat(2, 1), rat(-1, 3), rat(5, 1), rat(0, 1)]);
        let prod = &s * &s.inverse().unwrap();
        assert_eq!(prod.coeffs(), &[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
    }
}
