use std::ops::{Add, Mul, Neg, Sub};

use super::{Coeff, FieldCoeff};

/// Dense univariate polynomial, lowest degree first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePolynomial<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> DensePolynomial<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_coeff()) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(i)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Drops all terms of degree `>= n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn eval(&self, x: &C) -> Option<C> {
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next()?.clone();
        for c in it {
            acc = acc * x.clone() + c.clone();
        }
        Some(acc)
    }

    fn combine(&self, other: &Self, f: impl Fn(C, C) -> C, neg: impl Fn(C) -> C) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => f(a.clone(), b.clone()),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => neg(b.clone()),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }
}

impl<C: FieldCoeff> DensePolynomial<C> {
    /// Euclidean division. Returns `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead_inv = divisor.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let zero = lead_inv.zero_like();
        let mut quot = vec![zero; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lead_inv.clone();
            if c.is_zero_coeff() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * b.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }
}

impl<C: Coeff> Add for DensePolynomial<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, |a, b| a + b, |b| b)
    }
}

impl<C: Coeff> Sub for DensePolynomial<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, |a, b| a - b, |b| -b)
    }
}

impl<C: Coeff> Neg for DensePolynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<C: Coeff> Mul for DensePolynomial<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Mul for &DensePolynomial<C> {
    type Output = DensePolynomial<C>;
    fn mul(self, rhs: Self) -> DensePolynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return DensePolynomial::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_coeff() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        DensePolynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, Rational};

    fn p(c: &[i64]) -> DensePolynomial<Rational> {
        DensePolynomial::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, -1, 4, 1, 5]);
        let b = p(&[2, 0, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(&q * &b + r, a);
    }

    #[test]
    fn gcd_of_products() {
        let common = p(&[1, 1]);
        let a = &common * &p(&[-2, 1]);
        let b = &common * &p(&[5, 0, 1]);
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn eval_horner() {
        assert_eq!(p(&[1, 2, 3]).eval(&rat(2, 1)), Some(rat(17, 1)));
    }
}
