use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{convex_hull, LatticePolytope};
use crate::{Error, Result};

/// Laurent polynomial with integer coefficients in `x1, ..., xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, 1, e)
    }

    pub fn monomial(nvars: usize, c: impl Into<BigInt>, exps: Vec<i64>) -> Self {
        assert_eq!(exps.len(), nvars);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPolynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Result<Self> {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::invalid("exponent vector has the wrong length"));
            }
            out = out + Self::monomial(nvars, c, e);
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent vectors with nonzero coefficient.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    /// Largest total degree of a term (zero for the zero polynomial).
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<i64>()).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().flatten().all(|&e| e >= 0)
    }

    /// Every term has total degree `d`.
    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<i64>() == d)
    }

    /// Same polynomial viewed in a ring with at least `nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars
            && self.terms.keys().any(|e| e[nvars..].iter().any(|&x| x != 0))
        {
            return Err(Error::invalid("polynomial uses more variables than requested"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(nvars, 0);
                (e2, c.clone())
            })
            .collect();
        Ok(LaurentPolynomial { nvars, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, 1), |acc, _| acc * self.clone())
    }

    /// Coefficients reduced modulo `p`, dropping terms that vanish.
    pub fn reduce_mod(&self, p: u64) -> Vec<(Vec<i64>, u64)> {
        let pb = BigInt::from(p);
        self.terms
            .iter()
            .filter_map(|(e, c)| {
                let r = ((c % &pb) + &pb) % &pb;
                let r = r.to_u64().unwrap();
                (r != 0).then(|| (e.clone(), r))
            })
            .collect()
    }

    fn combine(mut self, rhs: Self, sign: bool) -> Self {
        let n = self.nvars.max(rhs.nvars);
        if self.nvars < n {
            self = self.with_nvars(n).unwrap();
        }
        let rhs = rhs.with_nvars(n).unwrap();
        for (e, c) in rhs.terms {
            let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
            if sign {
                *entry += c;
            } else {
                *entry -= c;
            }
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
}

impl Add for LaurentPolynomial {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(rhs, true)
    }
}

impl Sub for LaurentPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(rhs, false)
    }
}

impl Neg for LaurentPolynomial {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for LaurentPolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let n = self.nvars.max(rhs.nvars);
        let a = self.with_nvars(n).unwrap();
        let b = rhs.with_nvars(n).unwrap();
        let mut out = Self::zero(n);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.terms.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }
}

/// Canonical text form: terms in decreasing exponent order, written with
/// `*`, `^`, `+` and `-` only, so it parses back to the same polynomial.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { format!("x{}", i + 1) } else { format!("x{}^{x}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Which Newton polytope to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolytopeKind {
    /// Convex hull of the support.
    Support,
    /// Convex hull of the support together with the origin.
    AtInfinity,
}

pub fn newton_polytope(f: &LaurentPolynomial, kind: PolytopeKind) -> Result<LatticePolytope> {
    let mut pts = f.support();
    if pts.is_empty() {
        return Err(Error::invalid("the zero polynomial has no Newton polytope"));
    }
    if kind == PolytopeKind::AtInfinity {
        pts.push(vec![0; f.nvars()]);
    }
    convex_hull(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> LaurentPolynomial {
        LaurentPolynomial::variable(2, i)
    }

    #[test]
    fn arithmetic_and_display() {
        let f = x(0).pow(2) * x(1) - LaurentPolynomial::constant(2, 3) * x(1) + LaurentPolynomial::constant(2, 1);
        assert_eq!(f.to_string(), "x1^2*x2 - 3*x2 + 1");
        assert_eq!(f.total_degree(), 3);
        assert!((f.clone() - f).is_zero());
    }

    #[test]
    fn negative_leading_and_laurent_exponents() {
        let f = LaurentPolynomial::monomial(2, -2, vec![0, -1]) + x(0);
        assert_eq!(f.to_string(), "x1 - 2*x2^-1");
        assert!(!f.is_polynomial());
    }

    #[test]
    fn newton_polytopes() {
        let f = x(0).pow(3) + x(1).pow(3) + x(0) * x(1);
        let d0 = newton_polytope(&f, PolytopeKind::Support).unwrap();
        let dinf = newton_polytope(&f, PolytopeKind::AtInfinity).unwrap();
        assert_eq!(d0.vertices().len(), 3);
        assert_eq!(dinf.vertices(), &[vec![0, 0], vec![0, 3], vec![3, 0]]);
    }

    #[test]
    fn mod_reduction() {
        let f = LaurentPolynomial::monomial(1, 5, vec![1]) + LaurentPolynomial::constant(1, -1);
        assert_eq!(f.reduce_mod(5), vec![(vec![0], 4)]);
    }
}
