//! Arithmetic in `Z[ζ_p]` and `Q(ζ_p)` for a prime `p`.
//!
//! Elements are stored in the power basis `1, ζ, ..., ζ^(p-2)`. Products are
//! formed modulo `x^p - 1` and then reduced with `ζ^(p-1) = -(1 + ... + ζ^(p-2))`.
//! For `p = 2` the basis is just `1` and `ζ = -1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{is_prime, prime_power_exponent, rat, Coeff, ExtRational, FieldCoeff, Rational};
use crate::{Error, Result};

/// Reduces a vector indexed by exponents `0..p` to the power basis.
fn reduce<T: Clone + Sub<Output = T>>(mut v: Vec<T>) -> Vec<T> {
    let top = v.pop().expect("length p");
    v.into_iter().map(|c| c - top.clone()).collect()
}

fn cyclic_mul<T>(p: usize, a: &[T], b: &[T], zero: &T) -> Vec<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Zero,
{
    let mut out = vec![zero.clone(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let k = (i + j) % p;
            out[k] = out[k].clone() + x.clone() * y.clone();
        }
    }
    reduce(out)
}

fn galois_image<T: Clone + Add<Output = T> + Sub<Output = T> + Zero>(
    p: usize,
    coeffs: &[T],
    a: usize,
) -> Vec<T> {
    let mut out = vec![T::zero(); p];
    for (i, c) in coeffs.iter().enumerate() {
        let k = (i * a) % p;
        out[k] = out[k].clone() + c.clone();
    }
    reduce(out)
}

fn write_basis<T: fmt::Display + Zero + PartialEq>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match i {
            0 => write!(f, "{c}")?,
            1 => write!(f, "({c})*z")?,
            _ => write!(f, "({c})*z^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Element of `Z[ζ_p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    /// Builds an element from power-basis coefficients (length `p - 1`).
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CyclotomicInteger { p, coeffs })
    }

    pub fn zero(p: u64) -> Self {
        Self::from_int(p, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        let mut coeffs = vec![BigInt::zero(); (p - 1) as usize];
        coeffs[0] = n.into();
        CyclotomicInteger { p, coeffs }
    }

    /// `ζ^e` for any integer `e`.
    pub fn zeta_pow(p: u64, e: i64) -> Self {
        let mut counts = vec![BigInt::zero(); p as usize];
        counts[e.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_exponent_counts(p, &counts)
    }

    /// `Σ_c counts[c] ζ^c` for `c = 0..p`.
    pub fn from_exponent_counts(p: u64, counts: &[BigInt]) -> Self {
        assert_eq!(counts.len(), p as usize);
        CyclotomicInteger { p, coeffs: reduce(counts.to_vec()) }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    /// Image under `ζ ↦ ζ^a`, for `a` prime to `p`.
    pub fn galois(&self, a: u64) -> Self {
        assert!(!a.is_multiple_of(self.p), "automorphism exponent must be prime to p");
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        CyclotomicInteger { p: self.p, coeffs: galois_image(self.p as usize, &v, a as usize) }
    }

    /// Complex conjugate `ζ ↦ ζ^-1`.
    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    /// Field norm down to `Z`.
    pub fn norm(&self) -> BigInt {
        let mut acc = self.clone();
        for a in 2..self.p {
            acc = acc * self.galois(a);
        }
        acc.as_integer().cloned().expect("norm is rational")
    }

    /// Sum of power-basis coefficients; divisible by `p` exactly when the
    /// element is divisible by `1 - ζ`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact division by a rational integer, if it divides every coefficient.
    pub fn div_exact_int(&self, n: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CyclotomicInteger { p: self.p, coeffs: out })
    }

    /// Valuation at the prime `1 - ζ` above `p`; `None` for zero.
    pub fn pi_valuation(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        // x / (1-ζ) = x * Π_{a=2}^{p-1} (1 - ζ^a) / p
        let mut cofactor = Self::one(self.p);
        for a in 2..self.p {
            cofactor = cofactor * (Self::one(self.p) - Self::zeta_pow(self.p, a as i64));
        }
        let p = BigInt::from(self.p);
        let mut x = self.clone();
        let mut v = 0;
        while x.coefficient_sum().is_multiple_of(&p) {
            x = (x * cofactor.clone())
                .div_exact_int(&p)
                .expect("divisible by 1 - ζ");
            v += 1;
        }
        Some(v)
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing elements of different cyclotomic rings");
    }
}

/// Valuation `ord_q(x)` normalised so that `ord_q(q) = 1`, where `q` is a
/// power of the prime underlying `x`.
pub fn cyclotomic_valuation(x: &CyclotomicInteger, q: u64) -> Result<ExtRational> {
    let k = prime_power_exponent(q, x.p)
        .ok_or_else(|| Error::invalid(format!("{q} is not a power of {}", x.p)))?;
    Ok(match x.pi_valuation() {
        None => ExtRational::Infinite,
        Some(v) => ExtRational::Finite(rat(v as i64, ((x.p - 1) * k as u64) as i64)),
    })
}

impl Add for CyclotomicInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let coeffs = self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInteger { p: self.p, coeffs }
    }
}

impl Sub for CyclotomicInteger {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let coeffs = self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicInteger { p: self.p, coeffs }
    }
}

impl Neg for CyclotomicInteger {
    type Output = Self;
    fn neg(self) -> Self {
        CyclotomicInteger { p: self.p, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for CyclotomicInteger {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let coeffs = cyclic_mul(self.p as usize, &self.coeffs, &rhs.coeffs, &BigInt::zero());
        CyclotomicInteger { p: self.p, coeffs }
    }
}

impl Coeff for CyclotomicInteger {
    fn zero_like(&self) -> Self {
        Self::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::one(self.p)
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_int(self.p, n)
    }
    fn compatible(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_basis(f, &self.coeffs)
    }
}

/// Element of the cyclotomic field `Q(ζ_p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    p: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn from_integer(x: &CyclotomicInteger) -> Self {
        CyclotomicNumber {
            p: x.p,
            coeffs: x.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect(),
        }
    }

    pub fn from_rational(p: u64, r: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); (p - 1) as usize];
        coeffs[0] = r;
        CyclotomicNumber { p, coeffs }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    /// The element as a cyclotomic integer, when all coefficients are integral.
    pub fn to_integer(&self) -> Option<CyclotomicInteger> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(|coeffs| CyclotomicInteger { p: self.p, coeffs })
    }

    pub fn galois(&self, a: u64) -> Self {
        assert!(!a.is_multiple_of(self.p), "automorphism exponent must be prime to p");
        let mut v = self.coeffs.clone();
        v.push(Rational::zero());
        CyclotomicNumber { p: self.p, coeffs: galois_image(self.p as usize, &v, a as usize) }
    }

    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing elements of different cyclotomic fields");
    }
}

impl Add for CyclotomicNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let coeffs = self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicNumber { p: self.p, coeffs }
    }
}

impl Sub for CyclotomicNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let coeffs = self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicNumber { p: self.p, coeffs }
    }
}

impl Neg for CyclotomicNumber {
    type Output = Self;
    fn neg(self) -> Self {
        CyclotomicNumber { p: self.p, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for CyclotomicNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let coeffs = cyclic_mul(self.p as usize, &self.coeffs, &rhs.coeffs, &Rational::zero());
        CyclotomicNumber { p: self.p, coeffs }
    }
}

impl Coeff for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        Self::from_rational(self.p, Rational::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_rational(self.p, Rational::one())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_rational(self.p, rat(n, 1))
    }
    fn compatible(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl FieldCoeff for CyclotomicNumber {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x * Π_{a=2}^{p-1} σ_a(x) is the norm, a nonzero rational.
        let mut others = self.one_like();
        for a in 2..self.p {
            others = others * self.galois(a);
        }
        let norm = (self.clone() * others.clone())
            .as_rational()
            .cloned()
            .expect("norm is rational");
        let scale = norm.recip();
        Some(CyclotomicNumber {
            p: self.p,
            coeffs: others.coeffs.into_iter().map(|c| c * &scale).collect(),
        })
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_basis(f, &self.coeffs)
    }
}

impl CyclotomicInteger {
    /// `|x|^2 = x * conj(x)`, always a real element; rational when `p <= 3`.
    pub fn abs_squared(&self) -> Self {
        self.clone() * self.conj()
    }

    pub fn is_negative_integer(&self) -> bool {
        self.as_integer().is_some_and(|n| n.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(p: u64, c: &[i64]) -> CyclotomicInteger {
        CyclotomicInteger::new(p, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    /// Evaluates at `exp(2πi/p)` as a complex pair, for an independent check.
    fn to_complex(x: &CyclotomicInteger) -> (f64, f64) {
        let p = x.prime() as f64;
        x.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (i, c)| {
            let c: f64 = c.to_string().parse().unwrap();
            let t = 2.0 * std::f64::consts::PI * i as f64 / p;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    #[test]
    fn zeta_to_the_p_is_one() {
        for p in [2, 3, 5, 7] {
            let z = CyclotomicInteger::zeta_pow(p, 1);
            let mut acc = CyclotomicInteger::one(p);
            for _ in 0..p {
                acc = acc * z.clone();
            }
            assert_eq!(acc, CyclotomicInteger::one(p));
        }
    }

    #[test]
    fn p_two_is_plain_integers() {
        assert_eq!(CyclotomicInteger::zeta_pow(2, 1), CyclotomicInteger::from_int(2, -1));
    }

    #[test]
    fn multiplication_matches_complex_evaluation() {
        let a = ci(5, &[1, -2, 0, 3]);
        let b = ci(5, &[4, 1, -1, 2]);
        let (ar, ai) = to_complex(&a);
        let (br, bi) = to_complex(&b);
        let (cr, cim) = to_complex(&(a * b));
        assert!((cr - (ar * br - ai * bi)).abs() < 1e-9);
        assert!((cim - (ar * bi + ai * br)).abs() < 1e-9);
    }

    #[test]
    fn quadratic_gauss_sum_mod_three() {
        // Σ_x ζ^(x^2) over F_3 = 1 + 2ζ, with |.|^2 = 3.
        let g = ci(3, &[1, 2]);
        assert_eq!(g.abs_squared().as_integer(), Some(&BigInt::from(3)));
        assert_eq!(cyclotomic_valuation(&g, 3).unwrap(), ExtRational::Finite(rat(1, 2)));
    }

    #[test]
    fn valuation_of_rational_integers() {
        for p in [2u64, 3, 5] {
            let x = CyclotomicInteger::from_int(p, (p * p * 7) as i64);
            // ord_p(p^2 * 7) = 2
            assert_eq!(cyclotomic_valuation(&x, p).unwrap(), ExtRational::Finite(rat(2, 1)));
            assert_eq!(
                cyclotomic_valuation(&x, p * p).unwrap(),
                ExtRational::Finite(rat(1, 1))
            );
        }
        assert_eq!(
            cyclotomic_valuation(&CyclotomicInteger::zero(3), 3).unwrap(),
            ExtRational::Infinite
        );
    }

    #[test]
    fn valuation_of_uniformiser() {
        for p in [3u64, 5, 7] {
            let pi = CyclotomicInteger::one(p) - CyclotomicInteger::zeta_pow(p, 1);
            assert_eq!(pi.pi_valuation(), Some(1));
            assert_eq!(
                cyclotomic_valuation(&pi, p).unwrap(),
                ExtRational::Finite(rat(1, (p - 1) as i64))
            );
        }
    }

    #[test]
    fn norm_of_uniformiser_is_p() {
        for p in [3u64, 5, 7] {
            let pi = CyclotomicInteger::one(p) - CyclotomicInteger::zeta_pow(p, 1);
            assert_eq!(pi.norm(), BigInt::from(p));
        }
    }

    #[test]
    fn field_inverse() {
        let x = CyclotomicNumber::from_integer(&ci(5, &[2, 0, -1, 1]));
        let y = x.inv().unwrap();
        assert_eq!(x * y, CyclotomicNumber::from_rational(5, rat(1, 1)));
    }

    #[test]
    fn mismatched_length_rejected() {
        assert!(CyclotomicInteger::new(5, vec![BigInt::from(1)]).is_err());
        assert!(CyclotomicInteger::new(4, vec![BigInt::from(1); 3]).is_err());
    }

    #[test]
    fn non_power_modulus_rejected() {
        assert!(cyclotomic_valuation(&ci(3, &[1, 1]), 6).is_err());
    }
}
