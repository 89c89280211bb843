//! Exact arithmetic used throughout the crate.
//!
//! Everything here is exact: rationals are arbitrary precision and nothing is
//! ever rounded. The generic containers ([`DensePolynomial`],
//! [`TruncatedSeries`], [`RationalFunction`]) work over any [`Coeff`], which is
//! implemented for big integers, big rationals, cyclotomic integers and
//! elements of the cyclotomic field.

mod cyclotomic;
pub mod linalg;
mod poly;
mod recurrence;
mod series;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use cyclotomic::{cyclotomic_valuation, CyclotomicInteger, CyclotomicNumber};
pub use poly::DensePolynomial;
pub use recurrence::{
    berlekamp_massey, rational_reconstruct, Reconstruction, RationalFunction, DEFAULT_WINDOW,
};
pub use series::{series_coefficient, series_exp, series_log, TruncatedSeries};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Ring element usable as a polynomial or series coefficient.
///
/// `zero_like` / `one_like` exist because some coefficient rings (cyclotomic
/// ones) carry a parameter that a bare `Zero::zero()` cannot know.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn int_like(&self, n: i64) -> Self;
    /// Whether two elements live in the same ring.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
}

/// A [`Coeff`] in which every nonzero element is invertible.
pub trait FieldCoeff: Coeff {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Coeff for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn int_like(&self, n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl FieldCoeff for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// A rational number or `+∞`. Used for valuations (of zero) and for the
/// weight of lattice points outside the cone of a polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinite)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinite) => Ordering::Less,
            (ExtRational::Infinite, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinite, ExtRational::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinite => write!(f, "inf"),
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient with a signed top, zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Integer power of a rational; negative exponents invert.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational, normalised by `k` (so that `v(p^k) = 1`).
pub fn rational_valuation(x: &Rational, p: u64, k: u32) -> ExtRational {
    if x.is_zero() {
        return ExtRational::Infinite;
    }
    let vn = int_valuation(x.numer(), p).unwrap() as i64;
    let vd = int_valuation(x.denom(), p).unwrap() as i64;
    ExtRational::Finite(rat(vn - vd, k as i64))
}

/// Returns `k` with `q = p^k`, if `q` is a power of `p` with `k >= 1`.
pub fn prime_power_exponent(q: u64, p: u64) -> Option<u32> {
    if p < 2 || q < p {
        return None;
    }
    let mut k = 0;
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    (x == 1).then_some(k)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Floor and ceiling of a rational as big integers.
pub fn rat_floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn rat_ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn rat_to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both sides down to keep the ratio representable.
            let bits = x.numer().bits().max(x.denom().bits()) as i64 - 1000;
            let shift = bits.max(0) as u32;
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}
