//! Zeta and L-functions recovered from point counts and character sums.

use num_bigint::BigInt;

use crate::exactmath::{
    cyclotomic_valuation, rational_reconstruct, rational_valuation, series_exp, CyclotomicInteger,
    CyclotomicNumber, Coeff, FieldCoeff, Rational, RationalFunction, Reconstruction, TruncatedSeries,
};
use crate::exactmath::{prime_power_exponent, ExtRational};
use crate::polygon::{newton_polygon, ConvexPolygon};
use crate::{Error, Result};

/// The exponential series of a count or sum sequence and its reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstructed<C> {
    pub series: TruncatedSeries<C>,
    pub reconstruction: Reconstruction<C>,
}

impl<C: Coeff> Reconstructed<C> {
    pub fn function(&self) -> Option<&RationalFunction<C>> {
        self.reconstruction.stable()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.function().map(RationalFunction::total_degree)
    }

    pub fn is_stable(&self) -> bool {
        self.function().is_some()
    }
}

fn reconstruct<C: FieldCoeff>(seq: &[C], one: &C, window: usize) -> Result<Reconstructed<C>> {
    if seq.len() < 2 {
        return Err(Error::invalid("need at least two terms"));
    }
    let series = series_exp(seq, one);
    let reconstruction = rational_reconstruct(series.coeffs(), window)?;
    Ok(Reconstructed { series, reconstruction })
}

/// `exp(Σ N_m t^m / m)` from `N_1..N_M`, reconstructed as a rational function.
pub fn zeta_function(counts: &[BigInt], window: usize) -> Result<Reconstructed<Rational>> {
    let seq: Vec<Rational> = counts.iter().map(|n| Rational::from_integer(n.clone())).collect();
    reconstruct(&seq, &Rational::from_integer(1.into()), window)
}

/// `exp(Σ S_m t^m / m)` from `S_1..S_M`, reconstructed over `Q(ζ_p)`.
pub fn l_function(sums: &[CyclotomicInteger], window: usize) -> Result<Reconstructed<CyclotomicNumber>> {
    let first = sums.first().ok_or_else(|| Error::invalid("need at least two terms"))?;
    let p = first.prime();
    if sums.iter().any(|s| s.prime() != p) {
        return Err(Error::invalid("sums lie in different cyclotomic fields"));
    }
    let seq: Vec<CyclotomicNumber> = sums.iter().map(CyclotomicNumber::from_integer).collect();
    let one = CyclotomicNumber::from_integer(&CyclotomicInteger::one(p));
    reconstruct(&seq, &one, window)
}

fn polygon_of<C>(coeffs: &[C], val: impl Fn(&C) -> Result<ExtRational>) -> Result<ConvexPolygon> {
    let pts = coeffs.iter().enumerate().map(|(i, c)| Ok((i, val(c)?))).collect::<Result<Vec<_>>>()?;
    newton_polygon(&pts)
}

/// Newton polygons (numerator, denominator) of an L-function with respect
/// to `ord_q`.
pub fn l_newton_polygon(
    l: &RationalFunction<CyclotomicNumber>,
    q: u64,
) -> Result<(ConvexPolygon, ConvexPolygon)> {
    let val = |c: &CyclotomicNumber| {
        let x = c
            .to_integer()
            .ok_or_else(|| Error::Data(format!("coefficient {c} is not a cyclotomic integer")))?;
        cyclotomic_valuation(&x, q)
    };
    Ok((
        polygon_of(l.numerator().coeffs(), val)?,
        polygon_of(l.denominator().coeffs(), val)?,
    ))
}

/// Newton polygons (numerator, denominator) of a zeta function with respect
/// to `ord_q`.
pub fn zeta_newton_polygon(z: &RationalFunction<Rational>, q: u64) -> Result<(ConvexPolygon, ConvexPolygon)> {
    let p = (2..=q)
        .find(|d| q.is_multiple_of(*d))
        .filter(|&p| q > 1 && prime_power_exponent(q, p).is_some())
        .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
    let k = prime_power_exponent(q, p).unwrap();
    let val = |c: &Rational| {
        if !c.is_integer() {
            return Err(Error::Data(format!("coefficient {c} is not an integer")));
        }
        Ok(rational_valuation(c, p, k))
    };
    Ok((
        polygon_of(z.numerator().coeffs(), val)?,
        polygon_of(z.denominator().coeffs(), val)?,
    ))
}
