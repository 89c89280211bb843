use std::fmt;

use super::{Coeff, DensePolynomial, FieldCoeff};
use crate::{Error, Result};

/// Number of trailing zero discrepancies required before a reconstruction is
/// accepted as stable.
pub const DEFAULT_WINDOW: usize = 4;

/// `numerator / denominator`, reduced, with denominator constant term 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction<C> {
    numerator: DensePolynomial<C>,
    denominator: DensePolynomial<C>,
}

impl<C: FieldCoeff> RationalFunction<C> {
    /// Reduces `num / den` and scales so the denominator has constant term 1.
    pub fn new(num: DensePolynomial<C>, den: DensePolynomial<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g).expect("gcd is nonzero");
        let (den, _) = den.div_rem(&g).expect("gcd is nonzero");
        let c0 = den.coeff(0).cloned().filter(|c| !c.is_zero_coeff()).ok_or_else(|| {
            Error::invalid("denominator vanishes at zero after reduction")
        })?;
        let s = c0.inv().expect("nonzero");
        Ok(RationalFunction { numerator: num.scale(&s), denominator: den.scale(&s) })
    }
}

impl<C: Coeff> RationalFunction<C> {
    pub fn numerator(&self) -> &DensePolynomial<C> {
        &self.numerator
    }

    pub fn denominator(&self) -> &DensePolynomial<C> {
        &self.denominator
    }

    fn deg(p: &DensePolynomial<C>) -> usize {
        p.degree().unwrap_or(0)
    }

    /// `deg numerator + deg denominator`.
    pub fn total_degree(&self) -> usize {
        Self::deg(&self.numerator) + Self::deg(&self.denominator)
    }

    pub fn numerator_degree(&self) -> usize {
        Self::deg(&self.numerator)
    }

    pub fn denominator_degree(&self) -> usize {
        Self::deg(&self.denominator)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &DensePolynomial<C>| -> String {
            if p.is_zero() {
                return "0".into();
            }
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero_coeff())
                .map(|(i, c)| match i {
                    0 => format!("({c})"),
                    1 => format!("({c})*t"),
                    _ => format!("({c})*t^{i}"),
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        write!(f, "[{}] / [{}]", show(&self.numerator), show(&self.denominator))
    }
}

/// Output of Berlekamp–Massey on a finite sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRecurrence<C> {
    /// Connection polynomial `1 + c_1 t + ... + c_L t^L`.
    pub connection: DensePolynomial<C>,
    /// Linear complexity `L`.
    pub length: usize,
    /// Index of the last nonzero discrepancy, if any.
    pub last_update: Option<usize>,
}

/// Shortest linear recurrence generating `seq`.
pub fn berlekamp_massey<C: FieldCoeff>(seq: &[C]) -> Result<LinearRecurrence<C>> {
    let first = seq.first().ok_or_else(|| Error::invalid("empty sequence"))?;
    if seq.iter().any(|c| !c.compatible(first)) {
        return Err(Error::invalid("sequence mixes elements of different fields"));
    }
    let zero = first.zero_like();
    let one = first.one_like();
    let mut conn: Vec<C> = vec![one.clone()];
    let mut prev: Vec<C> = vec![one.clone()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut prev_disc = one.clone();
    let mut last_update = None;

    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=len.min(conn.len() - 1) {
            d = d + conn[i].clone() * seq[n - i].clone();
        }
        if d.is_zero_coeff() {
            shift += 1;
            continue;
        }
        last_update = Some(n);
        let coef = d.div(&prev_disc).expect("nonzero discrepancy");
        let mut next = conn.clone();
        if next.len() < prev.len() + shift {
            next.resize(prev.len() + shift, zero.clone());
        }
        for (i, b) in prev.iter().enumerate() {
            next[i + shift] = next[i + shift].clone() - coef.clone() * b.clone();
        }
        if 2 * len <= n {
            prev = conn;
            len = n + 1 - len;
            prev_disc = d;
            shift = 1;
        } else {
            shift += 1;
        }
        conn = next;
    }
    Ok(LinearRecurrence { connection: DensePolynomial::new(conn), length: len, last_update })
}

/// Result of [`rational_reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction<C> {
    Stable(RationalFunction<C>),
    /// Not enough terms to trust the recurrence.
    Unstable { terms: usize, linear_complexity: usize },
}

impl<C> Reconstruction<C> {
    pub fn stable(&self) -> Option<&RationalFunction<C>> {
        match self {
            Reconstruction::Stable(r) => Some(r),
            Reconstruction::Unstable { .. } => None,
        }
    }
}

/// Recovers a rational function from the leading terms of its expansion.
///
/// The answer is accepted when the Berlekamp–Massey state was the same
/// after each of the last `window` terms (so the last change happened no
/// later than term `n - window`) and at least twice the linear complexity of
/// terms were seen; otherwise [`Reconstruction::Unstable`] is returned.
pub fn rational_reconstruct<C: FieldCoeff>(seq: &[C], window: usize) -> Result<Reconstruction<C>> {
    let rec = berlekamp_massey(seq)?;
    let n = seq.len();
    let settled = match rec.last_update {
        None => n >= window,
        Some(i) => n >= i + window,
    };
    if !settled || n < 2 * rec.length {
        return Ok(Reconstruction::Unstable { terms: n, linear_complexity: rec.length });
    }
    let series = DensePolynomial::new(seq.to_vec());
    let num = (&rec.connection * &series).truncate(rec.length);
    Ok(Reconstruction::Stable(RationalFunction::new(num, rec.connection)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, series_exp, Rational};

    fn poly(c: &[i64]) -> DensePolynomial<Rational> {
        DensePolynomial::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    fn expand(num: &[i64], den: &[i64], n: usize) -> Vec<Rational> {
        let ts = |c: &[i64]| {
            crate::exactmath::TruncatedSeries::from_coeffs(
                (0..n).map(|i| rat(*c.get(i).unwrap_or(&0), 1)).collect(),
            )
        };
        (&ts(num) * &ts(den).inverse().unwrap()).coeffs().to_vec()
    }

    #[test]
    fn recovers_known_rational_function() {
        let seq = expand(&[1, 0, 2], &[1, -2], 12);
        let r = rational_reconstruct(&seq, DEFAULT_WINDOW).unwrap();
        let f = r.stable().expect("stable");
        assert_eq!(f.numerator(), &poly(&[1, 0, 2]));
        assert_eq!(f.denominator(), &poly(&[1, -2]));
        assert_eq!(f.total_degree(), 3);
    }

    #[test]
    fn too_few_terms_is_unstable() {
        let seq = expand(&[1, 3], &[1, -1, 5, 2], 6);
        assert!(matches!(
            rational_reconstruct(&seq, DEFAULT_WINDOW).unwrap(),
            Reconstruction::Unstable { .. }
        ));
    }

    #[test]
    fn common_factors_cancel() {
        // (1 - 4t^2) / (1 - 2t) = 1 + 2t
        let f = RationalFunction::new(poly(&[1, 0, -4]), poly(&[1, -2])).unwrap();
        assert_eq!(f.numerator(), &poly(&[1, 2]));
        assert_eq!(f.denominator(), &poly(&[1]));
    }

    #[test]
    fn denominator_normalised() {
        let f = RationalFunction::new(poly(&[2, 4]), poly(&[2, -6])).unwrap();
        assert_eq!(f.denominator().coeff(0), Some(&rat(1, 1)));
        assert_eq!(f.numerator(), &poly(&[1, 2]));
    }

    #[test]
    fn zeta_of_projective_line() {
        // N_m = q^m + 1 gives 1/((1-t)(1-qt)).
        let q = 3i64;
        let counts: Vec<Rational> = (1..=8).map(|m| rat(q.pow(m) + 1, 1)).collect();
        let z = series_exp(&counts, &rat(1, 1));
        let f = rational_reconstruct(z.coeffs(), 4).unwrap();
        let f = f.stable().unwrap();
        assert_eq!(f.numerator(), &poly(&[1]));
        assert_eq!(f.denominator(), &poly(&[1, -4, 3]));
    }

    #[test]
    fn empty_sequence_rejected() {
        assert!(rational_reconstruct::<Rational>(&[], 4).is_err());
    }
}
