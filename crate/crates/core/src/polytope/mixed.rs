use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{convex_hull, volume, LatticePolytope};
use crate::exactmath::linalg::solve;
use crate::exactmath::{factorial, rat_int, Rational};
use crate::{Error, Result};

/// Minkowski sum `Δ + Δ'`.
pub fn minkowski_sum(a: &LatticePolytope, b: &LatticePolytope) -> Result<LatticePolytope> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::invalid("Minkowski sum of polytopes in different spaces"));
    }
    let mut pts = Vec::with_capacity(a.vertices().len() * b.vertices().len());
    for u in a.vertices() {
        for v in b.vertices() {
            pts.push(u.iter().zip(v).map(|(x, y)| x + y).collect());
        }
    }
    convex_hull(&pts)
}

/// Dilation `t·Δ` by a nonnegative integer.
pub fn scale(p: &LatticePolytope, t: u32) -> Result<LatticePolytope> {
    let pts: Vec<Vec<i64>> =
        p.vertices().iter().map(|v| v.iter().map(|x| x * t as i64).collect()).collect();
    convex_hull(&pts)
}

/// All `a ∈ N^r` with `|a| = n`, in lexicographic order.
pub(crate) fn compositions(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=n {
            prefix.push(k);
            go(n - k, r - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        go(n, r, &mut Vec::new(), &mut out);
    }
    out
}

fn combination(polys: &[LatticePolytope], lambda: &[usize]) -> Result<LatticePolytope> {
    let mut acc: Option<LatticePolytope> = None;
    for (p, &l) in polys.iter().zip(lambda) {
        if l == 0 {
            continue;
        }
        let s = scale(p, l as u32)?;
        acc = Some(match acc {
            None => s,
            Some(a) => minkowski_sum(&a, &s)?,
        });
    }
    acc.ok_or_else(|| Error::invalid("empty combination"))
}

/// Coefficients of the homogeneous polynomial `λ ↦ Vol(Σ λ_i Δ_i)`, keyed by
/// exponent vector. Found by exact interpolation on the lattice points of
/// `{λ >= 0 : Σ λ_i = n}`, which determine a form of degree `n` uniquely.
pub fn volume_polynomial(polys: &[LatticePolytope]) -> Result<BTreeMap<Vec<usize>, Rational>> {
    let first = polys.first().ok_or_else(|| Error::invalid("no polytopes"))?;
    let n = first.ambient_dim();
    if polys.iter().any(|p| p.ambient_dim() != n) {
        return Err(Error::invalid("polytopes live in different spaces"));
    }
    let monomials = compositions(n, polys.len());
    let mut rows = Vec::with_capacity(monomials.len());
    let mut rhs = Vec::with_capacity(monomials.len());
    for lambda in &monomials {
        rows.push(
            monomials
                .iter()
                .map(|a| {
                    a.iter().zip(lambda).fold(Rational::one(), |acc, (&e, &l)| {
                        acc * rat_int(l as i64).pow(e as i32)
                    })
                })
                .collect(),
        );
        rhs.push(volume(&combination(polys, lambda)?));
    }
    let coeffs = solve(&rows, &rhs).expect("interpolation nodes are unisolvent");
    Ok(monomials.into_iter().zip(coeffs).collect())
}

fn mixed_from_coefficient(coeff: &Rational, a: &[usize], n: usize) -> Rational {
    let num = a.iter().fold(num_bigint::BigInt::one(), |acc, &e| acc * factorial(e as u64));
    coeff * Rational::new(num, factorial(n as u64))
}

/// Mixed volume `V(Δ_1[a_1], ..., Δ_r[a_r])` with `Σ a_i = n`, normalised so
/// that `V(Δ[n]) = Vol(Δ)`.
pub fn mixed_volume(polys: &[LatticePolytope], mult: &[usize]) -> Result<Rational> {
    if polys.len() != mult.len() {
        return Err(Error::invalid("one multiplicity per polytope is required"));
    }
    let n = polys.first().ok_or_else(|| Error::invalid("no polytopes"))?.ambient_dim();
    if mult.iter().sum::<usize>() != n {
        return Err(Error::invalid(format!("multiplicities must sum to {n}")));
    }
    let (ps, ms): (Vec<LatticePolytope>, Vec<usize>) = polys
        .iter()
        .zip(mult)
        .filter(|(_, &m)| m > 0)
        .map(|(p, &m)| (p.clone(), m))
        .unzip();
    if ps.len() == 1 {
        return Ok(volume(&ps[0]));
    }
    let vp = volume_polynomial(&ps)?;
    Ok(mixed_from_coefficient(&vp[&ms], &ms, n))
}

/// Multivariate power series in `T_1, ..., T_r` truncated above total degree
/// `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    nvars: usize,
    max_degree: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl MultiSeries {
    pub fn constant(nvars: usize, max_degree: usize, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MultiSeries { nvars, max_degree, terms }
    }

    pub fn one(nvars: usize, max_degree: usize) -> Self {
        Self::constant(nvars, max_degree, Rational::one())
    }

    /// The monomial `T_i`.
    pub fn variable(nvars: usize, max_degree: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        if max_degree >= 1 {
            terms.insert(e, Rational::one());
        }
        MultiSeries { nvars, max_degree, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn coeff(&self, e: &[usize]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.clone(), v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    /// `1 / (1 + g)` for a series `g` with zero constant term.
    pub fn one_plus_inverse(g: &MultiSeries) -> Self {
        // Σ_k (-g)^k; g has no constant term so k <= max_degree suffices.
        let mut acc = Self::one(g.nvars, g.max_degree);
        let mut pow = Self::one(g.nvars, g.max_degree);
        let neg = -g.clone();
        for _ in 0..g.max_degree {
            pow = &pow * &neg;
            acc = acc + pow.clone();
        }
        acc
    }

    /// `g / (1 + g)`.
    pub fn ratio(g: &MultiSeries) -> Self {
        g * &Self::one_plus_inverse(g)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.nvars, self.max_degree), |acc, _| &acc * self)
    }

    /// Homogeneous component of total degree `n`.
    pub fn degree_part(&self, n: usize) -> BTreeMap<Vec<usize>, Rational> {
        self.terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<usize>() == n)
            .map(|(e, v)| (e.clone(), v.clone()))
            .collect()
    }

    fn merge(mut self, rhs: &MultiSeries, sign: bool) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        self.max_degree = self.max_degree.min(rhs.max_degree);
        for (e, v) in &rhs.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
            if sign {
                *entry += v;
            } else {
                *entry -= v;
            }
        }
        let md = self.max_degree;
        self.terms.retain(|e, v| !v.is_zero() && e.iter().sum::<usize>() <= md);
        self
    }
}

impl Add for MultiSeries {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.merge(&rhs, true)
    }
}

impl Sub for MultiSeries {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.merge(&rhs, false)
    }
}

impl Neg for MultiSeries {
    type Output = Self;
    fn neg(mut self) -> Self {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Mul for &MultiSeries {
    type Output = MultiSeries;
    fn mul(self, rhs: &MultiSeries) -> MultiSeries {
        assert_eq!(self.nvars, rhs.nvars);
        let md = self.max_degree.min(rhs.max_degree);
        let mut terms: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (ea, va) in &self.terms {
            let da: usize = ea.iter().sum();
            for (eb, vb) in &rhs.terms {
                if da + eb.iter().sum::<usize>() > md {
                    continue;
                }
                let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += va * vb;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        MultiSeries { nvars: self.nvars, max_degree: md, terms }
    }
}

impl Mul for MultiSeries {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Evaluates the degree-`n` part of a series in `T_1..T_r` by replacing each
/// monomial `T^a` with the normalised mixed volume `n! V(Δ_1[a_1], ..., Δ_r[a_r])`,
/// where `n` is the ambient dimension of the polytopes. In particular `T_i^n`
/// becomes `n! Vol(Δ_i)`.
pub fn polytope_series_value(series: &MultiSeries, polys: &[LatticePolytope]) -> Result<Rational> {
    if series.nvars() != polys.len() {
        return Err(Error::invalid("one polytope per series variable is required"));
    }
    let n = polys.first().ok_or_else(|| Error::invalid("no polytopes"))?.ambient_dim();
    if series.max_degree() < n {
        return Err(Error::invalid("series is truncated below the ambient dimension"));
    }
    let vp = volume_polynomial(polys)?;
    let mut acc = Rational::zero();
    for (a, c) in series.degree_part(n) {
        let afact = a.iter().fold(num_bigint::BigInt::one(), |acc, &e| acc * factorial(e as u64));
        acc += c * &vp[&a] * Rational::from_integer(afact);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::polytope::{cube, simplex};

    fn seg(i: usize, n: usize) -> LatticePolytope {
        let mut e = vec![0; n];
        e[i] = 1;
        convex_hull(&[vec![0; n], e]).unwrap()
    }

    #[test]
    fn unit_segments_in_the_plane() {
        let v = mixed_volume(&[seg(0, 2), seg(1, 2)], &[1, 1]).unwrap();
        assert_eq!(v, rat(1, 2));
    }

    #[test]
    fn mixed_volume_of_one_polytope_is_volume() {
        let s = simplex(3, 2);
        assert_eq!(mixed_volume(&[s.clone(), s.clone()], &[1, 2]).unwrap(), volume(&s));
    }

    #[test]
    fn two_squares() {
        // Vol(a[0,1]^2 + b[0,2]^2) = (a + 2b)^2
        let vp = volume_polynomial(&[cube(2, 1), cube(2, 2)]).unwrap();
        assert_eq!(vp[&vec![2, 0]], rat(1, 1));
        assert_eq!(vp[&vec![1, 1]], rat(4, 1));
        assert_eq!(vp[&vec![0, 2]], rat(4, 1));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(2, 1), vec![vec![2]]);
    }

    #[test]
    fn series_geometric_ratio() {
        let t = MultiSeries::variable(1, 4, 0);
        let r = MultiSeries::ratio(&t);
        assert_eq!(r.coeff(&[1]), rat(1, 1));
        assert_eq!(r.coeff(&[2]), rat(-1, 1));
        assert_eq!(r.coeff(&[4]), rat(-1, 1));
    }
}
