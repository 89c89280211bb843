//! Bounds expressed through volumes and mixed volumes of lattice polytopes.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{BoundAmount, BoundParams, BoundValue};
use crate::exactmath::{binomial, rat_int, Rational};
use crate::polytope::{
    convex_hull, mixed_volume, normalized_volume, polytope_series_value, simplex, LatticePolytope,
    MultiSeries,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolytopeBoundKind {
    AsOriginal,
    AsImproved,
    PowerAs,
    ToricTotal,
}

impl PolytopeBoundKind {
    pub fn name(self) -> &'static str {
        match self {
            PolytopeBoundKind::AsOriginal => "as_original",
            PolytopeBoundKind::AsImproved => "as_improved",
            PolytopeBoundKind::PowerAs => "power_as",
            PolytopeBoundKind::ToricTotal => "toric_total",
        }
    }
}

impl std::str::FromStr for PolytopeBoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Self::AsOriginal, Self::AsImproved, Self::PowerAs, Self::ToricTotal]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown polytope bound '{s}'")))
    }
}

/// Dyadic upper enclosure of `2^((n+1)/n)` with 64 fractional bits.
pub fn two_pow_upper(n: u32) -> Rational {
    assert!(n >= 1);
    // smallest U with (U / 2^64)^n >= 2^(n+1)
    let target = BigInt::one() << (n as usize + 1 + 64 * n as usize);
    let mut u = target.nth_root(n);
    while u.pow(n) < target {
        u += 1;
    }
    Rational::new(u, BigInt::one() << 64)
}

fn full_dim(p: &LatticePolytope, what: &str) -> Result<()> {
    if p.is_full_dimensional() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be full-dimensional")))
    }
}

/// `n! V(Δ[n-i], S[i])`.
fn mixed_term(delta: &LatticePolytope, s: &LatticePolytope, i: usize) -> Result<Rational> {
    let n = delta.ambient_dim();
    let v = mixed_volume(&[delta.clone(), s.clone()], &[n - i, i])?;
    Ok(v * Rational::from_integer(crate::exactmath::factorial(n as u64)))
}

/// Total-degree bounds for toric exponential sums with Newton polytope `delta`.
///
/// `as_improved` and `toric_total` need an auxiliary polytope `s`; `power_as`
/// uses `s` (or `delta` when absent) as the polytope being dilated by the
/// rational factor `d > 2`.
pub fn polytope_bound(
    kind: PolytopeBoundKind,
    delta: &LatticePolytope,
    s: Option<&LatticePolytope>,
    d: Option<&Rational>,
) -> Result<BoundValue> {
    full_dim(delta, "the Newton polytope")?;
    let n = delta.ambient_dim();
    let amount = match kind {
        PolytopeBoundKind::AsOriginal => {
            let c = Rational::one() + two_pow_upper(n as u32);
            let mut acc = rat_int(1i64 << n);
            for _ in 0..n {
                acc *= &c;
            }
            BoundAmount::UpperReal(acc * Rational::from_integer(normalized_volume(delta)))
        }
        PolytopeBoundKind::AsImproved | PolytopeBoundKind::ToricTotal => {
            let s = s.ok_or_else(|| Error::invalid("this bound needs the auxiliary polytope S"))?;
            full_dim(s, "S")?;
            if s.ambient_dim() != n {
                return Err(Error::invalid("S lives in a different space"));
            }
            let mut acc = Rational::from_integer(normalized_volume(delta));
            for i in 1..=n {
                acc += rat_int(1i64 << (i - 1)) * mixed_term(delta, s, i)?;
            }
            BoundAmount::Exact(acc)
        }
        PolytopeBoundKind::PowerAs => {
            let s = s.unwrap_or(delta);
            full_dim(s, "S")?;
            let d = d.ok_or_else(|| Error::invalid("power_as needs the dilation factor d"))?;
            if *d <= rat_int(2) {
                return Err(Error::invalid("power_as needs d > 2"));
            }
            let dn = crate::exactmath::rat_pow(d, n as i64);
            let two_n = rat_int(1i64 << n);
            let factor = &dn + (&dn - two_n) / (d - rat_int(2));
            BoundAmount::Exact(Rational::from_integer(normalized_volume(s)) * factor)
        }
    };
    Ok(BoundValue {
        kind: kind.name().to_string(),
        amount,
        params: BoundParams { n: Some(n as u32), ..Default::default() },
    })
}

fn integral(v: Rational, what: &str) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::Data(format!("{what} evaluated to the non-integer {v}")))
    }
}

/// Euler characteristic of a generic complete intersection in the torus with
/// Newton polytopes `polys`: the degree-`n` part of `Π T_i / (1 + T_i)`.
pub fn khovanskii_chi(polys: &[LatticePolytope]) -> Result<BigInt> {
    let n = polys.first().ok_or_else(|| Error::invalid("no polytopes"))?.ambient_dim();
    let r = polys.len();
    if r > n {
        return Err(Error::invalid("need r <= n"));
    }
    if polys.iter().any(|p| p.ambient_dim() != n) {
        return Err(Error::invalid("polytopes live in different spaces"));
    }
    let mut series = MultiSeries::one(r, n);
    for i in 0..r {
        series = &series * &MultiSeries::ratio(&MultiSeries::variable(r, n, i));
    }
    integral(polytope_series_value(&series, polys)?, "the Euler characteristic")
}

/// The toric exponential-sum Betti bound in degree `n - r + j`:
/// `(-1)^(n-r) / (1 + T_∞) · Π T_i / (1 + T_i) · (-1)^j (T_S / (1 + T_S))^j`,
/// evaluated on `(Δ_1..Δ_r, Δ_∞, S)`.
pub fn ultimate_as(
    delta_inf: &LatticePolytope,
    polys: &[LatticePolytope],
    s: Option<&LatticePolytope>,
    j: u32,
) -> Result<BigInt> {
    let n = delta_inf.ambient_dim();
    let r = polys.len();
    if r > n || j as usize > n - r {
        return Err(Error::invalid("need r <= n and 0 <= j <= n - r"));
    }
    if !delta_inf.contains_origin() {
        return Err(Error::invalid("the polytope at infinity must contain the origin"));
    }
    full_dim(delta_inf, "the polytope at infinity")?;
    for p in polys {
        full_dim(p, "every polytope")?;
        if p.ambient_dim() != n {
            return Err(Error::invalid("polytopes live in different spaces"));
        }
    }
    let s = match (s, j) {
        (Some(s), _) => {
            full_dim(s, "S")?;
            s.clone()
        }
        (None, 0) => delta_inf.clone(),
        (None, _) => return Err(Error::invalid("S is needed when j > 0")),
    };
    let nv = r + 2;
    let mut series = MultiSeries::one_plus_inverse(&MultiSeries::variable(nv, n, r));
    for i in 0..r {
        series = &series * &MultiSeries::ratio(&MultiSeries::variable(nv, n, i));
    }
    series = &series * &MultiSeries::ratio(&MultiSeries::variable(nv, n, r + 1)).pow(j as usize);
    if (n - r + j as usize) % 2 == 1 {
        series = -series;
    }
    let mut all: Vec<LatticePolytope> = polys.to_vec();
    all.push(delta_inf.clone());
    all.push(s);
    integral(polytope_series_value(&series, &all)?, "the Betti bound")
}

/// Cayley-type polytope in `Z^(n+r)`.
///
/// Without `f` this is `conv({0} ∪ S_d × {e_(n+1)} ∪ ... ∪ S_d × {e_(n+r)})`;
/// with `f` it is the product `S_d × T'` of the dilated simplex with the
/// standard simplex of dimension `r`.
pub fn cayley_polytope(n: u32, r: u32, d: u32, with_f: bool) -> Result<LatticePolytope> {
    if n == 0 || r == 0 || d == 0 {
        return Err(Error::invalid("need n, r, d >= 1"));
    }
    let (n, r) = (n as usize, r as usize);
    let base = simplex(n, d as i64);
    let mut pts = Vec::new();
    if with_f {
        let mut tails = vec![vec![0; r]];
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            tails.push(e);
        }
        for v in base.vertices() {
            for t in &tails {
                pts.push(v.iter().chain(t).copied().collect());
            }
        }
    } else {
        pts.push(vec![0; n + r]);
        for i in 0..r {
            for v in base.vertices() {
                let mut p = v.clone();
                p.resize(n + r, 0);
                p[n + i] = 1;
                pts.push(p);
            }
        }
    }
    convex_hull(&pts)
}

/// Normalised volume of [`cayley_polytope`] and the claimed upper bound
/// `C(n+r-1, r-1) d^n` (or `C(n+r, r) d^n` with `f`).
pub fn cayley_volume_claim(n: u32, r: u32, d: u32, with_f: bool) -> Result<(BigInt, BigInt)> {
    let p = cayley_polytope(n, r, d, with_f)?;
    let (n64, r64) = (n as u64, r as u64);
    let c = if with_f { binomial(n64 + r64, r64) } else { binomial(n64 + r64 - 1, r64 - 1) };
    Ok((normalized_volume(&p), c * BigInt::from(d).pow(n)))
}
