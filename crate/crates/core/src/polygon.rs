//! Newton and Hodge polygons.
//!
//! A [`ConvexPolygon`] is stored by its breakpoints; equivalently by its
//! [`SlopeMultiset`] plus a starting point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::bounds::u_coefficient;
use crate::exactmath::{binomial, rat, rat_int, ExtRational, Rational};
use crate::polytope::{gauge_weight, lattice_points, weight_denominator, LatticePolytope};
use crate::{Error, Result};

/// Slopes in increasing order with positive integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlopeMultiset {
    entries: Vec<(Rational, u64)>,
}

impl SlopeMultiset {
    /// Merges equal slopes, sorts, and drops zero multiplicities.
    pub fn new(entries: impl IntoIterator<Item = (Rational, u64)>) -> Self {
        let mut m: BTreeMap<Rational, u64> = BTreeMap::new();
        for (s, k) in entries {
            *m.entry(s).or_default() += k;
        }
        SlopeMultiset { entries: m.into_iter().filter(|(_, k)| *k > 0).collect() }
    }

    pub fn entries(&self) -> &[(Rational, u64)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    pub fn multiplicity(&self, slope: &Rational) -> u64 {
        self.entries.iter().find(|(s, _)| s == slope).map_or(0, |(_, k)| *k)
    }

    /// Keeps only slopes satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Rational) -> bool) -> Self {
        SlopeMultiset { entries: self.entries.iter().filter(|(s, _)| keep(s)).cloned().collect() }
    }
}

impl fmt::Display for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(s, k)| if *k == 1 { s.to_string() } else { format!("{s} x{k}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Lower-convex polygon given by its breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<(Rational, Rational)>,
}

impl ConvexPolygon {
    /// Polygon starting at `(0, 0)` with the given slopes.
    pub fn from_slopes(slopes: &SlopeMultiset) -> Self {
        Self::from_slopes_at((Rational::zero(), Rational::zero()), slopes)
    }

    pub fn from_slopes_at(start: (Rational, Rational), slopes: &SlopeMultiset) -> Self {
        let mut vertices = vec![start];
        for (s, k) in slopes.entries() {
            let (x, y) = vertices.last().unwrap().clone();
            let k = rat_int(*k as i64);
            vertices.push((&x + &k, y + s * k));
        }
        ConvexPolygon { vertices }
    }

    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.vertices
    }

    pub fn start(&self) -> &(Rational, Rational) {
        &self.vertices[0]
    }

    pub fn end(&self) -> &(Rational, Rational) {
        self.vertices.last().unwrap()
    }

    /// Horizontal extent.
    pub fn length(&self) -> Rational {
        &self.end().0 - &self.start().0
    }

    /// Slopes with multiplicity equal to segment widths. Widths are integral
    /// for every polygon built by this crate.
    pub fn slopes(&self) -> SlopeMultiset {
        SlopeMultiset::new(self.vertices.windows(2).map(|w| {
            let dx = &w[1].0 - &w[0].0;
            let s = (&w[1].1 - &w[0].1) / &dx;
            (s, dx.to_integer().to_u64().expect("integral width"))
        }))
    }

    /// Value at `x`, or `None` outside the horizontal range.
    pub fn value_at(&self, x: &Rational) -> Option<Rational> {
        if x < &self.start().0 || x > &self.end().0 {
            return None;
        }
        for w in self.vertices.windows(2) {
            if x <= &w[1].0 {
                let t = (x - &w[0].0) / (&w[1].0 - &w[0].0);
                return Some(&w[0].1 + t * (&w[1].1 - &w[0].1));
            }
        }
        Some(self.start().1.clone())
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x}, {y})")).collect();
        write!(f, "[{}]", pts.join(", "))
    }
}

impl Serialize for ConvexPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.vertices.len()))?;
        for (x, y) in &self.vertices {
            seq.serialize_element(&[x.to_string(), y.to_string()])?;
        }
        seq.end()
    }
}

fn cross(o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Lower convex hull of the finite points `(i, v_i)`.
pub fn newton_polygon(points: &[(usize, ExtRational)]) -> Result<ConvexPolygon> {
    let mut pts: Vec<(Rational, Rational)> = points
        .iter()
        .filter_map(|(i, v)| v.finite().map(|v| (rat(*i as i64, 1), v.clone())))
        .collect();
    pts.sort();
    // sorted, so the first point at each abscissa is the lowest
    pts.dedup_by(|a, b| a.0 == b.0);
    if !points.iter().any(|(i, v)| *i == 0 && !v.is_infinite()) {
        return Err(Error::invalid("constant term must be nonzero"));
    }
    let mut hull: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(ConvexPolygon { vertices: hull })
}

/// The multiplicities `W'(m)` for `m = 0..=nD` together with `D`.
pub fn hodge_numbers(p: &LatticePolytope) -> Result<(u64, Vec<BigInt>)> {
    let n = p.ambient_dim();
    let d = weight_denominator(p)?;
    let top = n as u64 * d;
    let mut w = vec![BigInt::zero(); top as usize + 1];
    for u in lattice_points(p, &rat_int(n as i64))? {
        if let ExtRational::Finite(x) = gauge_weight(p, &u)? {
            let m = x * rat_int(d as i64);
            debug_assert!(m.is_integer());
            let m = m.to_integer().to_u64().unwrap();
            if m <= top {
                w[m as usize] += 1;
            }
        }
    }
    let wp = (0..=top)
        .map(|m| {
            let mut acc = BigInt::zero();
            for l in 0..=n as u64 {
                if l * d > m {
                    break;
                }
                let term = binomial(n as u64, l) * &w[(m - l * d) as usize];
                if l % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect();
    Ok((d, wp))
}

/// Hodge polygon of a full-dimensional lattice polytope containing the origin:
/// slope `m/D` with multiplicity `W'(m)`.
pub fn hodge_polygon(p: &LatticePolytope) -> Result<ConvexPolygon> {
    let (d, wp) = hodge_numbers(p)?;
    let mut entries = Vec::new();
    for (m, k) in wp.iter().enumerate() {
        if k < &BigInt::zero() {
            return Err(Error::Data(format!("negative Hodge number at m = {m}")));
        }
        let k = k.to_u64().ok_or_else(|| Error::invalid("Hodge number overflow"))?;
        entries.push((rat(m as i64, d as i64), k));
    }
    Ok(ConvexPolygon::from_slopes(&SlopeMultiset::new(entries)))
}

/// Polygon with slope `j + (m + n - j)/d` and multiplicity `U_{m, n-j}` for
/// `m = 0..=(n-j)(d-2)`; the Hodge-type lower bound for exponential sums of a
/// degree-`d` polynomial on affine `n`-space.
pub fn an_hodge_polygon(n: u32, j: u32, d: u32) -> Result<ConvexPolygon> {
    if j > n || d < 2 {
        return Err(Error::invalid("need 0 <= j <= n and d >= 2"));
    }
    let k = n - j;
    let entries = (0..=k * (d - 2)).map(|m| {
        let mult = u_coefficient(m, k, d).to_u64().expect("small multiplicity");
        (rat_int(j as i64) + rat((m + k) as i64, d as i64), mult)
    });
    Ok(ConvexPolygon::from_slopes(&SlopeMultiset::new(entries)))
}

/// Whether `p` lies on or above `g` over their common horizontal range.
pub fn dominates(p: &ConvexPolygon, g: &ConvexPolygon) -> bool {
    let lo = std::cmp::max(&p.start().0, &g.start().0).clone();
    let hi = std::cmp::min(&p.end().0, &g.end().0).clone();
    if lo > hi {
        return true;
    }
    let mut xs: Vec<&Rational> = p.vertices.iter().chain(g.vertices.iter()).map(|(x, _)| x).collect();
    xs.push(&lo);
    xs.push(&hi);
    xs.into_iter()
        .filter(|x| **x >= lo && **x <= hi)
        .all(|x| p.value_at(x).unwrap() >= g.value_at(x).unwrap())
}

/// Whether the two polygons share both endpoints.
pub fn same_endpoints(p: &ConvexPolygon, g: &ConvexPolygon) -> bool {
    p.start() == g.start() && p.end() == g.end()
}
