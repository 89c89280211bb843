//! Lattice polytopes and the volume machinery built on them.

mod gauge;
mod hull;
mod laurent;
mod mixed;
mod volume;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exactmath::Rational;
use crate::{Error, Result};

pub use gauge::{gauge_weight, lattice_points, weight_denominator};
pub use laurent::{newton_polytope, LaurentPolynomial, PolytopeKind};
pub use mixed::{
    minkowski_sum, mixed_volume, polytope_series_value, scale, volume_polynomial, MultiSeries,
};
pub use volume::{normalized_volume, volume};

/// Largest ambient dimension accepted by [`convex_hull`].
pub const MAX_AMBIENT_DIM: usize = 8;

/// Inequality `⟨normal, x⟩ <= offset` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn passes_through_origin(&self) -> bool {
        self.offset == 0
    }

    /// The normal rescaled so the facet reads `⟨ε, x⟩ = 1`. Only defined when
    /// the origin lies strictly on the inner side of the facet.
    pub fn unit_normal(&self) -> Option<Vec<Rational>> {
        (self.offset > 0).then(|| {
            self.normal
                .iter()
                .map(|&a| Rational::new(BigInt::from(a), BigInt::from(self.offset)))
                .collect()
        })
    }

    pub fn value(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Convex hull of finitely many lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient: usize,
    generators: Vec<Vec<i64>>,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    equations: Vec<(Vec<i64>, i64)>,
    dim: usize,
}

/// Convex hull of a nonempty set of lattice points in `Z^n`,
/// `1 <= n <= MAX_AMBIENT_DIM`.
pub fn convex_hull(points: &[Vec<i64>]) -> Result<LatticePolytope> {
    let first = points.first().ok_or_else(|| Error::invalid("empty point set"))?;
    let n = first.len();
    if n == 0 || n > MAX_AMBIENT_DIM {
        return Err(Error::invalid(format!(
            "ambient dimension {n} outside 1..={MAX_AMBIENT_DIM}"
        )));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::invalid("points have inconsistent dimensions"));
    }
    if points.iter().flatten().any(|x| x.unsigned_abs() > 1 << 20) {
        return Err(Error::invalid("coordinates too large"));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let aff = hull::affine_hull(&pts)?;
    if aff.dim == 0 {
        return Ok(LatticePolytope {
            ambient: n,
            generators: points.to_vec(),
            vertices: pts,
            facets: Vec::new(),
            equations: aff.equations,
            dim: 0,
        });
    }
    let project = |p: &Vec<i64>| aff.pivots.iter().map(|&c| p[c]).collect::<Vec<i64>>();
    let projected: Vec<Vec<i64>> = pts.iter().map(project).collect();
    let facets: Vec<Facet> = hull::facets_full_dim(&projected)?
        .into_iter()
        .map(|(a, b)| {
            let mut normal = vec![0; n];
            for (&c, v) in aff.pivots.iter().zip(a) {
                normal[c] = v;
            }
            Facet { normal, offset: b }
        })
        .collect();

    let vertices = pts
        .iter()
        .zip(&projected)
        .filter(|(_, q)| {
            let tight: Vec<Vec<i64>> = facets
                .iter()
                .filter(|f| f.value(&expand(q, &aff.pivots, n)) == f.offset)
                .map(|f| aff.pivots.iter().map(|&c| f.normal[c]).collect())
                .collect();
            crate::exactmath::linalg::rank_i64(&tight) == aff.dim
        })
        .map(|(p, _)| p.clone())
        .collect();

    Ok(LatticePolytope {
        ambient: n,
        generators: points.to_vec(),
        vertices,
        facets,
        equations: aff.equations,
        dim: aff.dim,
    })
}

fn expand(q: &[i64], pivots: &[usize], n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    for (&c, &x) in pivots.iter().zip(q) {
        v[c] = x;
    }
    v
}

impl LatticePolytope {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Facet inequalities. For a lower-dimensional polytope these are relative
    /// to its affine hull, see [`LatticePolytope::equations`].
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations `⟨a, x⟩ = b` of the affine hull.
    pub fn equations(&self) -> &[(Vec<i64>, i64)] {
        &self.equations
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.ambient
            && self.equations.iter().all(|(a, b)| dot(a, x) == *b)
            && self.facets.iter().all(|f| f.value(x) <= f.offset)
    }

    /// Whether `x` lies in `t·Δ` for a rational dilation factor `t >= 0`.
    pub fn contains_dilate(&self, x: &[i64], t: &Rational) -> bool {
        let (num, den) = (t.numer(), t.denom());
        let scaled = |v: i64, b: i64| -> (BigInt, BigInt) {
            (BigInt::from(v) * den, BigInt::from(b) * num)
        };
        x.len() == self.ambient
            && self.equations.iter().all(|(a, b)| {
                let (l, r) = scaled(dot(a, x), *b);
                l == r
            })
            && self.facets.iter().all(|f| {
                let (l, r) = scaled(f.value(x), f.offset);
                l <= r
            })
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&vec![0; self.ambient])
    }

    /// Axis-aligned bounding box of the vertices.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices {
            for i in 0..self.ambient {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    /// Vertex indices lying on a facet.
    pub(crate) fn facet_vertex_sets(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .map(|f| {
                self.vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| f.value(v) == f.offset)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{:?}", self.vertices)
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The standard simplex `conv(0, e_1, ..., e_n)` dilated by `d`.
pub fn simplex(n: usize, d: i64) -> LatticePolytope {
    let mut pts = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = d;
        pts.push(e);
    }
    convex_hull(&pts).expect("simplex is valid")
}

/// The cube `[0, d]^n`.
pub fn cube(n: usize, d: i64) -> LatticePolytope {
    let pts: Vec<Vec<i64>> = (0..1u32 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { d } else { 0 }).collect())
        .collect();
    convex_hull(&pts).expect("cube is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_points() {
        let pts = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1], vec![1, 0]];
        let p = convex_hull(&pts).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vertices(), &[vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]]);
        assert_eq!(p.facets().len(), 4);
        assert!(p.contains(&[1, 2]));
        assert!(!p.contains(&[3, 1]));
    }

    #[test]
    fn segment_in_plane() {
        let p = convex_hull(&[vec![0, 0], vec![1, 1], vec![3, 3]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices(), &[vec![0, 0], vec![3, 3]]);
        assert!(p.contains(&[2, 2]));
        assert!(!p.contains(&[2, 1]));
        assert!(!p.contains(&[4, 4]));
    }

    #[test]
    fn single_point() {
        let p = convex_hull(&[vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(p.contains(&[1, 2, 3]));
        assert!(!p.contains(&[1, 2, 4]));
    }

    #[test]
    fn simplex_facets_are_normalised() {
        let s = simplex(3, 2);
        let far: Vec<&Facet> = s.facets().iter().filter(|f| f.offset > 0).collect();
        assert_eq!(far.len(), 1);
        assert_eq!(far[0].normal, vec![1, 1, 1]);
        assert_eq!(far[0].offset, 2);
        assert_eq!(s.facets().iter().filter(|f| f.passes_through_origin()).count(), 3);
    }

    #[test]
    fn octahedron() {
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [-1, 1] {
                let mut e = vec![0; 3];
                e[i] = s;
                pts.push(e);
            }
        }
        let p = convex_hull(&pts).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.facets().len(), 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(convex_hull(&[]).is_err());
        assert!(convex_hull(&[vec![0, 0], vec![1]]).is_err());
        assert!(convex_hull(&[vec![0; 9]]).is_err());
    }
}
