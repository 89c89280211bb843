//! Facet enumeration by the double-description method on the homogenised
//! dual cone, in exact `i128` arithmetic.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactmath::linalg::{nullspace, primitive_integer, rref, solve, to_rational_matrix};
use crate::exactmath::Rational;
use crate::{Error, Result};

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<i128>,
    zeros: Bits,
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn make_primitive(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Affine hull of a nonempty point set.
pub(crate) struct AffineHull {
    pub dim: usize,
    /// Coordinates onto which projection is injective on the hull.
    pub pivots: Vec<usize>,
    /// Equations `⟨a, x⟩ = b` cutting out the hull.
    pub equations: Vec<(Vec<i64>, i64)>,
}

pub(crate) fn affine_hull(points: &[Vec<i64>]) -> Result<AffineHull> {
    let n = points[0].len();
    let base = &points[0];
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        let equations = (0..n)
            .map(|i| {
                let mut a = vec![0; n];
                a[i] = 1;
                (a, base[i])
            })
            .collect();
        return Ok(AffineHull { dim: 0, pivots: vec![], equations });
    }
    let m = to_rational_matrix(&diffs);
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let mut equations = Vec::new();
    for v in nullspace(&m, n) {
        let a: Vec<i64> = primitive_integer(&v)
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::invalid("coordinates too large")))
            .collect::<Result<_>>()?;
        let b = a.iter().zip(base).map(|(x, y)| x * y).sum();
        equations.push((a, b));
    }
    Ok(AffineHull { dim: pivots.len(), pivots, equations })
}

/// Facets `(a, b)` with `⟨a, x⟩ <= b` of the convex hull of full-dimensional
/// points in `Z^k`, `k >= 1`. Normals are primitive.
pub(crate) fn facets_full_dim(points: &[Vec<i64>]) -> Result<Vec<(Vec<i64>, i64)>> {
    let k = points[0].len();
    let dim = k + 1;
    let homog: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|&x| x as i128).chain(std::iter::once(1)).collect())
        .collect();

    // Pick k + 1 affinely independent points.
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..homog.len() {
        let mut rows: Vec<Vec<i64>> = basis
            .iter()
            .map(|&j| homog[j].iter().map(|&x| x as i64).collect())
            .collect();
        rows.push(homog[i].iter().map(|&x| x as i64).collect());
        let mut m = to_rational_matrix(&rows);
        if rref(&mut m).len() == rows.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(Error::invalid("points are not full-dimensional"));
    }

    // Initial rays: columns of the inverse of the basis matrix.
    let h0 = to_rational_matrix(
        &basis
            .iter()
            .map(|&j| homog[j].iter().map(|&x| x as i64).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for col in 0..dim {
        let mut e = vec![Rational::from_integer(0.into()); dim];
        e[col] = Rational::from_integer(1.into());
        let c = solve(&h0, &e).expect("independent rows");
        let v: Vec<i128> = primitive_integer(&c).iter().map(|x| x.to_i128().unwrap()).collect();
        let mut zeros = Bits::new(homog.len());
        for (l, &j) in basis.iter().enumerate() {
            if l != col {
                zeros.set(j);
            }
        }
        rays.push(Ray { v, zeros });
    }

    for (idx, h) in homog.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let signs: Vec<i128> = rays.iter().map(|r| dot(h, &r.v)).collect();
        if signs.iter().all(|&s| s > 0) {
            continue;
        }
        if signs.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&signs) {
                if s == 0 {
                    r.zeros.set(idx);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if signs[i] > 0 {
                next.push(Ray { v: r.v.clone(), zeros: r.zeros.clone() });
            } else if signs[i] == 0 {
                let mut z = r.zeros.clone();
                z.set(idx);
                next.push(Ray { v: r.v.clone(), zeros: z });
            }
        }
        for (i, rp) in rays.iter().enumerate() {
            if signs[i] <= 0 {
                continue;
            }
            for (j, rn) in rays.iter().enumerate() {
                if signs[j] >= 0 {
                    continue;
                }
                let common = rp.zeros.and(&rn.zeros);
                if (common.count() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(l, r)| l == i || l == j || !r.zeros.contains(&common));
                if !adjacent {
                    continue;
                }
                let (sp, sn) = (signs[i], signs[j]);
                let mut v: Vec<i128> =
                    rn.v.iter().zip(&rp.v).map(|(a, b)| sp * a - sn * b).collect();
                make_primitive(&mut v);
                let mut zeros = common;
                zeros.set(idx);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }

    let mut facets: Vec<(Vec<i64>, i64)> = rays
        .into_iter()
        .map(|r| {
            let a: Vec<i64> = r.v[..k].iter().map(|&x| -x as i64).collect();
            (a, r.v[k] as i64)
        })
        .collect();
    facets.sort();
    facets.dedup();
    Ok(facets)
}
