use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::LatticePolytope;
use crate::exactmath::linalg::{det_i128, rank_i64};
use crate::exactmath::{factorial, Rational};

struct Triangulator<'a> {
    poly: &'a LatticePolytope,
    facet_sets: Vec<Vec<usize>>,
    apex_last: bool,
    memo: HashMap<Vec<usize>, Vec<Vec<usize>>>,
}

impl Triangulator<'_> {
    fn affine_dim(&self, face: &[usize]) -> usize {
        let v = self.poly.vertices();
        let base = &v[face[0]];
        let rows: Vec<Vec<i64>> = face[1..]
            .iter()
            .map(|&i| v[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        rank_i64(&rows)
    }

    fn run(&mut self, face: &[usize], dim: usize) -> Vec<Vec<usize>> {
        if dim == 0 {
            return vec![vec![face[0]]];
        }
        if let Some(t) = self.memo.get(face) {
            return t.clone();
        }
        let apex = if self.apex_last { *face.last().unwrap() } else { face[0] };
        let mut subfaces: Vec<Vec<usize>> = Vec::new();
        for fs in &self.facet_sets {
            let inter: Vec<usize> = face.iter().copied().filter(|i| fs.contains(i)).collect();
            if inter.len() < dim || inter.len() == face.len() || inter.contains(&apex) {
                continue;
            }
            if !subfaces.contains(&inter) && self.affine_dim(&inter) == dim - 1 {
                subfaces.push(inter);
            }
        }
        subfaces.sort();
        let mut out = Vec::new();
        for sub in subfaces {
            for mut s in self.run(&sub, dim - 1) {
                s.push(apex);
                out.push(s);
            }
        }
        self.memo.insert(face.to_vec(), out.clone());
        out
    }
}

/// Pulling triangulation of a full-dimensional polytope, as lists of vertex
/// indices. The apex at every level is the lexicographically smallest vertex
/// of the face, or the largest when `apex_last` is set.
pub(crate) fn triangulate(p: &LatticePolytope, apex_last: bool) -> Vec<Vec<usize>> {
    if !p.is_full_dimensional() {
        return Vec::new();
    }
    let mut t = Triangulator { poly: p, facet_sets: p.facet_vertex_sets(), apex_last, memo: HashMap::new() };
    let all: Vec<usize> = (0..p.vertices().len()).collect();
    t.run(&all, p.dim())
}

pub(crate) fn normalized_volume_with(p: &LatticePolytope, apex_last: bool) -> BigInt {
    let v = p.vertices();
    triangulate(p, apex_last)
        .iter()
        .map(|s| {
            let base = &v[s[0]];
            let m: Vec<Vec<i128>> = s[1..]
                .iter()
                .map(|&i| v[i].iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
                .collect();
            BigInt::from(det_i128(&m).abs())
        })
        .fold(BigInt::zero(), |a, b| a + b)
}

/// `n! · Vol(Δ)` for `Δ ⊂ R^n`; zero when `Δ` is not full-dimensional.
pub fn normalized_volume(p: &LatticePolytope) -> BigInt {
    normalized_volume_with(p, false)
}

/// Euclidean volume in the ambient space.
pub fn volume(p: &LatticePolytope) -> Rational {
    Rational::new(normalized_volume(p), factorial(p.ambient_dim() as u64))
}
