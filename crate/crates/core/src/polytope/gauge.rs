use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::LatticePolytope;
use crate::exactmath::{rat_ceil, rat_floor, ExtRational, Rational};
use crate::{Error, Result};

fn check_gauge_input(p: &LatticePolytope) -> Result<()> {
    if !p.is_full_dimensional() {
        return Err(Error::invalid("weight function needs a full-dimensional polytope"));
    }
    if !p.contains_origin() {
        return Err(Error::invalid("weight function needs the origin in the polytope"));
    }
    Ok(())
}

/// Smallest `c >= 0` with `u ∈ c·Δ`, or `+∞` when `u` lies outside the cone
/// over `Δ` from the origin.
pub fn gauge_weight(p: &LatticePolytope, u: &[i64]) -> Result<ExtRational> {
    check_gauge_input(p)?;
    if u.len() != p.ambient_dim() {
        return Err(Error::invalid("point has the wrong dimension"));
    }
    let mut best = Rational::zero();
    for f in p.facets() {
        let v = f.value(u);
        if f.offset == 0 {
            if v > 0 {
                return Ok(ExtRational::Infinite);
            }
        } else {
            let w = Rational::new(BigInt::from(v), BigInt::from(f.offset));
            if w > best {
                best = w;
            }
        }
    }
    Ok(ExtRational::Finite(best))
}

/// Least common denominator of the coordinates of the unit normals of the
/// facets not through the origin. Weights of lattice points lie in `(1/D)Z`.
pub fn weight_denominator(p: &LatticePolytope) -> Result<u64> {
    check_gauge_input(p)?;
    let mut d = BigInt::from(1);
    for f in p.facets() {
        if let Some(eps) = f.unit_normal() {
            for c in eps {
                d = d.lcm(c.denom());
            }
        }
    }
    d.to_u64().ok_or_else(|| Error::invalid("denominator overflow"))
}

/// Lattice points of `t·Δ` for a rational `t >= 0`, in lexicographic order.
pub fn lattice_points(p: &LatticePolytope, t: &Rational) -> Result<Vec<Vec<i64>>> {
    if *t < Rational::zero() {
        return Err(Error::invalid("dilation factor must be nonnegative"));
    }
    let (lo, hi) = p.bounding_box();
    let to_i64 = |b: BigInt| b.to_i64().ok_or_else(|| Error::invalid("box too large"));
    let lo: Vec<i64> = lo
        .iter()
        .map(|&x| to_i64(rat_ceil(&(Rational::from_integer(x.into()) * t))))
        .collect::<Result<_>>()?;
    let hi: Vec<i64> = hi
        .iter()
        .map(|&x| to_i64(rat_floor(&(Rational::from_integer(x.into()) * t))))
        .collect::<Result<_>>()?;
    let mut size: u128 = 1;
    for (a, b) in lo.iter().zip(&hi) {
        if b < a {
            return Ok(Vec::new());
        }
        size = size.saturating_mul((b - a + 1) as u128);
    }
    if size > 1 << 26 {
        return Err(Error::invalid("too many candidate lattice points"));
    }
    let n = lo.len();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if p.contains_dilate(&cur, t) {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::polytope::{convex_hull, cube, simplex};

    #[test]
    fn simplex_weights() {
        let s = simplex(2, 3);
        assert_eq!(weight_denominator(&s).unwrap(), 3);
        assert_eq!(gauge_weight(&s, &[1, 1]).unwrap(), ExtRational::Finite(rat(2, 3)));
        assert_eq!(gauge_weight(&s, &[0, 0]).unwrap(), ExtRational::Finite(rat(0, 1)));
        assert_eq!(gauge_weight(&s, &[-1, 0]).unwrap(), ExtRational::Infinite);
    }

    #[test]
    fn weight_is_homogeneous() {
        let p = convex_hull(&[vec![-1, 0], vec![2, 0], vec![0, 3], vec![1, -2]]).unwrap();
        for u in [[1, 1], [-1, 2], [3, -1]] {
            let w1 = gauge_weight(&p, &u).unwrap();
            let w3 = gauge_weight(&p, &[3 * u[0], 3 * u[1]]).unwrap();
            assert_eq!(w3, ExtRational::Finite(w1.finite().unwrap() * rat(3, 1)));
        }
    }

    #[test]
    fn dilated_lattice_points() {
        assert_eq!(lattice_points(&cube(2, 1), &rat(2, 1)).unwrap().len(), 9);
        assert_eq!(lattice_points(&simplex(2, 2), &rat(1, 2)).unwrap().len(), 3);
        assert_eq!(lattice_points(&simplex(2, 1), &rat(0, 1)).unwrap(), vec![vec![0, 0]]);
    }

    #[test]
    fn origin_outside_rejected() {
        let p = convex_hull(&[vec![1, 1], vec![2, 1], vec![1, 2]]).unwrap();
        assert!(gauge_weight(&p, &[1, 1]).is_err());
    }
}
