//! The integer sequences the bounds are built from.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactmath::{binomial, binomial_i, series_coefficient};
use crate::{Error, Result};

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_minus_h_pow(n: u32) -> Vec<BigInt> {
    (0..=n as u64)
        .map(|i| {
            let c = binomial(n as u64, i);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

fn series_int(num: &[BigInt], den: &[BigInt], k: usize) -> BigInt {
    let c = series_coefficient(num, den, k).expect("denominator has constant term 1");
    debug_assert!(c.is_integer());
    c.to_integer()
}

fn check_degrees(n: u32, ds: &[u32]) -> Result<()> {
    let r = ds.len() as u32;
    if r == 0 || r > n {
        return Err(Error::invalid(format!("need 1 <= r <= n, got r = {r}, n = {n}")));
    }
    if ds.contains(&0) {
        return Err(Error::invalid("degrees must be positive"));
    }
    Ok(())
}

/// `N(n; d_1..d_r)`: the coefficient of `h^(n-r)` in
/// `d_1⋯d_r (1-h)^n / Π(1 - d_i h)`.
pub fn n_coefficient(n: u32, ds: &[u32]) -> Result<BigInt> {
    check_degrees(n, ds)?;
    let prod: BigInt = ds.iter().map(|&d| BigInt::from(d)).product();
    let num: Vec<BigInt> = one_minus_h_pow(n).into_iter().map(|c| c * &prod).collect();
    let den = ds
        .iter()
        .fold(vec![BigInt::one()], |acc, &d| poly_mul(&acc, &[BigInt::one(), -BigInt::from(d)]));
    Ok(series_int(&num, &den, (n as usize) - ds.len()))
}

/// `M(n; d_1..d_r)`, the generic middle Betti number of an affine complete
/// intersection: `N - (-1)^(n-r)` when `n > r`, and `N` when `n = r`.
pub fn m_coefficient(n: u32, ds: &[u32]) -> Result<BigInt> {
    let nc = n_coefficient(n, ds)?;
    let r = ds.len() as u32;
    Ok(if n == r {
        nc
    } else if (n - r).is_multiple_of(2) {
        nc - 1
    } else {
        nc + 1
    })
}

/// Closed form of `M(n; d, ..., d)` with `r` equal degrees.
pub fn m_coefficient_equal(n: u32, r: u32, d: u32) -> Result<BigInt> {
    if r == 0 || r > n || d == 0 {
        return Err(Error::invalid("need 1 <= r <= n and d >= 1"));
    }
    let (n, r) = (n as i64, r as i64);
    let dm1 = BigInt::from(d as i64 - 1);
    Ok((0..r)
        .map(|i| binomial_i(n, i) * dm1.pow((n - i) as u32) * binomial_i(n - i - 1, r - i - 1))
        .sum())
}

/// `C(n, r; d)`: the coefficient of `h^(n-r)` in `d^r (1-h)^n / (1-dh)^(r+1)`.
pub fn c_coefficient(n: u32, r: u32, d: u32) -> Result<BigInt> {
    if r > n || d == 0 {
        return Err(Error::invalid("need 0 <= r <= n and d >= 1"));
    }
    let dr = BigInt::from(d).pow(r);
    let num: Vec<BigInt> = one_minus_h_pow(n).into_iter().map(|c| c * &dr).collect();
    let den = (0..=r).fold(vec![BigInt::one()], |acc, _| {
        poly_mul(&acc, &[BigInt::one(), -BigInt::from(d)])
    });
    Ok(series_int(&num, &den, (n - r) as usize))
}

/// Closed form `Σ_{i=0}^{r} C(n,i) (d-1)^(n-i) C(n-i, n-r)` of [`c_coefficient`].
pub fn c_coefficient_closed(n: u32, r: u32, d: u32) -> Result<BigInt> {
    if r > n || d == 0 {
        return Err(Error::invalid("need 0 <= r <= n and d >= 1"));
    }
    let (n, r) = (n as i64, r as i64);
    let dm1 = BigInt::from(d as i64 - 1);
    Ok((0..=r)
        .map(|i| binomial_i(n, i) * dm1.pow((n - i) as u32) * binomial_i(n - i, n - r))
        .sum())
}

/// `U_{m,n}`: the coefficient of `x^m` in `(1 + x + ... + x^(d-2))^n`.
pub fn u_coefficient(m: u32, n: u32, d: u32) -> BigInt {
    assert!(d >= 2, "U coefficients need d >= 2");
    let base = vec![BigInt::one(); (d - 1) as usize];
    let p = (0..n).fold(vec![BigInt::one()], |acc, _| poly_mul(&acc, &base));
    p.get(m as usize).cloned().unwrap_or_default()
}

/// Sum over `j = 0..=n-r` of `M(n-j; ds)`: the generic total Betti number
/// of an affine complete intersection.
pub fn affine_ci_total(n: u32, ds: &[u32]) -> Result<BigInt> {
    check_degrees(n, ds)?;
    let r = ds.len() as u32;
    (0..=n - r).map(|j| m_coefficient(n - j, ds)).sum()
}

/// `(d-1)^n + (d-1)^(n-1) + ... + 1`, the total-degree bound for the
/// L-function of a degree-`d` polynomial on affine `n`-space.
pub fn affine_expsum_total(n: u32, d: u32) -> BigInt {
    let dm1 = BigInt::from(d as i64 - 1);
    (0..=n).map(|i| dm1.pow(i)).sum()
}

/// `(-1)^(n-r)` times the coefficient of `h^n` in
/// `(1+h)^n Π(d_i h) / ((1 + d h) Π(1 + d_i h))`: the generic Euler
/// characteristic difference on projective space with a pole of order `d`
/// along the hyperplane at infinity.
pub fn chern_integral_pn(n: u32, d: u32, ds: &[u32]) -> Result<BigInt> {
    let r = ds.len() as u32;
    if r > n {
        return Err(Error::invalid("need r <= n"));
    }
    let prod: BigInt = ds.iter().map(|&x| BigInt::from(x)).product();
    let num: Vec<BigInt> = (0..=n as u64).map(|i| binomial(n as u64, i) * &prod).collect();
    let den = ds
        .iter()
        .chain(std::iter::once(&d))
        .fold(vec![BigInt::one()], |acc, &x| poly_mul(&acc, &[BigInt::one(), BigInt::from(x)]));
    // Π(d_i h) shifts by h^r, so read off the coefficient of h^(n-r).
    let c = series_int(&num, &den, (n - r) as usize);
    Ok(if (n - r).is_multiple_of(2) { c } else { -c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_examples() {
        assert_eq!(m_coefficient(3, &[2]).unwrap(), BigInt::from(1));
        assert_eq!(m_coefficient(2, &[2, 3]).unwrap(), BigInt::from(6));
        assert_eq!(m_coefficient(3, &[2, 2]).unwrap(), BigInt::from(5));
        assert_eq!(m_coefficient_equal(3, 2, 2).unwrap(), BigInt::from(5));
        assert!(m_coefficient(2, &[2, 2, 2]).is_err());
    }

    #[test]
    fn hypersurface_is_power_of_d_minus_one() {
        for d in 1..6u32 {
            assert_eq!(m_coefficient(1, &[d]).unwrap(), BigInt::from(d));
        }
        for n in 2..6 {
            for d in 1..6u32 {
                let m = m_coefficient(n, &[d]).unwrap();
                assert_eq!(m, BigInt::from(d as i64 - 1).pow(n));
            }
        }
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_coefficient(2, 1, 2).unwrap(), BigInt::from(4));
        for n in 0..5 {
            for d in 1..5u32 {
                assert_eq!(c_coefficient(n, 0, d).unwrap(), BigInt::from(d as i64 - 1).pow(n));
            }
        }
    }

    #[test]
    fn u_examples() {
        for m in 0..5 {
            assert_eq!(u_coefficient(m, 4, 3), binomial(4, m as u64));
        }
        assert_eq!(u_coefficient(0, 3, 2), BigInt::from(1));
        assert_eq!(u_coefficient(1, 3, 2), BigInt::from(0));
        let total: BigInt = (0..=12).map(|m| u_coefficient(m, 3, 6)).sum();
        assert_eq!(total, BigInt::from(125));
    }

    #[test]
    fn chern_examples() {
        assert_eq!(chern_integral_pn(3, 4, &[]).unwrap(), BigInt::from(27));
        assert_eq!(chern_integral_pn(2, 2, &[2]).unwrap(), BigInt::from(4));
        for n in 1..5 {
            for r in 0..=n {
                for d in 1..4 {
                    let ds = vec![d; r as usize];
                    assert_eq!(chern_integral_pn(n, d, &ds).unwrap(), c_coefficient(n, r, d).unwrap());
                }
            }
        }
    }

    #[test]
    fn affine_totals() {
        assert_eq!(affine_expsum_total(1, 2), BigInt::from(2));
        assert_eq!(affine_expsum_total(2, 3), BigInt::from(7));
        // plane cubic: M(2;3) + M(1;3) = 4 + 3
        assert_eq!(affine_ci_total(2, &[3]).unwrap(), BigInt::from(7));
    }
}
