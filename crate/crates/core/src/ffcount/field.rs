//! Finite fields `F_{p^k}` with elements packed as base-`p` integers.

use serde::{Deserialize, Serialize};

use crate::exactmath::is_prime;
use crate::{Error, Result};

/// Polynomials over `F_p`, lowest degree first, no trailing zeros.
mod fp {
    pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a, p);
            }
            a = mulmod(a, a, p);
            e >>= 1;
        }
        acc
    }

    pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mulmod(r[top], lead_inv, p);
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = (r[idx] + p - mulmod(c, mj, p)) % p;
                }
            }
            r = trim(r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    /// `x^(p^e) mod m`.
    pub fn x_pow_p_pow(e: u32, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[0, 1], m, p);
        for _ in 0..e {
            acc = pow_poly(&acc, p, m, p);
        }
        acc
    }

    pub fn pow_poly(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod_poly(&acc, &base, m, p);
            }
            base = mulmod_poly(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn prime_factors(mut n: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's irreducibility test for a monic `m` of degree `k`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let k = (m.len() - 1) as u32;
        if k == 1 {
            return true;
        }
        if m[0] == 0 {
            return false;
        }
        let x = [0u64, 1];
        if sub(&x_pow_p_pow(k, m, p), &x, p) != rem(&[], m, p) {
            return false;
        }
        prime_factors(k).into_iter().all(|l| {
            let h = sub(&x_pow_p_pow(k / l, m, p), &x, p);
            gcd(m, &h, p).len() == 1
        })
    }
}

/// A finite field `F_q`, `q = p^k`, presented as `F_p[x] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    /// Monic irreducible modulus of degree `k`, constant term first.
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// `q^m`, if it fits in 64 bits.
    pub fn q_pow(&self, m: u32) -> Option<u64> {
        self.p.checked_pow(self.k.checked_mul(m)?)
    }
}

/// The field of order `p^k` whose modulus has the lexicographically least
/// coefficient vector (constant term first) among monic irreducibles.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::invalid("extension degree must be at least 1"));
    }
    if p.checked_pow(k).is_none() {
        return Err(Error::invalid(format!("{p}^{k} exceeds 2^64")));
    }
    if k == 1 {
        return Ok(FieldSpec { p, k, modulus: vec![0, 1] });
    }
    // digits[0] is the constant term and the most significant position; it
    // cannot be zero, or x would divide the modulus
    let mut digits = vec![0u64; k as usize];
    digits[0] = 1;
    loop {
        let mut m = digits.clone();
        m.push(1);
        if fp::is_irreducible(&m, p) {
            return Ok(FieldSpec { p, k, modulus: m });
        }
        let mut i = k as usize;
        loop {
            if i == 0 {
                return Err(Error::Data("no irreducible polynomial found".into()));
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Fields up to this size get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 22;

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// Arithmetic in `F_{p^K}` on packed elements: the element
/// `Σ c_i x^i` is stored as the integer `Σ c_i p^i`.
pub struct ExtField {
    spec: FieldSpec,
    size: u64,
    tables: Option<Tables>,
    /// `Tr(x^i)` for `i < K`.
    trace_basis: Vec<u64>,
}

impl ExtField {
    pub fn new(spec: FieldSpec) -> Self {
        let size = spec.q();
        let mut f = ExtField { spec, size, tables: None, trace_basis: Vec::new() };
        if size <= TABLE_LIMIT && size > 2 {
            f.tables = Some(f.build_tables());
        }
        f.trace_basis = (0..f.spec.k)
            .map(|i| {
                let xi = f.pack(&{
                    let mut v = vec![0u64; i as usize + 1];
                    v[i as usize] = 1;
                    fp::rem(&v, &f.spec.modulus, f.spec.p)
                });
                f.trace_slow(xi)
            })
            .collect();
        f
    }

    pub fn of_order(p: u64, k: u32) -> Result<Self> {
        Ok(Self::new(make_field(p, k)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.k
    }

    pub fn unpack(&self, mut a: u64) -> Vec<u64> {
        let p = self.spec.p;
        let mut v = Vec::with_capacity(self.spec.k as usize);
        for _ in 0..self.spec.k {
            v.push(a % p);
            a /= p;
        }
        fp::trim(v)
    }

    pub fn pack(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.spec.p + d)
    }

    /// Embeds `c ∈ F_p`.
    pub fn from_prime_field(&self, c: u64) -> u64 {
        c % self.spec.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.spec.p;
        if p == 2 {
            return a ^ b;
        }
        if self.spec.k == 1 {
            let s = a as u128 + b as u128;
            return (s % p as u128) as u64;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.spec.k {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            if i + 1 < self.spec.k {
                place *= p;
            }
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        let d: Vec<u64> = self.unpack(a).into_iter().map(|x| (p - x) % p).collect();
        self.pack(&d)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let l = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % (self.size - 1);
            return t.exp[l as usize] as u64;
        }
        if self.spec.k == 1 {
            return fp::mulmod(a, b, self.spec.p);
        }
        self.pack(&fp::mulmod_poly(&self.unpack(a), &self.unpack(b), &self.spec.modulus, self.spec.p))
    }

    /// `a^e` for any integer `e`; `0^e` with `e < 0` is an error.
    pub fn pow(&self, a: u64, e: i64) -> Result<u64> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(Error::invalid("zero raised to a negative power")),
            };
        }
        let order = self.size - 1;
        let e = e.rem_euclid(order as i64) as u64;
        if let Some(t) = &self.tables {
            let l = (t.log[a as usize] as u128 * e as u128 % order as u128) as usize;
            return Ok(t.exp[l] as u64);
        }
        let mut acc = 1u64;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        self.pow(a, -1)
    }

    fn trace_slow(&self, a: u64) -> u64 {
        let mut acc = 0u64;
        let mut cur = a;
        for _ in 0..self.spec.k {
            acc = self.add(acc, cur);
            cur = self.frobenius(cur);
        }
        debug_assert!(acc < self.spec.p);
        acc
    }

    pub fn frobenius(&self, a: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        let mut e = self.spec.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace down to `F_p`.
    pub fn trace(&self, a: u64) -> u64 {
        let p = self.spec.p;
        if self.spec.k == 1 {
            return a;
        }
        let mut acc: u128 = 0;
        let mut a = a;
        for &t in &self.trace_basis {
            acc += (a % p) as u128 * t as u128;
            a /= p;
        }
        (acc % p as u128) as u64
    }

    fn build_tables(&self) -> Tables {
        let order = self.size - 1;
        let factors = {
            let mut n = order;
            let mut out = Vec::new();
            let mut d = 2;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    out.push(d);
                    while n.is_multiple_of(d) {
                        n /= d;
                    }
                }
                d += 1;
            }
            if n > 1 {
                out.push(n);
            }
            out
        };
        let g = (2..self.size.max(3))
            .chain(std::iter::once(1))
            .find(|&g| {
                factors.iter().all(|&l| self.pow_slow(g, order / l) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.size as usize];
        let mut cur = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u32;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        Tables { log, exp }
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if self.spec.k == 1 {
            return fp::mulmod(a, b, self.spec.p);
        }
        self.pack(&fp::mulmod_poly(&self.unpack(a), &self.unpack(b), &self.spec.modulus, self.spec.p))
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a polynomial over `F_p` (constant term first) at `a`.
    pub fn eval_prime_poly(&self, poly: &[u64], a: u64) -> u64 {
        poly.iter().rev().fold(0u64, |acc, &c| self.add(self.mul(acc, a), self.from_prime_field(c)))
    }

    /// A root of a polynomial over `F_p`, scanning elements by Frobenius
    /// orbit (each orbit is tested once, through its least member).
    pub fn find_root(&self, poly: &[u64]) -> Option<u64> {
        let mut seen = vec![false; if self.size <= TABLE_LIMIT { self.size as usize } else { 0 }];
        for a in 0..self.size {
            if !seen.is_empty() {
                if seen[a as usize] {
                    continue;
                }
                let mut b = a;
                loop {
                    seen[b as usize] = true;
                    b = self.frobenius(b);
                    if b == a {
                        break;
                    }
                }
            }
            if self.eval_prime_poly(poly, a) == 0 {
                return Some(a);
            }
        }
        None
    }
}

/// Embedding of `F_{p^k}` into an extension `F_{p^K}`, `k | K`.
pub struct Embedding {
    /// Image of the base generator `x`.
    pub generator_image: u64,
    powers: Vec<u64>,
}

impl Embedding {
    pub fn new(base: &FieldSpec, ext: &ExtField) -> Result<Self> {
        if base.p != ext.characteristic() || !ext.degree().is_multiple_of(base.k) {
            return Err(Error::invalid("base field does not embed in the extension"));
        }
        let root = ext
            .find_root(&base.modulus)
            .ok_or_else(|| Error::Data("base modulus has no root in the extension".into()))?;
        let mut powers = vec![1u64];
        for _ in 1..base.k {
            powers.push(ext.mul(*powers.last().unwrap(), root));
        }
        Ok(Embedding { generator_image: root, powers })
    }

    /// Image of a packed base-field element.
    pub fn map(&self, ext: &ExtField, base_elem: u64) -> u64 {
        let p = ext.characteristic();
        let mut a = base_elem;
        let mut acc = 0u64;
        for &pw in &self.powers {
            acc = ext.add(acc, ext.mul(ext.from_prime_field(a % p), pw));
            a /= p;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_examples() {
        assert_eq!(make_field(2, 1).unwrap().modulus, vec![0, 1]);
        assert_eq!(make_field(2, 2).unwrap().modulus, vec![1, 1, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus, vec![1, 0, 1]);
        assert!(make_field(4, 1).is_err());
        assert!(make_field(2, 65).is_err());
    }

    /// Brute-force irreducibility: no monic factor of degree <= k/2.
    fn irreducible_oracle(m: &[u64], p: u64) -> bool {
        let k = m.len() - 1;
        for dg in 1..=k / 2 {
            let count = p.pow(dg as u32);
            for idx in 0..count {
                let mut f: Vec<u64> = (0..dg).map(|i| idx / p.pow(i as u32) % p).collect();
                f.push(1);
                if fp::rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for (p, k) in [(2u64, 3u32), (2, 4), (3, 2), (3, 3), (5, 2)] {
            for idx in 0..p.pow(k) {
                let mut m: Vec<u64> = (0..k).map(|i| idx / p.pow(i) % p).collect();
                m.push(1);
                assert_eq!(fp::is_irreducible(&m, p), irreducible_oracle(&m, p), "{m:?} mod {p}");
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(2u64, 3u32), (3, 2), (5, 1), (2, 1)] {
            let f = ExtField::of_order(p, k).unwrap();
            let q = f.size();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p);
                }
                assert_eq!(f.trace(a), f.trace_slow(a));
            }
        }
    }

    #[test]
    fn trace_is_onto_and_balanced() {
        let f = ExtField::of_order(3, 3).unwrap();
        let mut counts = [0u32; 3];
        for a in 0..f.size() {
            counts[f.trace(a) as usize] += 1;
        }
        assert_eq!(counts, [9, 9, 9]);
    }

    #[test]
    fn large_field_without_tables() {
        let f = ExtField::of_order(2, 30).unwrap();
        assert!(f.tables.is_none());
        let a = 123456789u64;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let base = make_field(2, 2).unwrap();
        let ext = ExtField::of_order(2, 4).unwrap();
        let base_field = ExtField::new(base.clone());
        let emb = Embedding::new(&base, &ext).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(
                    emb.map(&ext, base_field.mul(a, b)),
                    ext.mul(emb.map(&ext, a), emb.map(&ext, b))
                );
                assert_eq!(emb.map(&ext, base_field.add(a, b)), ext.add(emb.map(&ext, a), emb.map(&ext, b)));
            }
        }
    }
}
