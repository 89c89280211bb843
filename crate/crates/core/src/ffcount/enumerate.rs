//! Exhaustive enumeration of domain points, split into fixed-size chunks.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::field::ExtField;
use super::Domain;
use crate::polytope::LaurentPolynomial;
use crate::{Error, Result};

/// A polynomial reduced into `F_p`, ready for evaluation.
pub(crate) struct Compiled {
    terms: Vec<(u64, Vec<i64>)>,
}

impl Compiled {
    pub(crate) fn new(f: &LaurentPolynomial, domain: &Domain, p: u64) -> Result<Self> {
        let coords = domain.coordinates();
        if f.nvars() > coords {
            return Err(Error::invalid(format!(
                "polynomial in {} variables does not fit {domain}",
                f.nvars()
            )));
        }
        let f = f.with_nvars(coords)?;
        if !matches!(domain, Domain::Toric(_)) && !f.is_polynomial() {
            return Err(Error::invalid(format!("negative exponent needs a toric domain, got {domain}")));
        }
        if let Domain::Projective(_) = domain {
            if !f.is_zero() && !f.is_homogeneous(f.total_degree()) {
                return Err(Error::invalid("projective equations must be homogeneous"));
            }
        }
        let terms = f.reduce_mod(p).into_iter().map(|(e, c)| (c, e)).collect();
        Ok(Compiled { terms })
    }

    pub(crate) fn eval(&self, field: &ExtField, point: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (c, exps) in &self.terms {
            let mut v = field.from_prime_field(*c);
            for (&x, &e) in point.iter().zip(exps) {
                if e != 0 {
                    // toric points are nonzero, and affine exponents are non-negative
                    v = field.mul(v, field.pow(x, e).unwrap_or(0));
                    if v == 0 {
                        break;
                    }
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }
}

/// A block of points: a fixed prefix followed by free coordinates that each
/// run over `offset..offset + radix`.
struct PointBlock {
    prefix: Vec<u64>,
    free: usize,
    radix: u64,
    offset: u64,
}

impl PointBlock {
    fn len(&self) -> u128 {
        (self.radix as u128).pow(self.free as u32)
    }
}

fn blocks(domain: &Domain, q: u64) -> Vec<PointBlock> {
    match *domain {
        Domain::Affine(n) => vec![PointBlock { prefix: vec![], free: n, radix: q, offset: 0 }],
        Domain::Toric(n) => vec![PointBlock { prefix: vec![], free: n, radix: q - 1, offset: 1 }],
        // the first nonzero homogeneous coordinate is normalised to 1
        Domain::Projective(n) => (0..=n)
            .map(|i| {
                let mut prefix = vec![0u64; i];
                prefix.push(1);
                PointBlock { prefix, free: n - i, radix: q, offset: 0 }
            })
            .collect(),
    }
}

/// Number of points of `domain` over a field with `q` elements.
pub fn domain_size(domain: &Domain, q: u64) -> u128 {
    blocks(domain, q).iter().map(PointBlock::len).sum()
}

/// Per-point outcome folded into the reduction.
#[derive(Clone, Default)]
pub(crate) struct Tally {
    /// Points satisfying the system.
    pub count: u128,
    /// For character sums: satisfying points bucketed by `Tr f(x)`.
    pub buckets: Vec<u128>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.count += other.count;
        if self.buckets.len() < other.buckets.len() {
            self.buckets.resize(other.buckets.len(), 0);
        }
        for (a, b) in self.buckets.iter_mut().zip(other.buckets) {
            *a += b;
        }
        self
    }
}

pub(crate) struct Job<'a> {
    pub field: &'a ExtField,
    pub domain: &'a Domain,
    pub system: &'a [Compiled],
    pub f: Option<&'a Compiled>,
    pub chunk_size: u64,
    pub budget: u128,
}

impl Job<'_> {
    pub(crate) fn run(&self, pool: &rayon::ThreadPool) -> Result<Tally> {
        let q = self.field.size();
        let bl = blocks(self.domain, q);
        let required: u128 = bl.iter().map(PointBlock::len).sum();
        if required > self.budget {
            return Err(Error::BudgetExceeded { required, budget: self.budget });
        }
        let chunk = self.chunk_size.max(1) as u128;
        let mut work: Vec<(usize, u128, u128)> = Vec::new();
        for (i, b) in bl.iter().enumerate() {
            let len = b.len();
            let mut start = 0u128;
            while start < len {
                let end = (start + chunk).min(len);
                work.push((i, start, end));
                start = end;
            }
        }
        let p = self.field.characteristic() as usize;
        let nbuckets = if self.f.is_some() { p } else { 0 };
        let tally = pool.install(|| {
            work.par_iter()
                .map(|&(i, start, end)| self.run_chunk(&bl[i], start, end, nbuckets))
                .reduce(Tally::default, Tally::merge)
        });
        Ok(tally)
    }

    fn run_chunk(&self, block: &PointBlock, start: u128, end: u128, nbuckets: usize) -> Tally {
        let mut tally = Tally { count: 0, buckets: vec![0; nbuckets] };
        let fixed = block.prefix.len();
        let mut point = block.prefix.clone();
        let mut digits = vec![0u64; block.free];
        let mut idx = start;
        for d in digits.iter_mut() {
            *d = (idx % block.radix as u128) as u64;
            idx /= block.radix as u128;
        }
        point.extend(digits.iter().map(|d| d + block.offset));
        for _ in start..end {
            if self.system.iter().all(|g| g.eval(self.field, &point) == 0) {
                tally.count += 1;
                if let Some(f) = self.f {
                    let t = self.field.trace(f.eval(self.field, &point));
                    tally.buckets[t as usize] += 1;
                }
            }
            for (j, d) in digits.iter_mut().enumerate() {
                *d += 1;
                if *d < block.radix {
                    point[fixed + j] = *d + block.offset;
                    break;
                }
                *d = 0;
                point[fixed + j] = block.offset;
            }
        }
        tally
    }
}

/// `Σ_c buckets[c] ζ^{a c}` as exponent counts.
pub(crate) fn twisted_counts(buckets: &[u128], a: u64) -> Vec<BigInt> {
    let p = buckets.len() as u64;
    let mut out = vec![BigInt::from(0); p as usize];
    for (c, &n) in buckets.iter().enumerate() {
        out[((a as u128 * c as u128) % p as u128) as usize] += BigInt::from(n);
    }
    out
}
