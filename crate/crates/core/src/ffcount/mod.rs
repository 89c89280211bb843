//! Finite fields, exhaustive point counts and additive character sums, and
//! the zeta and L-functions reconstructed from them.

mod cache;
mod enumerate;
mod field;
mod lfunction;

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exactmath::CyclotomicInteger;
use crate::polytope::LaurentPolynomial;
use crate::{Error, Result};

pub use cache::{cache_gc, content_key, Cache, CacheRecord, GcSummary, RecordKind, RecordValue};
pub use enumerate::domain_size;
pub use field::{make_field, Embedding, ExtField, FieldSpec};
pub use lfunction::{l_function, l_newton_polygon, zeta_function, zeta_newton_polygon, Reconstructed};

use enumerate::{twisted_counts, Compiled, Job};

/// Default cap on the number of points enumerated in one count.
pub const DEFAULT_BUDGET: u128 = 1 << 32;
/// Points per unit of parallel work. Fixed so that results never depend on
/// the worker count.
pub const DEFAULT_CHUNK: u64 = 1 << 12;

/// Where points are counted. `Projective(n)` uses `n + 1` homogeneous
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum Domain {
    Affine(usize),
    Toric(usize),
    Projective(usize),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match *self {
            Domain::Affine(n) | Domain::Toric(n) | Domain::Projective(n) => n,
        }
    }

    /// Number of coordinates a point carries.
    pub fn coordinates(&self) -> usize {
        match *self {
            Domain::Projective(n) => n + 1,
            _ => self.dim(),
        }
    }

    pub fn size(&self, q: u64) -> u128 {
        domain_size(self, q)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Affine(n) => write!(f, "affine({n})"),
            Domain::Toric(n) => write!(f, "toric({n})"),
            Domain::Projective(n) => write!(f, "projective({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRecord {
    pub domain: Domain,
    pub system: Vec<String>,
    pub m: u32,
    #[serde(serialize_with = "ser_display")]
    pub count: BigInt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharSumRecord {
    pub f: String,
    pub domain: Domain,
    pub system: Vec<String>,
    pub m: u32,
    pub a: u64,
    #[serde(serialize_with = "ser_display")]
    pub value: CyclotomicInteger,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub jobs: usize,
    pub budget: u128,
    pub chunk_size: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: DEFAULT_BUDGET,
            chunk_size: DEFAULT_CHUNK,
        }
    }
}

/// Counting engine: a worker pool, an enumeration budget and an optional
/// on-disk cache.
pub struct Counter {
    options: CountOptions,
    pool: rayon::ThreadPool,
    cache: Option<Cache>,
}

impl Counter {
    pub fn new(options: CountOptions) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        Ok(Counter { options, pool, cache: None })
    }

    pub fn with_cache(mut self, dir: impl AsRef<Path>) -> Result<Self> {
        self.cache = Some(Cache::open(dir)?);
        Ok(self)
    }

    pub fn options(&self) -> &CountOptions {
        &self.options
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    fn key(
        &self,
        kind: &str,
        field: &FieldSpec,
        domain: &Domain,
        system: &[LaurentPolynomial],
        f: Option<&LaurentPolynomial>,
        a: u64,
        m: u32,
    ) -> String {
        let system: Vec<String> = system.iter().map(|g| g.to_string()).collect();
        content_key(&[
            ("kind", kind.to_string()),
            ("p", field.p.to_string()),
            ("k", field.k.to_string()),
            ("modulus", format!("{:?}", field.modulus)),
            ("domain", domain.to_string()),
            ("system", format!("{system:?}")),
            ("f", f.map(|f| f.to_string()).unwrap_or_default()),
            ("a", a.to_string()),
            ("m", m.to_string()),
        ])
    }

    fn extension(field: &FieldSpec, m: u32) -> Result<ExtField> {
        if m == 0 {
            return Err(Error::invalid("extension index m must be at least 1"));
        }
        let k = field
            .k
            .checked_mul(m)
            .filter(|&k| field.p.checked_pow(k).is_some())
            .ok_or_else(|| Error::invalid(format!("q^{m} exceeds 2^64")))?;
        ExtField::of_order(field.p, k)
    }

    fn check_budget(&self, field: &FieldSpec, domain: &Domain, m: u32) -> Result<()> {
        let qm = field.q_pow(m).ok_or_else(|| Error::invalid(format!("q^{m} exceeds 2^64")))?;
        let required = domain_size(domain, qm);
        if required > self.options.budget {
            return Err(Error::BudgetExceeded { required, budget: self.options.budget });
        }
        Ok(())
    }

    fn compile(system: &[LaurentPolynomial], domain: &Domain, p: u64) -> Result<Vec<Compiled>> {
        system.iter().map(|g| Compiled::new(g, domain, p)).collect()
    }

    /// Number of common zeros of `system` in `domain` over `F_{q^m}`.
    pub fn count_points(
        &self,
        system: &[LaurentPolynomial],
        domain: &Domain,
        field: &FieldSpec,
        m: u32,
    ) -> Result<CountRecord> {
        let compiled = Self::compile(system, domain, field.p)?;
        let record = |count| CountRecord {
            domain: *domain,
            system: system.iter().map(|g| g.to_string()).collect(),
            m,
            count,
        };
        let key = self.key("count", field, domain, system, None, 0, m);
        if let Some(c) = &self.cache {
            if let Some(hit) = c.get(&key)?.and_then(|r| r.as_count()) {
                return Ok(record(hit));
            }
        }
        self.check_budget(field, domain, m)?;
        let ext = Self::extension(field, m)?;
        let tally = Job {
            field: &ext,
            domain,
            system: &compiled,
            f: None,
            chunk_size: self.options.chunk_size,
            budget: self.options.budget,
        }
        .run(&self.pool)?;
        let count = BigInt::from(tally.count);
        if let Some(c) = &self.cache {
            c.put(CacheRecord::count(key, m, &count))?;
        }
        Ok(record(count))
    }

    /// `Σ ζ_p^{a·Tr f(x)}` over the points of `domain` satisfying `system`.
    pub fn char_sum(
        &self,
        f: &LaurentPolynomial,
        system: &[LaurentPolynomial],
        domain: &Domain,
        field: &FieldSpec,
        m: u32,
        a: u64,
    ) -> Result<CharSumRecord> {
        let p = field.p;
        if a.is_multiple_of(p) {
            return Err(Error::invalid(format!("character index {a} is zero mod {p}")));
        }
        if let Domain::Projective(_) = domain {
            return Err(Error::invalid("character sums need an affine or toric domain"));
        }
        let compiled = Self::compile(system, domain, p)?;
        let cf = Compiled::new(f, domain, p)?;
        let record = |value| CharSumRecord {
            f: f.to_string(),
            domain: *domain,
            system: system.iter().map(|g| g.to_string()).collect(),
            m,
            a,
            value,
        };
        let key = self.key("charsum", field, domain, system, Some(f), a % p, m);
        if let Some(c) = &self.cache {
            if let Some(coeffs) = c.get(&key)?.and_then(|r| r.as_coeffs()) {
                return Ok(record(CyclotomicInteger::new(p, coeffs)?));
            }
        }
        self.check_budget(field, domain, m)?;
        let ext = Self::extension(field, m)?;
        let tally = Job {
            field: &ext,
            domain,
            system: &compiled,
            f: Some(&cf),
            chunk_size: self.options.chunk_size,
            budget: self.options.budget,
        }
        .run(&self.pool)?;
        let value = CyclotomicInteger::from_exponent_counts(p, &twisted_counts(&tally.buckets, a % p));
        if let Some(c) = &self.cache {
            c.put(CacheRecord::charsum(key, m, value.coeffs()))?;
        }
        Ok(record(value))
    }

    /// `N_1..N_M`.
    pub fn counts(
        &self,
        system: &[LaurentPolynomial],
        domain: &Domain,
        field: &FieldSpec,
        m_max: u32,
    ) -> Result<Vec<BigInt>> {
        (1..=m_max).map(|m| Ok(self.count_points(system, domain, field, m)?.count)).collect()
    }

    /// `S_1..S_M`.
    pub fn char_sums(
        &self,
        f: &LaurentPolynomial,
        system: &[LaurentPolynomial],
        domain: &Domain,
        field: &FieldSpec,
        m_max: u32,
        a: u64,
    ) -> Result<Vec<CyclotomicInteger>> {
        (1..=m_max).map(|m| Ok(self.char_sum(f, system, domain, field, m, a)?.value)).collect()
    }
}

/// [`Counter::count_points`] with default options and no cache.
pub fn count_points(
    system: &[LaurentPolynomial],
    domain: &Domain,
    field: &FieldSpec,
    m: u32,
) -> Result<CountRecord> {
    Counter::new(CountOptions::default())?.count_points(system, domain, field, m)
}

/// [`Counter::char_sum`] with default options and no cache.
pub fn char_sum(
    f: &LaurentPolynomial,
    system: &[LaurentPolynomial],
    domain: &Domain,
    field: &FieldSpec,
    m: u32,
    a: u64,
) -> Result<CharSumRecord> {
    Counter::new(CountOptions::default())?.char_sum(f, system, domain, field, m, a)
}
