//! Closed-form Betti-number and total-degree bounds as exact values.

mod coefficients;
mod toric;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::json;

use crate::exactmath::{binomial, rat_int, rat_to_f64, Rational};
use crate::{Error, Result};

pub use coefficients::{
    affine_ci_total, affine_expsum_total, c_coefficient, c_coefficient_closed, chern_integral_pn,
    m_coefficient, m_coefficient_equal, n_coefficient, u_coefficient,
};
pub use toric::{
    cayley_polytope, cayley_volume_claim, khovanskii_chi, polytope_bound, two_pow_upper,
    ultimate_as, PolytopeBoundKind,
};

/// Identifier of a scalar bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Order,
    Katz,
    KroneckerTotal,
    CiDegree,
    CiTotal,
    MLower,
    ProjectiveDegree,
    ProjOrder,
    LwAffine,
    LwAffineCoarse,
    LwProjective,
    LwAffineRefined,
    ExpsumSubvariety,
    ExpsumKronecker,
    ExpsumCiTotal,
    ExpsumCiLower,
    Euler,
    TorusFamily,
    ElementaryCi,
    ElementaryGeneral,
    OneExtra,
    CiKatzElementary,
    Complement,
    TameCurve,
}

impl BoundKind {
    pub const ALL: [BoundKind; 24] = [
        BoundKind::Order,
        BoundKind::Katz,
        BoundKind::KroneckerTotal,
        BoundKind::CiDegree,
        BoundKind::CiTotal,
        BoundKind::MLower,
        BoundKind::ProjectiveDegree,
        BoundKind::ProjOrder,
        BoundKind::LwAffine,
        BoundKind::LwAffineCoarse,
        BoundKind::LwProjective,
        BoundKind::LwAffineRefined,
        BoundKind::ExpsumSubvariety,
        BoundKind::ExpsumKronecker,
        BoundKind::ExpsumCiTotal,
        BoundKind::ExpsumCiLower,
        BoundKind::Euler,
        BoundKind::TorusFamily,
        BoundKind::ElementaryCi,
        BoundKind::ElementaryGeneral,
        BoundKind::OneExtra,
        BoundKind::CiKatzElementary,
        BoundKind::Complement,
        BoundKind::TameCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Order => "order",
            BoundKind::Katz => "katz",
            BoundKind::KroneckerTotal => "kronecker_total",
            BoundKind::CiDegree => "ci_degree",
            BoundKind::CiTotal => "ci_total",
            BoundKind::MLower => "m_lower",
            BoundKind::ProjectiveDegree => "projective_degree",
            BoundKind::ProjOrder => "proj_order",
            BoundKind::LwAffine => "lw_affine",
            BoundKind::LwAffineCoarse => "lw_affine_coarse",
            BoundKind::LwProjective => "lw_projective",
            BoundKind::LwAffineRefined => "lw_affine_refined",
            BoundKind::ExpsumSubvariety => "expsum_subvariety",
            BoundKind::ExpsumKronecker => "expsum_kronecker",
            BoundKind::ExpsumCiTotal => "expsum_ci_total",
            BoundKind::ExpsumCiLower => "expsum_ci_lower",
            BoundKind::Euler => "euler",
            BoundKind::TorusFamily => "torus_family",
            BoundKind::ElementaryCi => "elementary_ci",
            BoundKind::ElementaryGeneral => "elementary_general",
            BoundKind::OneExtra => "one_extra",
            BoundKind::CiKatzElementary => "ci_katz_elementary",
            BoundKind::Complement => "complement",
            BoundKind::TameCurve => "tame_curve",
        }
    }

    /// Whether the value carries powers of `q`.
    pub fn needs_q(self) -> bool {
        matches!(
            self,
            BoundKind::LwAffine
                | BoundKind::LwAffineCoarse
                | BoundKind::LwProjective
                | BoundKind::LwAffineRefined
                | BoundKind::TameCurve
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown bound kind '{s}'")))
    }
}

/// Inputs to [`scalar_bound`]. Which fields are required depends on the kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Individual degrees; overrides `r` and `d` where a kind accepts them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ds: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    /// Dimension of the singular locus, `-1` when nonsingular.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i32>,
}

impl BoundParams {
    pub fn nrd(n: u32, r: u32, d: u32) -> Self {
        BoundParams { n: Some(n), r: Some(r), d: Some(d), ..Default::default() }
    }

    fn get(v: Option<u32>, name: &str, kind: BoundKind) -> Result<u32> {
        v.ok_or_else(|| Error::invalid(format!("bound '{kind}' needs parameter {name}")))
    }

    fn degrees(&self, kind: BoundKind) -> Result<Vec<u32>> {
        match &self.ds {
            Some(ds) => Ok(ds.clone()),
            None => {
                let r = Self::get(self.r, "r", kind)?;
                let d = Self::get(self.d, "d", kind)?;
                Ok(vec![d; r as usize])
            }
        }
    }
}

/// `coeff · q^(half_exponent / 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTerm {
    pub coeff: Rational,
    pub half_exponent: i64,
}

/// Exact value of a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundAmount {
    Exact(Rational),
    /// A sum of terms in `√q`, kept symbolic so comparisons stay exact.
    QPowers { q: u64, terms: Vec<QTerm> },
    /// Certified rational upper enclosure of an irrational value.
    UpperReal(Rational),
}

impl BoundAmount {
    /// The amount as `A + B·√q` with rational `A` and `B`.
    fn split(q: u64, terms: &[QTerm]) -> (Rational, Rational) {
        let qr = rat_int(q as i64);
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for t in terms {
            let whole = t.half_exponent.div_euclid(2);
            let v = &t.coeff * crate::exactmath::rat_pow(&qr, whole);
            if t.half_exponent.rem_euclid(2) == 0 {
                a += v;
            } else {
                b += v;
            }
        }
        (a, b)
    }

    /// Whether `x <= self`, decided exactly.
    pub fn admits(&self, x: &Rational) -> bool {
        match self {
            BoundAmount::Exact(v) | BoundAmount::UpperReal(v) => x <= v,
            BoundAmount::QPowers { q, terms } => {
                let (a, b) = Self::split(*q, terms);
                let y = x - a;
                let rhs_sq = &b * &b * rat_int(*q as i64);
                if !b.is_negative() {
                    !y.is_positive() || &y * &y <= rhs_sq
                } else {
                    !y.is_positive() && &y * &y >= rhs_sq
                }
            }
        }
    }

    /// Whether `x` equals the amount exactly.
    pub fn equals(&self, x: &Rational) -> bool {
        match self {
            BoundAmount::Exact(v) | BoundAmount::UpperReal(v) => x == v,
            BoundAmount::QPowers { q, terms } => {
                let (a, b) = Self::split(*q, terms);
                let y = x - a;
                if b.is_zero() {
                    y.is_zero()
                } else {
                    y.signum() == b.signum() && &y * &y == &b * &b * rat_int(*q as i64)
                }
            }
        }
    }

    /// Whether `x < self`, decided exactly.
    pub fn strictly_exceeds(&self, x: &Rational) -> bool {
        self.admits(x) && !self.equals(x)
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            BoundAmount::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            BoundAmount::Exact(v) | BoundAmount::UpperReal(v) => rat_to_f64(v),
            BoundAmount::QPowers { q, terms } => {
                let (a, b) = Self::split(*q, terms);
                rat_to_f64(&a) + rat_to_f64(&b) * (*q as f64).sqrt()
            }
        }
    }
}

impl fmt::Display for BoundAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundAmount::Exact(v) => write!(f, "{v}"),
            BoundAmount::UpperReal(v) => write!(f, "<= {v} (~{:.6e})", rat_to_f64(v)),
            BoundAmount::QPowers { q, terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| {
                        let e = Rational::new(t.half_exponent.into(), 2.into());
                        format!("{}*q^({e})", t.coeff)
                    })
                    .collect();
                write!(f, "{} at q = {q} (~{:.6})", parts.join(" + "), self.approx())
            }
        }
    }
}

impl Serialize for BoundAmount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = match self {
            BoundAmount::Exact(v) => json!({ "exact": v.to_string() }),
            BoundAmount::UpperReal(v) => json!({ "upper": v.to_string() }),
            BoundAmount::QPowers { q, terms } => json!({
                "q": q,
                "terms": terms
                    .iter()
                    .map(|t| json!({
                        "coeff": t.coeff.to_string(),
                        "q_exponent": Rational::new(t.half_exponent.into(), 2.into()).to_string(),
                    }))
                    .collect::<Vec<_>>(),
            }),
        };
        v.serialize(s)
    }
}

/// A bound together with what produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub kind: String,
    pub amount: BoundAmount,
    pub params: BoundParams,
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.kind, self.amount)
    }
}

fn b(n: i64, k: i64) -> BigInt {
    crate::exactmath::binomial_i(n, k)
}

fn pw(base: i64, e: u32) -> BigInt {
    BigInt::from(base).pow(e)
}

fn q_term(coeff: BigInt, half_exponent: i64) -> QTerm {
    QTerm { coeff: Rational::from_integer(coeff), half_exponent }
}

/// Evaluates a scalar bound.
pub fn scalar_bound(kind: BoundKind, params: &BoundParams) -> Result<BoundValue> {
    use BoundKind as K;
    let get = |v: Option<u32>, name: &str| BoundParams::get(v, name, kind);
    let q = || {
        params
            .q
            .filter(|&q| q >= 2)
            .ok_or_else(|| Error::invalid(format!("bound '{kind}' needs q >= 2")))
    };
    let need_r_le_n = |r: u32, n: u32| -> Result<()> {
        if r == 0 || r > n {
            Err(Error::invalid(format!("bound '{kind}' needs 1 <= r <= n")))
        } else {
            Ok(())
        }
    };
    let exact = |v: BigInt| BoundAmount::Exact(Rational::from_integer(v));

    let amount = match kind {
        K::Order | K::ProjOrder => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            let base = if kind == K::Order { 2 * d + 1 } else { 2 * d + 2 };
            exact(pw(3, r) * b((n + r - 1) as i64, r as i64 - 1) * pw(base as i64, n))
        }
        K::Katz => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            exact(pw(2, r) * 6 * pw((r * d + 3) as i64, n + 1))
        }
        K::KroneckerTotal => {
            let (n, d) = (get(params.n, "n")?, get(params.d, "d")?);
            exact(pw(3, n + 1) * b(2 * n as i64, n as i64) * pw((2 * d + 1) as i64, n))
        }
        K::CiDegree => {
            let n = get(params.n, "n")?;
            let j = params.j.unwrap_or(0);
            let ds = params.degrees(kind)?;
            if j > n || ds.len() as u32 > n - j {
                return Err(Error::invalid("ci_degree needs r <= n - j"));
            }
            exact(m_coefficient(n - j, &ds)?)
        }
        K::CiTotal | K::MLower => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            need_r_le_n(r, n)?;
            let base = if kind == K::CiTotal { d as i64 + 1 } else { d as i64 - 1 };
            exact(b(n as i64 - 1, r as i64 - 1) * pw(base, n))
        }
        K::ProjectiveDegree => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            let j = params.j.unwrap_or(0);
            if r == 0 || j > n || r > n - j {
                return Err(Error::invalid("projective_degree needs 1 <= r <= n - j"));
            }
            let sum: BigInt = (r..=n - j).map(|k| pw(d as i64, k)).sum();
            exact(b((n - 1 - j) as i64, r as i64 - 1) * sum)
        }
        K::LwAffine => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            need_r_le_n(r, n)?;
            let terms = (0..n - r)
                .map(|j| {
                    let c = b((n - j - 1) as i64, r as i64 - 1) * pw(d as i64, n - j);
                    q_term(c, (n - r + j) as i64)
                })
                .collect();
            BoundAmount::QPowers { q: q()?, terms }
        }
        K::LwAffineCoarse => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            need_r_le_n(r, n)?;
            let c = b(n as i64 - 1, r as i64 - 1) * pw(d as i64 + 1, n);
            BoundAmount::QPowers { q: q()?, terms: vec![q_term(c, 2 * (n - r) as i64 - 1)] }
        }
        K::LwProjective | K::LwAffineRefined => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            need_r_le_n(r, n)?;
            let eps = params
                .epsilon
                .ok_or_else(|| Error::invalid(format!("bound '{kind}' needs epsilon")))?;
            if eps < -1 {
                return Err(Error::invalid("epsilon must be >= -1"));
            }
            let base = if kind == K::LwProjective { d as i64 + 2 } else { d as i64 + 1 };
            let c = b(n as i64 - 1, r as i64 - 1) * pw(base, n);
            let h = (n - r) as i64 + eps as i64 + 1;
            BoundAmount::QPowers { q: q()?, terms: vec![q_term(c, h)] }
        }
        K::ExpsumSubvariety => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            exact(pw(3, r) * b((n + r) as i64, r as i64) * pw((2 * d + 1) as i64, n))
        }
        K::ExpsumKronecker => {
            let (n, d) = (get(params.n, "n")?, get(params.d, "d")?);
            exact(pw(3, n + 1) * b(2 * n as i64 + 1, n as i64 + 1) * pw((2 * d + 1) as i64, n))
        }
        K::ExpsumCiTotal | K::ExpsumCiLower => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            if r > n {
                return Err(Error::invalid(format!("bound '{kind}' needs r <= n")));
            }
            let base = if kind == K::ExpsumCiTotal { d as i64 + 1 } else { d as i64 - 1 };
            exact(b(n as i64, r as i64) * pw(base, n))
        }
        K::Euler | K::ElementaryCi => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            if r == 0 {
                return Err(Error::invalid(format!("bound '{kind}' needs r >= 1")));
            }
            let base = if kind == K::Euler { d as i64 + 1 } else { d as i64 + 2 };
            exact(pw(2, r) * b((n + r - 1) as i64, r as i64 - 1) * pw(base, n))
        }
        K::TorusFamily => {
            let (n, r, d) = (get(params.n, "n")?, get(params.r, "r")?, get(params.d, "d")?);
            if r == 0 {
                return Err(Error::invalid("torus_family needs r >= 1"));
            }
            exact(pw(2, n + r) * b((n + r - 1) as i64, r as i64 - 1) * pw(d as i64, n))
        }
        K::OneExtra => {
            let (n, s, e) = (get(params.n, "n")?, get(params.s, "s")?, get(params.e, "e")?);
            exact(3 * pw(2, s + 1) * b((n + s) as i64, s as i64) * pw(e as i64 + 2, n))
        }
        K::Complement | K::ElementaryGeneral | K::CiKatzElementary => {
            let (n, r, s, d) =
                (get(params.n, "n")?, get(params.r, "r")?, get(params.s, "s")?, get(params.d, "d")?);
            if r < s + 1 {
                return Err(Error::invalid(format!("bound '{kind}' needs r >= s + 1")));
            }
            let tail = pw(((r - s) * d + 2) as i64, n) * b((n + s) as i64, s as i64);
            match kind {
                K::Complement => exact(3 * pw(2, r + 1) * tail),
                K::ElementaryGeneral => exact(7 * pw(2, r) * tail),
                _ => {
                    if s == 0 {
                        return Err(Error::invalid("ci_katz_elementary needs s >= 1"));
                    }
                    let ci = pw(2, s) * b((n + s - 1) as i64, s as i64 - 1) * pw(d as i64 + 2, n);
                    exact(ci + 3 * pw(2, r + 1) * tail)
                }
            }
        }
        K::TameCurve => {
            let (n, d) = (get(params.n, "n")?, get(params.d, "d")?);
            let c = BigInt::from(n) * pw(d as i64, n);
            BoundAmount::QPowers { q: q()?, terms: vec![q_term(c, 1)] }
        }
    };
    Ok(BoundValue { kind: kind.name().to_string(), amount, params: params.clone() })
}

/// Binomial identity used by the toric bound: `Σ_{j=1}^{i} C(i-1, i-j) = 2^(i-1)`.
pub fn toric_coefficient(i: u32) -> BigInt {
    (1..=i as u64).map(|j| binomial(i as u64 - 1, i as u64 - j)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn val(kind: BoundKind, p: BoundParams) -> Rational {
        scalar_bound(kind, &p).unwrap().amount.exact().unwrap().clone()
    }

    #[test]
    fn examples() {
        let p = BoundParams::nrd(3, 2, 4);
        assert_eq!(val(BoundKind::Order, p.clone()), rat(26244, 1));
        assert_eq!(val(BoundKind::Katz, p.clone()), rat(351384, 1));
        assert_eq!(val(BoundKind::CiTotal, p.clone()), rat(250, 1));
        assert_eq!(val(BoundKind::ExpsumCiLower, p.clone()), rat(81, 1));
        assert_eq!(val(BoundKind::ExpsumCiTotal, p), rat(375, 1));
    }

    #[test]
    fn kinds_round_trip_through_names() {
        for k in BoundKind::ALL {
            assert_eq!(k.name().parse::<BoundKind>().unwrap(), k);
            assert_eq!(serde_json::to_value(k).unwrap(), serde_json::Value::String(k.name().into()));
        }
        assert!("nope".parse::<BoundKind>().is_err());
    }

    #[test]
    fn sqrt_q_comparisons() {
        // 9 * q^(1/2) at q = 2 is about 12.73
        let a = BoundAmount::QPowers { q: 2, terms: vec![q_term(BigInt::from(9), 1)] };
        assert!(a.admits(&rat(12, 1)));
        assert!(!a.admits(&rat(13, 1)));
        assert!(a.admits(&rat(-100, 1)));
        // 4 - q^(1/2) at q = 4 is exactly 2
        let c = BoundAmount::QPowers {
            q: 4,
            terms: vec![q_term(BigInt::from(4), 0), q_term(BigInt::from(-1), 1)],
        };
        assert!(c.admits(&rat(2, 1)));
        assert!(!c.admits(&rat(21, 10)));
        assert!(!c.strictly_exceeds(&rat(2, 1)));
        assert!(c.strictly_exceeds(&rat(19, 10)));
    }

    #[test]
    fn missing_parameters_are_reported() {
        let e = scalar_bound(BoundKind::Order, &BoundParams::default()).unwrap_err();
        assert!(e.to_string().contains("needs parameter n"));
        let e = scalar_bound(BoundKind::CiTotal, &BoundParams::nrd(2, 3, 2)).unwrap_err();
        assert!(matches!(e, Error::InvalidInput(_)));
        assert!(scalar_bound(BoundKind::LwAffine, &BoundParams::nrd(2, 1, 3)).is_err());
    }

    #[test]
    fn lw_affine_curve() {
        let p = BoundParams { q: Some(2), ..BoundParams::nrd(2, 1, 3) };
        let v = scalar_bound(BoundKind::LwAffine, &p).unwrap();
        assert_eq!(
            v.amount,
            BoundAmount::QPowers { q: 2, terms: vec![q_term(BigInt::from(9), 1)] }
        );
        let c = scalar_bound(BoundKind::LwAffineCoarse, &p).unwrap();
        assert_eq!(
            c.amount,
            BoundAmount::QPowers { q: 2, terms: vec![q_term(BigInt::from(16), 1)] }
        );
    }

    #[test]
    fn toric_coefficients_are_powers_of_two() {
        for i in 1..=20 {
            assert_eq!(toric_coefficient(i), BigInt::from(2).pow(i - 1));
        }
    }
}
