//! Scenario harness: counts points and character sums, reconstructs zeta and
//! L-functions, and compares what it finds with the closed-form bounds.
//!
//! Every comparison is exact. A `FAIL` means the implementation disagrees
//! with a proved inequality or identity, so it points at a bug here rather
//! than at the mathematics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::bounds::{affine_expsum_total, scalar_bound, BoundKind, BoundParams};
use crate::exactmath::{CyclotomicInteger, Rational, RationalFunction, DEFAULT_WINDOW};
use crate::ffcount::{l_function, l_newton_polygon, make_field, zeta_function, Counter, Domain, FieldSpec};
use crate::polygon::{an_hodge_polygon, dominates, ConvexPolygon};
use crate::polytope::LaurentPolynomial;
use crate::{Error, Result};

const FAIL_NOTE: &str =
    "a FAIL contradicts a proved statement and indicates an implementation bug, not a counterexample";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u64,
    #[serde(default = "one")]
    pub k: u32,
}

fn one() -> u32 {
    1
}

/// Parameters that select and feed the bounds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
}

/// Hypotheses the harness cannot check; they are echoed into every report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumptions {
    #[serde(default)]
    pub complete_intersection: bool,
    #[serde(default)]
    pub geometrically_irreducible: bool,
}

/// A one-parameter family `f_t = f + t·direction`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Family {
    #[serde(serialize_with = "ser_poly")]
    pub direction: LaurentPolynomial,
    /// Parameters taken as generic; empty means every `t` in `F_p` that is
    /// not special.
    pub generic: Vec<u64>,
    pub special: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    TotalDegree,
    Cayley,
    LangWeil,
    NpDominance,
    FamilyNp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub field: FieldParams,
    pub domain: Domain,
    #[serde(serialize_with = "ser_polys")]
    pub system: Vec<LaurentPolynomial>,
    #[serde(serialize_with = "ser_opt_poly", skip_serializing_if = "Option::is_none")]
    pub f: Option<LaurentPolynomial>,
    pub params: ScenarioParams,
    pub assumptions: Assumptions,
    pub m_max: u32,
    pub checks: Vec<CheckKind>,
    /// Character index `a` in `ψ(x) = ζ_p^{a x}`.
    pub character: u64,
    pub window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, p: u64, k: u32, domain: Domain) -> Self {
        Scenario {
            name: name.into(),
            field: FieldParams { p, k },
            domain,
            system: Vec::new(),
            f: None,
            params: ScenarioParams::default(),
            assumptions: Assumptions::default(),
            m_max: 6,
            checks: Vec::new(),
            character: 1,
            window: DEFAULT_WINDOW,
            family: None,
        }
    }

    fn field_spec(&self) -> Result<FieldSpec> {
        make_field(self.field.p, self.field.k)
    }

    fn q(&self) -> u64 {
        self.field.p.pow(self.field.k)
    }

    fn n(&self) -> u32 {
        self.domain.dim() as u32
    }

    /// Number of equations, honouring a declared `r` (which may exceed it).
    fn r(&self) -> Result<u32> {
        let actual = self.system.len() as u32;
        match self.params.r {
            Some(r) if r < actual => {
                Err(Error::invalid(format!("declared r = {r} but the system has {actual} equations")))
            }
            Some(r) => Ok(r),
            None => Ok(actual),
        }
    }

    /// Declared or computed degree bound for the system and `f`.
    fn d(&self) -> Result<u32> {
        let computed = self
            .system
            .iter()
            .chain(self.f.iter())
            .map(|g| g.total_degree().max(0) as u32)
            .max()
            .unwrap_or(0);
        match self.params.d {
            Some(d) if d < computed && self.domain_is_polynomial() => Err(Error::invalid(format!(
                "declared d = {d} is below the degree {computed} of the input"
            ))),
            Some(d) => Ok(d),
            None => Ok(computed),
        }
    }

    fn domain_is_polynomial(&self) -> bool {
        !matches!(self.domain, Domain::Toric(_))
    }

    fn summary(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("scenario serializes");
        v["note"] = Value::String(FAIL_NOTE.into());
        v
    }
}

fn ser_poly<S: Serializer>(p: &LaurentPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn ser_polys<S: Serializer>(ps: &[LaurentPolynomial], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.to_string()))
}

fn ser_opt_poly<S: Serializer>(p: &Option<LaurentPolynomial>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.collect_str(p),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkipReason {
    MixedLFunction,
    Budget,
    UnstableReconstruction,
    PreconditionDqNotCoprime,
    UnverifiedHypothesis,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::MixedLFunction => "mixed L-function",
            SkipReason::Budget => "budget",
            SkipReason::UnstableReconstruction => "unstable reconstruction",
            SkipReason::PreconditionDqNotCoprime => "(d,q) != 1",
            SkipReason::UnverifiedHypothesis => "unverified hypothesis",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Skip(SkipReason),
    Unstable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail => f.write_str("FAIL"),
            Verdict::Skip(r) => write!(f, "SKIP({r})"),
            Verdict::Unstable => f.write_str("UNSTABLE"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub lhs: String,
    pub rhs: String,
    pub artifacts: Value,
}

impl CheckResult {
    fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        CheckResult { name: name.into(), verdict, lhs: String::new(), rhs: String::new(), artifacts: Value::Null }
    }

    fn sides(mut self, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    fn with(mut self, artifacts: Value) -> Self {
        self.artifacts = artifacts;
        self
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { Verdict::Pass } else { Verdict::Fail })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: Value,
    pub checks: Vec<CheckResult>,
}

impl Report {
    fn for_scenario(sc: &Scenario) -> Self {
        Report { scenario: sc.summary(), checks: Vec::new() }
    }

    pub fn has_fail(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn has_unstable(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Unstable)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Human-readable table, one line per check.
    pub fn to_table(&self) -> String {
        let name_w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let verdict_w = self.checks.iter().map(|c| c.verdict.to_string().len()).max().unwrap_or(7).max(7);
        let mut out = format!(
            "scenario: {}\n{:<name_w$}  {:<verdict_w$}  lhs  |  rhs\n",
            self.scenario.get("name").and_then(Value::as_str).unwrap_or(""),
            "check",
            "verdict"
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{:<name_w$}  {:<verdict_w$}  {}  |  {}\n",
                c.name,
                c.verdict.to_string(),
                c.lhs,
                c.rhs
            ));
        }
        if self.has_fail() {
            out.push_str(&format!("note: {FAIL_NOTE}\n"));
        }
        out
    }
}

/// Turns a budget refusal into a skipped check; other errors propagate.
fn budget_skip<T>(res: Result<T>, name: &str) -> Result<std::result::Result<T, CheckResult>> {
    match res {
        Ok(v) => Ok(Ok(v)),
        Err(Error::BudgetExceeded { required, budget }) => Ok(Err(CheckResult::new(
            name,
            Verdict::Skip(SkipReason::Budget),
        )
        .with(json!({ "required": required.to_string(), "budget": budget.to_string() })))),
        Err(e) => Err(e),
    }
}

fn strings<T: fmt::Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

fn rational_function_json<C: crate::exactmath::Coeff + fmt::Display>(f: &RationalFunction<C>) -> Value {
    json!({
        "numerator": strings(f.numerator().coeffs()),
        "denominator": strings(f.denominator().coeffs()),
        "total_degree": f.total_degree(),
    })
}

/// A model of the scenario's variety (and `f`) inside affine space: toric
/// inputs gain a variable `y` with the equation `x1···xn·y = 1`, and Laurent
/// monomials are rewritten through `y`. Returns `(n, r, d)` of that model.
fn affine_model(sc: &Scenario) -> Result<(u32, u32, u32)> {
    let n = sc.n();
    let r = sc.r()?;
    if let Domain::Toric(_) = sc.domain {
        let deg = |g: &LaurentPolynomial| -> i64 {
            g.terms()
                .keys()
                .map(|e| {
                    let k = e.iter().map(|&x| (-x).max(0)).max().unwrap_or(0);
                    e.iter().map(|&x| x + k).sum::<i64>() + k
                })
                .max()
                .unwrap_or(0)
        };
        // equations are first multiplied by a monomial to clear denominators
        let clear = |g: &LaurentPolynomial| -> i64 {
            let nv = g.nvars();
            let mins: Vec<i64> =
                (0..nv).map(|i| g.terms().keys().map(|e| e[i]).min().unwrap_or(0).min(0)).collect();
            g.terms().keys().map(|e| e.iter().zip(&mins).map(|(x, m)| x - m).sum::<i64>()).max().unwrap_or(0)
        };
        let d = sc
            .system
            .iter()
            .map(clear)
            .chain(sc.f.iter().map(deg))
            .chain(std::iter::once(n as i64 + 1))
            .max()
            .unwrap_or(0);
        let d = d.max(sc.params.d.unwrap_or(0) as i64);
        return Ok((n + 1, r + 1, d as u32));
    }
    Ok((n, r, sc.d()?))
}

fn bound_check(
    label: &str,
    kind: BoundKind,
    params: &BoundParams,
    value: &BigInt,
) -> Result<CheckResult> {
    let bound = scalar_bound(kind, params)?;
    let ok = bound.amount.admits(&Rational::from_integer(value.clone()));
    Ok(CheckResult::holds(format!("{label}<={}", kind.name()), ok)
        .sides(value, &bound.amount)
        .with(json!({ "bound": bound })))
}

/// Total degree of the zeta function (no `f`) or the L-function of `f`,
/// against every bound that applies to the scenario's `(n, r, d)`.
pub fn verify_total_degree(sc: &Scenario, ctr: &Counter) -> Result<Report> {
    let mut report = Report::for_scenario(sc);
    let field = sc.field_spec()?;
    let (n, r, d) = affine_model(sc)?;
    let td: BigInt;
    match &sc.f {
        None => {
            let counts = match budget_skip(ctr.counts(&sc.system, &sc.domain, &field, sc.m_max), "total_degree")? {
                Ok(c) => c,
                Err(skip) => {
                    report.checks.push(skip);
                    return Ok(report);
                }
            };
            let z = zeta_function(&counts, sc.window)?;
            let Some(zf) = z.function() else {
                report.checks.push(unstable_check(&z.reconstruction, &strings(&counts)));
                return Ok(report);
            };
            td = BigInt::from(zf.total_degree());
            report.checks.push(
                CheckResult::new("reconstruction", Verdict::Pass)
                    .sides(zf, "stable")
                    .with(json!({ "counts": strings(&counts), "zeta": rational_function_json(zf) })),
            );
            // the zero polynomial cuts out affine space, so r = 0 is read as r = 1
            let r_eff = r.max(1);
            let d_eff = d.max(1);
            let params = BoundParams::nrd(n, r_eff, d_eff);
            if let Domain::Projective(_) = sc.domain {
                report.checks.push(bound_check("total_degree", BoundKind::ProjOrder, &params, &td)?);
            } else {
                for kind in [BoundKind::Order, BoundKind::Katz, BoundKind::KroneckerTotal] {
                    report.checks.push(bound_check("total_degree", kind, &params, &td)?);
                }
                report.checks.push(ci_check("total_degree", BoundKind::CiTotal, sc, &params, &td, r_eff <= n)?);
            }
        }
        Some(f) => {
            let sums = match budget_skip(
                ctr.char_sums(f, &sc.system, &sc.domain, &field, sc.m_max, sc.character),
                "total_degree",
            )? {
                Ok(s) => s,
                Err(skip) => {
                    report.checks.push(skip);
                    return Ok(report);
                }
            };
            let l = l_function(&sums, sc.window)?;
            let Some(lf) = l.function() else {
                report.checks.push(unstable_check(&l.reconstruction, &strings(&sums)));
                return Ok(report);
            };
            td = BigInt::from(lf.total_degree());
            report.checks.push(
                CheckResult::new("reconstruction", Verdict::Pass)
                    .sides(lf, "stable")
                    .with(json!({ "sums": strings(&sums), "l_function": rational_function_json(lf) })),
            );
            let d_eff = d.max(1);
            if r > 0 {
                let params = BoundParams::nrd(n, r, d_eff);
                report.checks.push(bound_check("total_degree", BoundKind::ExpsumSubvariety, &params, &td)?);
                report.checks.push(ci_check("total_degree", BoundKind::ExpsumCiTotal, sc, &params, &td, r <= n)?);
            } else {
                let params = BoundParams::nrd(n, 0, d_eff);
                report.checks.push(bound_check("total_degree", BoundKind::ExpsumCiTotal, &params, &td)?);
                report.checks.push(affine_total_check(sc, n, d, &td));
            }
        }
    }
    Ok(report)
}

fn unstable_check<C: fmt::Debug>(rec: &crate::exactmath::Reconstruction<C>, seq: &[String]) -> CheckResult {
    let complexity = match rec {
        crate::exactmath::Reconstruction::Unstable { linear_complexity, .. } => *linear_complexity,
        crate::exactmath::Reconstruction::Stable(_) => 0,
    };
    CheckResult::new("reconstruction", Verdict::Unstable)
        .sides(format!("{} terms", seq.len() + 1), format!("linear complexity {complexity}"))
        .with(json!({ "sequence": seq }))
}

fn ci_check(
    label: &str,
    kind: BoundKind,
    sc: &Scenario,
    params: &BoundParams,
    td: &BigInt,
    applicable: bool,
) -> Result<CheckResult> {
    let name = format!("{label}<={}", kind.name());
    if !sc.assumptions.complete_intersection || !applicable {
        return Ok(CheckResult::new(name, Verdict::Skip(SkipReason::UnverifiedHypothesis))
            .with(json!({ "needs": "complete_intersection with r <= n" })));
    }
    bound_check(label, kind, params, td)
}

/// `(d-1)^n + ... + 1` for a polynomial on affine space, valid when `p ∤ d`.
fn affine_total_check(sc: &Scenario, n: u32, d: u32, td: &BigInt) -> CheckResult {
    let name = "total_degree<=affine_expsum_total";
    if !matches!(sc.domain, Domain::Affine(_)) {
        return CheckResult::new(name, Verdict::Skip(SkipReason::UnverifiedHypothesis))
            .with(json!({ "needs": "affine domain" }));
    }
    if d < 2 || (d as u64).is_multiple_of(sc.field.p) {
        return CheckResult::new(name, Verdict::Skip(SkipReason::PreconditionDqNotCoprime))
            .with(json!({ "d": d, "p": sc.field.p }));
    }
    let bound = affine_expsum_total(n, d);
    CheckResult::holds(name, td <= &bound).sides(td, &bound)
}

/// The Cayley identity `S_m(g) = q^{rm}·N_m(V)` for
/// `g = Σ x_{n+i} f_i` on `A^{n+r}`, for `m = 1..=m_max`.
pub fn verify_cayley(
    fs: &[LaurentPolynomial],
    n: usize,
    field: &FieldSpec,
    m_max: u32,
    ctr: &Counter,
) -> Result<Vec<CheckResult>> {
    let r = fs.len();
    let total = n + r;
    let mut g = LaurentPolynomial::zero(total);
    for (i, f) in fs.iter().enumerate() {
        if !f.is_polynomial() {
            return Err(Error::invalid("Cayley identity needs polynomial equations"));
        }
        g = g + LaurentPolynomial::variable(total, n + i) * f.with_nvars(total)?;
    }
    let mut out = Vec::new();
    for m in 1..=m_max {
        let name = format!("cayley[m={m}]");
        let s = match budget_skip(ctr.char_sum(&g, &[], &Domain::Affine(total), field, m, 1), &name)? {
            Ok(s) => s.value,
            Err(skip) => {
                out.push(skip);
                continue;
            }
        };
        let count = match budget_skip(ctr.count_points(fs, &Domain::Affine(n), field, m), &name)? {
            Ok(c) => c.count,
            Err(skip) => {
                out.push(skip);
                continue;
            }
        };
        let qrm = BigInt::from(field.q()).pow(r as u32 * m);
        let rhs = CyclotomicInteger::from_int(field.p, &qrm * &count);
        out.push(
            CheckResult::holds(name, s == rhs)
                .sides(&s, &rhs)
                .with(json!({ "g": g.to_string(), "count": count.to_string() })),
        );
    }
    Ok(out)
}

/// Deviation of `N_m` from its main term against the Lang–Weil type bounds.
pub fn verify_lang_weil(sc: &Scenario, ctr: &Counter) -> Result<Report> {
    let mut report = Report::for_scenario(sc);
    let n = sc.n();
    let r = sc.r()?;
    let d = sc.d()?.max(1);
    let kinds: Vec<BoundKind> = match sc.domain {
        Domain::Affine(_) => {
            let mut k = vec![BoundKind::LwAffine, BoundKind::LwAffineCoarse];
            if sc.params.epsilon.is_some() {
                k.push(BoundKind::LwAffineRefined);
            }
            k
        }
        Domain::Projective(_) => vec![BoundKind::LwProjective],
        Domain::Toric(_) => return Err(Error::invalid("Lang-Weil checks need an affine or projective domain")),
    };
    if !sc.assumptions.geometrically_irreducible || r == 0 || r > n {
        for kind in kinds {
            report.checks.push(
                CheckResult::new(format!("lang_weil<={}", kind.name()), Verdict::Skip(SkipReason::UnverifiedHypothesis))
                    .with(json!({ "needs": "geometrically_irreducible with 1 <= r <= n" })),
            );
        }
        return Ok(report);
    }
    let field = sc.field_spec()?;
    for m in 1..=sc.m_max {
        let label = format!("lang_weil[m={m}]");
        let count = match budget_skip(ctr.count_points(&sc.system, &sc.domain, &field, m), &label)? {
            Ok(c) => c.count,
            Err(skip) => {
                report.checks.push(skip);
                continue;
            }
        };
        let qm = sc
            .q()
            .checked_pow(m)
            .ok_or_else(|| Error::invalid("q^m exceeds 2^64"))?;
        let main: BigInt = match sc.domain {
            Domain::Projective(_) => (0..=n - r).map(|j| BigInt::from(qm).pow(j)).sum(),
            _ => BigInt::from(qm).pow(n - r),
        };
        let deviation = (&count - &main).abs();
        for &kind in &kinds {
            let params = BoundParams {
                n: Some(n),
                r: Some(r),
                d: Some(d),
                q: Some(qm),
                epsilon: sc.params.epsilon,
                ..Default::default()
            };
            let mut check = bound_check(&label, kind, &params, &deviation)?;
            check.artifacts["count"] = Value::String(count.to_string());
            check.artifacts["main_term"] = Value::String(main.to_string());
            report.checks.push(check);
        }
    }
    Ok(report)
}

/// What the Newton-polygon check learned about one `f`.
enum NpOutcome {
    Polygon { np: ConvexPolygon, j: u32, side: &'static str, l: Value },
    Done(CheckResult),
}

fn np_of(sc: &Scenario, f: &LaurentPolynomial, name: &str, ctr: &Counter) -> Result<NpOutcome> {
    if !matches!(sc.domain, Domain::Affine(_)) || !sc.system.is_empty() {
        return Err(Error::invalid("Newton polygon checks need f on affine space with no equations"));
    }
    let n = sc.n();
    let d = match sc.params.d {
        Some(d) => d.max(f.total_degree().max(0) as u32),
        None => f.total_degree().max(0) as u32,
    };
    if d < 2 || (d as u64).is_multiple_of(sc.field.p) {
        return Ok(NpOutcome::Done(
            CheckResult::new(name, Verdict::Skip(SkipReason::PreconditionDqNotCoprime))
                .with(json!({ "d": d, "p": sc.field.p })),
        ));
    }
    let field = sc.field_spec()?;
    let sums = match budget_skip(ctr.char_sums(f, &[], &sc.domain, &field, sc.m_max, sc.character), name)? {
        Ok(s) => s,
        Err(skip) => return Ok(NpOutcome::Done(skip)),
    };
    let l = l_function(&sums, sc.window)?;
    let Some(lf) = l.function() else {
        return Ok(NpOutcome::Done(
            CheckResult::new(name, Verdict::Skip(SkipReason::UnstableReconstruction))
                .with(json!({ "sums": strings(&sums) })),
        ));
    };
    let lj = rational_function_json(lf);
    let (num, den) = l_newton_polygon(lf, sc.q())?;
    let (np, odd_degree) = match (lf.numerator_degree(), lf.denominator_degree()) {
        (_, 0) => (num, true),
        (0, _) => (den, false),
        _ => {
            return Ok(NpOutcome::Done(
                CheckResult::new(name, Verdict::Skip(SkipReason::MixedLFunction)).with(json!({ "l_function": lj })),
            ))
        }
    };
    // numerator factors come from odd cohomological degree n + j
    let j = match sc.params.j {
        Some(j) => j,
        None => u32::from((n % 2 == 1) != odd_degree),
    };
    let side = if odd_degree { "numerator" } else { "denominator" };
    Ok(NpOutcome::Polygon { np, j, side, l: lj })
}

fn np_degree(sc: &Scenario, f: &LaurentPolynomial) -> u32 {
    sc.params.d.unwrap_or(0).max(f.total_degree().max(0) as u32)
}

/// Newton polygon of the L-function of `f` on affine space against the
/// explicit Hodge-type polygon.
pub fn verify_np_dominance(sc: &Scenario, ctr: &Counter) -> Result<Report> {
    let mut report = Report::for_scenario(sc);
    let f = sc.f.as_ref().ok_or_else(|| Error::invalid("np_dominance needs f"))?;
    let name = "np_dominance";
    match np_of(sc, f, name, ctr)? {
        NpOutcome::Done(c) => report.checks.push(c),
        NpOutcome::Polygon { np, j, side, l } => {
            let n = sc.n();
            if j > n {
                return Err(Error::invalid(format!("j = {j} exceeds n = {n}")));
            }
            let hp = an_hodge_polygon(n, j, np_degree(sc, f))?;
            let ok = dominates(&np, &hp);
            report.checks.push(CheckResult::holds(name, ok).sides(&np, &hp).with(json!({
                "newton_polygon": np,
                "hodge_polygon": hp,
                "newton_slopes": np.slopes().to_string(),
                "hodge_slopes": hp.slopes().to_string(),
                "equal": np == hp,
                "j": j,
                "side": side,
                "l_function": l,
            })));
        }
    }
    Ok(report)
}

/// Pointwise minimum of polygons, checked at every breakpoint of `p`
/// and of the polygons present at that abscissa.
fn dominates_min(p: &ConvexPolygon, gs: &[ConvexPolygon]) -> bool {
    let xs: Vec<&Rational> = std::iter::once(p)
        .chain(gs.iter())
        .flat_map(|g| g.vertices().iter().map(|(x, _)| x))
        .collect();
    xs.into_iter().all(|x| {
        let Some(px) = p.value_at(x) else { return true };
        gs.iter().filter_map(|g| g.value_at(x)).min().is_none_or(|m| px >= m)
    })
}

/// Empirical semicontinuity probe: the Newton polygons of special members of
/// a family lie on or above the pointwise minimum of the generic ones.
pub fn verify_family_np(sc: &Scenario, ctr: &Counter) -> Result<Report> {
    let mut report = Report::for_scenario(sc);
    let base = sc.f.as_ref().ok_or_else(|| Error::invalid("family_np needs f"))?;
    let fam = sc.family.as_ref().ok_or_else(|| Error::invalid("family_np needs a family"))?;
    let p = sc.field.p;
    let generic: Vec<u64> = if fam.generic.is_empty() {
        (0..p).filter(|t| !fam.special.contains(t)).collect()
    } else {
        fam.generic.clone()
    };
    let base_degree = reduced_degree(base, p);
    let member = |t: u64, role: &str| -> Result<std::result::Result<ConvexPolygon, CheckResult>> {
        let f = base.clone() + LaurentPolynomial::constant(base.nvars(), t) * fam.direction.clone();
        let name = format!("family_np[{role} t={t}]");
        if reduced_degree(&f, p) < base_degree {
            return Ok(Err(CheckResult::new(name, Verdict::Skip(SkipReason::UnverifiedHypothesis))
                .with(json!({ "member": f.to_string(), "reason": "degree drops" }))));
        }
        Ok(match np_of(sc, &f, &name, ctr)? {
            NpOutcome::Polygon { np, .. } => Ok(np),
            NpOutcome::Done(c) => Err(c),
        })
    };
    let mut gamma = Vec::new();
    for &t in &generic {
        match member(t, "generic")? {
            Ok(np) => gamma.push(np),
            Err(skip) => report.checks.push(skip),
        }
    }
    let mut any_special = false;
    for &t in &fam.special {
        match member(t, "special")? {
            Ok(np) => {
                any_special = true;
                let ok = gamma.is_empty() || dominates_min(&np, &gamma);
                report.checks.push(
                    CheckResult::holds(format!("family_np[special t={t}]"), ok)
                        .sides(&np, gamma.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" min "))
                        .with(json!({ "special": np, "generic": gamma })),
                );
            }
            Err(skip) => report.checks.push(skip),
        }
    }
    if !any_special {
        report.checks.push(CheckResult::new("family_np", Verdict::Pass).sides("no special member", "vacuous"));
    }
    Ok(report)
}

fn reduced_degree(f: &LaurentPolynomial, p: u64) -> i64 {
    f.reduce_mod(p).iter().map(|(e, _)| e.iter().sum::<i64>()).max().unwrap_or(-1)
}

/// Runs every check the scenario lists.
pub fn run_scenario(sc: &Scenario, ctr: &Counter) -> Result<Report> {
    let mut report = Report::for_scenario(sc);
    for check in &sc.checks {
        match check {
            CheckKind::TotalDegree => report.extend(verify_total_degree(sc, ctr)?),
            CheckKind::Cayley => {
                let Domain::Affine(n) = sc.domain else {
                    return Err(Error::invalid("cayley check needs an affine domain"));
                };
                report.checks.extend(verify_cayley(&sc.system, n, &sc.field_spec()?, sc.m_max, ctr)?);
            }
            CheckKind::LangWeil => report.extend(verify_lang_weil(sc, ctr)?),
            CheckKind::NpDominance => report.extend(verify_np_dominance(sc, ctr)?),
            CheckKind::FamilyNp => report.extend(verify_family_np(sc, ctr)?),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffcount::CountOptions;

    fn ctr() -> Counter {
        Counter::new(CountOptions { jobs: 2, ..CountOptions::default() }).unwrap()
    }

    fn x(n: usize, i: usize) -> LaurentPolynomial {
        LaurentPolynomial::variable(n, i)
    }

    fn curve() -> LaurentPolynomial {
        x(2, 1).pow(2) + x(2, 1) - x(2, 0).pow(3)
    }

    fn verdicts(r: &Report) -> Vec<(String, String)> {
        r.checks.iter().map(|c| (c.name.clone(), c.verdict.to_string())).collect()
    }

    #[test]
    fn elliptic_curve_total_degree() {
        let mut sc = Scenario::new("curve", 2, 1, Domain::Affine(2));
        sc.system = vec![curve()];
        sc.m_max = 8;
        sc.assumptions.complete_intersection = true;
        let r = verify_total_degree(&sc, &ctr()).unwrap();
        let ci = r.checks.iter().find(|c| c.name == "total_degree<=ci_total").unwrap();
        assert_eq!((ci.lhs.as_str(), ci.rhs.as_str(), ci.verdict), ("3", "16", Verdict::Pass));
        assert!(!r.has_fail(), "{:?}", verdicts(&r));
    }

    #[test]
    fn ci_bound_needs_assertion() {
        let mut sc = Scenario::new("curve", 2, 1, Domain::Affine(2));
        sc.system = vec![curve()];
        sc.m_max = 8;
        let r = verify_total_degree(&sc, &ctr()).unwrap();
        let ci = r.checks.iter().find(|c| c.name == "total_degree<=ci_total").unwrap();
        assert_eq!(ci.verdict, Verdict::Skip(SkipReason::UnverifiedHypothesis));
    }

    #[test]
    fn gauss_sum_scenario() {
        let mut sc = Scenario::new("gauss", 3, 1, Domain::Affine(1));
        sc.f = Some(x(1, 0).pow(2));
        sc.checks = vec![CheckKind::TotalDegree, CheckKind::NpDominance];
        let r = run_scenario(&sc, &ctr()).unwrap();
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass), "{:?}", verdicts(&r));
        let np = r.checks.iter().find(|c| c.name == "np_dominance").unwrap();
        assert_eq!(np.artifacts["equal"], Value::Bool(true));
        assert_eq!(np.artifacts["j"], json!(0));
    }

    #[test]
    fn empty_system_is_affine_space() {
        let mut sc = Scenario::new("plane", 3, 1, Domain::Affine(2));
        sc.m_max = 5;
        let r = verify_total_degree(&sc, &ctr()).unwrap();
        assert_eq!(r.checks[0].artifacts["zeta"]["total_degree"], json!(1));
        assert!(!r.has_fail());
    }

    #[test]
    fn cayley_examples() {
        let f2 = make_field(2, 1).unwrap();
        let out = verify_cayley(&[x(1, 0)], 1, &f2, 3, &ctr()).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|c| c.verdict == Verdict::Pass));
        let f3 = make_field(3, 1).unwrap();
        let fs = [x(2, 0).pow(2) + x(2, 1), x(2, 0) * x(2, 1) - LaurentPolynomial::constant(2, 1)];
        let out = verify_cayley(&fs, 2, &f3, 2, &ctr()).unwrap();
        assert!(out.iter().all(|c| c.verdict == Verdict::Pass));
        let out = verify_cayley(&[], 2, &f3, 2, &ctr()).unwrap();
        assert!(out.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn lang_weil_examples() {
        let mut sc = Scenario::new("curve", 2, 1, Domain::Affine(2));
        sc.system = vec![curve()];
        sc.m_max = 2;
        sc.assumptions.geometrically_irreducible = true;
        let r = verify_lang_weil(&sc, &ctr()).unwrap();
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass), "{:?}", verdicts(&r));

        let mut line = Scenario::new("line", 3, 1, Domain::Affine(2));
        line.system = vec![x(2, 1)];
        line.m_max = 2;
        line.assumptions.geometrically_irreducible = true;
        let r = verify_lang_weil(&line, &ctr()).unwrap();
        assert!(r.checks.iter().all(|c| c.lhs == "0" && c.verdict == Verdict::Pass));

        let mut conic = Scenario::new("conic", 3, 1, Domain::Projective(2));
        conic.system = vec![x(3, 0).pow(2) + x(3, 1).pow(2) - x(3, 2).pow(2)];
        conic.m_max = 2;
        conic.params.epsilon = Some(-1);
        conic.assumptions.geometrically_irreducible = true;
        let r = verify_lang_weil(&conic, &ctr()).unwrap();
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass), "{:?}", verdicts(&r));
        // a smooth conic has exactly q + 1 points
        assert_eq!(r.checks[0].artifacts["count"], json!("4"));
    }

    #[test]
    fn np_skips_when_p_divides_d() {
        let mut sc = Scenario::new("wild", 2, 1, Domain::Affine(1));
        sc.f = Some(x(1, 0).pow(2));
        let r = verify_np_dominance(&sc, &ctr()).unwrap();
        assert_eq!(r.checks[0].verdict, Verdict::Skip(SkipReason::PreconditionDqNotCoprime));
        assert_eq!(r.checks[0].verdict.to_string(), "SKIP((d,q) != 1)");
    }

    #[test]
    fn family_examples() {
        let mut sc = Scenario::new("family", 3, 1, Domain::Affine(1));
        sc.f = Some(x(1, 0).pow(2));
        sc.family = Some(Family { direction: x(1, 0), generic: vec![], special: vec![0] });
        let r = verify_family_np(&sc, &ctr()).unwrap();
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass), "{:?}", verdicts(&r));

        // t = 2 cancels the leading term of x^2 + t*x^2 over F_3
        sc.family = Some(Family { direction: x(1, 0).pow(2), generic: vec![2], special: vec![] });
        let r = verify_family_np(&sc, &ctr()).unwrap();
        assert_eq!(r.checks[0].verdict, Verdict::Skip(SkipReason::UnverifiedHypothesis));
        assert_eq!(r.checks.last().unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn unstable_when_too_few_terms() {
        let mut sc = Scenario::new("curve", 2, 1, Domain::Affine(2));
        sc.system = vec![curve()];
        sc.m_max = 3;
        let r = verify_total_degree(&sc, &ctr()).unwrap();
        assert!(r.has_unstable());
    }

    #[test]
    fn toric_model_adds_a_variable() {
        let mut sc = Scenario::new("torus", 3, 1, Domain::Toric(2));
        sc.system = vec![x(2, 0) + x(2, 1) - LaurentPolynomial::constant(2, 1)];
        sc.m_max = 5;
        assert_eq!(affine_model(&sc).unwrap(), (3, 2, 3));
        let r = verify_total_degree(&sc, &ctr()).unwrap();
        assert!(!r.has_fail());
    }
}
