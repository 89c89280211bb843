//! Job files (TOML or JSON) and their execution.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bettibound::bounds::{scalar_bound, BoundKind, BoundParams};
use bettibound::ffcount::{CountOptions, Counter, Domain};
use bettibound::verify::{run_scenario, Assumptions, CheckKind, Family, FieldParams, Report, Scenario, ScenarioParams};
use serde::Deserialize;

use crate::parse::parse_polynomial;
use crate::render::{render_bound, render_report, Format};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub direction: String,
    #[serde(default)]
    pub generic: Vec<u64>,
    #[serde(default)]
    pub special: Vec<u64>,
}

/// Parameters accepted under `[params]` (and, for bound jobs, at top level).
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobParams {
    pub n: Option<u32>,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub d: Option<u32>,
    pub e: Option<u32>,
    pub epsilon: Option<i32>,
    pub j: Option<u32>,
    pub q: Option<u64>,
    pub ds: Option<Vec<u32>>,
}

impl JobParams {
    fn merge(&self, other: &JobParams) -> Result<JobParams, CliError> {
        fn pick<T: Clone + PartialEq>(a: &Option<T>, b: &Option<T>, name: &str) -> Result<Option<T>, CliError> {
            match (a, b) {
                (Some(x), Some(y)) if x != y => {
                    Err(CliError::Usage(format!("parameter {name} is given twice with different values")))
                }
                (Some(x), _) | (None, Some(x)) => Ok(Some(x.clone())),
                (None, None) => Ok(None),
            }
        }
        Ok(JobParams {
            n: pick(&self.n, &other.n, "n")?,
            r: pick(&self.r, &other.r, "r")?,
            s: pick(&self.s, &other.s, "s")?,
            d: pick(&self.d, &other.d, "d")?,
            e: pick(&self.e, &other.e, "e")?,
            epsilon: pick(&self.epsilon, &other.epsilon, "epsilon")?,
            j: pick(&self.j, &other.j, "j")?,
            q: pick(&self.q, &other.q, "q")?,
            ds: pick(&self.ds, &other.ds, "ds")?,
        })
    }

    pub fn bound_params(&self) -> BoundParams {
        BoundParams {
            n: self.n,
            r: self.r,
            d: self.d,
            ds: self.ds.clone(),
            q: self.q,
            j: self.j,
            s: self.s,
            e: self.e,
            epsilon: self.epsilon,
        }
    }

    fn scenario_params(&self) -> Result<ScenarioParams, CliError> {
        if self.q.is_some() || self.ds.is_some() {
            return Err(CliError::Usage("q and ds only apply to bound jobs".into()));
        }
        Ok(ScenarioParams { n: self.n, r: self.r, s: self.s, d: self.d, e: self.e, epsilon: self.epsilon, j: self.j })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub name: Option<String>,
    /// Present for bound jobs: the bound to evaluate.
    pub kind: Option<String>,
    pub field: Option<FieldParams>,
    pub domain: Option<String>,
    #[serde(default)]
    pub system: Vec<String>,
    pub f: Option<String>,
    #[serde(default)]
    pub params: JobParams,
    pub m_max: Option<u32>,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub assumptions: Assumptions,
    pub family: Option<FamilySpec>,
    pub character: Option<u64>,
    pub window: Option<usize>,
    pub n: Option<u32>,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub d: Option<u32>,
    pub e: Option<u32>,
    pub epsilon: Option<i32>,
    pub j: Option<u32>,
    pub q: Option<u64>,
    pub ds: Option<Vec<u32>>,
}

fn default_version() -> u32 {
    1
}

impl JobFile {
    pub fn from_str_with_format(text: &str, json: bool) -> Result<Self, CliError> {
        let job: JobFile = if json {
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("JSON: {e}")))?
        } else {
            toml::from_str(text).map_err(|e| CliError::Parse(format!("TOML: {e}")))?
        };
        if job.version != 1 {
            return Err(CliError::Usage(format!("unsupported job file version {}", job.version)));
        }
        Ok(job)
    }

    /// Reads a job file; `.json` files are JSON, everything else TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::from_str_with_format(&text, json)
    }

    fn top_level_params(&self) -> JobParams {
        JobParams {
            n: self.n,
            r: self.r,
            s: self.s,
            d: self.d,
            e: self.e,
            epsilon: self.epsilon,
            j: self.j,
            q: self.q,
            ds: self.ds.clone(),
        }
    }

    pub fn params(&self) -> Result<JobParams, CliError> {
        self.params.merge(&self.top_level_params())
    }

    pub fn is_bound_job(&self) -> bool {
        self.kind.is_some()
    }

    pub fn bound_kind(&self) -> Result<Option<BoundKind>, CliError> {
        self.kind
            .as_deref()
            .map(|k| k.parse::<BoundKind>().map_err(CliError::Core))
            .transpose()
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let field = self.field.ok_or_else(|| CliError::Usage("job needs a [field] table".into()))?;
        let params = self.params()?;
        let domain = parse_domain(
            self.domain.as_deref().ok_or_else(|| CliError::Usage("job needs a domain".into()))?,
            params.n,
        )?;
        let nvars = domain.coordinates();
        let mut sc = Scenario::new(self.name.clone().unwrap_or_else(|| "job".into()), field.p, field.k, domain);
        sc.system = self
            .system
            .iter()
            .map(|s| parse_polynomial(s, nvars))
            .collect::<Result<_, _>>()?;
        sc.f = self.f.as_deref().map(|s| parse_polynomial(s, nvars)).transpose()?;
        sc.params = params.scenario_params()?;
        sc.assumptions = self.assumptions;
        sc.m_max = self.m_max.ok_or_else(|| CliError::Usage("job needs m_max".into()))?;
        sc.checks = if self.checks.is_empty() { vec![CheckKind::TotalDegree] } else { self.checks.clone() };
        if let Some(a) = self.character {
            sc.character = a;
        }
        if let Some(w) = self.window {
            sc.window = w;
        }
        if let Some(fam) = &self.family {
            sc.family = Some(Family {
                direction: parse_polynomial(&fam.direction, nvars)?,
                generic: fam.generic.clone(),
                special: fam.special.clone(),
            });
        }
        Ok(sc)
    }
}

/// `affine`, `toric` or `projective`, with the dimension either inline
/// (`affine(2)`) or taken from `n`.
pub fn parse_domain(text: &str, n: Option<u32>) -> Result<Domain, CliError> {
    let text = text.trim();
    let (name, inline) = match text.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| CliError::Usage(format!("malformed domain {text:?}")))?;
            let v: u32 = inner
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("malformed domain {text:?}")))?;
            (name.trim(), Some(v))
        }
        None => (text, None),
    };
    let dim = match (inline, n) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Usage(format!("domain says n = {a} but params say n = {b}")))
        }
        (Some(a), _) | (None, Some(a)) => a as usize,
        (None, None) => return Err(CliError::Usage("domain dimension n is missing".into())),
    };
    match name {
        "affine" => Ok(Domain::Affine(dim)),
        "toric" => Ok(Domain::Toric(dim)),
        "projective" => Ok(Domain::Projective(dim)),
        other => Err(CliError::Usage(format!("unknown domain {other:?}"))),
    }
}

/// Settings given on the command line; they win over the job file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub format: Option<Format>,
    pub cache: Option<PathBuf>,
    pub mmax: Option<u32>,
    pub budget: Option<u128>,
    pub jobs: Option<usize>,
}

impl RunOptions {
    pub fn counter(&self, cache: Option<&Path>) -> Result<Counter, CliError> {
        let mut opts = CountOptions::default();
        if let Some(j) = self.jobs {
            opts.jobs = j.max(1);
        }
        if let Some(b) = self.budget {
            opts.budget = b;
        }
        let ctr = Counter::new(opts)?;
        Ok(match cache {
            Some(dir) => ctr.with_cache(dir)?,
            None => ctr,
        })
    }
}

pub fn exit_status(report: &Report) -> i32 {
    if report.has_fail() {
        EXIT_FAIL
    } else if report.has_unstable() {
        EXIT_UNSTABLE
    } else {
        EXIT_OK
    }
}

/// Output of a job before rendering.
pub enum JobOutput {
    Bound(bettibound::bounds::BoundValue),
    Report(Report),
}

/// Executes a parsed job.
pub fn execute(job: &JobFile, opts: &RunOptions) -> Result<JobOutput, CliError> {
    if let Some(kind) = job.bound_kind()? {
        let params = job.params()?.bound_params();
        return Ok(JobOutput::Bound(scalar_bound(kind, &params)?));
    }
    let mut sc = job.scenario()?;
    if let Some(m) = opts.mmax {
        sc.m_max = m;
    }
    let cache = opts.cache.as_deref().or(job.cache_dir.as_deref());
    let ctr = opts.counter(cache)?;
    Ok(JobOutput::Report(run_scenario(&sc, &ctr)?))
}

/// Runs the job at `path` and returns the process exit status.
pub fn run_job(path: &Path, opts: &RunOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_run_job(path, opts, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn try_run_job(path: &Path, opts: &RunOptions, out: &mut dyn Write) -> Result<i32, CliError> {
    let job = JobFile::load(path)?;
    let spec = job.output.clone().unwrap_or_default();
    let format = opts.format.or(spec.format).unwrap_or(Format::Table);
    let (text, code) = match execute(&job, opts)? {
        JobOutput::Bound(b) => (render_bound(&b, format)?, EXIT_OK),
        JobOutput::Report(r) => (render_report(&r, format)?, exit_status(&r)),
    };
    match &spec.path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains() {
        assert_eq!(parse_domain("affine", Some(2)).unwrap(), Domain::Affine(2));
        assert_eq!(parse_domain("toric(3)", None).unwrap(), Domain::Toric(3));
        assert!(parse_domain("affine(2)", Some(3)).is_err());
        assert!(parse_domain("affine", None).is_err());
        assert!(parse_domain("spherical(2)", None).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = JobFile::from_str_with_format("kind = \"order\"\nbogus = 1\n", false).unwrap_err();
        assert!(matches!(e, CliError::Parse(_)));
        let e = JobFile::from_str_with_format("[params]\nn = 1\nzz = 2\n", false).unwrap_err();
        assert!(matches!(e, CliError::Parse(_)));
    }

    #[test]
    fn bound_job_shorthand() {
        let job = JobFile::from_str_with_format(r#"{"kind": "order", "n": 3, "r": 2, "d": 4}"#, true).unwrap();
        let JobOutput::Bound(b) = execute(&job, &RunOptions::default()).unwrap() else { panic!() };
        assert_eq!(b.amount.to_string(), "26244");
        let clash = JobFile::from_str_with_format("kind = \"order\"\nn = 3\n[params]\nn = 4\n", false).unwrap();
        assert!(execute(&clash, &RunOptions::default()).is_err());
    }
}
