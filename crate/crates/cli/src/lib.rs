//! Command-line front end: polynomial parsing, job files, cache maintenance
//! and report rendering on top of the `bettibound` library.

pub mod job;
pub mod parse;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bettibound::bounds::{
    khovanskii_chi, polytope_bound, scalar_bound, BoundKind, BoundParams, PolytopeBoundKind,
};
use bettibound::exactmath::{Rational, DEFAULT_WINDOW};
use bettibound::ffcount::{
    l_function, l_newton_polygon, make_field, zeta_function, zeta_newton_polygon, GcSummary,
};
use bettibound::polygon::{an_hodge_polygon, hodge_numbers, hodge_polygon};
use bettibound::polytope::{
    convex_hull, mixed_volume, newton_polytope, normalized_volume, volume, LatticePolytope, PolytopeKind,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

pub use job::{run_job, JobFile, RunOptions, EXIT_FAIL, EXIT_OK, EXIT_UNSTABLE, EXIT_USAGE};
pub use parse::{parse_polynomial, ParseError};
pub use render::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse job file: {0}")]
    Parse(String),
    #[error(transparent)]
    Polynomial(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] bettibound::Error),
    #[error("i/o: {0}")]
    Io(String),
}

/// LRU garbage collection of a cache directory down to `max_bytes`.
pub fn cache_gc(dir: &Path, max_bytes: u64) -> Result<GcSummary, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Io(format!("{} is not a directory", dir.display())));
    }
    Ok(bettibound::ffcount::cache_gc(dir, max_bytes)?)
}

#[derive(Debug, Parser)]
#[command(name = "bettibound", version, about = "Exact Betti-number and exponential-sum bounds")]
pub struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Cache directory for counts and character sums.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
    /// Largest extension degree m to count over.
    #[arg(long, global = true, value_name = "K")]
    pub mmax: Option<u32>,
    /// Maximum number of points enumerated per count.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u128>,
    /// Worker threads used for counting.
    #[arg(long, global = true, value_name = "J")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form bound; `all` lists every bound defined for the parameters.
    Bound(BoundArgs),
    /// Volumes, mixed volumes, Newton polytopes and toric bounds.
    #[command(subcommand)]
    Polytope(PolytopeCommand),
    /// Hodge polygons.
    #[command(subcommand)]
    Hodge(HodgeCommand),
    /// Count points and reconstruct the zeta function.
    Zeta(CountArgs),
    /// Compute character sums and reconstruct the L-function of f.
    Expsum(ExpsumArgs),
    /// Run a job file.
    Verify {
        job: PathBuf,
    },
    /// Cache maintenance.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    pub kind: String,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Individual degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ds: Option<Vec<u32>>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<i32>,
}

#[derive(Debug, Subcommand)]
pub enum PolytopeCommand {
    /// Vertices, facets and volumes of the convex hull of POINTS.
    Volume { points: String },
    /// Mixed volume V(P1[a1], ..., Pk[ak]).
    Mixed {
        #[arg(required = true)]
        polytopes: Vec<String>,
        /// Multiplicities, comma separated; default all ones.
        #[arg(long, value_delimiter = ',')]
        mult: Option<Vec<usize>>,
    },
    /// Newton polytope of a polynomial.
    Newton {
        poly: String,
        /// Number of variables; default the largest index used.
        #[arg(long)]
        vars: Option<usize>,
        /// Adjoin the origin.
        #[arg(long)]
        at_infinity: bool,
    },
    /// Toric exponential-sum bound: as_original, as_improved, power_as or toric_total.
    Bound {
        kind: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        s: Option<String>,
        /// Dilation factor for power_as, e.g. 3 or 7/2.
        #[arg(long)]
        d: Option<String>,
    },
    /// Euler characteristic of a generic complete intersection in the torus.
    Khovanskii {
        #[arg(required = true)]
        polytopes: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HodgeCommand {
    /// Hodge polygon of a polytope containing the origin.
    Polytope { points: String },
    /// The explicit polygon for degree-d polynomials on affine n-space.
    Affine {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// affine, toric or projective.
    #[arg(long, default_value = "affine")]
    pub domain: String,
    #[arg(long)]
    pub n: u32,
    /// An equation; repeat for a system.
    #[arg(long = "system", allow_hyphen_values = true)]
    pub system: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ExpsumArgs {
    #[command(flatten)]
    pub count: CountArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Character index a in psi(x) = zeta_p^(a x).
    #[arg(long, default_value_t = 1)]
    pub a: u64,
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    /// Evict least recently used records until the cache fits.
    Gc {
        dir: PathBuf,
        #[arg(long)]
        max_bytes: u64,
    },
}

impl Cli {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Table
        }
    }

    fn run_options(&self) -> RunOptions {
        RunOptions {
            format: (self.json || self.csv).then(|| self.format()),
            cache: self.cache.clone(),
            mmax: self.mmax,
            budget: self.budget,
            jobs: self.jobs,
        }
    }
}

/// Points as `x,y x,y ...` (`;` also separates points).
pub fn parse_points(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(|c: char| c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|pt| {
            pt.split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("malformed point {pt:?}")))
        })
        .collect()
}

fn polytope_arg(text: &str) -> Result<LatticePolytope, CliError> {
    Ok(convex_hull(&parse_points(text)?)?)
}

fn points_json(pts: &[Vec<i64>]) -> Value {
    json!(pts)
}

fn polytope_json(p: &LatticePolytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": points_json(p.vertices()),
        "facets": p.facets().iter().map(|f| json!({ "normal": f.normal, "offset": f.offset })).collect::<Vec<_>>(),
        "normalized_volume": normalized_volume(p).to_string(),
        "volume": volume(p).to_string(),
    })
}

fn strings<T: std::fmt::Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

fn bound_params(args: &BoundArgs) -> BoundParams {
    BoundParams {
        n: args.n,
        r: args.r,
        d: args.d,
        ds: args.ds.clone(),
        q: args.q,
        j: args.j,
        s: args.s,
        e: args.e,
        epsilon: args.epsilon,
    }
}

/// Every bound kind that the given parameters determine.
fn bound_command(args: &BoundArgs) -> Result<Value, CliError> {
    let params = bound_params(args);
    let mut out = serde_json::Map::new();
    for kind in BoundKind::ALL {
        if let Ok(v) = scalar_bound(kind, &params) {
            out.insert(kind.name().into(), Value::String(v.amount.to_string()));
        }
    }
    Ok(Value::Object(out))
}

fn polytope_command(cmd: &PolytopeCommand) -> Result<Value, CliError> {
    match cmd {
        PolytopeCommand::Volume { points } => Ok(polytope_json(&polytope_arg(points)?)),
        PolytopeCommand::Mixed { polytopes, mult } => {
            let polys = polytopes.iter().map(|s| polytope_arg(s)).collect::<Result<Vec<_>, _>>()?;
            let mult = mult.clone().unwrap_or_else(|| vec![1; polys.len()]);
            let v = mixed_volume(&polys, &mult)?;
            Ok(json!({ "mixed_volume": v.to_string() }))
        }
        PolytopeCommand::Newton { poly, vars, at_infinity } => {
            let n = match vars {
                Some(n) => *n,
                None => parse::variable_count(poly)?.max(1),
            };
            let f = parse_polynomial(poly, n)?;
            let kind = if *at_infinity { PolytopeKind::AtInfinity } else { PolytopeKind::Support };
            let mut v = polytope_json(&newton_polytope(&f, kind)?);
            v["polynomial"] = Value::String(f.to_string());
            Ok(v)
        }
        PolytopeCommand::Bound { kind, delta, s, d } => {
            let kind: PolytopeBoundKind = kind.parse()?;
            let delta = polytope_arg(delta)?;
            let s = s.as_deref().map(polytope_arg).transpose()?;
            let d = d
                .as_deref()
                .map(|t| t.parse::<Rational>().map_err(|_| CliError::Usage(format!("malformed rational {t:?}"))))
                .transpose()?;
            let b = polytope_bound(kind, &delta, s.as_ref(), d.as_ref())?;
            Ok(json!({ "kind": b.kind, "value": b.amount.to_string(), "approx": b.amount.approx() }))
        }
        PolytopeCommand::Khovanskii { polytopes } => {
            let polys = polytopes.iter().map(|s| polytope_arg(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(json!({ "euler_characteristic": khovanskii_chi(&polys)?.to_string() }))
        }
    }
}

fn hodge_command(cmd: &HodgeCommand) -> Result<Value, CliError> {
    match cmd {
        HodgeCommand::Polytope { points } => {
            let p = polytope_arg(points)?;
            let (denominator, w) = hodge_numbers(&p)?;
            let hp = hodge_polygon(&p)?;
            Ok(json!({
                "denominator": denominator,
                "hodge_numbers": strings(&w),
                "vertices": hp,
                "slopes": hp.slopes().to_string(),
            }))
        }
        HodgeCommand::Affine { n, j, d } => {
            let hp = an_hodge_polygon(*n, *j, *d)?;
            Ok(json!({ "vertices": hp, "slopes": hp.slopes().to_string() }))
        }
    }
}

fn count_setup(
    args: &CountArgs,
) -> Result<(bettibound::ffcount::FieldSpec, bettibound::ffcount::Domain, Vec<bettibound::polytope::LaurentPolynomial>), CliError>
{
    let field = make_field(args.p, args.k)?;
    let domain = job::parse_domain(&args.domain, Some(args.n))?;
    let system = args
        .system
        .iter()
        .map(|s| parse_polynomial(s, domain.coordinates()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((field, domain, system))
}

const DEFAULT_MMAX: u32 = 6;

fn zeta_command(cli: &Cli, args: &CountArgs) -> Result<(Value, bool), CliError> {
    let (field, domain, system) = count_setup(args)?;
    let ctr = cli.run_options().counter(cli.cache.as_deref())?;
    let counts = ctr.counts(&system, &domain, &field, cli.mmax.unwrap_or(DEFAULT_MMAX))?;
    let z = zeta_function(&counts, DEFAULT_WINDOW)?;
    let mut v = json!({ "counts": strings(&counts) });
    match z.function() {
        Some(f) => {
            v["zeta"] = Value::String(f.to_string());
            v["total_degree"] = json!(f.total_degree());
            let (num, den) = zeta_newton_polygon(f, field.q())?;
            v["numerator_newton_polygon"] = json!(num);
            v["denominator_newton_polygon"] = json!(den);
            Ok((v, true))
        }
        None => {
            v["zeta"] = Value::String("UNSTABLE".into());
            Ok((v, false))
        }
    }
}

fn expsum_command(cli: &Cli, args: &ExpsumArgs) -> Result<(Value, bool), CliError> {
    let (field, domain, system) = count_setup(&args.count)?;
    let f = parse_polynomial(&args.f, domain.coordinates())?;
    let ctr = cli.run_options().counter(cli.cache.as_deref())?;
    let sums = ctr.char_sums(&f, &system, &domain, &field, cli.mmax.unwrap_or(DEFAULT_MMAX), args.a)?;
    let l = l_function(&sums, DEFAULT_WINDOW)?;
    let mut v = json!({ "sums": strings(&sums) });
    match l.function() {
        Some(lf) => {
            v["l_function"] = Value::String(lf.to_string());
            v["total_degree"] = json!(lf.total_degree());
            let (num, den) = l_newton_polygon(lf, field.q())?;
            v["numerator_newton_polygon"] = json!(num);
            v["numerator_slopes"] = Value::String(num.slopes().to_string());
            v["denominator_newton_polygon"] = json!(den);
            v["denominator_slopes"] = Value::String(den.slopes().to_string());
            Ok((v, true))
        }
        None => {
            v["l_function"] = Value::String("UNSTABLE".into());
            Ok((v, false))
        }
    }
}

fn cache_command(cmd: &CacheCommand) -> Result<Value, CliError> {
    match cmd {
        CacheCommand::Gc { dir, max_bytes } => {
            let s = cache_gc(dir, *max_bytes)?;
            Ok(serde_json::to_value(s).expect("summary serializes"))
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let format = cli.format();
    let (value, stable) = match &cli.command {
        Command::Verify { job } => return Ok(run_job(job, &cli.run_options(), out, err)),
        Command::Bound(args) if args.kind != "all" => {
            let kind: BoundKind = args.kind.parse()?;
            let b = scalar_bound(kind, &bound_params(args))?;
            let text = render::render_bound(&b, format)?;
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            return Ok(EXIT_OK);
        }
        Command::Bound(args) => (bound_command(args)?, true),
        Command::Polytope(cmd) => (polytope_command(cmd)?, true),
        Command::Hodge(cmd) => (hodge_command(cmd)?, true),
        Command::Zeta(args) => zeta_command(cli, args)?,
        Command::Expsum(args) => expsum_command(cli, args)?,
        Command::Cache(cmd) => (cache_command(cmd)?, true),
    };
    let text = render::render_value(&value, format)?;
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(if stable { EXIT_OK } else { EXIT_UNSTABLE })
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bettibound").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn points() {
        assert_eq!(parse_points("0,0 1,0;0,1").unwrap(), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert!(parse_points("0,a").is_err());
    }

    #[test]
    fn bound_prints_value() {
        let (code, out, _) = run_str(&["bound", "order", "--n", "3", "--r", "2", "--d", "4"]);
        assert_eq!((code, out.as_str()), (0, "26244\n"));
        let (code, _, err) = run_str(&["bound", "nope", "--n", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("unknown bound kind"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
    }
}
