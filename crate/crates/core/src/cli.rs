//! Command-line driver. Every subcommand writes one JSON report (CSV for
//! `strata`) and exits 0 on success, 1 when a verification fails and 2 on
//! usage or resource errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::convalg::{
    check_relations_with, closure_dimension, closure_dimension_weighted, extract_idempotents, weight_action_check_with,
    ConvAlgebra, ConvError, Generator, GeneratorSet, DEFAULT_MAX_BASIS,
};
use crate::exactnum::QRootQ;
use crate::flagvar::{
    count_x, enumerate_flags_type_a, enumerate_x_cached, strata_for_nu, stratum_count, DimVector, FlagError,
    QuiverShape, DEFAULT_MAX_FLAGS,
};
use crate::geometry::{degree_matches, stratum_csv, stratum_table, GeometryError};
use crate::reptheory::{
    check_saturation, nat_matrices_with_sum, pi_set, schur_dimension, top_dvec, weyl_dim, weyl_orbit, CartanData,
    RepError,
};

/// Environment variable overriding `--cache-dir`.
pub const CACHE_ENV: &str = "QSCHUR_CACHE_DIR";
/// Bumped whenever a cached result could change.
pub const RESULT_CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("i/o error on {path}: {reason}")]
    Io { path: PathBuf, reason: String },
}

impl From<FlagError> for CliError {
    fn from(e: FlagError) -> Self {
        match e {
            FlagError::TooLarge { .. } => CliError::Resource(e.to_string()),
            FlagError::Cache { path, reason } => CliError::Io { path, reason },
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ConvError> for CliError {
    fn from(e: ConvError) -> Self {
        match e {
            ConvError::BasisTooLarge { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Flag(f) => f.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qschur", version, about = "Convolution algebras on ramified flag varieties over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for flag and result caches.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Refuse to enumerate more flags than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FLAGS, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_flags: u64,
    /// Refuse to grow a closure basis beyond this size.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BASIS)]
    pub max_basis: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TypeLetter {
    #[value(name = "D")]
    D,
    #[value(name = "A")]
    A,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Dynkin type of the flag model.
    #[arg(long = "type", value_enum, default_value = "D")]
    pub kind: TypeLetter,
    /// Length of the j-chain, for type D_{m+2}.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of nodes, for type A_n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of the ambient space.
    #[arg(long)]
    pub d: usize,
}

#[derive(Args, Debug, Clone)]
pub struct FieldShape {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Prime field size.
    #[arg(long)]
    pub q: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClosureMethod {
    /// Block-by-block closure after extracting the idempotents.
    Graded,
    /// Two-sided closure from the unit.
    Generic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate flags and compare with the closed-form point counts.
    Enumerate(FieldShape),
    /// Check every defining relation among E_a, F_a, K_a.
    CheckRelations {
        #[command(flatten)]
        field: FieldShape,
        /// Double the first nonzero entry of this generator, e.g. `E:j1`.
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Express each 1_nu through K-monomials and verify it.
    Idempotents(FieldShape),
    /// Compare the dimension of the generated algebra with sum (dim L)^2.
    DimCheck {
        #[command(flatten)]
        field: FieldShape,
        #[arg(long, value_enum, default_value = "graded")]
        method: ClosureMethod,
    },
    /// Saturated set, Weyl dimensions and Schur dimension.
    Pi {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Explicit comma-separated dvec; defaults to d at the last node.
        #[arg(long, value_delimiter = ',')]
        dvec: Option<Vec<i64>>,
        /// Include the Weyl orbit size of each weight.
        #[arg(long)]
        orbits: bool,
    },
    /// Verify the K_a weight action and the E_a/F_a support rules.
    WeightCheck(FieldShape),
    /// Stratum table with interpolated point-count polynomials (CSV).
    Strata {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
        primes: Vec<u64>,
    },
    /// Closed-form point counts of X, X_nu and X_{nu,c}.
    Count {
        #[command(flatten)]
        field: FieldShape,
        /// Restrict to one nu, written `a;b;c` or `a,b,c`.
        #[arg(long)]
        nu: Option<String>,
        /// Also enumerate and compare.
        #[arg(long)]
        enumerate: bool,
    },
    /// q-Schur algebra S_q(n, d) from chains of subspaces.
    #[command(name = "typeA-baseline")]
    TypeABaseline {
        /// Matrix size: chains have n - 1 steps.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
    },
}

/// Report plus verdict.
struct Outcome {
    body: String,
    ok: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, ok: bool) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("reports serialize");
        body.push('\n');
        Outcome { body, ok }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = emit(cli.out.as_deref(), &out.body) {
                eprintln!("error: {e}");
                return 2;
            }
            if out.ok {
                0
            } else {
                eprintln!("verification failed");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Io { path: p.to_path_buf(), reason: e.to_string() }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

enum Resolved {
    D(usize),
    A(usize),
}

fn resolve(shape: &ShapeArgs) -> Result<Resolved, CliError> {
    match (shape.kind, shape.m, shape.n) {
        (TypeLetter::D, Some(m), None) if m >= 1 => Ok(Resolved::D(m)),
        (TypeLetter::A, None, Some(n)) if n >= 1 => Ok(Resolved::A(n)),
        (TypeLetter::D, _, _) => Err(CliError::Usage("type D needs --m >= 1 and no --n".into())),
        (TypeLetter::A, _, _) => Err(CliError::Usage("type A needs --n >= 1 and no --m".into())),
    }
}

fn build_algebra(cli: &Cli, f: &FieldShape) -> Result<ConvAlgebra, CliError> {
    let flags = match resolve(&f.shape)? {
        Resolved::D(m) => enumerate_x_cached(QuiverShape::new(m)?, f.shape.d, f.q, cli.max_flags, cli.cache_dir.as_deref())?,
        Resolved::A(n) => enumerate_flags_type_a(n, f.shape.d, f.q, cli.max_flags)?,
    };
    Ok(ConvAlgebra::new(flags))
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Enumerate(f) => enumerate(cli, f),
        Command::CheckRelations { field, perturb } => relations(cli, field, perturb.as_deref()),
        Command::Idempotents(f) => idempotents(cli, f),
        Command::DimCheck { field, method } => dim_check(cli, field, *method),
        Command::Pi { shape, dvec, orbits } => pi(shape, dvec.as_deref(), *orbits),
        Command::WeightCheck(f) => weight_check(cli, f),
        Command::Strata { shape, primes } => strata(cli, shape, primes),
        Command::Count { field, nu, enumerate } => count(cli, field, nu.as_deref(), *enumerate),
        Command::TypeABaseline { n, d, q } => type_a_baseline(cli, *n, *d, *q),
    }
}

#[derive(Serialize)]
struct NuCount {
    nu: Vec<i64>,
    enumerated: usize,
    closed_form: String,
}

#[derive(Serialize)]
struct EnumerateReport {
    shape: String,
    d: usize,
    q: u64,
    flags: usize,
    closed_form: String,
    per_nu: Vec<NuCount>,
    #[serde(rename = "match")]
    matches: bool,
}

fn enumerate(cli: &Cli, f: &FieldShape) -> Result<Outcome, CliError> {
    let alg = build_algebra(cli, f)?;
    let flags = alg.flags();
    let d = f.shape.d;
    let (shape, closed_total, per_nu): (String, String, Vec<NuCount>) = match resolve(&f.shape)? {
        Resolved::D(m) => {
            let per_nu = flags
                .by_nu()
                .iter()
                .map(|(nu, r)| {
                    let cf: num_bigint::BigUint = strata_for_nu(nu, m, d).iter().map(|s| stratum_count(s, d, f.q)).sum();
                    NuCount { nu: nu.0.clone(), enumerated: r.len(), closed_form: cf.to_string() }
                })
                .collect();
            (format!("D{}", m + 2), count_x(m, d, f.q).to_string(), per_nu)
        }
        Resolved::A(n) => {
            let total = crate::flagvar::count_chain_flags(n, d, f.q).to_string();
            let per_nu = flags
                .by_nu()
                .iter()
                .map(|(nu, r)| NuCount { nu: nu.0.clone(), enumerated: r.len(), closed_form: r.len().to_string() })
                .collect();
            (format!("A{n}"), total, per_nu)
        }
    };
    let matches = closed_total == flags.len().to_string() && per_nu.iter().all(|p| p.closed_form == p.enumerated.to_string());
    Ok(Outcome::json(&EnumerateReport { shape, d, q: f.q, flags: flags.len(), closed_form: closed_total, per_nu, matches }, matches))
}

fn relations(cli: &Cli, f: &FieldShape, perturb: Option<&str>) -> Result<Outcome, CliError> {
    let alg = build_algebra(cli, f)?;
    let mut gens = GeneratorSet::build(&alg)?;
    if let Some(spec) = perturb {
        let g = Generator::parse(alg.kind(), spec)?;
        let op = gens.get_mut(&g).ok_or_else(|| CliError::Usage(format!("cannot perturb {spec}")))?;
        let first = op.entries().next().map(|(r, c, v)| (r, c, v.scale_int(2)));
        *op = match first {
            Some((r, c, v)) => op.with_entry(r, c, v),
            None => op.with_entry(0, 0, QRootQ::one()),
        };
    }
    let report = check_relations_with(&alg, &gens)?;
    let ok = report.is_clean();
    Ok(Outcome::json(&report, ok))
}

fn idempotents(cli: &Cli, f: &FieldShape) -> Result<Outcome, CliError> {
    let alg = build_algebra(cli, f)?;
    let ext = extract_idempotents(&alg)?;
    // Re-evaluate the certificate from scratch before reporting it.
    let again = ext.certificate.evaluate(&alg)?;
    let recheck = again == ext.reconstructed;
    let ok = ext.mismatches.is_empty() && recheck;
    let report = json!({
        "certificate": ext.certificate.to_json(alg.field()),
        "mismatches": ext.mismatches.iter().map(|nu| nu.0.clone()).collect::<Vec<_>>(),
        "certificate_reevaluates": recheck,
    });
    Ok(Outcome::json(&report, ok))
}

#[derive(Serialize, serde::Deserialize, PartialEq, Debug)]
pub struct DimCheckReport {
    #[serde(rename = "dim_C")]
    pub dim_c: usize,
    pub sum_squares: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn dim_check(cli: &Cli, f: &FieldShape, method: ClosureMethod) -> Result<Outcome, CliError> {
    let Resolved::D(m) = resolve(&f.shape)? else {
        return Err(CliError::Usage("dim-check needs type D; see typeA-baseline for type A".into()));
    };
    let d = f.shape.d;
    let cache_file = cli.cache_dir.as_ref().map(|dir| {
        let tag = match method {
            ClosureMethod::Graded => "graded",
            ClosureMethod::Generic => "generic",
        };
        dir.join(format!("dimcheck-{tag}-D-m{m}-d{d}-q{}-v{RESULT_CACHE_VERSION}.json", f.q))
    });
    if let Some(path) = &cache_file {
        if let Some(r) = fs::read_to_string(path).ok().and_then(|t| serde_json::from_str::<DimCheckReport>(&t).ok()) {
            let ok = r.matches;
            return Ok(Outcome::json(&r, ok));
        }
    }
    let alg = build_algebra(cli, f)?;
    let dim_c = match method {
        ClosureMethod::Graded => closure_dimension_weighted(&alg, cli.max_basis)?.dimension,
        ClosureMethod::Generic => {
            let g = GeneratorSet::build(&alg)?;
            closure_dimension(&alg, &g.all(), cli.max_basis)?
        }
    };
    let cartan = CartanData::type_d(m);
    let pi = pi_set(&cartan, &top_dvec(cartan.rank(), m + 1, d as i64))?;
    let sum = schur_dimension(&cartan, &pi)?;
    let sum_squares: u64 = sum.try_into().map_err(|_| CliError::Resource("sum of squares exceeds u64".into()))?;
    let report = DimCheckReport { dim_c, sum_squares, matches: dim_c as u64 == sum_squares };
    if let Some(path) = &cache_file {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), reason: e.to_string() })?;
        }
        let body = serde_json::to_string(&report).expect("report serializes");
        fs::write(path, body).map_err(|e| CliError::Io { path: path.clone(), reason: e.to_string() })?;
    }
    let ok = report.matches;
    Ok(Outcome::json(&report, ok))
}

fn pi(shape: &ShapeArgs, dvec: Option<&[i64]>, orbits: bool) -> Result<Outcome, CliError> {
    let cartan = match resolve(shape)? {
        Resolved::D(m) => CartanData::type_d(m),
        Resolved::A(n) => CartanData::type_a(n),
    };
    let dvec = match dvec {
        Some(v) => v.to_vec(),
        None => top_dvec(cartan.rank(), cartan.rank() - 1, shape.d as i64),
    };
    if dvec.len() != cartan.rank() || dvec.iter().any(|&x| x < 0) {
        return Err(CliError::Usage(format!("--dvec needs {} nonnegative entries", cartan.rank())));
    }
    let pi = pi_set(&cartan, &dvec)?;
    let mut elements = Vec::new();
    for el in &pi {
        let mut entry = json!({
            "lambda": el.lambda.0,
            "nu": el.nu,
            "dim": weyl_dim(&cartan, &el.lambda)?.to_string(),
        });
        if orbits {
            entry["orbit_size"] = json!(weyl_orbit(&cartan, &el.lambda)?.len());
        }
        elements.push(entry);
    }
    let saturated = check_saturation(&cartan, &pi);
    let report = json!({
        "nodes": cartan.names(),
        "dvec": dvec,
        "pi": elements,
        "schur_dimension": schur_dimension(&cartan, &pi)?.to_string(),
        "saturated": saturated,
    });
    Ok(Outcome::json(&report, saturated))
}

fn weight_check(cli: &Cli, f: &FieldShape) -> Result<Outcome, CliError> {
    let alg = build_algebra(cli, f)?;
    let gens = GeneratorSet::build(&alg)?;
    let violations = weight_action_check_with(&alg, &gens);
    let ok = violations.is_empty();
    Ok(Outcome::json(&json!({ "violations": violations }), ok))
}

fn strata(cli: &Cli, shape: &ShapeArgs, primes: &[u64]) -> Result<Outcome, CliError> {
    let Resolved::D(m) = resolve(shape)? else {
        return Err(CliError::Usage("strata needs type D".into()));
    };
    let rows = stratum_table(m, shape.d, primes, cli.max_flags)?;
    let ok = rows.iter().all(|r| degree_matches(r) && r.dim_y.is_some());
    Ok(Outcome { body: stratum_csv(&rows)?, ok })
}

fn parse_nu(s: &str) -> Result<DimVector, CliError> {
    s.split([';', ','])
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad --nu {s:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(DimVector)
}

fn count(cli: &Cli, f: &FieldShape, nu: Option<&str>, enumerate: bool) -> Result<Outcome, CliError> {
    let Resolved::D(m) = resolve(&f.shape)? else {
        return Err(CliError::Usage("count needs type D".into()));
    };
    let d = f.shape.d;
    let wanted = nu.map(parse_nu).transpose()?;
    let strata = crate::flagvar::all_strata(m, d);
    let flags = if enumerate {
        Some(enumerate_x_cached(QuiverShape::new(m)?, d, f.q, cli.max_flags, cli.cache_dir.as_deref())?)
    } else {
        None
    };
    let mut ok = true;
    let mut rows = Vec::new();
    for s in strata.iter().filter(|s| wanted.as_ref().is_none_or(|w| &s.nu == w)) {
        let closed = stratum_count(s, d, f.q);
        let mut row = json!({ "nu": s.nu.0, "c": s.c.iter().rev().collect::<Vec<_>>(), "count": closed.to_string() });
        if let Some(fl) = &flags {
            let n = fl.by_stratum().get(s).map_or(0, |r| r.len());
            ok &= closed == n.into();
            row["enumerated"] = json!(n.to_string());
        }
        rows.push(row);
    }
    let total: num_bigint::BigUint = strata
        .iter()
        .filter(|s| wanted.as_ref().is_none_or(|w| &s.nu == w))
        .map(|s| stratum_count(s, d, f.q))
        .sum();
    let mut report = json!({ "m": m, "d": d, "q": f.q, "total": total.to_string(), "strata": rows });
    if let Some(fl) = &flags {
        let n = match &wanted {
            Some(w) => fl.by_nu().get(w).map_or(0, |r| r.len()),
            None => fl.len(),
        };
        ok &= total == n.into();
        report["enumerated_total"] = json!(n.to_string());
    }
    Ok(Outcome::json(&report, ok))
}

#[derive(Serialize)]
struct TypeAReport {
    n: usize,
    d: usize,
    q: u64,
    flags: usize,
    relations_ok: bool,
    dim_closure: usize,
    matrix_count: u64,
    #[serde(rename = "match")]
    matches: bool,
}

fn type_a_baseline(cli: &Cli, n: usize, d: usize, q: u64) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(CliError::Usage("typeA-baseline needs --n >= 2".into()));
    }
    let alg = ConvAlgebra::new(enumerate_flags_type_a(n - 1, d, q, cli.max_flags)?);
    let gens = GeneratorSet::build(&alg)?;
    let relations_ok = check_relations_with(&alg, &gens)?.is_clean();
    let dim_closure = closure_dimension(&alg, &gens.all(), cli.max_basis)?;
    let matrix_count = nat_matrices_with_sum(n, d as u64);
    let matches = dim_closure as u64 == matrix_count;
    let report = TypeAReport { n, d, q, flags: alg.size(), relations_ok, dim_closure, matrix_count, matches };
    Ok(Outcome::json(&report, matches && relations_ok))
}
