use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use lsfactor::abelian::{factor_set, gauss_gamma, lambda_factor};
use lsfactor::characters::{AddChar, MulChar};
use lsfactor::hecke::{functional_equation_sides, CrudeCase, HeckeChar, PolyRing};
use lsfactor::localfield::{LocalField, QuadEtale, QuadKind};
use lsfactor::lscoeff::{
    classical_coefficient, gamma_pair, local_factors, random_datum, GroupTag, InducingDatum,
};
use lsfactor::satake::{
    satake_l_factors, unramified_identity_sides, unramified_l, Rep, SatakeClass,
};
use lsfactor::scalar::CycScalar;
use lsfactor::suites::{self, SuiteReport};
use lsfactor::Error;

#[derive(Parser)]
#[command(
    name = "lsfactor",
    version,
    about = "Exact local factors over local function fields"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// γ(s, χ, ψ) of a character of F_q((t))^×.
    Gamma(CharArgs),
    /// γ, L, the dual L and ε of a character.
    Eps(CharArgs),
    /// Tempered L- and ε-factors of a principal series datum.
    Lfun(DatumArgs),
    /// λ(E/F, ψ) for a quadratic étale algebra.
    Lambda(LambdaArgs),
    /// The local coefficient and its two γ-factors.
    Coeff(DatumArgs),
    /// Unramified L-factors from Satake parameters.
    Satake(SatakeArgs),
    /// Dirichlet characters mod a polynomial and their functional equations.
    Hecke(HeckeArgs),
    /// Functional equations for every primitive character of small modulus.
    Sweep(SweepArgs),
    /// Run a randomized identity suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Residue field size.
    #[arg(long)]
    q: u64,
    /// Largest conductor the coefficient field must support.
    #[arg(long, default_value_t = 3)]
    conductor: usize,
    /// Additive character, `level=L`.
    #[arg(long, default_value = "level=0")]
    psi: String,
}

#[derive(Args)]
struct CharArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// `trivial`, `unramified:a/b`, `random:m=M,seed=S`, a JSON character, or `@file`.
    #[arg(long = "char", default_value = "trivial")]
    chi: String,
}

#[derive(Args)]
struct DatumArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// GL, SO_odd, Sp, SO_even, U_even or U_odd.
    #[arg(long)]
    group: String,
    /// Rank `n` (for GL, the first block size).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Second block size for GL.
    #[arg(long, default_value_t = 1)]
    n2: usize,
    /// Quadratic algebra for unitary groups.
    #[arg(long, default_value = "unramified")]
    kind: String,
    /// Seed of the random inducing datum.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest conductor of the inducing characters.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Largest segment length.
    #[arg(long, default_value_t = 1)]
    max_a: usize,
    /// Largest half-integral twist, in halves.
    #[arg(long, default_value_t = 0)]
    max_u2: i64,
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    kind: String,
    #[arg(long, default_value = "level=0")]
    psi: String,
}

#[derive(Args)]
struct SatakeArgs {
    #[arg(long)]
    q: u64,
    /// std, tensor, sym2, ext2 or asai: L-factor of the class given by `--x`.
    #[arg(long)]
    rep: Option<String>,
    /// Eigenvalues as `a/b` roots of unity, comma separated.
    #[arg(long)]
    x: Option<String>,
    /// Second eigenvalue list for tensor and Asai.
    #[arg(long)]
    y: Option<String>,
    /// Apply the swap θ in the Asai representation.
    #[arg(long)]
    theta: bool,
    /// Instead of a class: the group of a random unramified datum.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value = "unramified")]
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct HeckeArgs {
    #[arg(long)]
    q: u64,
    /// Modulus, e.g. `t^3 + t`.
    #[arg(long)]
    modulus: String,
    /// List the primitive characters.
    #[arg(long)]
    list: bool,
    /// Index into the list of primitive characters.
    #[arg(long)]
    char_index: Option<usize>,
    /// Check the functional equation of the chosen character.
    #[arg(long)]
    verify_fe: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated field sizes.
    #[arg(long, default_value = "2,3")]
    q: String,
    #[arg(long, default_value_t = 3)]
    maxdeg: usize,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// abelian, oracle, lambda, coeff, localfe, unramified, asai, tempered, hecke, crude, segments or all.
    suite: String,
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Comma-separated field sizes; each suite has its own default.
    #[arg(long)]
    q: Option<String>,
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::Invalid(msg.into()).into()
}

fn parse_level(s: &str) -> anyhow::Result<i64> {
    let v = s.strip_prefix("level=").unwrap_or(s);
    v.parse()
        .map_err(|_| invalid(format!("bad additive character '{s}'")))
}

fn parse_qs(s: &str) -> anyhow::Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| invalid(format!("bad field size '{x}'")))
        })
        .collect()
}

fn root(field: &LocalField, s: &str) -> anyhow::Result<CycScalar> {
    let (a, b) = s
        .split_once('/')
        .ok_or_else(|| invalid(format!("expected a/b, got '{s}'")))?;
    let a: i64 = a
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad numerator in '{s}'")))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad denominator in '{s}'")))?;
    Ok(CycScalar::root_of_unity_of_order(field.cyc(), b, a)?)
}

fn roots(field: &LocalField, s: &str) -> anyhow::Result<Vec<CycScalar>> {
    s.split(',').map(|x| root(field, x)).collect()
}

fn field_of(args: &FieldArgs) -> anyhow::Result<(LocalField, AddChar)> {
    let f = suites::test_field(args.q, args.conductor)?;
    let psi = AddChar::with_level(&f, parse_level(&args.psi)?);
    Ok((f, psi))
}

fn parse_char(f: &LocalField, text_or_path: &str) -> anyhow::Result<MulChar> {
    if text_or_path == "trivial" {
        return Ok(MulChar::trivial(f));
    }
    if let Some(w) = text_or_path.strip_prefix("unramified:") {
        return Ok(MulChar::unramified(f, root(f, w)?));
    }
    if let Some(rest) = text_or_path.strip_prefix("random:") {
        let (mut m, mut seed) = (1usize, 0u64);
        for kv in rest.split(',') {
            match kv.split_once('=') {
                Some(("m", v)) => {
                    m = v
                        .parse()
                        .map_err(|_| invalid(format!("bad conductor '{v}'")))?
                }
                Some(("seed", v)) => {
                    seed = v.parse().map_err(|_| invalid(format!("bad seed '{v}'")))?
                }
                _ => return Err(invalid(format!("bad random character field '{kv}'"))),
            }
        }
        return Ok(MulChar::random_unitary(
            f,
            m,
            &mut ChaCha8Rng::seed_from_u64(seed),
        )?);
    }
    let text = match text_or_path.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?,
        None => text_or_path.to_string(),
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| invalid(format!("character JSON: {e}")))?;
    Ok(MulChar::from_json(f, &v)?)
}

fn parse_group(
    f: &LocalField,
    name: &str,
    n: usize,
    n2: usize,
    kind: &str,
) -> anyhow::Result<GroupTag> {
    let e = || -> anyhow::Result<QuadEtale> { Ok(QuadEtale::new(f, QuadKind::parse(kind)?)?) };
    Ok(match name {
        "GL" => GroupTag::Gl(n, n2),
        "SO_odd" => GroupTag::SoOdd(n),
        "Sp" => GroupTag::Sp(n),
        "SO_even" => GroupTag::SoEven(n),
        "U_even" => GroupTag::UEven(n, e()?),
        "U_odd" => GroupTag::UOdd(n, e()?),
        _ => return Err(invalid(format!("unknown group '{name}'"))),
    })
}

fn datum_of(args: &DatumArgs) -> anyhow::Result<(GroupTag, InducingDatum, AddChar)> {
    let conductor = args.field.conductor.max(args.m);
    let f = suites::test_field(args.field.q, conductor)?;
    let psi = AddChar::with_level(&f, parse_level(&args.field.psi)?);
    let g = parse_group(&f, &args.group, args.n, args.n2, &args.kind)?;
    let d = random_datum(
        &g,
        &f,
        args.m,
        args.max_a,
        args.max_u2,
        &mut ChaCha8Rng::seed_from_u64(args.seed),
    )?;
    Ok((g, d, psi))
}

fn with_schema(kind: &str, body: Value) -> Value {
    let mut out = json!({ "schema": format!("lsfactor/{kind}/v1") });
    if let (Some(o), Value::Object(b)) = (out.as_object_mut(), body) {
        o.extend(b);
    }
    out
}

fn run_gamma(args: &CharArgs) -> anyhow::Result<Value> {
    let (f, psi) = field_of(&args.field)?;
    let chi = parse_char(&f, &args.chi)?;
    let g = gauss_gamma(&chi, &psi)?;
    Ok(with_schema(
        "gamma",
        json!({ "q": f.q(), "char": chi.to_json(), "psi": psi.to_json(), "gamma": g.to_json(), "display": g.to_string() }),
    ))
}

fn run_eps(args: &CharArgs) -> anyhow::Result<Value> {
    let (f, psi) = field_of(&args.field)?;
    let chi = parse_char(&f, &args.chi)?;
    let set = factor_set(&chi, &psi)?;
    Ok(with_schema(
        "eps",
        json!({ "q": f.q(), "char": chi.to_json(), "psi": psi.to_json(), "factors": set.to_json() }),
    ))
}

fn run_lfun(args: &DatumArgs) -> anyhow::Result<Value> {
    let (g, d, psi) = datum_of(args)?;
    let lfs = local_factors(&g, &d, &psi)?;
    Ok(with_schema(
        "lfun",
        json!({ "group": g.name(), "datum": d.to_json(), "psi": psi.to_json(), "factors": lfs.iter().map(|x| x.to_json()).collect::<Vec<_>>() }),
    ))
}

fn run_coeff(args: &DatumArgs) -> anyhow::Result<Value> {
    let (g, d, psi) = datum_of(args)?;
    let c = classical_coefficient(&g, &d, &psi)?;
    let pair = gamma_pair(&g, &d, &psi)?;
    let gammas = vec![pair.gamma1.to_json(), pair.gamma2.to_json()];
    Ok(with_schema(
        "coeff",
        json!({ "group": g.name(), "datum": d.to_json(), "psi": psi.to_json(), "coefficient": c.to_json(), "display": c.to_string(), "gammas": gammas }),
    ))
}

fn run_lambda(args: &LambdaArgs) -> anyhow::Result<Value> {
    let f = suites::test_field(args.q, 1)?;
    let psi = AddChar::with_level(&f, parse_level(&args.psi)?);
    let e = QuadEtale::new(&f, QuadKind::parse(&args.kind)?)?;
    let lam = lambda_factor(&e, &psi)?;
    Ok(with_schema(
        "lambda",
        json!({ "q": f.q(), "algebra": e.to_json(), "psi": psi.to_json(), "lambda": lam.to_json() }),
    ))
}

fn run_satake(args: &SatakeArgs) -> anyhow::Result<Value> {
    let f = suites::test_field(args.q, 1)?;
    if let Some(rep) = &args.rep {
        let rep = Rep::parse(rep)?;
        let x = roots(
            &f,
            args.x
                .as_deref()
                .ok_or_else(|| invalid("--x is required with --rep"))?,
        )?;
        let cls = match &args.y {
            Some(y) => SatakeClass::pair(x, roots(&f, y)?, args.theta),
            None => SatakeClass::new(x),
        };
        let l = unramified_l(&cls, rep)?;
        return Ok(with_schema(
            "satake",
            json!({ "rep": rep.name(), "class": cls.to_json(), "L": l.to_json(), "display": l.to_string() }),
        ));
    }
    let name = args
        .group
        .as_deref()
        .ok_or_else(|| invalid("either --rep or --group is required"))?;
    let g = parse_group(&f, name, args.n, 2, &args.kind)?;
    let d = random_datum(&g, &f, 0, 1, 0, &mut ChaCha8Rng::seed_from_u64(args.seed))?;
    let psi = AddChar::standard(&f);
    let ls = satake_l_factors(&g, &d, &f)?;
    let (lhs, rhs) = unramified_identity_sides(&g, &d, &psi)?;
    Ok(with_schema(
        "satake",
        json!({ "group": g.name(), "datum": d.to_json(), "L": ls.iter().map(|x| x.to_json()).collect::<Vec<_>>(), "identity_ok": lhs == rhs }),
    ))
}

fn run_hecke(args: &HeckeArgs) -> anyhow::Result<Value> {
    let ring = PolyRing::new(args.q)?;
    let m = ring.parse(&args.modulus)?;
    let chars = HeckeChar::enumerate_primitive(&ring, &m)?;
    let listing = |i: usize, c: &HeckeChar| json!({ "index": i, "even": c.is_even(), "character": c.to_json() });
    if args.list || args.char_index.is_none() {
        let list: Vec<Value> = chars
            .iter()
            .enumerate()
            .map(|(i, c)| listing(i, c))
            .collect();
        return Ok(with_schema(
            "hecke-list",
            json!({ "q": args.q, "modulus": ring.format(&m), "count": list.len(), "characters": list }),
        ));
    }
    let i = args.char_index.expect("checked above");
    let chi = chars
        .get(i)
        .ok_or_else(|| invalid(format!("only {} primitive characters", chars.len())))?;
    let mut body = listing(i, chi);
    if chi.is_trivial() {
        return Err(invalid(
            "the trivial character has no completed L-polynomial",
        ));
    }
    let cyc = chi.context(&[])?;
    let adelic = chi.localize(&cyc, &[])?;
    let completed = adelic.completed_l()?;
    let eps = adelic.epsilon()?;
    body["L"] = json!(completed
        .num()
        .coeffs()
        .iter()
        .map(|c| c.to_json())
        .collect::<Vec<_>>());
    body["L_finite"] = chi.l_function(&cyc)?.to_json();
    body["eps"] = eps.to_json();
    if args.verify_fe {
        let (lhs, rhs) = functional_equation_sides(chi)?;
        body["fe_ok"] = json!(lhs == rhs);
    }
    Ok(with_schema("hecke", body))
}

fn suite_rows(reports: &[SuiteReport]) -> Value {
    json!({
        "pass": reports.iter().all(|r| r.passed()),
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    })
}

fn run_sweep(args: &SweepArgs) -> anyhow::Result<Value> {
    let qs = parse_qs(&args.q)?;
    let reports = qs
        .par_iter()
        .map(|&q| suites::hecke_suite(q, args.maxdeg))
        .collect::<lsfactor::Result<Vec<_>>>()?;
    let out = with_schema("sweep", suite_rows(&reports));
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&out)? + "\n")
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

type Job = Box<dyn Fn() -> lsfactor::Result<SuiteReport> + Send + Sync>;

fn verify_jobs(
    suite: &str,
    cases: usize,
    seed: u64,
    qs: Option<Vec<u64>>,
) -> anyhow::Result<Vec<Job>> {
    let qs_or = |d: &[u64]| qs.clone().unwrap_or_else(|| d.to_vec());
    let mut jobs: Vec<Job> = Vec::new();
    match suite {
        "abelian" => qs_or(&[2, 3, 4, 5])
            .into_iter()
            .for_each(|q| jobs.push(Box::new(move || suites::abelian_suite(q, cases, seed)))),
        "oracle" => qs_or(&[2, 3, 4, 5])
            .into_iter()
            .for_each(|q| jobs.push(Box::new(move || suites::oracle_suite(q, cases, seed)))),
        "lambda" => {
            for q in qs_or(&[3, 5]) {
                for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
                    jobs.push(Box::new(move || suites::lambda_suite(q, kind, cases, seed)));
                }
            }
        }
        "coeff" => qs_or(&[3, 5])
            .into_iter()
            .for_each(|q| jobs.push(Box::new(move || suites::coefficient_suite(q, cases, seed)))),
        "localfe" => {
            for q in qs_or(&[3]) {
                for v in 0..suites::variant_count(q)? {
                    jobs.push(Box::new(move || suites::local_fe_suite(q, v, cases, seed)));
                }
            }
        }
        "unramified" => {
            for q in qs_or(&[2, 3]) {
                for v in 0..suites::UNRAMIFIED_VARIANTS {
                    jobs.push(Box::new(move || {
                        suites::unramified_suite(q, v, cases, seed)
                    }));
                }
            }
        }
        "asai" => qs_or(&[3])
            .into_iter()
            .for_each(|q| jobs.push(Box::new(move || suites::asai_suite(q, cases, seed)))),
        "tempered" => qs_or(&[3])
            .into_iter()
            .for_each(|q| jobs.push(Box::new(move || suites::tempered_suite(q, cases, seed)))),
        "hecke" => {
            for q in qs_or(&[2, 3]) {
                let deg = if q == 2 { 4 } else { 3 };
                jobs.push(Box::new(move || suites::hecke_suite(q, deg)));
            }
        }
        "crude" => {
            for case in [
                CrudeCase::Sl2,
                CrudeCase::So3,
                CrudeCase::Gl11,
                CrudeCase::UEven,
                CrudeCase::UOdd,
            ] {
                jobs.push(Box::new(move || suites::crude_suite(case, cases)));
            }
        }
        "segments" => qs_or(&[3, 5])
            .into_iter()
            .for_each(|q| jobs.push(Box::new(move || suites::segment_suite(q, 3, seed)))),
        "all" => {
            for s in [
                "abelian",
                "oracle",
                "lambda",
                "coeff",
                "localfe",
                "unramified",
                "asai",
                "tempered",
                "hecke",
                "crude",
                "segments",
            ] {
                jobs.extend(verify_jobs(s, cases, seed, qs.clone())?);
            }
        }
        _ => return Err(invalid(format!("unknown suite '{suite}'"))),
    }
    Ok(jobs)
}

fn run_verify(args: &VerifyArgs) -> anyhow::Result<Value> {
    let qs = args.q.as_deref().map(parse_qs).transpose()?;
    let jobs = verify_jobs(&args.suite, args.cases, args.seed, qs)?;
    let reports = jobs
        .par_iter()
        .map(|j| j())
        .collect::<lsfactor::Result<Vec<_>>>()?;
    Ok(with_schema(
        "verify",
        json!({ "suite": args.suite, "seed": args.seed, "report": suite_rows(&reports) }),
    ))
}

fn table(v: &Value) -> String {
    let rows: Vec<(String, String)> = match v.as_object() {
        Some(o) => o
            .iter()
            .map(|(k, x)| {
                (
                    k.clone(),
                    x.as_str()
                        .map(str::to_string)
                        .unwrap_or_else(|| x.to_string()),
                )
            })
            .collect(),
        None => vec![(String::new(), v.to_string())],
    };
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|(k, x)| format!("{k:<width$}  {x}\n"))
        .collect()
}

fn suite_failed(v: &Value) -> bool {
    let report = v.get("report").unwrap_or(v);
    report.get("pass").and_then(Value::as_bool) == Some(false)
        || v.get("fe_ok").and_then(Value::as_bool) == Some(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("LSFACTOR_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let result = match &cli.command {
        Command::Gamma(a) => run_gamma(a),
        Command::Eps(a) => run_eps(a),
        Command::Lfun(a) => run_lfun(a),
        Command::Lambda(a) => run_lambda(a),
        Command::Coeff(a) => run_coeff(a),
        Command::Satake(a) => run_satake(a),
        Command::Hecke(a) => run_hecke(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(v) => {
            let text = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
                }
                Format::Table => table(&v),
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            if suite_failed(&v) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let (code, kind) = match e.downcast_ref::<Error>() {
                Some(Error::Invariant(_)) => (2, "invariant"),
                Some(_) => (1, "precondition"),
                None => (1, "input"),
            };
            let doc =
                json!({ "schema": "lsfactor/error/v1", "kind": kind, "message": e.to_string() });
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("JSON values serialize")
            );
            ExitCode::from(code)
        }
    }
}
