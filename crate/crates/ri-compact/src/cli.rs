//! Command-line front end: JSON in, JSON/CSV out, with versioned schemas and
//! stable exit codes.
//!
//! Exit codes: 0 success, 2 schema/validation error, 3 query outside the
//! decision tables, 4 numerical budget exhausted. Malformed input produces no
//! partial output — documents are assembled in memory and written whole.

use crate::classify::{self, Compactness, EmbeddingQuery};
use crate::isoperimetry::{self, DomainSpec, PhiFamily};
use crate::kernelops::{self, OperatorSpec, ProfileJ};
use crate::probes::{self, ProbeConfig, ProbeCurve};
use crate::rinorm::{self, Exactness, SpaceSpec};
use crate::stepfn::{Grid, StepFunction};
use crate::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

pub const SCHEMA: &str = "ri-compact/1";
/// Env var overriding the default output-grid resolution.
pub const GRID_ENV: &str = "RI_COMPACT_GRID";

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_OUT_OF_SCOPE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ri-compact", version, about = "Compactness calculus for kernel operators between rearrangement-invariant spaces on (0,1)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide compactness of an embedding query symbolically
    Classify(IoArgs),
    /// Numerically probe a cutoff norm curve for an operator
    Probe(ProbeArgs),
    /// Evaluate a norm of a step function
    Norm(IoArgs),
    /// Apply a kernel operator to a step function
    Apply(IoArgs),
    /// Print profile tables for a domain
    Domain(IoArgs),
    /// Run the built-in invariant suites
    Selftest {
        /// Suite: all | norms | kernels | classify | domains
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Input JSON file path (`-` for stdin)
    #[arg(short = 'i', long = "input")]
    input: Option<PathBuf>,
    /// Inline input JSON (alternative to -i)
    #[arg(long = "json")]
    json: Option<String>,
    /// Output file path (stdout when omitted)
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Override the sampling-grid resolution
    #[arg(long)]
    grid: Option<usize>,
    /// Override the search seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::OutOfScope(_) => EXIT_OUT_OF_SCOPE,
        Error::BudgetExhausted { .. } | Error::Divergent(_) => EXIT_BUDGET,
        _ => EXIT_SCHEMA,
    }
}

fn read_input(io: &IoArgs) -> Result<Value, Error> {
    let text = match (&io.json, &io.input) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) if path.as_os_str() == "-" => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::schema("input", format!("stdin read failed: {e}")))?;
            buf
        }
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::schema("input", format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            return Err(Error::schema("input", "provide -i FILE or --json '<doc>'"));
        }
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::schema("input", format!("malformed JSON: {e}")))?;
    check_schema_field(&v)?;
    Ok(v)
}

fn check_schema_field(v: &Value) -> Result<(), Error> {
    if let Some(s) = v.get("schema") {
        let s = s
            .as_str()
            .ok_or_else(|| Error::schema("schema", "must be a string"))?;
        if s != SCHEMA {
            return Err(Error::schema(
                "schema",
                format!("unsupported version `{s}` (expected `{SCHEMA}`)"),
            ));
        }
    }
    Ok(())
}

fn field<'a>(v: &'a Value, names: &[&str]) -> Result<&'a Value, Error> {
    for n in names {
        if let Some(x) = v.get(*n) {
            return Ok(x);
        }
    }
    Err(Error::schema(names[0], "missing required field"))
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, name: &str) -> Result<T, Error> {
    serde_json::from_value(v.clone()).map_err(|e| Error::schema(name, e.to_string()))
}

/// Step functions come in as `{breakpoints, values}`; route them through the
/// validating constructor rather than trusting the raw record.
fn parse_step(v: &Value, name: &str) -> Result<StepFunction, Error> {
    #[derive(serde::Deserialize)]
    struct Raw {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    }
    let raw: Raw = parse(v, name)?;
    StepFunction::new(raw.breakpoints, raw.values)
        .map_err(|e| Error::schema(name, e.to_string()))
}

fn default_grid_cells() -> usize {
    std::env::var(GRID_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 4)
        .unwrap_or(64)
}

fn write_output(io: &IoArgs, doc: &str) -> Result<(), Error> {
    match &io.output {
        Some(path) => std::fs::write(path, doc)
            .map_err(|e| Error::schema("output", format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{doc}");
            Ok(())
        }
    }
}

fn exactness_json(e: &Exactness) -> Value {
    match e {
        Exactness::Exact => json!({"tag": "exact"}),
        Exactness::Quadrature(b) => json!({"tag": "quadrature", "error_bound": b}),
        Exactness::LowerBound => json!({"tag": "lower_bound"}),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_classify(io: &IoArgs) -> Result<i32, Error> {
    let v = read_input(io)?;
    let query = EmbeddingQuery {
        domain: parse(field(&v, &["domain"])?, "domain")?,
        m: field(&v, &["m"])?
            .as_u64()
            .ok_or_else(|| Error::schema("m", "expected a positive integer"))? as u32,
        x: parse(field(&v, &["X", "x"])?, "X")?,
        y: parse(field(&v, &["Y", "y"])?, "Y")?,
    };
    query.validate().map_err(|e| Error::schema("query", e.to_string()))?;
    let verdict = classify::classify(&query)?;
    let mut doc = serde_json::to_value(&verdict).expect("verdict serializes");
    doc["schema"] = json!(SCHEMA);
    write_output(io, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(if verdict.compact == Compactness::OutOfScope {
        EXIT_OUT_OF_SCOPE
    } else {
        EXIT_OK
    })
}

fn curve_csv(curve: &ProbeCurve) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["a", "lower_bound", "estimate", "citation"])
        .and_then(|_| {
            curve.points.iter().try_for_each(|p| {
                w.write_record([
                    format!("{:.12e}", p.a),
                    format!("{:.12e}", p.lower_bound),
                    format!("{:.12e}", p.estimate),
                    curve.citation.clone(),
                ])
            })
        })
        .map_err(|e| Error::schema("output", e.to_string()))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::schema("output", e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::schema("output", e.to_string()))
}

fn cmd_probe(args: &ProbeArgs) -> Result<i32, Error> {
    let v = read_input(&args.io)?;
    let op: OperatorSpec = parse(field(&v, &["op", "operator"])?, "op")?;
    let x: SpaceSpec = parse(field(&v, &["X", "x"])?, "X")?;
    let y: SpaceSpec = parse(field(&v, &["Y", "y"])?, "Y")?;
    let mut cfg: ProbeConfig = match v.get("config") {
        Some(c) => parse(c, "config")?,
        None => ProbeConfig::default(),
    };
    if v.get("config").is_none() {
        cfg.grid_cells = default_grid_cells();
    }
    if let Some(g) = args.grid {
        cfg.grid_cells = g;
    }
    if let Some(s) = args.seed {
        cfg.budget.seed = s;
    }
    let mode = v.get("mode").and_then(|m| m.as_str()).unwrap_or("cutoff_domain");
    let curve = match mode {
        "cutoff_domain" => probes::probe_cutoff_domain(&x, &y, &op, &cfg)?,
        "cutoff_range" => probes::probe_cutoff_range(&x, &y, &op, &cfg)?,
        other => {
            return Err(Error::schema(
                "mode",
                format!("unknown mode `{other}` (cutoff_domain | cutoff_range)"),
            ));
        }
    };
    let format = args.format.unwrap_or_else(|| {
        match &args.io.output {
            Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
            Some(_) => Format::Csv,
            None => Format::Csv,
        }
    });
    let doc = match format {
        Format::Csv => curve_csv(&curve)?,
        Format::Json => {
            let mut d = serde_json::to_value(&curve).expect("curve serializes");
            d["schema"] = json!(SCHEMA);
            serde_json::to_string_pretty(&d).unwrap()
        }
    };
    write_output(&args.io, &doc)?;
    Ok(if curve.points.iter().all(|p| p.budget_ok) {
        EXIT_OK
    } else {
        EXIT_BUDGET
    })
}

fn cmd_norm(io: &IoArgs) -> Result<i32, Error> {
    let v = read_input(io)?;
    let space: SpaceSpec = parse(field(&v, &["space", "X", "x"])?, "space")?;
    let f = parse_step(field(&v, &["f"])?, "f")?;
    let nv = rinorm::norm(&space, &f)?;
    let doc = json!({
        "schema": SCHEMA,
        "value": nv.value,
        "exactness": exactness_json(&nv.exactness),
    });
    write_output(io, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(EXIT_OK)
}

fn cmd_apply(io: &IoArgs) -> Result<i32, Error> {
    let v = read_input(io)?;
    let op: OperatorSpec = parse(field(&v, &["op", "operator"])?, "op")?;
    let f = parse_step(field(&v, &["f"])?, "f")?;
    let cells = v
        .get("grid")
        .and_then(|g| g.as_u64())
        .map(|g| g as usize)
        .unwrap_or_else(default_grid_cells);
    let grid = Grid::geometric(cells, 1e-8);
    let image = kernelops::apply(&op, &f, &grid)?;
    let doc = json!({
        "schema": SCHEMA,
        "f": serde_json::to_value(&image).expect("step function serializes"),
        "exactness": {"tag": if op.is_downstream() { "exact" } else { "quadrature" }},
    });
    write_output(io, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(EXIT_OK)
}

fn cmd_domain(io: &IoArgs) -> Result<i32, Error> {
    let v = read_input(io)?;
    let domain: DomainSpec = parse(field(&v, &["domain"])?, "domain")?;
    domain.validate().map_err(|e| Error::schema("domain", e.to_string()))?;
    let points = v
        .get("points")
        .and_then(|p| p.as_u64())
        .map(|p| p as usize)
        .unwrap_or(24);
    let profile = domain.canonical_profile()?;
    let grid = Grid::geometric(points, 1e-6);
    let mut rows = Vec::new();
    for &t in grid.breakpoints().iter().filter(|&&t| t > 0.0) {
        let mut row = json!({"t": t, "i": profile.eval(t)});
        if let DomainSpec::Product { phi, .. } = &domain {
            row["l_phi"] = json!(isoperimetry::l_phi(phi, t));
        }
        rows.push(row);
    }
    let mut doc = json!({
        "schema": SCHEMA,
        "domain": serde_json::to_value(&domain).expect("domain serializes"),
        "profile": rows,
    });
    match &domain {
        DomainSpec::Product { phi, .. } => {
            doc["regime"] = match isoperimetry::phi_regime(phi)? {
                isoperimetry::Regime::ZeroLimit => json!("zero_limit"),
                isoperimetry::Regime::PositiveLimit(c) => json!({"positive_limit": c}),
            };
            if let PhiFamily::Gauss = phi.family {
                doc["c_phi"] = json!(phi.c_phi());
            }
        }
        DomainSpec::MazyaModel { alpha, n } => {
            let model = isoperimetry::mazya_model_domain(*alpha, *n)?;
            let eta: Vec<Value> = (1..=16)
                .map(|k| {
                    let r = k as f64 / 16.0;
                    json!({"r": r, "eta": model.eta(r)})
                })
                .collect();
            doc["eta"] = json!(eta);
            doc["volume"] = json!(model.volume_by_quadrature());
        }
        _ => {}
    }
    write_output(io, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// Selftest
// ---------------------------------------------------------------------------

type Check = (String, Result<(), String>);

fn checked(name: &str, r: Result<bool, Error>, detail: &str) -> Check {
    let res = match r {
        Ok(true) => Ok(()),
        Ok(false) => Err(detail.to_string()),
        Err(e) => Err(e.to_string()),
    };
    (name.to_string(), res)
}

fn suite_norms() -> Vec<Check> {
    let f = StepFunction::new(vec![0.0, 0.2, 0.7, 1.0], vec![3.0, 1.0, 2.0]).unwrap();
    let mut out = Vec::new();
    let l2 = rinorm::norm(&SpaceSpec::lebesgue(2.0), &f).map(|n| n.value);
    let lo = rinorm::norm(&SpaceSpec::lorentz(2.0, 2.0), &f).map(|n| n.value);
    out.push(checked(
        "lorentz(p,p) matches lebesgue(p)",
        l2.and_then(|a| lo.map(|b| (a - b).abs() < 1e-8 * a)),
        "norm values disagree",
    ));
    let g = f.rearrange();
    out.push(checked(
        "rearrangement preserves the L2 norm",
        rinorm::norm(&SpaceSpec::lebesgue(2.0), &g)
            .and_then(|a| rinorm::norm(&SpaceSpec::lebesgue(2.0), &f).map(|b| (a.value - b.value).abs() < 1e-10)),
        "rearranged norm moved",
    ));
    let assoc = rinorm::associate_norm(
        &SpaceSpec::lebesgue(2.0),
        &f,
        &crate::search::SearchBudget::default(),
    )
    .map(|n| n.value().value);
    let direct = rinorm::norm(&SpaceSpec::lebesgue(2.0), &f).map(|n| n.value);
    out.push(checked(
        "L2 associate search recovers the L2 norm",
        assoc.and_then(|a| direct.map(|d| (a - d).abs() < 1e-4 * d)),
        "associate search fell short",
    ));
    out
}

fn suite_kernels() -> Vec<Check> {
    let mut out = Vec::new();
    for (name, profile) in [
        ("constant profile", ProfileJ::one()),
        ("square-root profile", ProfileJ::power(0.5).unwrap()),
    ] {
        let a = 0.1;
        let f = StepFunction::indicator(0.0, a).unwrap();
        let mut ok = true;
        for j in [1u32, 2] {
            let op = OperatorSpec::H {
                profile: profile.clone(),
                j,
            };
            for &t in &[0.01, 0.05, 0.3, 0.9] {
                let got = kernelops::eval_point(&op, &f, t).unwrap_or(f64::NAN);
                let want = kernelops::char_closed_form(&profile, j, a, t);
                let scale = want.abs().max(1.0);
                if (got - want).abs() > 1e-9 * scale {
                    ok = false;
                }
            }
        }
        out.push(checked(
            &format!("indicator image closed form ({name})"),
            Ok(ok),
            "pointwise mismatch",
        ));
    }
    let f = StepFunction::new(vec![0.0, 0.3, 1.0], vec![2.0, 0.5]).unwrap();
    let g = StepFunction::new(vec![0.0, 0.6, 1.0], vec![1.0, 3.0]).unwrap();
    let res = kernelops::check_associate_identity(&ProfileJ::power(0.5).unwrap(), 2, &f, &g);
    out.push(checked(
        "pairing identity between downstream and upstream kernels",
        res.map(|r| r < 1e-7),
        "residual above 1e-7",
    ));
    out
}

fn suite_classify() -> Vec<Check> {
    let q = |domain, m, x, y| EmbeddingQuery { domain, m, x, y };
    let cases: Vec<(&str, EmbeddingQuery, Compactness)> = vec![
        (
            "gauss L2 into L2 is compact",
            q(
                DomainSpec::Product {
                    phi: isoperimetry::PhiSpec::gauss(),
                    n: 3,
                },
                1,
                SpaceSpec::lebesgue(2.0),
                SpaceSpec::lebesgue(2.0),
            ),
            Compactness::Yes,
        ),
        (
            "john m = n exceptional pair fails",
            q(
                DomainSpec::John { n: 2 },
                2,
                SpaceSpec::l1(),
                SpaceSpec::linfty(),
            ),
            Compactness::No,
        ),
        (
            "mazya critical pair fails at the exceptional endpoint",
            q(
                DomainSpec::MazyaClass { alpha: 0.5, n: 2 },
                2,
                SpaceSpec::l1(),
                SpaceSpec::linfty(),
            ),
            Compactness::No,
        ),
        (
            "mazya subcritical L1 target window",
            q(
                DomainSpec::MazyaClass { alpha: 0.5, n: 2 },
                1,
                SpaceSpec::l1(),
                SpaceSpec::lebesgue(1.5),
            ),
            Compactness::Yes,
        ),
    ];
    cases
        .into_iter()
        .map(|(name, query, want)| {
            checked(
                name,
                classify::classify(&query).map(|v| v.compact == want),
                "verdict disagrees with the table",
            )
        })
        .collect()
}

fn suite_domains() -> Vec<Check> {
    let mut out = Vec::new();
    let gauss = isoperimetry::PhiSpec::gauss();
    out.push(checked(
        "gaussian profile constant",
        Ok((gauss.c_phi() - (2.0 * std::f64::consts::PI).sqrt().recip()).abs() < 1e-10),
        "c_phi off",
    ));
    let model = isoperimetry::mazya_model_domain(0.5, 2);
    out.push(checked(
        "mazya model volume: closed form vs quadrature",
        model.map(|m| {
            let q = m.volume_by_quadrature();
            (q - m.level_volume(0.0)).abs() < 1e-6 * m.level_volume(0.0).max(1.0)
        }),
        "volumes disagree",
    ));
    out
}

fn cmd_selftest(suite: &str) -> Result<i32, Error> {
    let mut checks: Vec<(&str, Vec<Check>)> = Vec::new();
    let want = |s: &str| suite == "all" || suite == s;
    if want("norms") {
        checks.push(("norms", suite_norms()));
    }
    if want("kernels") {
        checks.push(("kernels", suite_kernels()));
    }
    if want("classify") {
        checks.push(("classify", suite_classify()));
    }
    if want("domains") {
        checks.push(("domains", suite_domains()));
    }
    if checks.is_empty() {
        return Err(Error::schema(
            "suite",
            format!("unknown suite `{suite}` (all | norms | kernels | classify | domains)"),
        ));
    }
    let mut failures = 0usize;
    for (group, list) in &checks {
        for (name, res) in list {
            match res {
                Ok(()) => println!("PASS  [{group}] {name}"),
                Err(why) => {
                    failures += 1;
                    println!("FAIL  [{group}] {name} — {why}");
                }
            }
        }
    }
    println!(
        "{} checks, {} failed",
        checks.iter().map(|(_, l)| l.len()).sum::<usize>(),
        failures
    );
    Ok(if failures == 0 { EXIT_OK } else { 1 })
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parse `args` (including argv[0]) and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.cmd {
        Cmd::Classify(io) => cmd_classify(io),
        Cmd::Probe(args) => cmd_probe(args),
        Cmd::Norm(io) => cmd_norm(io),
        Cmd::Apply(io) => cmd_apply(io),
        Cmd::Domain(io) => cmd_domain(io),
        Cmd::Selftest { suite } => cmd_selftest(suite),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
