//! Command-line front end: generation, norms, profiles, certificates,
//! equivalence checks and inclusion queries.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morrey_core::analysis::{
    beta_windows, boundedness_bound, boundedness_certificate, divergence_bound_log2,
    divergence_certificate, inclusion_oracle, legacy_block_windows,
};
use morrey_core::discnorm::{brute_force_norm, norm, prefix_profile, NormKind, ProfilePoint};
use morrey_core::genseq::{
    choose_vw, choose_vw_legacy, generate_legacy_sequence, generate_new_sequence, parse_rational,
    snap_rational, LegacySeqSpec, NewSeqSpec, DEFAULT_TRUNCATION_CAP,
};
use morrey_core::stepfn::{continuous_norm, embed, equivalence_report};
use morrey_core::{MorreyError, MorreyParams, SparseSequence, Window};
use serde_json::{json, Value};

/// Significant digits for every printed real.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Morrey(#[from] MorreyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "morrey",
    version,
    about = "Discrete and continuous Morrey norms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a counterexample sequence as JSON.
    Gen(GenArgs),
    /// Norm of a sequence read as JSON.
    Norm(NormArgs),
    /// CSV profile of window values along the block endpoints.
    Profile(ProfileArgs),
    /// Divergence or boundedness certificate for the new sequence.
    Certify(CertifyArgs),
    /// Compare the centered, span and continuous norms against the constants.
    Equiv(EquivArgs),
    /// Decide an inclusion between two discrete Morrey spaces.
    Include(IncludeArgs),
    /// Continuous norm of the step function of a sequence.
    EmbedNorm(EmbedArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    New,
    Legacy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Span,
    Centered,
}

impl From<Kind> for NormKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Span => NormKind::Span,
            Kind::Centered => NormKind::Centered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Exact,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertKind {
    Divergence,
    Boundedness,
}

/// Accepts `1.5`, `3/2` or `2`.
fn real(s: &str) -> std::result::Result<f64, String> {
    if let Ok(x) = s.trim().parse::<f64>() {
        return Ok(x);
    }
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Sequence JSON; standard input when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    #[arg(long, value_parser = real)]
    pub p: f64,
    #[arg(long, value_parser = real)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "new")]
    pub family: Family,
    #[arg(long)]
    pub v: Option<u32>,
    #[arg(long)]
    pub w: Option<u32>,
    /// Truncation of the new sequence; the largest feasible value up to 8
    /// when absent.
    #[arg(long = "nmax")]
    pub n_max: Option<u32>,
    /// Truncation of the legacy sequence.
    #[arg(long = "kmax", default_value_t = 2)]
    pub k_max: u32,
    /// With `--p2` and `--q`, selects `v, w` when they are not given.
    #[arg(long, value_parser = real)]
    pub p1: Option<f64>,
    #[arg(long, value_parser = real)]
    pub p2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = real)]
    pub q: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub exps: ExpArgs,
    #[arg(long, value_enum, default_value = "span")]
    pub kind: Kind,
    #[arg(long, value_enum, default_value = "exact")]
    pub engine: Engine,
    /// Extra zero cells on each side for the brute engine.
    #[arg(long, default_value_t = 0)]
    pub margin: u64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub exps: ExpArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Profile a sequence from `--input` over `S*(0, m)` for these `m`
    /// instead of a generated family.
    #[arg(long, value_delimiter = ',')]
    pub ends: Vec<i128>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub kind: CertKind,
    #[arg(long)]
    pub v: u32,
    #[arg(long)]
    pub w: u32,
    #[arg(long = "nmax")]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub exps: ExpArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[command(flatten)]
    pub exps: ExpArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct IncludeArgs {
    #[arg(long, value_parser = real)]
    pub p1: f64,
    #[arg(long, value_parser = real)]
    pub q1: f64,
    #[arg(long, value_parser = real)]
    pub p2: f64,
    #[arg(long, value_parser = real)]
    pub q2: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub exps: ExpArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

/// What a command produced: text for standard output or `--output`, an
/// optional verdict summary for standard error, and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub output: Option<PathBuf>,
    pub summary: String,
    pub status: u8,
}

impl Report {
    fn new(body: String, output: Option<PathBuf>) -> Self {
        Self {
            body,
            output,
            summary: String::new(),
            status: 0,
        }
    }
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap()
}

/// Shortest decimal of `x` after rounding; `inf`, `-inf` and `nan` spelled out.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        round_sig(x).to_string()
    }
}

/// Applies [`round_sig`] to every non-integer number in a JSON document.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap());
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn render(mut v: Value) -> String {
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types always serialize")
}

fn read_sequence(path: &Option<PathBuf>, stdin: &mut dyn Read) -> CliResult<SparseSequence> {
    let (name, text) = match path {
        Some(p) => {
            let name = p.display().to_string();
            let text = fs::read_to_string(p).map_err(|source| CliError::Io {
                path: name.clone(),
                source,
            })?;
            (name, text)
        }
        None => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
            ("<stdin>".to_string(), text)
        }
    };
    SparseSequence::from_json_str(&text).map_err(|e| match e {
        MorreyError::MalformedSequence(m) => {
            MorreyError::MalformedSequence(format!("{name}: {m}")).into()
        }
        other => other.into(),
    })
}

fn params(e: &ExpArgs) -> CliResult<MorreyParams> {
    Ok(MorreyParams::new(e.p, e.q)?)
}

fn need<T>(x: Option<T>, what: &str) -> CliResult<T> {
    x.ok_or_else(|| CliError::Usage(format!("missing {what}")))
}

fn new_spec(f: &FamilyArgs, q: Option<f64>) -> CliResult<NewSeqSpec> {
    let (v, w) = match (f.v, f.w) {
        (Some(v), Some(w)) => (v, w),
        (None, None) => {
            let p1 = need(f.p1, "--v/--w or --p1/--p2/--q")?;
            let p2 = need(f.p2, "--p2")?;
            let q = need(q, "--q")?;
            MorreyParams::new(p1, q)?;
            MorreyParams::new(p2, q)?;
            let q = snap_rational(q)?;
            let (v, w) = choose_vw(q / snap_rational(p2)?, q / snap_rational(p1)?)?;
            let narrow = |x: u64| {
                u32::try_from(x).map_err(|_| CliError::Usage(format!("selected {x} does not fit")))
            };
            (narrow(v)?, narrow(w)?)
        }
        _ => return Err(CliError::Usage("give both --v and --w".into())),
    };
    Ok(match f.n_max {
        Some(n) => NewSeqSpec::new(v, w, n)?,
        None => NewSeqSpec::with_default_truncation(v, w, DEFAULT_TRUNCATION_CAP)?,
    })
}

fn legacy_spec(f: &FamilyArgs, q: Option<f64>) -> CliResult<LegacySeqSpec> {
    let (v, w) = match (f.v, f.w) {
        (Some(v), Some(w)) => (v, w),
        (None, None) => {
            let p1 = need(f.p1, "--v/--w or --p1/--p2/--q")?;
            let p2 = need(f.p2, "--p2")?;
            let q = need(q, "--q")?;
            let (v, w) = choose_vw_legacy(p1, p2, q)?;
            let narrow = |x: u64| {
                u32::try_from(x).map_err(|_| CliError::Usage(format!("selected {x} does not fit")))
            };
            (narrow(v)?, narrow(w)?)
        }
        _ => return Err(CliError::Usage("give both --v and --w".into())),
    };
    Ok(LegacySeqSpec::new(v, w, f.k_max)?)
}

fn gen(a: &GenArgs) -> CliResult<Report> {
    let (seq, metadata) = match a.family.family {
        Family::New => {
            let s = new_spec(&a.family, a.q)?;
            let meta = json!({"family": "new", "v": s.v(), "w": s.w(), "n_max": s.n_max()});
            (generate_new_sequence(&s), meta)
        }
        Family::Legacy => {
            let s = legacy_spec(&a.family, a.q)?;
            let meta = json!({"family": "legacy", "v": s.v(), "w": s.w(), "k_max": s.k_max(), "k0": s.k0()});
            (generate_legacy_sequence(&s), meta)
        }
    };
    let mut doc = seq.to_json_value();
    doc["metadata"] = metadata;
    Ok(Report::new(render(doc), a.output.clone()))
}

fn norm_cmd(a: &NormArgs, stdin: &mut dyn Read) -> CliResult<Report> {
    let seq = read_sequence(&a.io.input, stdin)?;
    let pr = params(&a.exps)?;
    let res = match a.engine {
        Engine::Exact => norm(&seq, &pr, a.kind.into())?,
        Engine::Brute => brute_force_norm(&seq, &pr, a.kind.into(), a.margin)?,
    };
    Ok(Report::new(render(to_value(&res)), a.io.output.clone()))
}

fn csv_row(n: usize, pt: &ProfilePoint, bound: Option<f64>) -> String {
    format!(
        "{n},{},{},{},{},{}\n",
        pt.cardinality,
        format_real(pt.mass),
        format_real(pt.value.value()),
        format_real(pt.value.log2()),
        bound.map(format_real).unwrap_or_default()
    )
}

fn profile(a: &ProfileArgs, stdin: &mut dyn Read) -> CliResult<Report> {
    let pr = params(&a.exps)?;
    let mut out = String::from("n,cardinality,mass,value,log2_value,bound_log2\n");
    if !a.ends.is_empty() {
        let seq = read_sequence(&a.io.input, stdin)?;
        let windows: Vec<Window> = a
            .ends
            .iter()
            .map(|&m| {
                if m < 0 {
                    Err(CliError::Usage(format!("window end {m} is negative")))
                } else {
                    Ok(Window::span(0, m as u128))
                }
            })
            .collect::<CliResult<_>>()?;
        for (i, pt) in prefix_profile(&seq, &pr, &windows).iter().enumerate() {
            out += &csv_row(i + 1, pt, None);
        }
        return Ok(Report::new(out, a.io.output.clone()));
    }
    match a.family.family {
        Family::New => {
            let spec = new_spec(&a.family, Some(a.exps.q))?;
            let (v, w) = (spec.v() as f64, spec.w() as f64);
            let seq = generate_new_sequence(&spec);
            let diverges = pr.p() < pr.q() && v / pr.q() > w / pr.p();
            let bounded = v * pr.p() < pr.q() * w;
            for (n, pt) in (1..).zip(prefix_profile(&seq, &pr, &beta_windows(&spec))) {
                let bound = if diverges {
                    Some(divergence_bound_log2(&spec, &pr, n))
                } else if bounded {
                    Some(boundedness_bound(&spec, &pr).log2())
                } else {
                    None
                };
                out += &csv_row(n as usize, &pt, bound);
            }
        }
        Family::Legacy => {
            let spec = legacy_spec(&a.family, Some(a.exps.q))?;
            let seq = generate_legacy_sequence(&spec);
            let first = spec.k0() as usize;
            for (i, pt) in prefix_profile(&seq, &pr, &legacy_block_windows(&spec))
                .iter()
                .enumerate()
            {
                out += &csv_row(first + i, pt, None);
            }
        }
    }
    Ok(Report::new(out, a.io.output.clone()))
}

fn certify(a: &CertifyArgs) -> CliResult<Report> {
    let spec = match a.n_max {
        Some(n) => NewSeqSpec::new(a.v, a.w, n)?,
        None => NewSeqSpec::with_default_truncation(a.v, a.w, DEFAULT_TRUNCATION_CAP)?,
    };
    let cert = match a.kind {
        CertKind::Divergence => divergence_certificate(&spec, a.exps.p, a.exps.q)?,
        CertKind::Boundedness => boundedness_certificate(&spec, a.exps.p, a.exps.q)?,
    };
    let mut r = Report::new(render(to_value(&cert)), a.output.clone());
    let kind = match a.kind {
        CertKind::Divergence => "divergence",
        CertKind::Boundedness => "boundedness",
    };
    r.summary = format!("{} {kind} certificate\n", verdict(cert.overall));
    r.status = u8::from(!cert.overall);
    Ok(r)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn equiv(a: &EquivArgs, stdin: &mut dyn Read) -> CliResult<Report> {
    let seq = read_sequence(&a.io.input, stdin)?;
    let report = equivalence_report(&seq, &params(&a.exps)?)?;
    let mut r = Report::new(render(to_value(&report)), a.io.output.clone());
    for c in &report.checks {
        r.summary += &format!(
            "{} {}: ratio {} bound {}\n",
            verdict(c.pass),
            c.name,
            format_real(c.ratio),
            format_real(c.upper)
        );
    }
    r.status = u8::from(!report.all_pass);
    Ok(r)
}

fn include(a: &IncludeArgs) -> CliResult<Report> {
    let v = inclusion_oracle(a.p1, a.q1, a.p2, a.q2)?;
    Ok(Report::new(render(to_value(&v)), a.output.clone()))
}

fn embed_norm(a: &EmbedArgs, stdin: &mut dyn Read) -> CliResult<Report> {
    let seq = read_sequence(&a.io.input, stdin)?;
    let res = continuous_norm(&embed(&seq), &params(&a.exps)?);
    let log2 = if res.value.is_zero() {
        Value::Null
    } else {
        json!(res.value.log2())
    };
    let doc = json!({
        "value": res.value.value(),
        "log2_value": log2,
        "interval": res.interval.map(|(l, r)| json!([l, r])).unwrap_or(Value::Null),
        "candidates": res.candidates_evaluated,
    });
    Ok(Report::new(render(doc), a.io.output.clone()))
}

/// Runs one command. Sequence input comes from `--input` or `stdin`.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> CliResult<Report> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Norm(a) => norm_cmd(a, stdin),
        Command::Profile(a) => profile(a, stdin),
        Command::Certify(a) => certify(a),
        Command::Equiv(a) => equiv(a, stdin),
        Command::Include(a) => include(a),
        Command::EmbedNorm(a) => embed_norm(a, stdin),
    }
}

/// Writes the report body to its destination.
pub fn emit(report: &Report, stdout: &mut dyn std::io::Write) -> CliResult<()> {
    match &report.output {
        Some(path) => fs::write(path, &report.body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(report.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
