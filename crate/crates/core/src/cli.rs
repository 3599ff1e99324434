//! Command-line front end: `verify`, `trace`, `product`, `basis`, `profile`.
//!
//! Exit status is 0 on success, 1 when an identity suite fails and 2 on any
//! input error.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::braid::{parse_braiding_document, Braiding, BraidingDocError, Builtin};
use crate::document::{DocumentBody, DocumentError, EndoDocument};
use crate::endo::{braiding_digest, BraidingSource, EndoContext, EndoError, GradedEndo};
use crate::exterior::{quantum_trace, ExteriorContext, ExteriorError, WedgeIndex};
use crate::scalar::{Rational, Scalar};
use crate::symmetric::{self, SymmetricError};
use crate::verify::{self, VerifyConfig, VerifyError};

#[derive(Parser, Debug)]
#[command(name = "qtrace", version, about = "Exact q-traces of graded endomorphisms of quantum symmetric algebras")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceKind {
    /// Tr_q, through the top grade.
    Q,
    /// tr_q = tr(rho^p(K) A), type A only.
    Quantum,
    /// Both, with their ratio and the predicted q^{-p(N+1-p)}.
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductKind {
    Compose,
    Convolve,
    Third,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an identity suite (or `all`).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Builtin name (sl-exterior, sl-dual, flip) or a braiding document path.
        #[arg(long, default_value = "sl-exterior")]
        braiding: String,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = verify::DEFAULT_MAX_P)]
        max_p: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Allow N above 3 and max-p above 7.
        #[arg(long)]
        unbounded: bool,
    },
    /// Print Tr_q and/or tr_q of an endomorphism document.
    Trace {
        input: String,
        #[arg(long, value_enum, default_value_t = TraceKind::Q)]
        kind: TraceKind,
        /// Braiding document, required when the endomorphism names one by hash.
        #[arg(long)]
        braiding: Option<String>,
        /// Also evaluate the results at q = q0.
        #[arg(long)]
        q0: Option<String>,
    },
    /// Multiply two endomorphism documents and print the result as a document.
    Product {
        a: String,
        b: String,
        #[arg(long, value_enum)]
        which: ProductKind,
        #[arg(long)]
        braiding: Option<String>,
    },
    /// Print the component bases of the graded components.
    Basis {
        #[arg(long, default_value = "sl-exterior")]
        braiding: String,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = verify::DEFAULT_MAX_P)]
        max_p: usize,
        /// Only this grade.
        #[arg(long)]
        grade: Option<usize>,
    },
    /// Print dim S^p for p up to the bound and the top grade.
    Profile {
        #[arg(long, default_value = "sl-exterior")]
        braiding: String,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = verify::DEFAULT_MAX_P)]
        max_p: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Braiding { path: String, source: BraidingDocError },
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Symmetric(#[from] SymmetricError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    DocumentError(#[from] DocumentError),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })
}

/// A builtin name at `n`, or a braiding document read from a path.
pub fn load_braiding(source_arg: &str, n: usize) -> Result<(Braiding, Option<Builtin>), CliError> {
    if let Some(kind) = Builtin::from_name(source_arg) {
        return Ok((kind.build(n), Some(kind)));
    }
    if !Path::new(source_arg).exists() {
        return Err(CliError::Usage(format!("{source_arg:?} is neither a builtin braiding nor a readable file")));
    }
    let b = parse_braiding_document(&read(source_arg)?).map_err(|source| CliError::Braiding { path: source_arg.to_string(), source })?;
    Ok((b, None))
}

fn context_for(source_arg: &str, n: usize, max_p: usize) -> Result<Arc<EndoContext>, CliError> {
    match load_braiding(source_arg, n)? {
        (_, Some(kind @ (Builtin::SlExterior | Builtin::SlDual))) => Ok(EndoContext::builtin(kind, n, n + 2)?),
        (_, Some(kind)) => Ok(EndoContext::builtin(kind, n, max_p)?),
        (b, None) => Ok(EndoContext::from_braiding(b, max_p)?),
    }
}

fn load_document(path: &str) -> Result<EndoDocument, CliError> {
    EndoDocument::parse(&read(path)?).map_err(|source| CliError::Document { path: path.to_string(), source })
}

/// The context a document names; a hashed braiding must be supplied and match.
fn document_context(doc: &EndoDocument, braiding: Option<&str>) -> Result<Arc<EndoContext>, CliError> {
    if let Some(ctx) = doc.builtin_context()? {
        return Ok(ctx);
    }
    let BraidingSource::Document { sha256 } = &doc.context.source else {
        unreachable!("builtin descriptors are handled above");
    };
    let Some(path) = braiding else {
        return Err(CliError::Usage("the document names a braiding by hash; pass it with --braiding".into()));
    };
    let (b, _) = load_braiding(path, 0)?;
    if braiding_digest(&b) != *sha256 {
        return Err(CliError::Usage(format!("{path} does not match the document's braiding hash")));
    }
    Ok(EndoContext::for_descriptor(b, &doc.context)?)
}

fn parse_q0(q0: Option<&str>) -> Result<Option<Rational>, CliError> {
    q0.map(|s| s.trim().parse::<Rational>().map_err(|_| CliError::Usage(format!("--q0 expects a rational, got {s:?}"))))
        .transpose()
}

fn evaluated(x: &Scalar, q0: &Option<Rational>) -> Option<String> {
    q0.as_ref().map(|r| match x.eval_at(r) {
        Ok(v) => v.to_string(),
        Err(e) => format!("undefined ({e})"),
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let emit = |out: &mut dyn Write, text: String| -> Result<(), CliError> {
        out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
    };
    match &cli.command {
        Command::Verify { suite, braiding, n, max_p, samples, seed, unbounded } => {
            let mut cfg = VerifyConfig::new(*n);
            cfg.max_p = *max_p;
            cfg.samples = *samples;
            cfg.seed = *seed;
            cfg.unbounded = *unbounded;
            let (b, kind) = load_braiding(braiding, *n)?;
            if kind != Some(Builtin::SlExterior) {
                cfg.braiding = Some(b);
            }
            let reports = verify::run(suite, &cfg)?;
            let passed = reports.iter().all(|r| r.passed());
            let text = match cli.format {
                Format::Text => {
                    let mut t = verify::render_text(&reports);
                    t.push_str(if passed { "result: pass\n" } else { "result: FAIL\n" });
                    t
                }
                Format::Json => format!("{:#}\n", json!({ "passed": passed, "suites": reports })),
            };
            emit(out, text)?;
            Ok(if passed { EXIT_OK } else { EXIT_SUITE_FAILED })
        }
        Command::Trace { input, kind, braiding, q0 } => {
            let q0 = parse_q0(q0.as_deref())?;
            let doc = load_document(input)?;
            let ctx = document_context(&doc, braiding.as_deref())?;
            let a = doc.resolve(&ctx)?;
            emit(out, trace_output(&doc, &ctx, &a, *kind, &q0, cli.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Product { a, b, which, braiding } => {
            let da = load_document(a)?;
            let db = load_document(b)?;
            if da.context != db.context {
                return Err(CliError::Usage(format!("context mismatch: {} vs {}", da.context, db.context)));
            }
            let ctx = document_context(&da, braiding.as_deref())?;
            let (x, y) = (da.resolve(&ctx)?, db.resolve(&ctx)?);
            let z = match which {
                ProductKind::Compose => x.compose(&y)?,
                ProductKind::Convolve => x.convolve(&y)?,
                ProductKind::Third => x.third_product(&y)?,
            };
            let doc = match da.body {
                DocumentBody::Wedge(_) => EndoDocument::from_graded_wedge(&ExteriorContext::with_context(ctx)?, &z)?,
                DocumentBody::Component(_) => EndoDocument::from_graded(&z),
            };
            emit(out, doc.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Basis { braiding, n, max_p, grade } => {
            let ctx = context_for(braiding, *n, *max_p)?;
            emit(out, basis_output(&ctx, *grade, cli.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Profile { braiding, n, max_p } => {
            let (b, kind) = load_braiding(braiding, *n)?;
            let bound = match kind {
                Some(Builtin::SlExterior | Builtin::SlDual) => n + 2,
                _ => *max_p,
            };
            let p = symmetric::grade_profile(&b, bound)?;
            let text = match cli.format {
                Format::Text => {
                    let dims: Vec<String> = p.dims.iter().map(|d| d.to_string()).collect();
                    let top = p.top.map_or("none within the bound".to_string(), |m| m.to_string());
                    format!("dims: {}\ntop: {top}\n", dims.join(" "))
                }
                Format::Json => format!("{:#}\n", json!({ "dims": p.dims, "top": p.top, "bound": bound })),
            };
            emit(out, text)?;
            Ok(EXIT_OK)
        }
    }
}

fn ratio(a: &Scalar, b: &Scalar) -> Option<Scalar> {
    a.checked_div(b).ok()
}

fn trace_output(
    doc: &EndoDocument,
    ctx: &Arc<EndoContext>,
    a: &GradedEndo,
    kind: TraceKind,
    q0: &Option<Rational>,
    format: Format,
) -> Result<String, CliError> {
    let tq = if kind != TraceKind::Quantum { Some(a.q_trace()?) } else { None };
    let mut per_grade = Vec::new();
    let mut tr_total = None;
    if kind != TraceKind::Q {
        let type_a = matches!(doc.context.source, BraidingSource::Builtin { kind: Builtin::SlExterior, .. });
        if !type_a {
            return Err(CliError::Usage("the quantum trace is defined for the sl-exterior braiding only".into()));
        }
        let ext = ExteriorContext::with_context(ctx.clone())?;
        let n = ext.n();
        let mut total = Scalar::zero();
        for w in doc.wedge_components(&ext)? {
            let p = w.grade();
            let tr = quantum_trace(&w)?;
            let tq_p = ext.generic_q_trace(&w)?;
            let predicted = Scalar::q_pow(-((p * (n + 1 - p)) as i32));
            total += &tr;
            per_grade.push((p, tq_p, tr, predicted));
        }
        tr_total = Some(total);
    }
    let fmt_opt = |x: &Option<Scalar>| x.as_ref().map_or("undefined".to_string(), |s| s.to_string());
    match format {
        Format::Text => {
            let mut t = String::new();
            let line = |t: &mut String, label: &str, x: &Scalar| {
                t.push_str(&format!("{label} = {x}"));
                if let Some(v) = evaluated(x, q0) {
                    t.push_str(&format!("  (at q = {}: {v})", q0.as_ref().expect("evaluated only with q0")));
                }
                t.push('\n');
            };
            if let Some(x) = &tq {
                line(&mut t, "Tr_q", x);
            }
            if let Some(x) = &tr_total {
                line(&mut t, "tr_q", x);
            }
            if let (Some(x), Some(y)) = (&tq, &tr_total) {
                t.push_str(&format!("ratio = {}\n", fmt_opt(&ratio(x, y))));
                for (p, tq_p, tr, predicted) in &per_grade {
                    t.push_str(&format!(
                        "grade {p}: Tr_q = {tq_p}, tr_q = {tr}, ratio = {}, predicted = {predicted}\n",
                        fmt_opt(&ratio(tq_p, tr))
                    ));
                }
            }
            Ok(t)
        }
        Format::Json => {
            let mut v = serde_json::Map::new();
            if let Some(x) = &tq {
                v.insert("q_trace".into(), json!(x.to_string()));
            }
            if let Some(x) = &tr_total {
                v.insert("quantum_trace".into(), json!(x.to_string()));
            }
            if let (Some(x), Some(y)) = (&tq, &tr_total) {
                v.insert("ratio".into(), json!(ratio(x, y).map(|r| r.to_string())));
                let grades: Vec<Value> = per_grade
                    .iter()
                    .map(|(p, tq_p, tr, predicted)| {
                        json!({
                            "grade": p,
                            "q_trace": tq_p.to_string(),
                            "quantum_trace": tr.to_string(),
                            "ratio": ratio(tq_p, tr).map(|r| r.to_string()),
                            "predicted": predicted.to_string(),
                        })
                    })
                    .collect();
                v.insert("grades".into(), Value::Array(grades));
            }
            if let Some(r) = q0 {
                let mut e = serde_json::Map::new();
                e.insert("q0".into(), json!(r.to_string()));
                if let Some(x) = &tq {
                    e.insert("q_trace".into(), json!(evaluated(x, q0)));
                }
                if let Some(x) = &tr_total {
                    e.insert("quantum_trace".into(), json!(evaluated(x, q0)));
                }
                v.insert("evaluated".into(), Value::Object(e));
            }
            Ok(format!("{:#}\n", Value::Object(v)))
        }
    }
}

fn basis_output(ctx: &Arc<EndoContext>, only: Option<usize>, format: Format) -> Result<String, CliError> {
    let grades: Vec<usize> = match only {
        Some(p) if p > ctx.max_grade() => {
            return Err(EndoError::GradeOutOfRange { grade: p, max: ctx.max_grade() }.into());
        }
        Some(p) => vec![p],
        None => (0..=ctx.max_grade()).collect(),
    };
    let type_a = matches!(ctx.descriptor().source, BraidingSource::Builtin { kind: Builtin::SlExterior, .. });
    let mut records = Vec::new();
    for p in grades {
        let basis = ctx.basis(p);
        let wedges = if type_a { WedgeIndex::all(ctx.braiding().dim(), p) } else { Vec::new() };
        let vectors: Vec<(Vec<usize>, String, Option<String>)> = basis
            .source_columns()
            .into_iter()
            .zip(basis.vectors())
            .enumerate()
            .map(|(k, (src, v))| (src, v.to_string(), wedges.get(k).map(|w| w.to_string())))
            .collect();
        records.push((p, vectors));
    }
    Ok(match format {
        Format::Text => {
            let mut t = format!("context: {}\n", ctx.descriptor());
            for (p, vectors) in &records {
                t.push_str(&format!("grade {p} (dim {}):\n", vectors.len()));
                for (src, v, w) in vectors {
                    let label = w.clone().unwrap_or_else(|| format!("A{src:?}"));
                    t.push_str(&format!("  {label} = {v}\n"));
                }
            }
            t
        }
        Format::Json => {
            let grades: Vec<Value> = records
                .iter()
                .map(|(p, vectors)| {
                    json!({
                        "grade": p,
                        "dimension": vectors.len(),
                        "vectors": vectors.iter().map(|(src, v, w)| json!({
                            "column": src,
                            "wedge": w,
                            "vector": v,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            format!("{:#}\n", json!({ "context": ctx.descriptor().to_string(), "grades": grades }))
        }
    })
}
