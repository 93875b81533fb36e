//! `mixed-af` command-line front end.
//!
//! Input files are UTF-8 JSON-lines, one tagged record per line:
//!
//! ```text
//! {"type":"box","dim":2,"sides":[1,"2"],"anchor":[0,0]}
//! {"type":"zonotope","dim":2,"generators":[[1,0],["1/2",1]]}
//! {"type":"polygon_fan","angles":[0,"1/2pi","pi","3/2pi"],"support":[0.5,0.5,0.5,0.5]}
//! {"type":"matrix","data":[[2,0],[0,3]]}
//! {"type":"weights","values":[1,2]}
//! ```
//!
//! Numbers may be JSON numbers or strings holding `p/q` or a decimal; decimals
//! are read exactly. Fan angles may also be written as a rational multiple of
//! `pi`. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::afop::{
    bochner_check, box_af_operator, box_mixed_form, box_support_vector, fan_af_operator, spectrum_report, BochnerReport,
    SpectralReport, BOX_DIRECTIONS,
};
use crate::error::Error;
use crate::geom::{AxisBox, ConvexBody, Fan, PolygonFan, SupportVector, Zonotope};
use crate::matrix::Matrix;
use crate::mixdisc::{mixed_discriminant, verify_alexandrov};
use crate::mixvol::{mixed_volume, mixed_volume_oracle, verify_af, Engine};
use crate::report::{InequalityReport, DEFAULT_TOL};
use crate::scalar::{format_f64, parse_rational, Rational, Real, Scalar};
use crate::selftest::{self, CheckResult, SelftestConfig};
use crate::spectral::{hyperbolicity_check, perron_check, HyperbolicityReport, OperatorPair, PerronReport, ZERO_BAND};

#[derive(Debug, Parser)]
#[command(name = "mixed-af", version, about = "Mixed volumes, mixed discriminants and Alexandrov–Fenchel spectral checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Relative tolerance for floating-point comparisons [default: 1e-9];
    /// for spectral commands also the relative zero band [default: 1e-8].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mixed volume of n bodies in Rⁿ, cross-checked by inclusion–exclusion.
    Mixvol { file: PathBuf },
    /// Mixed discriminant of m symmetric m×m matrices.
    Mixdisc { file: PathBuf },
    /// Alexandrov–Fenchel inequality for K, L and n − 2 reference bodies.
    VerifyAf { file: PathBuf },
    /// Alexandrov's mixed-discriminant inequality for A, B and m − 2 matrices.
    VerifyAlexandrov { file: PathBuf },
    /// Operator of a polygon fan or a box in R³, with its spectrum.
    AfOperator { file: PathBuf },
    /// Sampled Bochner residuals of an operator.
    Bochner { file: PathBuf },
    /// Spectrum and hyperbolicity of an operator.
    Spectrum { file: PathBuf },
    /// Runs the built-in property checks.
    Selftest,
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug)]
struct CliError {
    line: Option<usize>,
    error: Error,
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError { line: None, error }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn at_line(line: usize) -> impl Fn(Error) -> CliError {
    move |error| CliError { line: Some(line), error }
}

#[derive(Debug, Clone)]
pub enum Record {
    Body(ConvexBody),
    Matrix(Matrix<Rational>),
    Weights(Vec<Rational>),
}

/// Parses a JSON-lines document into `(line number, record)` pairs.
pub fn parse_document(text: &str) -> Result<Vec<(usize, Record)>, String> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let record = parse_record(trimmed).map_err(|e| format!("line {line}: {e}"))?;
        out.push((line, record));
    }
    Ok(out)
}

fn parse_record(text: &str) -> Result<Record, Error> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| Error::Input("record is not a JSON object".into()))?;
    let kind = obj.get("type").and_then(Value::as_str).ok_or_else(|| Error::Input("record has no \"type\"".into()))?;
    let field = |name: &str| obj.get(name).ok_or_else(|| Error::Input(format!("{kind} record has no {name:?} field")));
    match kind {
        "box" => {
            let sides = rational_list(field("sides")?)?;
            check_declared_dim(obj.get("dim"), sides.len())?;
            let anchor = match obj.get("anchor") {
                Some(a) => rational_list(a)?,
                None => vec![Rational::from_i64(0); sides.len()],
            };
            Ok(Record::Body(ConvexBody::Box(AxisBox::new(sides, anchor)?)))
        }
        "zonotope" => {
            let dim = field("dim")?
                .as_u64()
                .ok_or_else(|| Error::Input("zonotope \"dim\" must be a positive integer".into()))? as usize;
            let gens = field("generators")?
                .as_array()
                .ok_or_else(|| Error::Input("\"generators\" must be an array".into()))?
                .iter()
                .map(rational_list)
                .collect::<Result<Vec<_>, _>>()?;
            let anchor = match obj.get("anchor") {
                Some(a) => rational_list(a)?,
                None => vec![Rational::from_i64(0); dim],
            };
            Ok(Record::Body(ConvexBody::Zonotope(Zonotope::new(dim, gens, anchor)?)))
        }
        "polygon_fan" => {
            let angles = list(field("angles")?)?.iter().map(parse_angle).collect::<Result<Vec<_>, _>>()?;
            let support = list(field("support")?)?.iter().map(|v| parse_number(v).map(|r| r.to_f64())).collect::<Result<Vec<_>, _>>()?;
            let fan = Fan::new(angles)?;
            Ok(Record::Body(ConvexBody::Polygon(PolygonFan::new(fan, SupportVector::new(support))?)))
        }
        "matrix" => {
            let rows = list(field("data")?)?.iter().map(rational_list).collect::<Result<Vec<_>, _>>()?;
            Ok(Record::Matrix(Matrix::from_rows(rows)?))
        }
        "weights" => Ok(Record::Weights(rational_list(field("values")?)?)),
        other => Err(Error::Input(format!("unknown record type {other:?}"))),
    }
}

fn check_declared_dim(dim: Option<&Value>, actual: usize) -> Result<(), Error> {
    match dim {
        None => Ok(()),
        Some(v) if v.as_u64() == Some(actual as u64) => Ok(()),
        Some(v) => Err(Error::Input(format!("declared dim {v} does not match {actual} entries"))),
    }
}

fn list(v: &Value) -> Result<&Vec<Value>, Error> {
    v.as_array().ok_or_else(|| Error::Input(format!("expected an array, got {v}")))
}

fn parse_number(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Input(format!("expected a number, got {other}"))),
    }
}

fn rational_list(v: &Value) -> Result<Vec<Rational>, Error> {
    list(v)?.iter().map(parse_number).collect()
}

/// Radians, or `"<rational>pi"` / `"pi"`.
fn parse_angle(v: &Value) -> Result<f64, Error> {
    if let Value::String(s) = v {
        let t = s.trim();
        if let Some(coef) = t.strip_suffix("pi") {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = if coef.is_empty() { 1.0 } else { parse_rational(coef)?.to_f64() };
            return Ok((c * std::f64::consts::PI).rem_euclid(std::f64::consts::TAU));
        }
    }
    Ok(parse_number(v)?.to_f64())
}

fn bodies(records: &[(usize, Record)]) -> CliResult<Vec<ConvexBody>> {
    records
        .iter()
        .map(|(line, r)| match r {
            Record::Body(b) => Ok(b.clone()),
            _ => Err(CliError { line: Some(*line), error: Error::Input("expected a body record".into()) }),
        })
        .collect()
}

fn matrices(records: &[(usize, Record)]) -> CliResult<Vec<Matrix<Rational>>> {
    records
        .iter()
        .map(|(line, r)| match r {
            Record::Matrix(m) => Ok(m.clone()),
            _ => Err(CliError { line: Some(*line), error: Error::Input("expected a matrix record".into()) }),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixvolReport {
    pub bodies: usize,
    pub engine: Engine,
    pub value: Real,
    pub exact: bool,
    pub oracle: Real,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixdiscReport {
    pub dim: usize,
    pub value: Real,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityOutput {
    pub dim: usize,
    #[serde(flatten)]
    pub report: InequalityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub family: String,
    pub directions: Vec<String>,
    pub exact: bool,
    pub matrix: Vec<Vec<Real>>,
    pub weights: Vec<Real>,
    pub reference: Option<Vec<f64>>,
    pub spectrum: SpectralReport,
    pub perron: Option<PerronReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BochnerOutput {
    pub family: String,
    pub seed: u64,
    #[serde(flatten)]
    pub report: BochnerReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub family: String,
    pub spectrum: SpectralReport,
    pub hyperbolicity: HyperbolicityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestOutput {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Operator assembled from an input document.
struct LoadedOperator {
    family: String,
    directions: Vec<String>,
    exact: Option<OperatorPair<Rational>>,
    op: OperatorPair<f64>,
    reference: Option<Vec<f64>>,
    box_reference: Option<AxisBox>,
}

fn load_operator(records: &[(usize, Record)]) -> CliResult<LoadedOperator> {
    match records {
        [(line, Record::Body(ConvexBody::Polygon(p)))] => {
            let op = fan_af_operator(p).map_err(at_line(*line))?;
            Ok(LoadedOperator {
                family: "polygon_fan".into(),
                directions: p.fan().angles().iter().map(|a| format_f64(*a)).collect(),
                exact: None,
                op,
                reference: Some(p.support().values().to_vec()),
                box_reference: None,
            })
        }
        [(line, Record::Body(ConvexBody::Box(b)))] => {
            let exact = box_af_operator(b).map_err(at_line(*line))?;
            let h = box_support_vector(b).map_err(at_line(*line))?;
            Ok(LoadedOperator {
                family: "box".into(),
                directions: BOX_DIRECTIONS.iter().map(|s| s.to_string()).collect(),
                op: exact.to_f64(),
                exact: Some(exact),
                reference: Some(h.iter().map(Scalar::to_f64).collect()),
                box_reference: Some(b.clone()),
            })
        }
        [(line, Record::Matrix(m)), rest @ ..] => {
            let weights = match rest {
                [] => vec![Rational::from_i64(1); m.rows()],
                [(_, Record::Weights(w))] => w.clone(),
                [(l, _), ..] => {
                    return Err(CliError { line: Some(*l), error: Error::Input("expected a single weights record after the matrix".into()) })
                }
            };
            let exact = OperatorPair::new(m.clone(), weights).map_err(at_line(*line))?;
            Ok(LoadedOperator {
                family: "matrix".into(),
                directions: (0..m.rows()).map(|i| i.to_string()).collect(),
                op: exact.to_f64(),
                exact: Some(exact),
                reference: None,
                box_reference: None,
            })
        }
        [] => Err(Error::Input("empty input".into()).into()),
        [(line, _), ..] => Err(CliError {
            line: Some(*line),
            error: Error::Input("expected one polygon_fan record, one box record, or a matrix (with optional weights)".into()),
        }),
    }
}

struct Outcome {
    code: i32,
    text: String,
    json: String,
}

fn outcome<T: Serialize>(code: i32, report: &T, text: String) -> Outcome {
    Outcome { code, text, json: serde_json::to_string_pretty(report).expect("reports serialize") }
}

fn read_records(path: &Path) -> CliResult<Vec<(usize, Record)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError { line: None, error: Error::Input(format!("cannot read {}: {e}", path.display())) })?;
    parse_document(&text).map_err(|msg| CliError { line: None, error: Error::Input(msg) })
}

fn inequality_text(title: &str, r: &InequalityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = writeln!(s, "lhs: {}", r.lhs);
    let _ = writeln!(s, "rhs: {}", r.rhs);
    let _ = writeln!(s, "gap: {}", r.gap);
    let _ = writeln!(s, "exact: {}", r.exact);
    let _ = writeln!(s, "equality: {}", r.equality);
    let _ = writeln!(s, "verdict: {}", if r.holds { "holds" } else { "VIOLATED" });
    s
}

fn spectrum_text(rep: &SpectralReport) -> String {
    let mut s = String::new();
    let eig: Vec<String> = rep.eigenvalues.iter().map(|v| format_f64(*v)).collect();
    let top: Vec<String> = rep.top_eigenvector.iter().map(|v| format_f64(*v)).collect();
    let _ = writeln!(s, "eigenvalues: [{}]", eig.join(", "));
    let _ = writeln!(s, "inertia: {}", rep.inertia);
    let _ = writeln!(s, "top eigenvector: [{}]", top.join(", "));
    let _ = writeln!(s, "simple top eigenvalue: {}", rep.simple_top);
    let _ = writeln!(s, "min λ²−λ: {}", format_f64(rep.bochner_residual_min));
    let _ = writeln!(s, "eigenvalues in (−∞,0] ∪ {{1}}: {}", rep.dichotomy_holds);
    if let (Some(angle), Some(par)) = (rep.top_alignment_angle, rep.top_parallel) {
        let _ = writeln!(s, "angle to reference: {} (parallel: {par})", format_f64(angle));
    }
    if let Some(w) = &rep.witness {
        let x: Vec<String> = w.x.iter().map(|v| format_f64(*v)).collect();
        let y: Vec<String> = w.y.iter().map(|v| format_f64(*v)).collect();
        let _ = writeln!(s, "witness x: [{}]", x.join(", "));
        let _ = writeln!(s, "witness y: [{}]", y.join(", "));
        let _ = writeln!(s, "witness residual: {}", format_f64(w.residual));
    }
    let _ = writeln!(s, "verdict: {}", match rep.verdict {
        crate::afop::Verdict::Hyperbolic => "hyperbolic",
        crate::afop::Verdict::NotHyperbolic => "not_hyperbolic",
    });
    s
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let zero_band = cli.tol.unwrap_or(ZERO_BAND);
    match &cli.command {
        Command::Mixvol { file } => {
            let records = read_records(file)?;
            let bodies = bodies(&records)?;
            let (value, engine) = mixed_volume(&bodies)?;
            let oracle = mixed_volume_oracle(&bodies)?;
            let agree = match (&value, &oracle) {
                (Real::Exact(a), Real::Exact(b)) => a == b,
                (a, b) => {
                    let (a, b) = (a.to_f64(), b.to_f64());
                    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
                }
            };
            let report = MixvolReport { bodies: bodies.len(), engine, exact: value.is_exact(), value, oracle, agree };
            let text = format!(
                "mixed volume: {}\nengine: {}\nexact: {}\ninclusion–exclusion: {}\nagree: {}\n",
                report.value,
                serde_json::to_value(engine).expect("engine").as_str().unwrap_or(""),
                report.exact,
                report.oracle,
                report.agree
            );
            Ok(outcome(if agree { EXIT_OK } else { EXIT_FAILED }, &report, text))
        }
        Command::Mixdisc { file } => {
            let mats = matrices(&read_records(file)?)?;
            let value = mixed_discriminant(&mats)?;
            let report = MixdiscReport { dim: mats.len(), value: Real::Exact(value), exact: true };
            let text = format!("mixed discriminant: {}\nexact: true\n", report.value);
            Ok(outcome(EXIT_OK, &report, text))
        }
        Command::VerifyAf { file } => {
            let bodies = bodies(&read_records(file)?)?;
            let [k, l, refs @ ..] = bodies.as_slice() else {
                return Err(Error::Input("need at least two bodies K and L".into()).into());
            };
            let report = verify_af(k, l, refs, tol)?;
            let text = inequality_text("V(K,L,C…)² ≥ V(K,K,C…)·V(L,L,C…)", &report);
            let code = if report.holds { EXIT_OK } else { EXIT_FAILED };
            Ok(outcome(code, &InequalityOutput { dim: k.dim(), report }, text))
        }
        Command::VerifyAlexandrov { file } => {
            let mats = matrices(&read_records(file)?)?;
            let [a, b, ms @ ..] = mats.as_slice() else {
                return Err(Error::Input("need at least two matrices A and B".into()).into());
            };
            let report = verify_alexandrov(a, b, ms, tol)?;
            let text = inequality_text("D(A,B,M…)² ≥ D(A,A,M…)·D(B,B,M…)", &report);
            let code = if report.holds { EXIT_OK } else { EXIT_FAILED };
            Ok(outcome(code, &InequalityOutput { dim: a.rows(), report }, text))
        }
        Command::AfOperator { file } => {
            let loaded = load_operator(&read_records(file)?)?;
            let spectrum = spectrum_report(&loaded.op, loaded.reference.as_deref(), Some(zero_band_abs(&loaded.op, zero_band)?), tol)?;
            let perron = perron_check(&loaded.op).ok();
            let (matrix, weights): (Vec<Vec<Real>>, Vec<Real>) = match &loaded.exact {
                Some(e) => (
                    e.matrix().to_rows().into_iter().map(|r| r.into_iter().map(Real::Exact).collect()).collect(),
                    e.weights().iter().cloned().map(Real::Exact).collect(),
                ),
                None => (
                    loaded.op.matrix().to_rows().into_iter().map(|r| r.into_iter().map(Real::Approx).collect()).collect(),
                    loaded.op.weights().iter().map(|w| Real::Approx(*w)).collect(),
                ),
            };
            let mut text = format!("family: {}\ndirections: [{}]\n", loaded.family, loaded.directions.join(", "));
            for (row, dir) in matrix.iter().zip(&loaded.directions) {
                let cells: Vec<String> = row.iter().map(Real::to_string).collect();
                let _ = writeln!(text, "A[{dir}]: [{}]", cells.join(", "));
            }
            let ws: Vec<String> = weights.iter().map(Real::to_string).collect();
            let _ = writeln!(text, "p: [{}]", ws.join(", "));
            text.push_str(&spectrum_text(&spectrum));
            if let Some(p) = &perron {
                let _ = writeln!(text, "perron: irreducible={} top_simple={} top_vector_positive={}", p.irreducible, p.top_simple, p.top_vector_positive);
            }
            let code = if spectrum.certified() { EXIT_OK } else { EXIT_FAILED };
            let report = OperatorReport {
                family: loaded.family,
                directions: loaded.directions,
                exact: loaded.exact.is_some(),
                matrix,
                weights,
                reference: loaded.reference,
                spectrum,
                perron,
            };
            Ok(outcome(code, &report, text))
        }
        Command::Bochner { file } => {
            let loaded = load_operator(&read_records(file)?)?;
            let box_oracle = loaded.box_reference.clone().map(|b| move |x: &[f64]| box_mixed_form(x, x, &b));
            let oracle: Option<&(dyn Fn(&[f64]) -> f64 + Sync)> = box_oracle.as_ref().map(|f| f as _);
            let report = bochner_check(&loaded.op, oracle, cli.samples, cli.seed, tol)?;
            let mut text = format!(
                "family: {}\nsamples: {}\nseed: {}\nmin ⟨Ax,Ax⟩_p − ⟨x,Ax⟩_p: {}\neigen-expansion deviation: {}\n",
                loaded.family,
                report.samples,
                cli.seed,
                format_f64(report.min_residual),
                format_f64(report.expansion_deviation)
            );
            if let Some(d) = report.oracle_deviation {
                let _ = writeln!(text, "mixed-volume oracle deviation: {}", format_f64(d));
            }
            let _ = writeln!(text, "verdict: {}", if report.holds { "holds" } else { "VIOLATED" });
            let code = if report.holds { EXIT_OK } else { EXIT_FAILED };
            Ok(outcome(code, &BochnerOutput { family: loaded.family, seed: cli.seed, report }, text))
        }
        Command::Spectrum { file } => {
            let loaded = load_operator(&read_records(file)?)?;
            let zero_tol = zero_band_abs(&loaded.op, zero_band)?;
            let spectrum = spectrum_report(&loaded.op, loaded.reference.as_deref(), Some(zero_tol), tol)?;
            let hyperbolicity = hyperbolicity_check(&loaded.op, cli.samples, cli.seed, Some(zero_tol))?;
            let mut text = spectrum_text(&spectrum);
            let _ = writeln!(
                text,
                "sampled reverse Cauchy–Schwarz: {} pairs, min residual {}, violations {}",
                hyperbolicity.samples,
                format_f64(hyperbolicity.min_residual),
                hyperbolicity.sampled_violations
            );
            let code = if spectrum.verdict == crate::afop::Verdict::Hyperbolic { EXIT_OK } else { EXIT_FAILED };
            Ok(outcome(code, &SpectrumOutput { family: loaded.family, spectrum, hyperbolicity }, text))
        }
        Command::Selftest => {
            let cfg = SelftestConfig { seed: cli.seed, samples: cli.samples, ..SelftestConfig::default() };
            let checks = selftest::run(&cfg);
            let passed = checks.iter().all(|c| c.passed);
            let mut text = String::new();
            for c in &checks {
                let _ = writeln!(text, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let _ = writeln!(text, "{}", if passed { "all checks passed" } else { "some checks FAILED" });
            Ok(outcome(if passed { EXIT_OK } else { EXIT_FAILED }, &SelftestOutput { passed, checks }, text))
        }
    }
}

/// Absolute zero band: `rel · max|λ|`.
fn zero_band_abs(op: &OperatorPair<f64>, rel: f64) -> Result<f64, Error> {
    let values = crate::spectral::eigh_weighted(op)?.values;
    Ok(rel * values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Runs the CLI on `args` (including the program name), writing reports to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let body = match cli.format {
                Format::Text => o.text,
                Format::Json => o.json + "\n",
            };
            let _ = out.write_all(body.as_bytes());
            o.code
        }
        Err(CliError { line, error }) => {
            match line {
                Some(l) => {
                    let _ = writeln!(err, "error: line {l}: {error}");
                }
                None => {
                    let _ = writeln!(err, "error: {error}");
                }
            }
            EXIT_INPUT
        }
    }
}
