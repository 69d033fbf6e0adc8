//! `tecalc`: batch front end for the exact E-structure and Hochschild computations.
//!
//! Inputs are spec files (or stdin when the path is omitted or `-`). Reports are JSON on stdout
//! or in `--out`. Failures print `{"error": kind, "message": …}` on stderr and exit with 1;
//! a verification that runs but does not pass exits with 3.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tecalc::connection::{check_polarization, EStructure};
use tecalc::hochschild::harness::{run_suite, SuiteConfig};
use tecalc::hochschild::samples;
use tecalc::levelt::block_diagonalize;
use tecalc::normalform::{flatten_scalar_block, isomorphism_solver, rmatrix_from_grading, semisimplify};
use tecalc::quantum::{self, build_quantum, quadric_isomorphism_pair, teleman_rmatrix};
use tecalc::specfile::{self, ConnectionSpec};
use tecalc::{levelt::system_top, Error, Field, Scalar};

#[derive(Parser)]
#[command(
    name = "tecalc",
    version,
    about = "Exact computations with formal connections and A∞ algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Lookahead L for solvers that need it.
    #[arg(long, global = true, default_value_t = 2)]
    lookahead: usize,
    /// Working field, overriding the one in the input.
    #[arg(long, global = true)]
    field: Option<Field>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Exact)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Exact,
    /// Adds a decimal rendering next to the exact report, for reading only.
    #[value(name = "exact+decimal")]
    ExactDecimal,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the spec file of a shipped connection or sample algebra.
    Preset { name: String },
    /// Residue-eigenvalue block decomposition with its gauge.
    Decompose { input: Option<PathBuf> },
    /// Gauge a scalar-residue block with vanishing u⁻¹ term to w/u²·Id.
    Flatten { input: Option<PathBuf> },
    /// Isomorphism to a direct sum of rank-one exponential structures.
    Semisimplify { input: Option<PathBuf> },
    /// R-matrix of a quantum preset, or of a spec with a grading relative to its residue.
    Rmatrix {
        input: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Unique R with R₀ = Id carrying the source connection to the target.
    SolveIsomorphism {
        source: Option<PathBuf>,
        target: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Run the Hochschild identity suite on an algebra.
    VerifyIdentities {
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Covariant constancy of the pairing, order by order.
    CheckPolarization { input: Option<PathBuf> },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        match self {
            Failure::Lib(Error::Parse { location, message }) => {
                json!({"error": "ParseError", "location": location, "message": message})
            }
            Failure::Lib(e) => json!({"error": e.kind(), "message": e.to_string()}),
            Failure::Io(m) => json!({"error": "Io", "message": m}),
            Failure::Usage(m) => json!({"error": "Usage", "message": m}),
        }
    }
}

enum Body {
    Json(Value),
    /// Already canonical spec text, emitted verbatim.
    Spec(String),
}

struct Report {
    body: Body,
    passed: bool,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report {
            body: Body::Json(body),
            passed: true,
        }
    }

    fn spec(text: String) -> Self {
        Report {
            body: Body::Spec(text),
            passed: true,
        }
    }

    fn checked(body: Value, passed: bool) -> Self {
        Report {
            body: Body::Json(body),
            passed,
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

impl Cli {
    fn order(&self) -> usize {
        self.order as usize
    }

    fn connection(&self, path: Option<&Path>) -> Result<EStructure, Failure> {
        let e = specfile::parse_connection(&read_input(path)?)?;
        Ok(match self.field {
            Some(f) => e.with_field(f)?,
            None => e,
        })
    }

    fn run(&self) -> Result<Report, Failure> {
        let order = self.order();
        match &self.command {
            Command::Preset { name } => {
                if quantum::PRESET_NAMES.contains(&name.as_str()) {
                    let q = build_quantum(&quantum::preset(name)?, order)?;
                    let e = match self.field {
                        Some(f) => q.estructure.with_field(f)?,
                        None => q.estructure,
                    };
                    Ok(Report::spec(specfile::connection_to_string(&e)))
                } else {
                    Ok(Report::spec(specfile::algebra_to_string(&samples::sample(name)?)))
                }
            }
            Command::Decompose { input } => {
                let e = self.connection(input.as_deref())?;
                let dec = block_diagonalize(&e, order)?;
                let blocks: Vec<Value> = dec
                    .blocks()
                    .iter()
                    .zip(&dec.eigen.blocks)
                    .map(|((w, block), info)| {
                        json!({
                            "eigenvalue": w,
                            "multiplicity": info.multiplicity,
                            "connection": ConnectionSpec(block),
                        })
                    })
                    .collect();
                Ok(Report::ok(json!({
                    "command": "decompose",
                    "order": dec.gauge.order(),
                    "field": e.field(),
                    "blocks": blocks,
                    "gauge": dec.gauge.series(),
                })))
            }
            Command::Flatten { input } => {
                let e = self.connection(input.as_deref())?;
                let cert = flatten_scalar_block(&e, order)?;
                Ok(Report::checked(
                    json!({
                        "command": "flatten",
                        "order": cert.gauge.order(),
                        "eigenvalue": cert.eigenvalue,
                        "gauge": cert.gauge.series(),
                        "verified": cert.verified,
                    }),
                    cert.verified,
                ))
            }
            Command::Semisimplify { input } => {
                let e = self.connection(input.as_deref())?;
                let ss = semisimplify(&e, order)?;
                Ok(Report::checked(
                    json!({
                        "command": "semisimplify",
                        "order": ss.gauge.order(),
                        "eigenvalues": ss.eigenvalues,
                        "normal_form": ss.normal_form(),
                        "gauge": ss.gauge.series(),
                        "verified": ss.verified,
                    }),
                    ss.verified,
                ))
            }
            Command::Rmatrix { input, preset } => self.rmatrix(input.as_deref(), preset.as_deref()),
            Command::SolveIsomorphism {
                source,
                target,
                preset,
            } => {
                let top = system_top(order, self.lookahead);
                let (e1, e2) = match (preset.as_deref(), source, target) {
                    (Some("quadric-intersection-cp5"), None, None) => quadric_isomorphism_pair(top)?,
                    (Some(other), None, None) => return Err(Error::UnknownPreset(other.to_string()).into()),
                    (None, Some(s), Some(t)) => (self.connection(Some(s))?, self.connection(Some(t))?),
                    _ => {
                        return Err(Failure::Usage(
                            "give either --preset or both SOURCE and TARGET".into(),
                        ))
                    }
                };
                let iso = isomorphism_solver(&e1, &e2, order, self.lookahead)?;
                Ok(Report::ok(json!({
                    "command": "solve-isomorphism",
                    "order": iso.order,
                    "lookahead": iso.lookahead,
                    "solution_space_dimension": 0,
                    "r": iso.r.series(),
                })))
            }
            Command::VerifyIdentities {
                algebra,
                preset,
                trials,
                maxlen,
                seed,
            } => {
                let alg = match (algebra, preset) {
                    (Some(p), None) => specfile::parse_algebra(&read_input(Some(p))?)?,
                    (None, Some(name)) => samples::sample(name)?,
                    (None, None) => specfile::parse_algebra(&read_input(None)?)?,
                    (Some(_), Some(_)) => {
                        return Err(Failure::Usage("give --algebra or --preset, not both".into()))
                    }
                };
                let cfg = SuiteConfig {
                    trials: *trials,
                    max_len: *maxlen,
                    seed: *seed,
                    ..SuiteConfig::default()
                };
                let report = run_suite(&alg, &cfg);
                Ok(Report::checked(to_value(&report), report.passed))
            }
            Command::CheckPolarization { input } => {
                let e = self.connection(input.as_deref())?;
                let report = check_polarization(&e.truncate(order.min(e.order())))?;
                let mut body = to_value(&report);
                body["passed"] = json!(report.passed());
                Ok(Report::checked(body, report.passed()))
            }
        }
    }

    fn rmatrix(&self, input: Option<&Path>, preset: Option<&str>) -> Result<Report, Failure> {
        let order = self.order();
        if let Some(name) = preset {
            if input.is_some() {
                return Err(Failure::Usage("give an input or --preset, not both".into()));
            }
            let data = quantum::preset(name)?;
            let q = build_quantum(&data, order)?;
            let t = teleman_rmatrix(&q, order)?;
            return Ok(Report::ok(json!({
                "command": "rmatrix",
                "preset": name,
                "order": order,
                "recursion": "[xi, R_{i+1}] + (mu + i) R_i = 0 in the eigenframe",
                "eigenframe": t.eigenframe,
                "eigenvalues": t.eigenvalues,
                "r": t.r.series(),
            })));
        }
        let e = self.connection(input)?;
        let mu = &e.grading().ok_or(Error::MissingGrading)?.mu;
        let r = rmatrix_from_grading(e.residue(), mu, order, e.field())?;
        Ok(Report::ok(json!({
            "command": "rmatrix",
            "order": order,
            "recursion": "[xi, R_{k+1}] = R_k (mu - k)",
            "r": r.series(),
        })))
    }
}

fn decimal_view(v: &Value) -> Value {
    match v {
        Value::String(s) if s.chars().any(|c| c.is_ascii_digit()) => match s.parse::<Scalar>() {
            Ok(x) => Value::String(x.to_decimal(12)),
            Err(_) => v.clone(),
        },
        Value::Array(xs) => Value::Array(xs.iter().map(decimal_view).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), decimal_view(x))).collect()),
        other => other.clone(),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let text = match (&report.body, cli.format) {
        (Body::Spec(text), Format::Exact) => text.clone(),
        (Body::Json(v), Format::Exact) => specfile::report_to_string(v),
        (body, Format::ExactDecimal) => {
            let exact = match body {
                Body::Json(v) => v.clone(),
                Body::Spec(text) => serde_json::from_str(text).expect("canonical spec is JSON"),
            };
            specfile::report_to_string(&json!({
                "decimal_display_only": decimal_view(&exact),
                "exact": exact,
            }))
        }
    };
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", f.to_json());
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(e.to_string().trim().to_string())),
    };
    match cli
        .run()
        .and_then(|report| emit(&cli, &report).map(|()| report.passed))
    {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(f) => fail(&f),
    }
}
