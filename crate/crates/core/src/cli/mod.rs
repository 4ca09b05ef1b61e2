//! File formats and the command front-end used by the `genpfaff` binary.
//!
//! Every command reads one or more matrix files and writes one compact JSON
//! document per input, one per line, in input order. Failures are reported
//! as `{"error": {"code": ..., "message": ...}}` and reflected in the exit
//! status:
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | parse error or invalid input/options |
//! | 3 | not conjugate-normal, or determinant ratio not positive |
//! | 4 | Pfaffian undefined (positive real eigenvalue of `A A*`) |
//! | 5 | tolerance or spectral-consistency failure |

pub mod format;
pub mod output;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub use format::{parse_matrix, parse_matrix_file, write_matrix, MatrixDocument, ParseError, SourceFormat};

use crate::error::Error;
use crate::genpf::{self, IdentityReport, PfResult, ReportOptions};
use crate::lacore::{ComplexMatrix, Tolerances};
use crate::mgen::{self, SpectrumSpec};
use crate::wigner::{self, SigmaBlock};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_CONJUGATE_NORMAL: i32 = 3;
pub const EXIT_PF_UNDEFINED: i32 = 4;
pub const EXIT_TOLERANCE: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Normal-form (generalized) Pfaffian of a conjugate-normal matrix.
    Pf,
    /// Antisymmetrized Pfaffian pf((A - A^T)/2) of any square matrix.
    Apf,
    /// Wigner normal form A = U Sigma U^T.
    Wnf,
    /// Conjugate-normality test.
    Check,
    /// Identity battery for the generalized Pfaffian.
    Identities,
    /// Generate a conjugate-normal matrix from a spectrum specification.
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Mm,
    Json,
}

impl From<FormatArg> for SourceFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Mm => SourceFormat::MatrixMarket,
            FormatArg::Json => SourceFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    NormalForm,
    Relation,
    Polynomial,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "genpfaff", version, about = "Generalized Pfaffians and the Wigner normal form")]
pub struct Options {
    #[arg(value_enum)]
    pub command: Command,

    /// Input files; `-` reads standard input. `gen` takes spectrum specifications.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Matrix file format (input for most commands, output for `gen`).
    /// Detected from the extension or content when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,

    #[arg(long, default_value_t = Tolerances::default().eig_residual)]
    pub tol_eig: f64,

    #[arg(long, default_value_t = Tolerances::default().cluster)]
    pub tol_cluster: f64,

    /// Seed for `gen` and for the random congruence in `identities`;
    /// overrides the seed stored in a spectrum specification.
    #[arg(long, env = "PFAFF_SEED")]
    pub seed: Option<u64>,

    #[arg(long, value_enum, default_value_t = MethodArg::NormalForm)]
    pub method: MethodArg,

    /// Write the result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Scale factor for the `identities` scaling check, as `re,im`.
    #[arg(long, default_value = "2,1", value_parser = parse_complex)]
    pub lambda: Complex64,

    /// Size m of the symmetric factor B = diag(2, ..., m + 1) in the
    /// `identities` tensor-product check.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=8))]
    pub tensor_dim: u32,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',').map(str::trim);
    let mut next = || -> Result<f64, String> {
        parts.next().unwrap_or("0").parse::<f64>().map_err(|e| format!("{s:?}: {e}"))
    };
    let z = Complex64::new(next()?, next()?);
    if parts.next().is_some() || !z.re.is_finite() || !z.im.is_finite() {
        return Err(format!("{s:?}: expected `re,im`"));
    }
    Ok(z)
}

impl Options {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances { eig_residual: self.tol_eig, cluster: self.tol_cluster, ..Tolerances::default() }
    }
}

/// Result of one invocation: the text to emit and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

#[derive(Debug)]
enum Failure {
    Parse(ParseError),
    Compute(Error),
    Io(String),
    Usage(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn code(&self) -> (&'static str, i32) {
        match self {
            Failure::Parse(_) => ("parse_error", EXIT_PARSE),
            Failure::Io(_) => ("io_error", EXIT_PARSE),
            Failure::Usage(_) => ("invalid_input", EXIT_PARSE),
            Failure::Compute(e) => error_code(e),
        }
    }

    fn to_json(&self) -> Value {
        let message = match self {
            Failure::Parse(e) => e.to_string(),
            Failure::Compute(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        };
        json!({ "error": { "code": self.code().0, "message": message } })
    }
}

/// Error code string and exit status for a library error.
pub fn error_code(e: &Error) -> (&'static str, i32) {
    match e {
        Error::DimensionMismatch(_)
        | Error::NotSquare { .. }
        | Error::NonFinite { .. }
        | Error::NotSymmetric { .. }
        | Error::SizeGuard { .. }
        | Error::InvalidSpec(_) => ("invalid_input", EXIT_PARSE),
        Error::NotConjugateNormal { .. } => ("not_conjugate_normal", EXIT_NOT_CONJUGATE_NORMAL),
        Error::RatioNotPositive { .. } => ("ratio_not_positive", EXIT_NOT_CONJUGATE_NORMAL),
        Error::PositiveRealEigenvalue { .. } => ("pf_undefined", EXIT_PF_UNDEFINED),
        Error::SpectralConsistency(_) => ("spectral_consistency", EXIT_TOLERANCE),
        Error::Singular => ("singular", EXIT_TOLERANCE),
        Error::NotSkew { .. } | Error::NonNormal { .. } | Error::Numerical(_) => ("tolerance", EXIT_TOLERANCE),
    }
}

/// Parses `args` (program name first) and runs the command. Argument errors
/// come back as `Err` with clap's rendered message.
pub fn run_from_args<I, T>(args: I) -> Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let opts = Options::try_parse_from(args)?;
    Ok(run_command(&opts))
}

/// Runs `opts.command` over every input and collects the output.
///
/// Inputs are processed on separate threads; results keep input order and
/// the exit code is that of the first failing input.
pub fn run_command(opts: &Options) -> Outcome {
    let results: Vec<(String, i32)> = match prepare(opts) {
        Err(f) => vec![render_failure(&f)],
        Ok(sources) => std::thread::scope(|scope| {
            let handles: Vec<_> = sources.iter().map(|src| scope.spawn(move || process(opts, src))).collect();
            handles
                .into_iter()
                .map(|h| match h.join() {
                    Ok(Ok(done)) => done,
                    Ok(Err(f)) => render_failure(&f),
                    Err(_) => render_failure(&Failure::Compute(Error::Numerical("worker panicked".into()))),
                })
                .collect()
        }),
    };
    let exit_code = results.iter().map(|r| r.1).find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK);
    let text: String = results.into_iter().map(|r| r.0).collect();
    match &opts.output {
        None => Outcome { text, exit_code },
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { text: String::new(), exit_code },
            Err(e) => {
                let (text, code) = render_failure(&Failure::Io(format!("{}: {e}", path.display())));
                Outcome { text, exit_code: code }
            }
        },
    }
}

fn render_failure(f: &Failure) -> (String, i32) {
    (line(&f.to_json()), f.code().1)
}

fn line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

struct Source {
    path: Option<PathBuf>,
    text: String,
}

fn prepare(opts: &Options) -> Result<Vec<Source>, Failure> {
    opts.tolerances().validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if opts.inputs.iter().filter(|p| p.as_os_str() == "-").count() > 1 {
        return Err(Failure::Usage("standard input can be named only once".into()));
    }
    opts.inputs
        .iter()
        .map(|p| {
            if p.as_os_str() == "-" {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| Failure::Io(format!("<stdin>: {e}")))?;
                Ok(Source { path: None, text })
            } else {
                let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                Ok(Source { path: Some(p.clone()), text })
            }
        })
        .collect()
}

fn process(opts: &Options, src: &Source) -> Result<(String, i32), Failure> {
    let tol = opts.tolerances();
    if opts.command == Command::Gen {
        return Ok((generate(opts, &src.text)?, EXIT_OK));
    }
    let format = opts.format.map(SourceFormat::from).unwrap_or_else(|| SourceFormat::detect(src.path.as_deref(), &src.text));
    let a = parse_matrix(&src.text, format)?.matrix;
    a.ensure_square()?;
    let value = match opts.command {
        Command::Pf => pf_json(&pf_by_method(&a, opts.method, &tol)?),
        Command::Apf => apf_json(&a)?,
        Command::Wnf => wnf_json(&a, &tol)?,
        Command::Check => {
            let (flag, residual) = wigner::is_conjugate_normal(&a, &tol)?;
            json!({
                "conjugate_normal": flag,
                "residual": output::number(residual),
                "tolerance": output::number(tol.eig_residual),
            })
        }
        Command::Identities => {
            let m = opts.tensor_dim as usize;
            let b = ComplexMatrix::from_diag(&(0..m).map(|k| Complex64::new(k as f64 + 2.0, 0.0)).collect::<Vec<_>>());
            let mut ro = ReportOptions::default();
            if let Some(seed) = opts.seed {
                ro.seed = seed;
            }
            let report = genpf::identity_report_with(&a, &b, opts.lambda, &tol, &ro)?;
            let code = if report.all_passed() { EXIT_OK } else { EXIT_TOLERANCE };
            return Ok((line(&report_json(&report)), code));
        }
        Command::Gen => unreachable!(),
    };
    Ok((line(&value), EXIT_OK))
}

fn pf_by_method(a: &ComplexMatrix, method: MethodArg, tol: &Tolerances) -> crate::Result<PfResult> {
    match method {
        MethodArg::NormalForm => genpf::generalized_pfaffian(a, tol),
        MethodArg::Relation => genpf::generalized_pfaffian_via_relation(a, tol),
        MethodArg::Polynomial => genpf::generalized_pfaffian_via_polynomial(a, tol),
    }
}

pub fn pf_json(r: &PfResult) -> Value {
    json!({
        "pfaffian": output::complex(r.value),
        "method": r.method.as_str(),
        "det": output::complex(r.diagnostics.det_a),
        "singular": r.diagnostics.singular,
        "cross_check_residual": output::optional(r.diagnostics.cross_check_residual),
    })
}

fn apf_json(a: &ComplexMatrix) -> Result<Value, Failure> {
    let r = genpf::antisymmetrized_pfaffian(a)?;
    let mut obj = Map::new();
    obj.insert("pfaffian".into(), output::complex(r.value));
    obj.insert("method".into(), r.method.as_str().into());
    obj.insert("singular".into(), r.diagnostics.singular.into());
    if a.rows() % 2 == 1 {
        obj.insert("warning".into(), "odd dimension: the Pfaffian is zero by convention".into());
    }
    Ok(Value::Object(obj))
}

fn wnf_json(a: &ComplexMatrix, tol: &Tolerances) -> Result<Value, Failure> {
    let (flag, residual) = wigner::is_conjugate_normal(a, tol)?;
    if !flag {
        return Err(Error::NotConjugateNormal { residual }.into());
    }
    let nf = wigner::wigner_normal_form(a, tol)?;
    let blocks: Vec<Value> = nf
        .blocks()
        .iter()
        .map(|b| match *b {
            SigmaBlock::OffDiag { s, multiplicity } => {
                json!({ "type": "offdiag", "value": output::complex(s), "multiplicity": multiplicity })
            }
            SigmaBlock::Real1 { sigma, multiplicity } => {
                json!({ "type": "real1", "value": output::number(sigma), "multiplicity": multiplicity })
            }
        })
        .collect();
    let norm = a.frobenius_norm();
    let recon = (&wigner::reconstruct(&nf) - a).frobenius_norm();
    let recon = if norm > 0.0 { recon / norm } else { recon };
    Ok(json!({
        "det_U": output::complex(nf.det_u()),
        "blocks": blocks,
        "reconstruction_residual": output::number(recon),
        "unitarity_residual": output::number(nf.unitarity_residual()),
    }))
}

pub fn report_json(report: &IdentityReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "lhs": output::complex(c.lhs),
                "rhs": output::complex(c.rhs),
                "residual": output::number(c.residual),
                "threshold": output::number(c.threshold),
                "skipped": c.skipped,
                "passed": c.passed(),
            })
        })
        .collect();
    json!({
        "checks": checks,
        "all_passed": report.all_passed(),
        "max_residual": output::number(report.max_residual()),
    })
}

fn generate(opts: &Options, text: &str) -> Result<String, Failure> {
    let mut spec: SpectrumSpec = serde_json::from_str(text)
        .map_err(|e| ParseError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
    if let Some(seed) = opts.seed {
        spec.seed = seed;
    }
    let a = mgen::random_conjugate_normal(&spec)?;
    let mut doc = MatrixDocument::new(SourceFormat::Json, a);
    doc.metadata.insert("generator".into(), "genpfaff gen".into());
    doc.metadata.insert("seed".into(), spec.seed.to_string());
    let format = opts.format.map(SourceFormat::from).unwrap_or(SourceFormat::Json);
    Ok(write_matrix(&doc, format))
}
