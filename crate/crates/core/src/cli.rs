//! `pairframe` command-line front end.
//!
//! Exit codes: 0 success (whatever the verdict), 2 unreadable or invalid
//! input, 3 dimension mismatch, 4 an operation that needs an invertible or
//! near-identity operator met one that is not.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::frame::{self, DEFAULT_FRAME_TOL};
use crate::generators::{self, GenKind, GenSpec};
use crate::io::{self, FrameFile, FORMAT_VERSION};
use crate::neumann::{self, DEFAULT_ALPHA_GRID, DEFAULT_ALPHA_REFINE};
use crate::pair;
use crate::spectral::{self, CMatrix, CVector, DEFAULT_THETA_STEPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_NOT_INVERTIBLE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pairframe",
    version,
    about = "Frame, pair-frame and Neumann-series analysis of finite families"
)]
pub struct Cli {
    /// Relative tolerance for frame / invertibility verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_FRAME_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Angular grid size for the numerical-range sweep.
    #[arg(long = "theta-steps", global = true, default_value_t = DEFAULT_THETA_STEPS)]
    pub theta_steps: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame analysis of the family in a frame file.
    Frame {
        #[command(subcommand)]
        action: FrameAction,
    },
    /// Pair-frame analysis of (weights, gamma, family).
    Pair {
        #[command(subcommand)]
        action: PairAction,
    },
    /// Neumann-series decay table for the multiplier.
    Neumann {
        path: PathBuf,
        /// `auto`, or a complex scalar written `re` or `re+imi`.
        #[arg(long, default_value = "auto")]
        alpha: String,
        /// Largest truncation order.
        #[arg(long = "N", default_value_t = 20)]
        max_order: usize,
        /// Signal file (JSON list of [re, im]) or `random:SEED`.
        #[arg(long)]
        signal: Option<String>,
    },
    /// Write the canonical dual as a frame file.
    Dual { path: PathBuf },
    /// Write a generated fixture as a frame file.
    Gen {
        kind: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Kind-specific parameters, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        param: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FrameAction {
    Analyze { path: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PairAction {
    Analyze {
        path: PathBuf,
        /// Also print S^{-1}; fails with exit code 4 if S is singular.
        #[arg(long)]
        dual: bool,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::NotAFrame { .. } | Error::Singular { .. } => EXIT_NOT_INVERTIBLE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn write_err(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: format!("write failed: {e}"),
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(
            Error::InvalidParameter(format!("--tol must lie in (0, 1), got {}", cli.tol)).into(),
        );
    }
    match &cli.command {
        Command::Frame {
            action: FrameAction::Analyze { path },
        } => cmd_frame_analyze(cli, path, out),
        Command::Pair {
            action: PairAction::Analyze { path, dual },
        } => cmd_pair_analyze(cli, path, *dual, out, err),
        Command::Neumann {
            path,
            alpha,
            max_order,
            signal,
        } => cmd_neumann(cli, path, alpha, *max_order, signal.as_deref(), out),
        Command::Dual { path } => cmd_dual(cli, path, out),
        Command::Gen {
            kind,
            dim,
            count,
            seed,
            param,
            out: dest,
        } => cmd_gen(kind, *dim, *count, *seed, param, dest.as_deref(), out),
    }
}

/// Formats like C's `%g`: 6 significant digits, trailing zeros removed.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

/// Residuals below this are round-off and print as `0` in text mode.
pub const RESIDUAL_DISPLAY_FLOOR: f64 = 1e-12;

/// [`fmt_g`] for dimensionless residuals, snapping round-off to zero.
pub fn fmt_residual(x: f64) -> String {
    fmt_g(if x.abs() < RESIDUAL_DISPLAY_FLOOR {
        0.0
    } else {
        x
    })
}

/// `re`, `re+imi` or `re-imi` in `%g` style.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return fmt_g(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_g(z.re), fmt_g(z.im.abs()))
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`.
pub fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let bad = || Error::InvalidParameter(format!("cannot parse complex scalar {s:?}"));
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let finite = |z: Complex64| {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map_err(|_| bad())
            .and_then(|re| finite(Complex64::new(re, 0.0)));
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    finite(Complex64::new(re, im))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).expect("report serialises");
    writeln!(out, "{text}").map_err(write_err)
}

fn pair_of(z: Complex64) -> [f64; 2] {
    [z.re + 0.0, z.im + 0.0]
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|&z| pair_of(z)).collect())
        .collect()
}

#[derive(Serialize)]
struct BoundsJson {
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct FrameReportJson {
    format_version: &'static str,
    command: &'static str,
    dim: usize,
    members: usize,
    total_rows: usize,
    is_bessel: bool,
    is_frame: bool,
    tight: bool,
    bounds: BoundsJson,
    alpha_star: Option<f64>,
    residual: Option<f64>,
    cert_contraction: bool,
    cert_invertible: bool,
    cert_surjective: bool,
}

fn cmd_frame_analyze(cli: &Cli, path: &Path, out: &mut dyn Write) -> CmdResult {
    let data = io::load(path)?;
    let family = &data.lambda;
    let report = frame::classify(family, cli.tol);
    let tight = report.is_tight(cli.tol);
    match cli.format {
        Format::Json => emit_json(
            out,
            &FrameReportJson {
                format_version: FORMAT_VERSION,
                command: "frame analyze",
                dim: family.ambient_dim(),
                members: family.len(),
                total_rows: family.total_rows(),
                is_bessel: report.is_bessel,
                is_frame: report.is_frame,
                tight,
                bounds: BoundsJson {
                    lower: report.bounds.lower,
                    upper: report.bounds.upper,
                },
                alpha_star: report.alpha_star,
                residual: report.residual,
                cert_contraction: report.cert_contraction,
                cert_invertible: report.cert_invertible,
                cert_surjective: report.cert_surjective,
            },
        ),
        Format::Text => {
            let (a, b) = (fmt_g(report.bounds.lower), fmt_g(report.bounds.upper));
            let summary = match (report.is_frame, report.alpha_star, report.residual) {
                (true, Some(alpha), Some(residual)) if tight => format!(
                    "frame: yes, A=B={b}, tight, alpha*={}, residual={}",
                    fmt_g(alpha),
                    fmt_residual(residual)
                ),
                (true, Some(alpha), Some(residual)) => format!(
                    "frame: yes, A={a}, B={b}, alpha*={}, residual={}",
                    fmt_g(alpha),
                    fmt_residual(residual)
                ),
                _ => format!("frame: no, Bessel: yes, A={a}, B={b}"),
            };
            let text = format!(
                "family: {} members, dim {}, {} rows\n{summary}\n\
                 frame operator invertible: {}\nsynthesis surjective: {}\n|I - S/B| < 1: {}\n",
                family.len(),
                family.ambient_dim(),
                family.total_rows(),
                yes(report.cert_invertible),
                yes(report.cert_surjective),
                yes(report.cert_contraction),
            );
            out.write_all(text.as_bytes()).map_err(write_err)
        }
    }
}

#[derive(Serialize)]
struct NearIdentityJson {
    alpha: [f64; 2],
    residual: f64,
    is_near_identity: bool,
    is_positive_variant: bool,
}

#[derive(Serialize)]
struct PairReportJson {
    format_version: &'static str,
    command: &'static str,
    dim: usize,
    members: usize,
    gamma_defaulted: bool,
    operator: Vec<Vec<[f64; 2]>>,
    hermitian: bool,
    is_pair_frame: bool,
    sigma_min: f64,
    op_norm: f64,
    condition_number: Option<f64>,
    framelike_lower: f64,
    framelike_upper: f64,
    framelike_lower_attained: bool,
    adjoint_residual: f64,
    near_identity: NearIdentityJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse: Option<Vec<Vec<[f64; 2]>>>,
}

fn cmd_pair_analyze(
    cli: &Cli,
    path: &Path,
    want_inverse: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let data = io::load(path)?;
    let gamma_defaulted = data.gamma.is_none();
    if gamma_defaulted {
        let _ = writeln!(
            err,
            "notice: no gamma family given, analysing (lambda, lambda)"
        );
    }
    let system = data.pair_system()?;
    let report = pair::classify_pair(&system, cli.tol, cli.theta_steps)?;
    let near = neumann::find_alpha(&report.operator, DEFAULT_ALPHA_GRID, DEFAULT_ALPHA_REFINE)?;
    let inverse = if want_inverse {
        if !report.is_pair_frame {
            return Err(Failure {
                code: EXIT_NOT_INVERTIBLE,
                message: format!(
                    "--dual needs an invertible multiplier (sigma_min {}, norm {})",
                    fmt_g(report.sigma_min),
                    fmt_g(report.op_norm)
                ),
            });
        }
        Some(spectral::invert(&report.operator, cli.tol)?)
    } else {
        None
    };
    let hermitian = spectral::is_hermitian(&report.operator, spectral::DEFAULT_HERMITIAN_TOL);
    let attained = report.framelike_lower_attained(cli.tol);

    match cli.format {
        Format::Json => emit_json(
            out,
            &PairReportJson {
                format_version: FORMAT_VERSION,
                command: "pair analyze",
                dim: system.ambient_dim(),
                members: system.lambda().len(),
                gamma_defaulted,
                operator: matrix_rows(&report.operator),
                hermitian,
                is_pair_frame: report.is_pair_frame,
                sigma_min: report.sigma_min,
                op_norm: report.op_norm,
                condition_number: report.condition_number,
                framelike_lower: report.framelike_lower,
                framelike_upper: report.framelike_upper,
                framelike_lower_attained: attained,
                adjoint_residual: report.adjoint_residual,
                near_identity: NearIdentityJson {
                    alpha: pair_of(near.alpha),
                    residual: near.residual,
                    is_near_identity: near.is_near_identity,
                    is_positive_variant: near.is_positive_variant,
                },
                inverse: inverse.as_ref().map(matrix_rows),
            },
        ),
        Format::Text => {
            let mut text = format!(
                "pair system: {} members, dim {}{}\n",
                system.lambda().len(),
                system.ambient_dim(),
                if gamma_defaulted {
                    " (gamma = lambda)"
                } else {
                    ""
                }
            );
            let lower = if report.is_pair_frame && !attained {
                format!(
                    "{} (lower bound not attained)",
                    fmt_g(report.framelike_lower)
                )
            } else {
                fmt_g(report.framelike_lower)
            };
            text += &format!(
                "pair frame: {}, framelike A={lower} B={}\n",
                yes(report.is_pair_frame),
                fmt_g(report.framelike_upper)
            );
            text += &format!(
                "operator: {n}x{n}, hermitian: {}, norm={}, sigma_min={}\n",
                yes(hermitian),
                fmt_g(report.op_norm),
                fmt_g(report.sigma_min),
                n = system.ambient_dim()
            );
            text += &format!(
                "condition number: {}\n",
                report
                    .condition_number
                    .map_or_else(|| "inf".to_string(), fmt_g)
            );
            text += &format!("adjoint residual: {}\n", fmt_g(report.adjoint_residual));
            text += &format!(
                "near identity: {}, alpha={}, residual={}{}\n",
                yes(near.is_near_identity),
                fmt_complex(near.alpha),
                fmt_residual(near.residual),
                if near.is_positive_variant {
                    " (positive)"
                } else {
                    ""
                }
            );
            if let Some(inv) = &inverse {
                text += "inverse:\n";
                for row in inv.row_iter() {
                    let cells: Vec<String> = row.iter().map(|&z| fmt_complex(z)).collect();
                    text += &format!("  {}\n", cells.join(" "));
                }
            }
            out.write_all(text.as_bytes()).map_err(write_err)
        }
    }
}

#[derive(Serialize)]
struct NeumannRowJson {
    n: usize,
    error: f64,
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_error: Option<f64>,
}

#[derive(Serialize)]
struct NeumannJson {
    format_version: &'static str,
    command: &'static str,
    alpha: [f64; 2],
    alpha_source: &'static str,
    residual: f64,
    rows: Vec<NeumannRowJson>,
}

fn load_signal(spec: &str, dim: usize) -> Result<CVector, Error> {
    let signal = match spec.strip_prefix("random:") {
        Some(seed) => {
            let seed = seed
                .parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("bad signal seed {seed:?}")))?;
            generators::random_signal(dim, seed)
        }
        None => io::read_signal(Path::new(spec))?,
    };
    if signal.len() != dim {
        return Err(Error::DimensionMismatch {
            what: "signal length",
            expected: dim,
            found: signal.len(),
        });
    }
    Ok(signal)
}

fn cmd_neumann(
    cli: &Cli,
    path: &Path,
    alpha: &str,
    max_order: usize,
    signal: Option<&str>,
    out: &mut dyn Write,
) -> CmdResult {
    let data = io::load(path)?;
    let system = data.pair_system()?;
    let s = pair::pair_operator(&system);
    let (alpha, source) = if alpha == "auto" {
        let near = neumann::find_alpha(&s, DEFAULT_ALPHA_GRID, DEFAULT_ALPHA_REFINE)?;
        if !near.is_near_identity {
            return Err(Failure {
                code: EXIT_NOT_INVERTIBLE,
                message: format!(
                    "multiplier is not near identity (best residual {} at alpha={})",
                    fmt_residual(near.residual),
                    fmt_complex(near.alpha)
                ),
            });
        }
        (near.alpha, "auto")
    } else {
        (parse_complex(alpha)?, "explicit")
    };
    let signal = signal
        .map(|spec| load_signal(spec, system.ambient_dim()))
        .transpose()?;
    let trace = neumann::neumann_trace(&s, alpha, max_order)?;
    let rel_errors: Vec<Option<f64>> = trace
        .entries
        .iter()
        .map(|e| {
            signal
                .as_ref()
                .map(|f| neumann::reconstruct(&system, alpha, e.n, f).map(|r| r.rel_error))
                .transpose()
        })
        .collect::<Result<_, Error>>()?;

    match cli.format {
        Format::Json => emit_json(
            out,
            &NeumannJson {
                format_version: FORMAT_VERSION,
                command: "neumann",
                alpha: pair_of(alpha),
                alpha_source: source,
                residual: trace.residual,
                rows: trace
                    .entries
                    .iter()
                    .zip(&rel_errors)
                    .map(|(e, r)| NeumannRowJson {
                        n: e.n,
                        error: e.error,
                        bound: e.bound,
                        rel_error: *r,
                    })
                    .collect(),
            },
        ),
        Format::Text => {
            let mut text = format!(
                "alpha={} ({source}), residual={}\n",
                fmt_complex(alpha),
                fmt_residual(trace.residual)
            );
            text += &format!("{:>4}  {:>12}  {:>12}", "N", "error", "bound");
            if signal.is_some() {
                text += &format!("  {:>12}", "rel_error");
            }
            text.push('\n');
            for (e, r) in trace.entries.iter().zip(&rel_errors) {
                text += &format!(
                    "{:>4}  {:>12}  {:>12}",
                    e.n,
                    fmt_residual(e.error),
                    fmt_residual(e.bound)
                );
                if let Some(r) = r {
                    text += &format!("  {:>12}", fmt_residual(*r));
                }
                text.push('\n');
            }
            out.write_all(text.as_bytes()).map_err(write_err)
        }
    }
}

fn cmd_dual(cli: &Cli, path: &Path, out: &mut dyn Write) -> CmdResult {
    let data = io::load(path)?;
    let dual = frame::canonical_dual(&data.lambda, cli.tol)?;
    out.write_all(FrameFile::from_family(&dual).to_json().as_bytes())
        .map_err(write_err)
}

fn cmd_gen(
    kind: &str,
    dim: Option<usize>,
    count: Option<usize>,
    seed: u64,
    params: &[f64],
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let kind: GenKind = kind.parse()?;
    let (default_dim, default_count) = kind.default_shape();
    let dim = dim.unwrap_or(default_dim);
    let count = count.unwrap_or(match kind {
        GenKind::Orthonormal | GenKind::SwapFixture => dim,
        _ => default_count.max(dim),
    });
    let spec = GenSpec::new(kind, dim, count, seed).with_params(params.to_vec());
    let family = generators::generate(&spec)?;
    let text = FrameFile::from_family(&family).to_json();
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure {
            code: EXIT_INVALID,
            message: format!("{}: {e}", p.display()),
        }),
        None => out.write_all(text.as_bytes()).map_err(write_err),
    }
}
