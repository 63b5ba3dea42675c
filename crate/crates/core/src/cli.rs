//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O or numerical failure (unreadable file, solver did not converge, size cap) |
//! | 2 | unparsable input, unknown flag or suite, invalid configuration |
//! | 3 | vacuous request: the chosen dimension has no faces |
//! | 4 | a proven inequality or identity was numerically violated |
//! | 5 | `--sub` is not a subcomplex of `--input` |

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{
    cohomology_dim_bound, spectral_lower_bounds, subcomplex_bounds, BoundReport, SLACK_REL_TOL,
};
use crate::error::Error;
use crate::io::{read_complex, write_atomic};
use crate::laplacian::{betti_numbers, laplacian_from_boundaries};
use crate::linalg::{sym_eigenvalues, Spectrum};
use crate::par::{threads_from_env, with_threads, Execution};
use crate::random::{run_experiment, summary_json, trials_csv, GnpConfig, Mode};
use crate::verify::{run_suite, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VACUOUS: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;
pub const EXIT_NOT_SUBCOMPLEX: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "lapbound",
    version,
    about = "Spectra and eigenvalue bounds for combinatorial Laplacians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of L_k, reduced Betti numbers up to k, and the f-vector.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        /// Eigensolver residual tolerance, relative to the Frobenius norm.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Per-index lower bounds on λ_i(L_k) from the spectrum of L(G_X) + J.
    BoundsMain1 {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Per-index lower bounds on λ_i(L_k) of a subcomplex from the ambient spectrum.
    BoundsSub {
        #[command(flatten)]
        input: InputArgs,
        /// Subcomplex file; must use faces of --input only.
        #[arg(long)]
        sub: PathBuf,
    },
    /// Upper bound on b̃_k by counting small eigenvalue sums, against the exact value.
    CohomBound {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Randomized property suite over small complexes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo experiment on neighborhood complexes of G(n, p).
    Experiment {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial CSV path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// JSON summary path.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Materialized-face cap per trial; larger samples are marked skipped.
        #[arg(long, default_value_t = crate::complex::DEFAULT_FACE_CAP)]
        face_cap: usize,
        /// Run trials on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Complex file: {"vertices": [...], "maximal_faces": [[...], ...]}.
    #[arg(long)]
    input: PathBuf,
    /// Face dimension k.
    #[arg(long)]
    dim: usize,
    /// JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command: exit code plus message for standard error.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_)
            | Error::TooLarge { .. }
            | Error::NotConverged { .. }
            | Error::FaceBudget { .. } => EXIT_IO,
            Error::Json(_)
            | Error::Csv(_)
            | Error::DuplicateVertex(_)
            | Error::UnknownVertex { .. }
            | Error::NotAFace(_)
            | Error::InvalidParameter(_)
            | Error::NonFinite
            | Error::NotSymmetric(..)
            | Error::IndexOutOfRange { .. } => EXIT_USAGE,
            Error::NoFaces(_) => EXIT_VACUOUS,
            Error::IdentityViolated(_) => EXIT_VIOLATION,
            Error::NotSubcomplex(_) => EXIT_NOT_SUBCOMPLEX,
        };
        Exit(code, e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Exit>;

/// Parses `args` (including the program name) and runs the command, writing
/// human-readable output to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let threads = threads_from_env();
    let result = with_threads(threads, move || {
        let mut buf = Vec::new();
        let r = dispatch(cli.command, &mut buf);
        (r, buf)
    });
    let (result, text) = result;
    let _ = out.write_all(&text);
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> CmdResult {
    match command {
        Command::Spectrum { input, tol } => cmd_spectrum(&input, tol, out),
        Command::BoundsMain1 { input } => cmd_bounds_main1(&input, out),
        Command::BoundsSub { input, sub } => cmd_bounds_sub(&input, &sub, out),
        Command::CohomBound { input } => cmd_cohom_bound(&input, out),
        Command::Verify {
            suite,
            trials,
            seed,
            max_vertices,
            out: path,
        } => cmd_verify(
            VerifyConfig {
                suite,
                trials,
                seed,
                max_vertices,
            },
            path.as_deref(),
            out,
        ),
        Command::Experiment {
            mode,
            n,
            p,
            k,
            s,
            trials,
            seed,
            report,
            summary,
            face_cap,
            sequential,
        } => {
            let config = GnpConfig {
                mode,
                n,
                p,
                k,
                s,
                trials,
                seed,
                face_cap,
            };
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            cmd_experiment(&config, exec, report.as_deref(), summary.as_deref(), out)
        }
    }
}

fn load(path: &Path) -> Result<crate::complex::SimplicialComplex, Exit> {
    read_complex(path).map_err(|e| {
        let Exit(code, msg) = Exit::from(e);
        Exit(code, format!("{}: {msg}", path.display()))
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Exit> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
        write_atomic(path, text.as_bytes())?;
    }
    Ok(())
}

fn vacuous(k: usize) -> Exit {
    Exit(
        EXIT_VACUOUS,
        format!("vacuous: the complex has no faces of dimension {k}"),
    )
}

fn fmt_num(v: f64) -> String {
    // Prints exact zeros for values that are zero up to rounding.
    let v = if v.abs() < 1e-9 { 0.0 } else { v };
    format!("{v:.6}")
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    k: usize,
    f_vector: Vec<usize>,
    betti: Vec<usize>,
    eigenvalues: &'a [f64],
    residual: f64,
}

fn cmd_spectrum(input: &InputArgs, tol: f64, out: &mut Vec<u8>) -> CmdResult {
    let x = load(&input.input)?;
    let k = input.dim;
    if x.f(k) == 0 {
        return Err(vacuous(k));
    }
    let spec: Spectrum = sym_eigenvalues(&laplacian_from_boundaries(&x, k), tol)?;
    let betti = betti_numbers(&x, k)?;
    let f_vector = x.f_vector();
    let _ = writeln!(out, "f-vector (from dim -1): {f_vector:?}");
    let _ = writeln!(out, "reduced betti 0..={k}: {betti:?}");
    let _ = writeln!(out, "eigenvalues of L_{k} ({}):", spec.len());
    for (i, l) in spec.eigenvalues.iter().enumerate() {
        let _ = writeln!(out, "{:>6}  {}", i + 1, fmt_num(*l));
    }
    write_json(
        input.out.as_deref(),
        &SpectrumOutput {
            k,
            f_vector,
            betti,
            eigenvalues: &spec.eigenvalues,
            residual: spec.residual,
        },
    )?;
    Ok(EXIT_OK)
}

fn print_bound_table(out: &mut Vec<u8>, r: &BoundReport) {
    let _ = writeln!(
        out,
        "k = {}, n = {}, correction = {}, defect = {}",
        r.k, r.n, r.correction, r.defect
    );
    let _ = writeln!(
        out,
        "{:>6}  {:>14}  {:>14}  {:>14}",
        "i", "bound", "actual", "slack"
    );
    for row in &r.per_index {
        let _ = writeln!(
            out,
            "{:>6}  {:>14}  {:>14}  {:>14}",
            row.i,
            fmt_num(row.lower_bound),
            fmt_num(row.actual),
            fmt_num(row.slack)
        );
    }
}

fn finish_bounds(r: &BoundReport, path: Option<&Path>, out: &mut Vec<u8>) -> CmdResult {
    if r.vacuous {
        return Err(vacuous(r.k));
    }
    print_bound_table(out, r);
    write_json(path, r)?;
    if r.holds(SLACK_REL_TOL) {
        Ok(EXIT_OK)
    } else {
        Err(Exit(
            EXIT_VIOLATION,
            format!("bound violated: minimum slack {:?}", r.min_slack()),
        ))
    }
}

fn cmd_bounds_main1(input: &InputArgs, out: &mut Vec<u8>) -> CmdResult {
    let x = load(&input.input)?;
    finish_bounds(
        &spectral_lower_bounds(&x, input.dim)?,
        input.out.as_deref(),
        out,
    )
}

fn cmd_bounds_sub(input: &InputArgs, sub: &Path, out: &mut Vec<u8>) -> CmdResult {
    let x = load(&input.input)?;
    let y = load(sub)?;
    finish_bounds(
        &subcomplex_bounds(&x, &y, input.dim)?,
        input.out.as_deref(),
        out,
    )
}

fn cmd_cohom_bound(input: &InputArgs, out: &mut Vec<u8>) -> CmdResult {
    let x = load(&input.input)?;
    let b = cohomology_dim_bound(&x, input.dim)?;
    if b.vacuous {
        return Err(vacuous(b.k));
    }
    let _ = writeln!(out, "k = {}, threshold = {}", b.k, b.threshold);
    let _ = writeln!(out, "bound = {}", b.bound);
    let _ = writeln!(out, "betti = {}", b.betti);
    if b.near_ties > 0 {
        let _ = writeln!(out, "near ties within cushion: {}", b.near_ties);
    }
    write_json(input.out.as_deref(), &b)?;
    if b.bound >= b.betti as u64 {
        Ok(EXIT_OK)
    } else {
        Err(Exit(
            EXIT_VIOLATION,
            format!("bound {} is below b̃_{} = {}", b.bound, b.k, b.betti),
        ))
    }
}

fn cmd_verify(config: VerifyConfig, path: Option<&Path>, out: &mut Vec<u8>) -> CmdResult {
    let report = run_suite(&config, Execution::default())?;
    let _ = writeln!(
        out,
        "suite {}: {} trials, {} checks, {} failures (seed {}, max vertices {})",
        report.suite,
        report.trials,
        report.checks,
        report.failures.len(),
        config.seed,
        config.max_vertices
    );
    for f in &report.failures {
        let _ = writeln!(
            out,
            "FAIL trial {} (seed {}): {}",
            f.trial, f.seed, f.message
        );
        if let Some(c) = &f.complex {
            let _ = writeln!(out, "complex: {}", c.to_json());
        }
        if let Some(c) = &f.subcomplex {
            let _ = writeln!(out, "subcomplex: {}", c.to_json());
        }
    }
    write_json(path, &report)?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn cmd_experiment(
    config: &GnpConfig,
    exec: Execution,
    report_path: Option<&Path>,
    summary_path: Option<&Path>,
    out: &mut Vec<u8>,
) -> CmdResult {
    let report = run_experiment(config, exec)?;
    if let Some(path) = report_path {
        write_atomic(path, trials_csv(config, &report.trials)?.as_bytes())?;
    }
    if let Some(path) = summary_path {
        write_atomic(path, summary_json(&report.summary).as_bytes())?;
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "mode {}: n = {}, p = {}, k = {}, s = {}, {} trials ({} skipped)",
        config.mode.name(),
        config.n,
        config.p,
        config.k,
        config.s,
        config.trials,
        s.skipped
    );
    if let Some(m) = s.missing_k {
        let _ = writeln!(
            out,
            "missing k-faces: mean {:.4} ± {:.4}, expected {:.4}, z = {}",
            m.mean,
            m.std_err,
            s.expected_missing_k,
            s.z_missing_k
                .map_or("undefined".to_string(), |z| format!("{z:.3}"))
        );
    }
    let _ = writeln!(
        out,
        "order inequality: {} pass, {} fail",
        s.order_pass, s.order_fail
    );
    if let Some(f) = s.complete_fraction {
        let _ = writeln!(out, "complete 1-skeleton fraction: {f:.3}");
    }
    if let Some(d) = s.delta_k {
        let _ = writeln!(
            out,
            "Δ(k): mean {:.4} ± {:.4}, bound {:.4}",
            d.mean, d.std_err, s.delta_k_markov_bound
        );
    }
    for (j, f) in s.betti_vanishing.iter().enumerate() {
        let _ = writeln!(out, "b̃_{j} = 0 fraction: {f:.3}");
    }
    if let Some(f) = s.joint_vanishing {
        let _ = writeln!(out, "joint vanishing fraction: {f:.3}");
    }
    for note in &s.notes {
        let _ = writeln!(out, "note: {note}");
    }
    if s.order_fail > 0 || s.delta_chain_violations > 0 {
        return Err(Exit(
            EXIT_VIOLATION,
            "a per-sample counting inequality failed".into(),
        ));
    }
    Ok(EXIT_OK)
}
