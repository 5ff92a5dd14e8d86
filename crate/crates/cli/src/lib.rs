//! Command-line front end for `kchi-core`.
//!
//! [`parse_args`] turns argv into a validated [`RunConfig`]; [`run`] executes it
//! and returns the JSON document to emit. Every document carries the schema tag
//! `kchi-report/1`, and identical arguments, inputs and seeds give byte-identical
//! output.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error (including unreadable or
//! malformed input files), 3 numeric or resource error, 4 a reported check failed.

pub mod io;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kchi_core::combinat::Partition;
use kchi_core::denselin::{svd, CMatrix, MAX_TENSOR_DIM};
use kchi_core::norms::{
    dk_immanant_report, dk_norm_verify_with, immanant, perturbation_bounds, DerivTolerances,
    SAMPLE_TOL,
};
use kchi_core::random::{gaussian_matrix, sample_rng};
use kchi_core::symclass::SymmetryClass;
use kchi_core::symgroup::char_table;
use kchi_core::REPORT_SCHEMA;
use serde::Serialize;
use serde_json::{json, Value};

/// Environment variable that lowers the `n^m` cap on tensor dimensions.
pub const MAX_DIM_ENV: &str = "KCHI_MAX_DIM";

/// Stream index used for the random `T` of `kchi norm` without `--input`;
/// samples use streams `0..samples`.
pub const RANDOM_T_STREAM: u64 = u64::MAX;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// `--help` or `--version`: print and exit 0.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Core(#[from] kchi_core::Error),
    /// The command ran, but its own consistency check failed.
    #[error("{message}")]
    CheckFailed { message: String, document: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 1,
            CliError::Core(kchi_core::Error::Domain(_)) => 2,
            CliError::Core(_) => 3,
            CliError::CheckFailed { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output: Option<PathBuf>,
    /// Cap on `n^m`; never above the library default.
    pub max_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Chartable {
        m: usize,
    },
    Power {
        chi: Partition,
        n: Option<usize>,
        input: PathBuf,
    },
    Deriv {
        chi: Partition,
        k: usize,
        input: PathBuf,
        xs: Vec<PathBuf>,
    },
    Norm {
        chi: Partition,
        n: usize,
        k: usize,
        input: Option<PathBuf>,
        samples: usize,
        seed: u64,
        tolerances: DerivTolerances,
    },
    Immanant {
        chi: Partition,
        input: PathBuf,
    },
    Bound {
        chi: Partition,
        k: usize,
        input: PathBuf,
        samples: usize,
        seed: u64,
        tolerance: f64,
    },
    Perturb {
        chi: Partition,
        delta: f64,
        input: PathBuf,
    },
    Verify {
        max_n: usize,
        seed: u64,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "kchi",
    version,
    about = "χ-symmetric tensor powers, immanants and their derivative norms"
)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Number of random unit-norm tuples.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Character table of S_m.
    Chartable {
        #[arg(long)]
        m: usize,
    },
    /// K_χ(A) in the orthonormal basis of V_χ.
    Power {
        #[arg(long)]
        chi: Partition,
        /// Optional; must match the size of the input matrix.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        input: PathBuf,
    },
    /// D^k K_χ(T)(X¹,…,X^k).
    Deriv {
        #[arg(long)]
        chi: Partition,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
        /// One matrix file per direction; exactly k of them.
        #[arg(long = "x", num_args = 1..)]
        xs: Vec<PathBuf>,
    },
    /// Closed-form ‖D^k K_χ(T)‖ checked against direct evaluation.
    Norm {
        #[arg(long)]
        chi: Partition,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// T; a seeded Gaussian matrix when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Allowed excess of the sampled maximum over the formula.
        #[arg(long, default_value_t = SAMPLE_TOL)]
        tol: f64,
        /// Relative tolerance for the exact evaluations.
        #[arg(long, default_value_t = kchi_core::norms::EXACT_REL_TOL)]
        rel_tol: f64,
    },
    /// d_χ(A).
    Immanant {
        #[arg(long)]
        chi: Partition,
        #[arg(long)]
        input: PathBuf,
    },
    /// Bound on ‖D^k d_χ(A)‖ next to a sampled lower estimate.
    Bound {
        #[arg(long)]
        chi: Partition,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = SAMPLE_TOL)]
        tol: f64,
    },
    /// Perturbation bounds for K_χ and d_χ at a perturbation of norm delta.
    Perturb {
        #[arg(long)]
        chi: Partition,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the full verification suite.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn nonneg_finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(usage(format!(
            "--{name} must be finite and nonnegative, got {v}"
        )))
    }
}

/// Parses and validates argv (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if args.is_empty() {
        args.push("kchi".into());
    }
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    let command = match cli.command {
        Sub::Chartable { m } => {
            if m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            Command::Chartable { m }
        }
        Sub::Power { chi, n, input } => {
            if n == Some(0) {
                return Err(usage("--n must be at least 1"));
            }
            Command::Power { chi, n, input }
        }
        Sub::Deriv { chi, k, input, xs } => {
            if xs.len() != k {
                return Err(usage(format!(
                    "--k {k} needs exactly {k} --x files, got {}",
                    xs.len()
                )));
            }
            Command::Deriv { chi, k, input, xs }
        }
        Sub::Norm {
            chi,
            n,
            k,
            input,
            sampling,
            tol,
            rel_tol,
        } => {
            if k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            if chi.total() > n {
                return Err(usage(format!("|χ| = {} exceeds --n {n}", chi.total())));
            }
            if sampling.samples == 0 {
                return Err(usage("--samples must be at least 1"));
            }
            Command::Norm {
                chi,
                n,
                k,
                input,
                samples: sampling.samples,
                seed: sampling.seed,
                tolerances: DerivTolerances {
                    sample: nonneg_finite("tol", tol)?,
                    exact_rel: nonneg_finite("rel-tol", rel_tol)?,
                },
            }
        }
        Sub::Immanant { chi, input } => Command::Immanant { chi, input },
        Sub::Bound {
            chi,
            k,
            input,
            sampling,
            tol,
        } => {
            if k > chi.total() {
                return Err(usage(format!("--k {k} exceeds |χ| = {}", chi.total())));
            }
            Command::Bound {
                chi,
                k,
                input,
                samples: sampling.samples,
                seed: sampling.seed,
                tolerance: nonneg_finite("tol", tol)?,
            }
        }
        Sub::Perturb { chi, delta, input } => Command::Perturb {
            chi,
            delta: nonneg_finite("delta", delta)?,
            input,
        },
        Sub::Verify { max_n, seed } => {
            if !(verify::MIN_MAX_N..=verify::MAX_MAX_N).contains(&max_n) {
                return Err(usage(format!(
                    "--max-n must lie in {}..={}, got {max_n}",
                    verify::MIN_MAX_N,
                    verify::MAX_MAX_N
                )));
            }
            Command::Verify { max_n, seed }
        }
    };
    Ok(RunConfig {
        command,
        output: cli.output,
        max_dim: MAX_TENSOR_DIM,
    })
}

impl RunConfig {
    /// Applies `KCHI_MAX_DIM` if set; it can only lower the cap.
    pub fn with_max_dim_env(mut self, value: Option<&str>) -> Result<Self, CliError> {
        if let Some(v) = value {
            let cap: usize = v.trim().parse().ok().filter(|&c| c > 0).ok_or_else(|| {
                usage(format!(
                    "{MAX_DIM_ENV} must be a positive integer, got {v:?}"
                ))
            })?;
            self.max_dim = self.max_dim.min(cap);
        }
        Ok(self)
    }
}

fn build_class(chi: &Partition, n: usize, cap: usize) -> Result<SymmetryClass, CliError> {
    Ok(SymmetryClass::build_with_cap(chi, n, cap)?)
}

fn square_input(path: &Path) -> Result<CMatrix, CliError> {
    let a = io::read_matrix(path)?;
    if !a.is_square() {
        return Err(kchi_core::Error::Domain(format!(
            "{}: expected a square matrix, got {}x{}",
            path.display(),
            a.rows(),
            a.cols()
        ))
        .into());
    }
    Ok(a)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Executes a parsed command and returns its JSON document.
pub fn run(cfg: &RunConfig) -> Result<Value, CliError> {
    let doc = match &cfg.command {
        Command::Chartable { m } => {
            let table = char_table(*m)?;
            let parts: Vec<&[usize]> = table.partitions().iter().map(|p| p.parts()).collect();
            json!({
                "schema": REPORT_SCHEMA,
                "m": m,
                "characters": parts,
                "cycle_types": parts,
                "values": table.rows(),
            })
        }
        Command::Power { chi, n, input } => {
            let a = square_input(input)?;
            if let Some(n) = n {
                if *n != a.rows() {
                    return Err(kchi_core::Error::Domain(format!(
                        "--n {n} does not match the {}x{} input",
                        a.rows(),
                        a.cols()
                    ))
                    .into());
                }
            }
            let sc = build_class(chi, a.rows(), cfg.max_dim)?;
            let k = sc.k_chi_matrix(&a)?;
            json!({
                "schema": REPORT_SCHEMA,
                "chi": chi,
                "n": sc.n(),
                "dim": sc.dim(),
                "matrix": io::finite_matrix(&k)?,
            })
        }
        Command::Deriv { chi, k, input, xs } => {
            let t = square_input(input)?;
            let xs = xs
                .iter()
                .map(|p| square_input(p))
                .collect::<Result<Vec<_>, _>>()?;
            let sc = build_class(chi, t.rows(), cfg.max_dim)?;
            let d = sc.dk_kchi(&t, &xs)?;
            json!({
                "schema": REPORT_SCHEMA,
                "chi": chi,
                "n": sc.n(),
                "k": k,
                "dim": sc.dim(),
                "matrix": io::finite_matrix(&d)?,
            })
        }
        Command::Norm {
            chi,
            n,
            k,
            input,
            samples,
            seed,
            tolerances,
        } => {
            let t = match input {
                Some(p) => square_input(p)?,
                None => gaussian_matrix(&mut sample_rng(*seed, RANDOM_T_STREAM), *n, *n),
            };
            if t.rows() != *n {
                return Err(kchi_core::Error::Domain(format!(
                    "--n {n} does not match the {}x{} input",
                    t.rows(),
                    t.cols()
                ))
                .into());
            }
            let sc = build_class(chi, *n, cfg.max_dim)?;
            let report = dk_norm_verify_with(&sc, &t, *k, *samples, *seed, *tolerances)?;
            let doc = io::finite_document(to_value(&report))?;
            if !report.consistent {
                return Err(CliError::CheckFailed {
                    message: "sampled or exact value disagrees with the closed form".into(),
                    document: doc,
                });
            }
            doc
        }
        Command::Immanant { chi, input } => {
            let a = square_input(input)?;
            let v = immanant(chi, &a)?;
            io::finite_document(json!({
                "schema": REPORT_SCHEMA,
                "chi": chi,
                "n": a.rows(),
                "value": [v.re, v.im],
            }))?
        }
        Command::Bound {
            chi,
            k,
            input,
            samples,
            seed,
            tolerance,
        } => {
            let a = square_input(input)?;
            let report = dk_immanant_report(chi, &a, *k, *samples, *seed, *tolerance)?;
            let doc = io::finite_document(to_value(&report))?;
            if !report.consistent {
                return Err(CliError::CheckFailed {
                    message: "sampled derivative exceeds the bound".into(),
                    document: doc,
                });
            }
            doc
        }
        Command::Perturb { chi, delta, input } => {
            let t = square_input(input)?;
            let nu = svd(&t)?.s;
            let b = perturbation_bounds(chi, &nu, *delta)?;
            io::finite_document(json!({
                "schema": REPORT_SCHEMA,
                "chi": chi,
                "n": t.rows(),
                "delta": delta,
                "singular_values": nu,
                "kchi_bound": b.kchi_bound,
                "imm_bound": b.imm_bound,
            }))?
        }
        Command::Verify { max_n, seed } => {
            let report = verify::run_suite(&verify::VerifyConfig {
                max_n: *max_n,
                seed: *seed,
                max_dim: cfg.max_dim,
            })?;
            let doc = io::finite_document(to_value(&report))?;
            if !report.pass {
                return Err(CliError::CheckFailed {
                    message: format!(
                        "{} of {} criteria failed",
                        report.failed().len(),
                        report.criteria.len()
                    ),
                    document: doc,
                });
            }
            doc
        }
    };
    Ok(doc)
}

/// Runs argv end to end, writing the document and returning the exit code.
/// Diagnostics go to `stderr`.
pub fn main_with<W: std::io::Write, E: std::io::Write>(
    argv: Vec<OsString>,
    env_max_dim: Option<&str>,
    stdout: &mut W,
    stderr: &mut E,
) -> i32 {
    let cfg = match parse_args(argv).and_then(|c| c.with_max_dim_env(env_max_dim)) {
        Ok(c) => c,
        Err(CliError::Info(text)) => {
            let _ = write!(stdout, "{text}");
            return 0;
        }
        Err(e) => {
            let _ = write!(stderr, "{e}");
            if !e.to_string().ends_with('\n') {
                let _ = writeln!(stderr);
            }
            return e.exit_code();
        }
    };
    let (doc, code) = match run(&cfg) {
        Ok(doc) => (Some(doc), 0),
        Err(CliError::CheckFailed { message, document }) => {
            let _ = writeln!(stderr, "kchi: check failed: {message}");
            (Some(document), 4)
        }
        Err(e) => {
            let _ = writeln!(stderr, "kchi: {e}");
            (None, e.exit_code())
        }
    };
    if let Some(doc) = doc {
        if let Err(e) = io::emit(&doc, cfg.output.as_deref(), stdout) {
            let _ = writeln!(stderr, "kchi: {e}");
            return 2;
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        parse_args(std::iter::once("kchi").chain(args.iter().copied()))
    }

    #[test]
    fn norm_flags() {
        let cfg = parse(&["norm", "--chi", "2,1", "--n", "3", "--k", "1"]).unwrap();
        match cfg.command {
            Command::Norm {
                chi,
                n,
                k,
                input,
                samples,
                ..
            } => {
                assert_eq!(chi.parts(), &[2, 1]);
                assert_eq!((n, k, samples), (3, 1, 1000));
                assert!(input.is_none());
            }
            other => panic!("parsed as {other:?}"),
        }
        assert_eq!(cfg.output, None);
    }

    #[test]
    fn rejects_bad_partitions_and_flags() {
        for args in [
            &["norm", "--chi", "1,2", "--n", "3", "--k", "1"][..],
            &["norm", "--chi", "2,x", "--n", "3", "--k", "1"],
            &["norm", "--chi", "2,1", "--n", "3", "--k", "1", "--bogus"],
            &["norm", "--chi", "2,1", "--n", "2", "--k", "1"],
            &["norm", "--chi", "2,1", "--n", "3", "--k", "0"],
            &[
                "deriv", "--chi", "2", "--k", "2", "--input", "t.json", "--x", "x.json",
            ],
            &[
                "perturb", "--chi", "2", "--delta", "-1", "--input", "t.json",
            ],
            &["verify", "--max-n", "9"],
            &["frobnicate"],
            &[],
        ] {
            let err = parse(args).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{args:?}");
        }
    }

    #[test]
    fn verify_flags() {
        let cfg = parse(&["verify", "--max-n", "4", "--seed", "7"]).unwrap();
        assert_eq!(cfg.command, Command::Verify { max_n: 4, seed: 7 });
        let cfg = parse(&["verify", "--max-n", "3", "--output", "r.json"]).unwrap();
        assert_eq!(cfg.output, Some(PathBuf::from("r.json")));
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(parse(&["--help"]).unwrap_err().exit_code(), 0);
    }

    #[test]
    fn env_cap_only_lowers() {
        let cfg = parse(&["chartable", "--m", "3"]).unwrap();
        assert_eq!(
            cfg.clone().with_max_dim_env(Some("64")).unwrap().max_dim,
            64
        );
        assert_eq!(
            cfg.clone()
                .with_max_dim_env(Some("1000000"))
                .unwrap()
                .max_dim,
            MAX_TENSOR_DIM
        );
        assert_eq!(
            cfg.clone().with_max_dim_env(None).unwrap().max_dim,
            MAX_TENSOR_DIM
        );
        assert!(cfg.with_max_dim_env(Some("zero")).is_err());
    }

    #[test]
    fn chartable_document() {
        let cfg = parse(&["chartable", "--m", "3"]).unwrap();
        let doc = run(&cfg).unwrap();
        assert_eq!(doc["schema"], REPORT_SCHEMA);
        assert_eq!(doc["characters"], json!([[3], [2, 1], [1, 1, 1]]));
        assert_eq!(doc["values"], json!([[1, 1, 1], [-1, 0, 2], [1, -1, 1]]));
    }
}
