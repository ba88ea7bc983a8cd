//! Command-line front end.
//!
//! Exit codes: 0 success or verified pass, 1 verified fail, 2 input error,
//! 3 computation error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::basis::{self, BasisKind, BasisSpec};
use crate::error::{Error, Result};
use crate::io::{self, PencilBasis, PencilFile, ProblemFile};
use crate::linalg::{self, CMat};
use crate::spaces::{self, AnsatzPencil, Space};
use crate::spectra::{self, Verdict, VerifyOptions};
use crate::system::{BlockDims, Realization};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rosenlin", version, about = "Ansatz-space linearizations of Rosenbrock system matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Source {
    C1,
    C2,
    Dl,
    Sym,
    Herm,
    Explicit,
}

#[derive(clap::Args, Debug, Clone)]
pub struct TolArgs {
    /// Relative membership tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Scaled ansatz-residual tolerance.
    #[arg(long)]
    pub tol_res: Option<f64>,
    /// Eigenvalue matching tolerance.
    #[arg(long)]
    pub tol_eig: Option<f64>,
    /// Halve every tolerance.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a pencil from a problem file.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "c1")]
        source: Source,
        /// l1s | l1g | l2g (explicit source only).
        #[arg(long)]
        space: Option<String>,
        /// monomial | chebyshev | newton:<x0>,<x1>,...
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check that a pencil linearizes the system of a problem file.
    Verify {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Eigenvalues of a pencil with recovered eigenvectors of G.
    Solve {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Draw seeded members of a space and report the verification pass rate.
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        space: Option<String>,
        /// Directory receiving one pencil file per sample.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Dimension of L1(G) for a partition (m, n, k, r).
    Dim {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) => EXIT_INPUT,
        _ => EXIT_COMPUTE,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Build { input, source, space, basis, output } => {
            cmd_build(&input, source, space.as_deref(), basis.as_deref(), output.as_deref())
        }
        Command::Verify { pencil, input, tols } => cmd_verify(&pencil, &input, &tols),
        Command::Solve { pencil, input } => cmd_solve(&pencil, &input),
        Command::Sample { input, count, space, output, tols } => {
            cmd_sample(&input, count, space.as_deref(), output.as_deref(), &tols)
        }
        Command::Dim { m, n, k, r } => {
            let dims = BlockDims::new(m, n, k, r).map_err(|e| Error::Input(e.to_string()))?;
            print_line(&spaces::dim_space(&dims).to_string());
            Ok(EXIT_PASS)
        }
    }
}

fn parse_space(s: &str) -> Result<Space> {
    s.parse().map_err(|e: Error| Error::Input(e.to_string()))
}

fn basis_specs(kind: &str, dims: &BlockDims) -> Result<Option<PencilBasis>> {
    let kind: BasisKind = kind.parse().map_err(|e: Error| Error::Input(e.to_string()))?;
    if kind == BasisKind::Monomial {
        return Ok(None);
    }
    Ok(Some(PencilBasis { a: BasisSpec::new(kind.clone(), dims.m), d: BasisSpec::new(kind, dims.k) }))
}

fn explicit_params(pf: &ProblemFile, dims: &BlockDims) -> Result<(Vec<num_complex::Complex64>, Vec<num_complex::Complex64>, CMat, CMat)> {
    let o = &pf.options;
    let need = |name: &str| Error::Input(format!("explicit source needs options.{name}"));
    let v = io::vector_from_json(o.v.as_ref().ok_or_else(|| need("v"))?);
    let w = io::vector_from_json(o.w.as_ref().ok_or_else(|| need("w"))?);
    let block = |m: &Option<io::JsonMatrix>, rows: usize, cols: usize, name: &str| -> Result<CMat> {
        match m {
            Some(m) => io::matrix_from_json(m, name),
            None if cols == 0 => Ok(linalg::zeros(rows, 0)),
            None => Err(need(name)),
        }
    };
    let w_a = block(&o.w_a, dims.top(), (dims.m - 1) * dims.n, "W")?;
    let w_d = block(&o.w_d, dims.bottom(), (dims.k - 1) * dims.r, "W1")?;
    Ok((v, w, w_a, w_d))
}

fn build_from_problem(
    pf: &ProblemFile,
    real: &Realization,
    source: Source,
    space: Option<&str>,
    basis: Option<&PencilBasis>,
) -> Result<AnsatzPencil> {
    let dims = real.dims();
    let l1_params = |p: &AnsatzPencil| (p.v.clone(), p.w.clone(), p.w_a.clone(), p.w_d.clone());
    let (space, params) = match source {
        Source::C1 => (Space::L1G, l1_params(&spaces::build_c1(real))),
        Source::C2 => (Space::L2G, l1_params(&spaces::build_c2(real))),
        Source::Dl | Source::Sym | Source::Herm => {
            if basis.is_some() {
                return Err(Error::Input("--basis applies to L1/L2 sources only".into()));
            }
            return match source {
                Source::Dl => Ok(spaces::build_dl(real)),
                Source::Sym => spaces::build_symmetric(real),
                _ => spaces::build_hermitian(real),
            };
        }
        Source::Explicit => {
            let space = match space.map(parse_space).transpose()? {
                Some(s) => s,
                None => pf.options.space.unwrap_or(Space::L1G),
            };
            if !matches!(space, Space::L1S | Space::L1G | Space::L2G) {
                return Err(Error::Input(format!("explicit source cannot build space {space}")));
            }
            (space, explicit_params(pf, &dims)?)
        }
    };
    let (v, w, w_a, w_d) = params;
    match (basis, space) {
        (None, Space::L2G) => spaces::build_pencil_l2(real, &v, &w, &w_a, &w_d),
        (None, s) => spaces::build_pencil_l1(real, &v, &w, &w_a, &w_d, s),
        (Some(b), Space::L2G) => basis::build_l2_tilde(real, &b.a, &b.d, &v, &w, &w_a, &w_d),
        (Some(b), Space::L1G) => basis::build_l1_tilde(real, &b.a, &b.d, &v, &w, &w_a, &w_d),
        (Some(_), s) => Err(Error::Input(format!("--basis is not supported for space {s}"))),
    }
}

fn print_json<T: Serialize>(value: &T) {
    print_line(&serde_json::to_string_pretty(value).expect("reports serialize"));
}

/// Writes one line to stdout; a closed pipe (`| head`) is not an error.
fn print_line(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn cmd_build(
    input: &Path,
    source: Source,
    space: Option<&str>,
    basis: Option<&str>,
    output: Option<&Path>,
) -> Result<i32> {
    let (pf, real) = io::read_problem(input)?;
    let basis = match basis.or(pf.options.basis.as_deref()) {
        Some(b) => basis_specs(b, &real.dims())?,
        None => None,
    };
    let pencil = build_from_problem(&pf, &real, source, space, basis.as_ref())?;
    let file = PencilFile::from_pencil(&pencil, basis);
    match output {
        Some(path) => io::write_json(path, &file)?,
        None => print_json(&file),
    }
    Ok(EXIT_PASS)
}

/// The pencil in the monomial frame, undoing any basis change.
fn monomial_pencil(file: &PencilFile, real: &Realization) -> Result<AnsatzPencil> {
    let mut p = file.to_pencil()?;
    if p.dims != real.dims() {
        return Err(Error::Input(format!(
            "pencil partition {:?} does not match the realization {:?}",
            p.dims,
            real.dims()
        )));
    }
    if let Some(b) = &file.basis {
        let (x, y) = if p.space == Space::L2G {
            basis::tilde_to_monomial_l2(&p.x, &p.y, &b.a, &b.d, &p.dims)?
        } else {
            basis::tilde_to_monomial(&p.x, &p.y, &b.a, &b.d, &p.dims)?
        };
        p = AnsatzPencil::explicit(x, y, p.dims, p.space, p.v, p.w)?;
    }
    Ok(p)
}

fn verify_options(pf: &ProblemFile, tols: &TolArgs) -> VerifyOptions {
    let mut o = VerifyOptions::default();
    if let Some(t) = tols.tol.or(pf.options.tol) {
        o.tol_membership = t;
    }
    if let Some(t) = tols.tol_res {
        o.tol_residual = t;
    }
    if let Some(t) = tols.tol_eig.or(pf.options.tol_eig) {
        o.tol_eig = t;
    }
    if let Some(s) = tols.seed.or(pf.options.seed) {
        o.seed = s;
    }
    if tols.strict {
        o = o.strict();
    }
    o
}

pub fn cmd_verify(pencil: &Path, input: &Path, tols: &TolArgs) -> Result<i32> {
    let (pf, real) = io::read_problem(input)?;
    let file = io::read_pencil(pencil)?;
    let p = monomial_pencil(&file, &real)?;
    let report = spectra::verify_linearization(&p, &real, &verify_options(&pf, tols))?;
    print_json(&report);
    Ok(if report.verdict == Verdict::Pass { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct RecoveredJson {
    eigenvalue: num_complex::Complex64,
    vector: Vec<num_complex::Complex64>,
    transfer_residual: Option<f64>,
    structural_residual: Option<f64>,
    fallback: bool,
}

pub fn cmd_solve(pencil: &Path, input: &Path) -> Result<i32> {
    let (_, real) = io::read_problem(input)?;
    let file = io::read_pencil(pencil)?;
    let p = monomial_pencil(&file, &real)?;
    let sol = spectra::solve_pencil(&p.x, &p.y)?;
    let mut right = Vec::new();
    let mut left = Vec::new();
    for (i, &lambda) in sol.eigenvalues.iter().enumerate() {
        if p.space.is_right() {
            if let Ok(rec) = spectra::recover_right(&sol.right[i], &p.dims, &real, lambda) {
                right.push(RecoveredJson {
                    eigenvalue: lambda,
                    transfer_residual: spectra::right_transfer_residual(&real, &rec.x, lambda).ok(),
                    structural_residual: rec.structural_residual,
                    fallback: rec.fallback,
                    vector: rec.x,
                });
            }
        }
        if p.space.is_left() {
            if let Ok(rec) = spectra::recover_left(&sol.left[i], &p.dims, &real, lambda) {
                left.push(RecoveredJson {
                    eigenvalue: lambda,
                    transfer_residual: spectra::left_transfer_residual(&real, &rec.x, lambda).ok(),
                    structural_residual: rec.structural_residual,
                    fallback: rec.fallback,
                    vector: rec.x,
                });
            }
        }
    }
    print_json(&json!({
        "eigenvalues": sol.eigenvalues,
        "infinite": sol.infinite,
        "indeterminate": sol.indeterminate,
        "right": right,
        "left": left,
    }));
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct SampleLine {
    index: usize,
    seed: u64,
    verdict: Option<Verdict>,
    max_eig_error: Option<f64>,
    z_rank_full: Option<bool>,
    error: Option<String>,
}

pub fn cmd_sample(
    input: &Path,
    count: usize,
    space: Option<&str>,
    output: Option<&Path>,
    tols: &TolArgs,
) -> Result<i32> {
    let (pf, real) = io::read_problem(input)?;
    let space = match space.map(parse_space).transpose()? {
        Some(s) => s,
        None => pf.options.space.unwrap_or(Space::L1G),
    };
    let opts = verify_options(&pf, tols);
    let base = opts.seed;
    if let Some(dir) = output {
        std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
    }
    let lines: Vec<SampleLine> = (0..count)
        .into_par_iter()
        .map(|i| {
            let seed = base.wrapping_add(i as u64);
            let result = spaces::sample_space(&real, seed, space).and_then(|p| {
                if let Some(dir) = output {
                    io::write_json(&dir.join(format!("sample_{i:04}.json")), &PencilFile::from_pencil(&p, None))?;
                }
                spectra::verify_linearization(&p, &real, &VerifyOptions { seed, ..opts })
            });
            match result {
                Ok(rep) => SampleLine {
                    index: i,
                    seed,
                    verdict: Some(rep.verdict),
                    max_eig_error: Some(rep.max_eig_error),
                    z_rank_full: rep.z_rank.as_ref().map(|z| z.full_l && z.full_k),
                    error: None,
                },
                Err(e) => SampleLine {
                    index: i,
                    seed,
                    verdict: None,
                    max_eig_error: None,
                    z_rank_full: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let passed = lines.iter().filter(|l| l.verdict == Some(Verdict::Pass)).count();
    let rate = if count == 0 { None } else { Some(passed as f64 / count as f64) };
    print_json(&json!({
        "space": space,
        "count": count,
        "passed": passed,
        "pass_rate": rate,
        "samples": lines,
    }));
    Ok(EXIT_PASS)
}
