//! The `genspectra` command: CSV in, JSON or CSV result documents out.
//!
//! Exit codes: 0 on success, 1 for input or configuration errors, 2 when
//! the numerics fail.

mod csv_io;

pub use csv_io::{
    format_float, parse_labeled_csv, parse_matrix_csv, write_matrix_csv, LabelColumn, ParseError,
};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::eigen::{eig_sym, SortOrder};
use crate::error::Error;
use crate::gen_eigen::{solve_quick_dirty, solve_rigorous_with, Pencil};
use crate::matrix::{Matrix, SymMatrix, Vector, DEFAULT_SYM_TOL};
use crate::ml::{fda_fit, kspca_fit_with, pca_fit, EmbeddingModel, KernelSpec};
use crate::rayleigh::{check_stationarity, solve_form2, Direction, QuadraticForm};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Solver(#[from] Error),

    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "genspectra", version, about = "Symmetric and generalized eigensolvers, PCA, FDA and kernel supervised PCA on CSV data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigen-decomposition of a symmetric matrix.
    Eig(EigArgs),
    /// Generalized eigenproblem A φ = λ B φ.
    Geig(GeigArgs),
    /// Principal component analysis (one sample per row).
    Pca(PcaArgs),
    /// Fisher discriminant analysis (one labeled sample per row).
    Fda(FdaArgs),
    /// Kernel supervised PCA (one labeled sample per row).
    Kspca(KspcaArgs),
    /// Extremize the Rayleigh quotient of A (against B), or evaluate it at a vector.
    Rayleigh(RayleighArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Desc,
    Asc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rigorous,
    #[value(name = "quick_dirty", alias = "quick-dirty")]
    QuickDirty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Linear,
    Rbf,
    Polynomial,
    Delta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabelKernelArg {
    Delta,
    Linear,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path; `-` writes to standard output.
    #[arg(long, short, default_value = "-")]
    pub output: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Eigenvalue order in the output.
    #[arg(long, value_enum, default_value_t = OrderArg::Desc)]
    pub order: OrderArg,
    /// Warn when the residual diagnostic exceeds this value.
    #[arg(long, default_value_t = 1e-6)]
    pub resid_tol: f64,
    /// Include the wall-clock runtime in the JSON metadata (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SymArgs {
    /// Symmetry tolerance, relative to max(1, max|a_ij|).
    #[arg(long, default_value_t = DEFAULT_SYM_TOL)]
    pub sym_tol: f64,
}

#[derive(Debug, Args)]
pub struct EigArgs {
    /// Symmetric matrix CSV.
    pub input: PathBuf,
    #[command(flatten)]
    pub sym: SymArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GeigArgs {
    /// Symmetric matrix A CSV.
    pub a: PathBuf,
    /// Symmetric matrix B CSV.
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Rigorous)]
    pub method: MethodArg,
    /// Regularization applied when B is singular [default: 1e-5 * max(1, max|B|)].
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub sym: SymArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    /// Data CSV, one sample per row.
    pub input: PathBuf,
    /// Number of components.
    #[arg(long, short, default_value_t = 1)]
    pub p: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Label column: header name or 0-based index [default: last column].
    #[arg(long)]
    pub label_column: Option<LabelColumn>,
}

#[derive(Debug, Args)]
pub struct FdaArgs {
    /// Labeled data CSV, one sample per row.
    pub input: PathBuf,
    #[arg(long, short, default_value_t = 1)]
    pub p: usize,
    /// Regularization applied when S_W is singular [default: 1e-5 * max(1, max|S_W|)].
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub labels: LabelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct KspcaArgs {
    /// Labeled data CSV, one sample per row.
    pub input: PathBuf,
    #[arg(long, short, default_value_t = 1)]
    pub p: usize,
    /// Regularization applied when K_x is singular [default: 1e-5 * max(1, max|K_x|)].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Feature kernel.
    #[arg(long, value_enum, default_value_t = KernelArg::Rbf)]
    pub kernel: KernelArg,
    /// RBF width [default: 1 / number of features].
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    #[arg(long, default_value_t = 1.0)]
    pub coef0: f64,
    /// Label kernel.
    #[arg(long, value_enum, default_value_t = LabelKernelArg::Delta)]
    pub label_kernel: LabelKernelArg,
    #[command(flatten)]
    pub labels: LabelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RayleighArgs {
    /// Symmetric matrix A CSV.
    pub a: PathBuf,
    /// Symmetric constraint matrix B CSV [default: identity].
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
    pub direction: DirectionArg,
    /// Number of directions.
    #[arg(long, short, default_value_t = 1)]
    pub p: usize,
    /// Evaluate the quotient and stationarity at this vector (CSV, one row or one column).
    #[arg(long)]
    pub vector: Option<PathBuf>,
    #[command(flatten)]
    pub sym: SymArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Serialize)]
struct Diagnostics {
    residual: f64,
    b_orthonormality: f64,
    method: String,
    epsilon_used: f64,
}

#[derive(Debug, Serialize)]
struct Meta {
    dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<f64>,
}

/// The result document written by every command.
#[derive(Debug, Serialize)]
struct Document {
    command: &'static str,
    eigenvalues: Vec<f64>,
    /// One list per eigenvector (column).
    vectors: Vec<Vec<f64>>,
    diagnostics: Diagnostics,
    meta: Meta,
}

impl Document {
    fn new(
        command: &'static str,
        lambda: &[f64],
        phi: &Matrix,
        diagnostics: Diagnostics,
        dims: Vec<usize>,
        order: OrderArg,
    ) -> Self {
        // `+ 0.0` turns -0.0 into 0.0
        let mut pairs: Vec<(f64, Vec<f64>)> = lambda
            .iter()
            .copied()
            .zip(phi.to_columns())
            .map(|(l, v)| (l + 0.0, v.into_iter().map(|x| x + 0.0).collect()))
            .collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        if order == OrderArg::Asc {
            pairs.reverse();
        }
        let (eigenvalues, vectors) = pairs.into_iter().unzip();
        Self {
            command,
            eigenvalues,
            vectors,
            diagnostics,
            meta: Meta {
                dims,
                runtime_ms: None,
            },
        }
    }

    fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => {
                let k = self.vectors.first().map_or(0, Vec::len);
                let mut out = String::from("eigenvalue");
                for i in 1..=k {
                    out.push_str(&format!(",v{i}"));
                }
                out.push('\n');
                for (l, v) in self.eigenvalues.iter().zip(&self.vectors) {
                    out.push_str(&format_float(*l));
                    for x in v {
                        out.push(',');
                        out.push_str(&format_float(*x));
                    }
                    out.push('\n');
                }
                out.into_bytes()
            }
        }
    }
}

fn read_sym(path: &Path, sym: &SymArgs) -> Result<SymMatrix, CliError> {
    if !(sym.sym_tol.is_finite() && sym.sym_tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "--sym-tol must be non-negative, got {}",
            sym.sym_tol
        ))
        .into());
    }
    let m = parse_matrix_csv(path)?;
    Ok(SymMatrix::with_tolerance(m, sym.sym_tol)?)
}

fn model_diagnostics(m: &EmbeddingModel) -> Diagnostics {
    Diagnostics {
        residual: m.diagnostics.residual,
        b_orthonormality: m.diagnostics.b_orthonormality,
        method: m.diagnostics.method.to_string(),
        epsilon_used: m.diagnostics.epsilon_used,
    }
}

fn check_epsilon(epsilon: Option<f64>) -> Result<(), CliError> {
    match epsilon {
        Some(e) if !(e.is_finite() && e >= 0.0) => Err(Error::InvalidArgument(format!(
            "--epsilon must be non-negative, got {e}"
        ))
        .into()),
        _ => Ok(()),
    }
}

fn eig_cmd(args: &EigArgs) -> Result<Document, CliError> {
    let a = read_sym(&args.input, &args.sym)?;
    let e = eig_sym(&a, SortOrder::Descending)?;
    let ortho = e
        .phi
        .transpose()
        .matmul(&e.phi)?
        .max_abs_diff(&Matrix::identity(a.dim()));
    let diag = Diagnostics {
        residual: e.residual(&a) / a.as_matrix().frobenius_norm().max(1.0),
        b_orthonormality: ortho,
        method: "jacobi".into(),
        epsilon_used: 0.0,
    };
    Ok(Document::new("eig", &e.lambda, &e.phi, diag, vec![a.dim()], args.out.order))
}

fn geig_cmd(args: &GeigArgs) -> Result<Document, CliError> {
    check_epsilon(args.epsilon)?;
    let a = read_sym(&args.a, &args.sym)?;
    let b = read_sym(&args.b, &args.sym)?;
    let pencil = Pencil::new(a, b)?;
    let sol = match args.method {
        MethodArg::Rigorous => solve_rigorous_with(&pencil, args.epsilon)?.0,
        MethodArg::QuickDirty => solve_quick_dirty(&pencil, args.epsilon)?,
    };
    let diag = Diagnostics {
        residual: sol.residual,
        b_orthonormality: sol.b_orthonormality,
        method: sol.method.as_str().into(),
        epsilon_used: sol.epsilon_used,
    };
    Ok(Document::new("geig", &sol.lambda, &sol.phi, diag, vec![pencil.dim()], args.out.order))
}

fn pca_cmd(args: &PcaArgs) -> Result<Document, CliError> {
    let x = parse_matrix_csv(&args.input)?.transpose();
    let m = pca_fit(&x, args.p)?;
    Ok(Document::new(
        "pca",
        &m.eigenvalues,
        &m.projection,
        model_diagnostics(&m),
        vec![x.rows(), x.cols()],
        args.out.order,
    ))
}

fn label_column(l: &LabelArgs) -> LabelColumn {
    l.label_column.clone().unwrap_or(LabelColumn::Last)
}

fn fda_cmd(args: &FdaArgs) -> Result<Document, CliError> {
    check_epsilon(args.epsilon)?;
    let (ds, _) = parse_labeled_csv(&args.input, &label_column(&args.labels))?;
    let m = fda_fit(&ds, args.p, args.epsilon)?;
    Ok(Document::new(
        "fda",
        &m.eigenvalues,
        &m.projection,
        model_diagnostics(&m),
        vec![ds.dim(), ds.len()],
        args.out.order,
    ))
}

fn kspca_cmd(args: &KspcaArgs) -> Result<Document, CliError> {
    check_epsilon(args.epsilon)?;
    let (ds, _) = parse_labeled_csv(&args.input, &label_column(&args.labels))?;
    let kx = match args.kernel {
        KernelArg::Linear => KernelSpec::Linear,
        KernelArg::Rbf => KernelSpec::Rbf { gamma: args.gamma },
        KernelArg::Polynomial => KernelSpec::Polynomial {
            degree: args.degree,
            coef0: args.coef0,
        },
        KernelArg::Delta => KernelSpec::Delta,
    };
    let ky = match args.label_kernel {
        LabelKernelArg::Delta => KernelSpec::Delta,
        LabelKernelArg::Linear => KernelSpec::Linear,
    };
    let m = kspca_fit_with(&ds, args.p, &kx, &ky, args.epsilon)?;
    Ok(Document::new(
        "kspca",
        &m.eigenvalues,
        &m.projection,
        model_diagnostics(&m),
        vec![ds.dim(), ds.len()],
        args.out.order,
    ))
}

fn rayleigh_cmd(args: &RayleighArgs) -> Result<Document, CliError> {
    let a = read_sym(&args.a, &args.sym)?;
    let b = args.b.as_ref().map(|p| read_sym(p, &args.sym)).transpose()?;
    let d = a.dim();
    if let Some(path) = &args.vector {
        let m = parse_matrix_csv(path)?;
        let u = Vector::from_slice(m.as_slice())?;
        if u.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "vector has {} entries, A is {d}x{d}",
                u.dim()
            ))
            .into());
        }
        let r = check_stationarity(&u, &a, b.as_ref())?;
        let diag = Diagnostics {
            residual: r.residual,
            b_orthonormality: r.constraint_violation,
            method: "quotient".into(),
            epsilon_used: 0.0,
        };
        let phi = Matrix::from_columns(&[u])?;
        return Ok(Document::new("rayleigh", &[r.multiplier], &phi, diag, vec![d], args.out.order));
    }
    let direction = match args.direction {
        DirectionArg::Max => Direction::Maximize,
        DirectionArg::Min => Direction::Minimize,
    };
    let q = QuadraticForm::new(a, b, direction, args.p)?;
    let (phi, lambda) = solve_form2(&q)?;
    let ortho = match &q.b {
        Some(b) => crate::gen_eigen::b_orthonormality(b, &phi)?,
        None => phi.transpose().matmul(&phi)?.max_abs_diff(&Matrix::identity(phi.cols())),
    };
    let mut r = 0.0;
    for (j, l) in lambda.iter().enumerate() {
        let rep = check_stationarity(&phi.column(j), &q.a, q.b.as_ref())?;
        debug_assert!((rep.multiplier - l).abs() <= 1e-6 * l.abs().max(1.0));
        r += rep.residual * rep.residual;
    }
    let diag = Diagnostics {
        residual: r.sqrt() / q.a.as_matrix().frobenius_norm().max(1.0),
        b_orthonormality: ortho,
        method: if q.b.is_some() { "rigorous" } else { "jacobi" }.into(),
        epsilon_used: 0.0,
    };
    Ok(Document::new("rayleigh", &lambda, &phi, diag, vec![d], args.out.order))
}

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Eig(a) => &a.out,
        Command::Geig(a) => &a.out,
        Command::Pca(a) => &a.out,
        Command::Fda(a) => &a.out,
        Command::Kspca(a) => &a.out,
        Command::Rayleigh(a) => &a.out,
    }
}

/// Runs one command and writes its result document.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let mut doc = match &cli.command {
        Command::Eig(a) => eig_cmd(a)?,
        Command::Geig(a) => geig_cmd(a)?,
        Command::Pca(a) => pca_cmd(a)?,
        Command::Fda(a) => fda_cmd(a)?,
        Command::Kspca(a) => kspca_cmd(a)?,
        Command::Rayleigh(a) => rayleigh_cmd(a)?,
    };
    let out = output_args(&cli.command);
    if doc.diagnostics.residual > out.resid_tol {
        log::warn!(
            "{}: residual {:e} exceeds {:e}",
            doc.command,
            doc.diagnostics.residual,
            out.resid_tol
        );
    }
    if out.timing {
        doc.meta.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let bytes = doc.render(out.format);
    let written = if out.output == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(&bytes).and_then(|_| stdout.flush())
    } else {
        std::fs::write(&out.output, &bytes)
    };
    written.map_err(|e| CliError::Output {
        path: out.output.clone(),
        message: e.to_string(),
    })
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
