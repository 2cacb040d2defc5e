//! Rayleigh-quotient objectives and their solution by eigen-decomposition.
//!
//! The optimization forms covered here, each with an optional `B`
//! (identity when absent):
//!
//! 1. extremize `φᵀAφ` subject to `φᵀBφ = 1`;
//! 2. extremize `tr(ΦᵀAΦ)` subject to `ΦᵀBΦ = I`;
//! 3. minimize `‖X − φφᵀX‖_F²` subject to `φᵀφ = 1` (one direction);
//! 4. minimize `‖X − ΦΦᵀX‖_F²` subject to `ΦᵀΦ = I` (several directions);
//! 5. extremize the quotient `φᵀAφ / φᵀBφ`.
//!
//! Every form is stationary exactly where `(A − λB)φ = 0`, so each is
//! solved by picking eigenpairs of `A` or of the pencil `(A, B)`.

use serde::{Deserialize, Serialize};

use crate::eigen::{eig_sym, SortOrder};
use crate::error::{Error, Result};
use crate::gen_eigen::{solve_rigorous, Pencil};
use crate::matrix::{trace_square, Matrix, SymMatrix, Vector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Maximize,
    Minimize,
}

/// The objective `φᵀAφ` (or its trace form) under the constraint `ΦᵀBΦ = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    pub a: SymMatrix,
    pub b: Option<SymMatrix>,
    pub direction: Direction,
    /// Number of directions `p` sought by the trace forms.
    pub subspace_dim: usize,
}

impl QuadraticForm {
    pub fn new(
        a: SymMatrix,
        b: Option<SymMatrix>,
        direction: Direction,
        subspace_dim: usize,
    ) -> Result<Self> {
        if let Some(b) = &b {
            if b.dim() != a.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "A is {0}x{0} but B is {1}x{1}",
                    a.dim(),
                    b.dim()
                )));
            }
        }
        check_subspace_dim(subspace_dim, a.dim())?;
        Ok(Self {
            a,
            b,
            direction,
            subspace_dim,
        })
    }

    /// Single-direction form (`p = 1`).
    pub fn single(a: SymMatrix, b: Option<SymMatrix>, direction: Direction) -> Result<Self> {
        Self::new(a, b, direction, 1)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

fn check_subspace_dim(p: usize, d: usize) -> Result<()> {
    if p == 0 || p > d {
        return Err(Error::InvalidArgument(format!(
            "number of directions must be in 1..={d}, got {p}"
        )));
    }
    Ok(())
}

/// First-order (Lagrangian) conditions at a candidate `u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StationarityReport {
    /// `‖Au − λBu‖₂`.
    pub residual: f64,
    /// `λ = ρ(u; A, B)`.
    pub multiplier: f64,
    /// `|uᵀBu − 1|`.
    pub constraint_violation: f64,
}

/// `ρ(u; A, B) = uᵀAu / uᵀBu`.
pub fn rayleigh_quotient(u: &Vector, a: &SymMatrix, b: Option<&SymMatrix>) -> Result<f64> {
    let norm_sq = u.dot(u);
    if norm_sq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let num = a.quadratic_form(u)?;
    let den = match b {
        Some(b) => b.quadratic_form(u)?,
        None => norm_sq,
    };
    if den.abs() < 1e-14 * norm_sq {
        return Err(Error::DegenerateDenominator { value: den });
    }
    Ok(num / den)
}

/// Eigenpairs of `A` (or the pencil `(A, B)`), descending.
fn spectrum(a: &SymMatrix, b: Option<&SymMatrix>) -> Result<(Matrix, Vec<f64>)> {
    match b {
        None => {
            let d = eig_sym(a, SortOrder::Descending)?;
            Ok((d.phi, d.lambda))
        }
        Some(b) => {
            let (s, _) = solve_rigorous(&Pencil::new(a.clone(), b.clone())?)?;
            Ok((s.phi, s.lambda))
        }
    }
}

/// Extremal `p` eigenpairs: the largest for maximization (descending), the
/// smallest for minimization (ascending).
fn extremal(phi: Matrix, lambda: Vec<f64>, p: usize, direction: Direction) -> (Matrix, Vec<f64>) {
    let d = lambda.len();
    let idx: Vec<usize> = match direction {
        Direction::Maximize => (0..p).collect(),
        Direction::Minimize => (0..p).map(|k| d - 1 - k).collect(),
    };
    let values = idx.iter().map(|&i| lambda[i]).collect();
    (phi.select_columns(&idx), values)
}

/// Form 1: the extremal eigenvector and its eigenvalue, with `φᵀBφ = 1`.
pub fn solve_form1(q: &QuadraticForm) -> Result<(Vector, f64)> {
    let (phi, lambda) = spectrum(&q.a, q.b.as_ref())?;
    let (phi, lambda) = extremal(phi, lambda, 1, q.direction);
    Ok((phi.column(0), lambda[0]))
}

/// Form 2: the `q.subspace_dim` extremal eigenpairs. The achieved objective
/// `tr(ΦᵀAΦ)` equals the sum of the returned eigenvalues.
pub fn solve_form2(q: &QuadraticForm) -> Result<(Matrix, Vec<f64>)> {
    let (phi, lambda) = spectrum(&q.a, q.b.as_ref())?;
    Ok(extremal(phi, lambda, q.subspace_dim, q.direction))
}

/// Form 5: extremize `φᵀAφ / φᵀBφ`. Returns the optimizer (scaled so that
/// `φᵀBφ = 1`) and the optimal quotient.
pub fn solve_form5(a: &SymMatrix, b: Option<&SymMatrix>, direction: Direction) -> Result<(Vector, f64)> {
    solve_form1(&QuadraticForm::single(a.clone(), b.cloned(), direction)?)
}

/// `tr(ΦᵀAΦ)`.
pub fn trace_objective(phi: &Matrix, a: &SymMatrix) -> Result<f64> {
    Ok(trace_square(&a.congruence(phi)?.into_matrix()))
}

fn orthonormality_gap(phi: &Matrix) -> f64 {
    let g = phi.transpose().matmul(phi).expect("conforming");
    g.max_abs_diff(&Matrix::identity(phi.cols()))
}

/// Forms 3/4 objective `‖X − ΦΦᵀX‖_F²` for a basis with orthonormal columns.
pub fn reconstruction_objective(x: &Matrix, phi: &Matrix) -> Result<f64> {
    if phi.rows() != x.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows but data has {}",
            phi.rows(),
            x.rows()
        )));
    }
    let deviation = orthonormality_gap(phi);
    if deviation > 1e-8 {
        return Err(Error::NonOrthonormalBasis { deviation });
    }
    let coords = phi.transpose().matmul(x)?;
    let recon = phi.matmul(&coords)?;
    Ok(x.sub(&recon)?.frobenius_norm_sq())
}

/// Forms 3/4: the top-`p` eigenpairs of `A = XXᵀ` (generalized against `B`
/// when given), which minimize the reconstruction error.
pub fn solve_form3_4(x: &Matrix, p: usize, b: Option<&SymMatrix>) -> Result<(Matrix, Vec<f64>)> {
    check_subspace_dim(p, x.rows())?;
    let a = SymMatrix::symmetrize(&x.matmul(&x.transpose())?)?;
    let (phi, lambda) = spectrum(&a, b)?;
    Ok(extremal(phi, lambda, p, Direction::Maximize))
}

/// Stationarity of `ρ(·; A, B)` at `u`, with `λ = ρ(u)`.
pub fn check_stationarity(
    u: &Vector,
    a: &SymMatrix,
    b: Option<&SymMatrix>,
) -> Result<StationarityReport> {
    let lambda = rayleigh_quotient(u, a, b)?;
    let au = a.as_matrix().mul_vec(u)?;
    let bu = match b {
        Some(b) => b.as_matrix().mul_vec(u)?,
        None => u.clone(),
    };
    let residual = au.sub(&bu.scale(lambda)).norm();
    Ok(StationarityReport {
        residual,
        multiplier: lambda,
        constraint_violation: (u.dot(&bu) - 1.0).abs(),
    })
}
