//! Generalized symmetric eigenproblem `A Φ = B Φ Λ` for a pencil `(A, B)`.
//!
//! Two solvers:
//!
//! - [`solve_quick_dirty`] reduces to the ordinary eigenproblem of
//!   `C = B⁻¹A` (with `B + εI` in place of a singular `B`). `C` is not
//!   symmetric, so for `d ≤ 4` the eigenvalues are taken as the roots of
//!   `det(A − λB)` and for larger `d` from a Hessenberg/shifted-QR
//!   factorization of `C`. Eigenvectors come from the null space of `A − λB`.
//! - [`solve_rigorous`] whitens `B`: with `B Φ_B = Φ_B Λ_B`, set
//!   `Φ̆_B = Φ_B Λ_B^{-1/2}`, diagonalize the symmetric `Ă = Φ̆_Bᵀ A Φ̆_B`
//!   as `Ă Φ_A = Φ_A Λ_A`, and return `Φ = Φ̆_B Φ_A`, `Λ = Λ_A`. A singular
//!   `Λ_B^{1/2}` is replaced by `Λ_B^{1/2} + εI`.

mod hqr;

use serde::{Deserialize, Serialize};

use crate::eigen::{eig_sym, SortOrder};
use crate::error::{Error, Result};
use crate::matrix::{
    canonical_sign, determinant_lu, inverse_square, null_space, Lu, Matrix, SymMatrix,
    DEFAULT_SINGULAR_TOL,
};
use crate::poly::{pencil_char_poly, real_roots, Poly};

/// Regularization strength suggested for singular `B`.
pub const DEFAULT_EPSILON: f64 = 1e-5;

/// Eigenvalues of `B` below `−NEG_EIG_TOL × max(1, max|λ_B|)` make `B` indefinite.
pub const NEG_EIG_TOL: f64 = 1e-9;

/// Largest dimension solved through `det(A − λB)` by the quick & dirty method.
pub const CHAR_POLY_MAX_DIM: usize = 4;

/// Ordered pair `(A, B)`; `(A, B)` and `(B, A)` are different problems.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    a: SymMatrix,
    b: SymMatrix,
}

impl Pencil {
    pub fn new(a: SymMatrix, b: SymMatrix) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(format!(
                "pencil matrices are {}x{} and {}x{}",
                a.dim(),
                a.dim(),
                b.dim(),
                b.dim()
            )));
        }
        Ok(Self { a, b })
    }

    /// `(A, I)`: the ordinary eigenproblem as a pencil.
    pub fn standard(a: SymMatrix) -> Self {
        let b = SymMatrix::identity(a.dim());
        Self { a, b }
    }

    pub fn a(&self) -> &SymMatrix {
        &self.a
    }

    pub fn b(&self) -> &SymMatrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    QuickDirty,
    Rigorous,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::QuickDirty => "quick_dirty",
            Method::Rigorous => "rigorous",
        }
    }
}

/// How the eigenvalues were actually computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Real roots of `det(A − λB)`.
    CharPoly,
    /// Shifted QR on the non-symmetric `C = B⁻¹A`.
    ShiftedQr,
    /// Whitening of `B` followed by a symmetric eigensolve.
    Whitening,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::CharPoly => "char_poly",
            Route::ShiftedQr => "shifted_qr",
            Route::Whitening => "whitening",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenEigenSolution {
    /// Generalized eigenvectors as columns.
    pub phi: Matrix,
    /// Eigenvalues, descending.
    pub lambda: Vec<f64>,
    pub method: Method,
    pub route: Route,
    pub epsilon_used: f64,
    /// `‖AΦ − BΦΛ‖_F / max(1, ‖A‖_F)` against the pencil as given.
    pub residual: f64,
    /// `‖ΦᵀBΦ − I‖_max` against the pencil as given.
    pub b_orthonormality: f64,
    /// The `B` this solution diagonalizes exactly: `B` itself when
    /// `epsilon_used == 0`, otherwise its regularized replacement.
    pub effective_b: SymMatrix,
    /// Eigenpairs lying in a null space shared by `A` and `B`, where any
    /// eigenvalue is admissible.
    pub deflated: Vec<bool>,
}

impl GenEigenSolution {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn any_deflated(&self) -> bool {
        self.deflated.iter().any(|&d| d)
    }
}

/// Audit trail of the whitening steps of [`solve_rigorous`].
#[derive(Clone, Debug, PartialEq)]
pub struct WhiteningIntermediates {
    pub phi_b: Matrix,
    pub lambda_b: Vec<f64>,
    /// `Φ̆_B = Φ_B Λ_B^{-1/2}` (or `Φ_B (Λ_B^{1/2} + εI)^{-1}`).
    pub phi_b_breve: Matrix,
    /// `Ă = Φ̆_Bᵀ A Φ̆_B`.
    pub a_breve: SymMatrix,
    /// Largest `|Ă − Ăᵀ|` entry before symmetrization.
    pub a_breve_asymmetry: f64,
    pub phi_a: Matrix,
    pub lambda_a: Vec<f64>,
}

fn resolve_epsilon(epsilon: Option<f64>, b: &SymMatrix) -> Result<f64> {
    match epsilon {
        Some(e) if !(e.is_finite() && e >= 0.0) => Err(Error::InvalidArgument(format!(
            "epsilon must be finite and non-negative, got {e}"
        ))),
        Some(e) => Ok(e),
        None => Ok(DEFAULT_EPSILON * b.as_matrix().max_abs().max(1.0)),
    }
}

fn is_singular(b: &SymMatrix) -> bool {
    let max = b.as_matrix().max_abs();
    max == 0.0 || Lu::decompose(b.as_matrix()).min_abs_pivot() <= DEFAULT_SINGULAR_TOL * max
}

/// Quick & dirty solution via `C = B⁻¹A`.
///
/// `epsilon` is used only when `B` is singular; `None` selects
/// [`DEFAULT_EPSILON`] scaled by `max(1, max|B|)`.
pub fn solve_quick_dirty(p: &Pencil, epsilon: Option<f64>) -> Result<GenEigenSolution> {
    let eps = if is_singular(&p.b) {
        resolve_epsilon(epsilon, &p.b)?
    } else {
        0.0
    };
    let b_eff = p.b.shift_diagonal(eps);
    let b_inv = match inverse_square(b_eff.as_matrix(), DEFAULT_SINGULAR_TOL) {
        Ok(inv) => inv,
        Err(_) => return Err(Error::SingularAfterRegularization { epsilon: eps }),
    };
    if eps > 0.0 {
        log::debug!("quick & dirty: B is singular, regularizing with epsilon = {eps:e}");
    }

    let d = p.dim();
    let (mut lambda, route) = if d <= CHAR_POLY_MAX_DIM {
        let poly = pencil_char_poly(&p.a, &b_eff)?;
        let roots: Vec<f64> = real_roots(&poly)?
            .into_iter()
            .map(|r| polish_root(&p.a, &b_eff, &poly, r))
            .collect();
        (roots, Route::CharPoly)
    } else {
        let c = b_inv.matmul(p.a.as_matrix())?;
        let ev = hqr::eigenvalues(&c)?;
        let scale = ev.iter().fold(1.0f64, |m, (re, im)| m.max(re.hypot(*im)));
        if let Some(&(re, im)) = ev.iter().find(|(_, im)| im.abs() > 1e-8 * scale) {
            return Err(Error::NonRealSpectrum { re, im });
        }
        (ev.into_iter().map(|(re, _)| re).collect(), Route::ShiftedQr)
    };
    if lambda.len() != d {
        return Err(Error::SingularAfterRegularization { epsilon: eps });
    }
    lambda.sort_by(|x, y| y.total_cmp(x));

    let phi = pencil_eigenvectors(&p.a, &b_eff, &lambda);
    Ok(finish(p, phi, lambda, Method::QuickDirty, route, eps, b_eff))
}

/// Newton steps on `det(A − λB)` evaluated by LU, which stays accurate when
/// the expanded coefficients have lost digits to cancellation.
fn polish_root(a: &SymMatrix, b: &SymMatrix, poly: &Poly, mut lam: f64) -> f64 {
    let f = |l: f64| determinant_lu(a.sub(&b.scale(l)).expect("same dimension").as_matrix());
    let dp = poly.derivative();
    let mut fl = f(lam);
    for _ in 0..4 {
        let slope = dp.eval(lam);
        if fl == 0.0 || slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = lam - fl / slope;
        let fn_ = f(next);
        if fn_.is_nan() || fn_.abs() >= fl.abs() {
            break;
        }
        lam = next;
        fl = fn_;
    }
    lam
}

/// Eigenvectors for sorted eigenvalues; clusters of (numerically) equal
/// eigenvalues share one null-space computation.
fn pencil_eigenvectors(a: &SymMatrix, b: &SymMatrix, lambda: &[f64]) -> Matrix {
    let d = a.dim();
    let spread = lambda.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let a_norm = a.as_matrix().frobenius_norm();
    let b_norm = b.as_matrix().frobenius_norm();
    let mut phi = Matrix::zeros(d, d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (lambda[start] - lambda[end]).abs() <= 1e-9 * spread {
            end += 1;
        }
        let k = end - start;
        let center = lambda[start..end].iter().sum::<f64>() / k as f64;
        let shifted = a.sub(&b.scale(center)).expect("same dimension");
        let tol = 1e-10 * (a_norm + center.abs() * b_norm);
        let basis = null_space(shifted.as_matrix(), tol, k);

        // B-orthonormalize the cluster basis (Euclidean where B is not positive on it).
        let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(k);
        for v in basis.into_iter() {
            if accepted.len() == k {
                break;
            }
            let mut v = v.into_vec();
            for u in &accepted {
                let coef = b_inner(b, u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= coef * y);
            }
            let bn = b_inner(b, &v, &v);
            let norm = if bn > 1e-14 * b_norm * dot(&v, &v) {
                bn.sqrt()
            } else {
                dot(&v, &v).sqrt()
            };
            if norm == 0.0 {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            accepted.push(v);
        }
        for (off, v) in accepted.into_iter().enumerate() {
            phi.set_column(start + off, &v);
        }
        start = end;
    }
    phi
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn b_inner(b: &SymMatrix, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        let row = b.as_matrix().row(i);
        s += x[i] * dot(row, y);
    }
    s
}

/// Rigorous solution by whitening `B` with the default regularization.
pub fn solve_rigorous(p: &Pencil) -> Result<(GenEigenSolution, WhiteningIntermediates)> {
    solve_rigorous_with(p, None)
}

/// Rigorous solution; `epsilon` replaces `Λ_B^{1/2}` by `Λ_B^{1/2} + εI`
/// when `B` is (numerically) singular. `None` selects [`DEFAULT_EPSILON`]
/// scaled by `max(1, max|B|)`.
pub fn solve_rigorous_with(
    p: &Pencil,
    epsilon: Option<f64>,
) -> Result<(GenEigenSolution, WhiteningIntermediates)> {
    // Φ_B, Λ_B
    let eb = eig_sym(&p.b, SortOrder::Descending)?;
    let lambda_b = eb.lambda.clone();
    let lam_max = lambda_b.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let lam_min = *lambda_b.last().expect("non-empty");
    let neg_tol = NEG_EIG_TOL * lam_max.max(1.0);
    if lam_min < -neg_tol {
        return Err(Error::IndefiniteB {
            min_eigenvalue: lam_min,
            tol: -neg_tol,
        });
    }
    let singular = lam_max == 0.0 || lam_min <= DEFAULT_SINGULAR_TOL * lam_max;
    let eps = if singular {
        resolve_epsilon(epsilon, &p.b)?
    } else {
        0.0
    };
    let root: Vec<f64> = lambda_b.iter().map(|l| l.max(0.0).sqrt() + eps).collect();
    if let Some(r) = root.iter().find(|&&r| r == 0.0) {
        return Err(Error::SingularAfterRegularization { epsilon: *r });
    }
    if eps > 0.0 {
        log::debug!("rigorous: Λ_B^(1/2) is singular, regularizing with epsilon = {eps:e}");
    }

    // Φ̆_B = Φ_B (Λ_B^{1/2} + εI)^{-1}
    let d = p.dim();
    let mut phi_b_breve = eb.phi.clone();
    for j in 0..d {
        for i in 0..d {
            phi_b_breve[(i, j)] /= root[j];
        }
    }

    // Ă = Φ̆_Bᵀ A Φ̆_B
    let raw = phi_b_breve
        .transpose()
        .matmul(p.a.as_matrix())?
        .matmul(&phi_b_breve)?;
    let a_breve_asymmetry = raw.max_abs_diff(&raw.transpose());
    let a_breve = SymMatrix::symmetrize(&raw)?;

    // Φ_A, Λ_A; Λ = Λ_A, Φ = Φ̆_B Φ_A
    let ea = eig_sym(&a_breve, SortOrder::Descending)?;
    let mut phi = phi_b_breve.matmul(&ea.phi)?;
    for j in 0..d {
        let mut col = phi.column(j).into_vec();
        canonical_sign(&mut col);
        phi.set_column(j, &col);
    }

    let effective_b = if eps == 0.0 {
        p.b.clone()
    } else {
        let mut scaled = eb.phi.clone();
        for j in 0..d {
            for i in 0..d {
                scaled[(i, j)] *= root[j] * root[j];
            }
        }
        SymMatrix::symmetrize(&scaled.matmul(&eb.phi.transpose())?)?
    };

    let inter = WhiteningIntermediates {
        phi_b: eb.phi,
        lambda_b,
        phi_b_breve,
        a_breve,
        a_breve_asymmetry,
        phi_a: ea.phi,
        lambda_a: ea.lambda.clone(),
    };
    let sol = finish(
        p,
        phi,
        ea.lambda,
        Method::Rigorous,
        Route::Whitening,
        eps,
        effective_b,
    );
    Ok((sol, inter))
}

fn finish(
    p: &Pencil,
    mut phi: Matrix,
    lambda: Vec<f64>,
    method: Method,
    route: Route,
    epsilon_used: f64,
    effective_b: SymMatrix,
) -> GenEigenSolution {
    let d = p.dim();
    for j in 0..phi.cols() {
        let mut col = phi.column(j).into_vec();
        canonical_sign(&mut col);
        phi.set_column(j, &col);
    }
    let a_norm = p.a.as_matrix().frobenius_norm();
    let b_norm = p.b.as_matrix().frobenius_norm();
    let ap = p.a.as_matrix().matmul(&phi).expect("conforming");
    let bp = p.b.as_matrix().matmul(&phi).expect("conforming");
    let deflated = (0..d)
        .map(|j| {
            let (mut na, mut nb, mut nphi) = (0.0, 0.0, 0.0);
            for i in 0..d {
                na += ap.get(i, j).powi(2);
                nb += bp.get(i, j).powi(2);
                nphi += phi.get(i, j).powi(2);
            }
            let nphi = nphi.sqrt();
            na.sqrt() <= 1e-8 * a_norm * nphi && nb.sqrt() <= 1e-8 * b_norm * nphi
        })
        .collect();
    let mut sol = GenEigenSolution {
        phi,
        lambda,
        method,
        route,
        epsilon_used,
        residual: 0.0,
        b_orthonormality: 0.0,
        effective_b,
        deflated,
    };
    sol.residual = pencil_residual(p, &sol).expect("conforming");
    sol.b_orthonormality = b_orthonormality(p.b(), &sol.phi).expect("conforming");
    sol
}

/// `‖AΦ − BΦ·diag(Λ)‖_F / max(1, ‖A‖_F)`.
pub fn pencil_residual(p: &Pencil, sol: &GenEigenSolution) -> Result<f64> {
    let d = p.dim();
    if sol.phi.rows() != d || sol.phi.cols() != sol.lambda.len() {
        return Err(Error::DimensionMismatch(format!(
            "solution has a {}x{} eigenvector matrix and {} eigenvalues for a pencil of dimension {d}",
            sol.phi.rows(),
            sol.phi.cols(),
            sol.lambda.len()
        )));
    }
    let ap = p.a.as_matrix().matmul(&sol.phi)?;
    let bp = p.b.as_matrix().matmul(&sol.phi)?;
    let mut r = 0.0;
    for i in 0..d {
        for (j, lam) in sol.lambda.iter().enumerate() {
            let e = ap.get(i, j) - bp.get(i, j) * lam;
            r += e * e;
        }
    }
    Ok(r.sqrt() / p.a.as_matrix().frobenius_norm().max(1.0))
}

/// `‖ΦᵀBΦ − I‖_max`.
pub fn b_orthonormality(b: &SymMatrix, phi: &Matrix) -> Result<f64> {
    let g = b.congruence(phi)?;
    Ok(g.as_matrix().max_abs_diff(&Matrix::identity(phi.cols())))
}
