//! Symmetric eigen-decomposition `A Φ = Φ Λ` by cyclic Jacobi rotations,
//! spectral reconstruction `A = Φ Λ Φᵀ`, and the characteristic-polynomial
//! route (`det(A − λI) = 0`, then the null space of `A − λI`) for small `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{canonical_sign, null_space, Matrix, SymMatrix, Vector};
use crate::poly::{char_poly, real_roots};

/// Off-diagonal Frobenius threshold, relative to `‖A‖_F`.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest dimension accepted by [`char_poly_eig`].
pub const CHAR_POLY_MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOrder {
    #[default]
    Descending,
    Ascending,
}

impl SortOrder {
    pub fn flip(self) -> Self {
        match self {
            SortOrder::Descending => SortOrder::Ascending,
            SortOrder::Ascending => SortOrder::Descending,
        }
    }
}

/// Eigenvectors (columns of `phi`) and eigenvalues of a symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub phi: Matrix,
    pub lambda: Vec<f64>,
    pub order: SortOrder,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Reorders to `order`, keeping ties in their current relative order.
    pub fn sorted(mut self, order: SortOrder) -> Self {
        if order != self.order {
            let d = self.dim();
            let idx: Vec<usize> = (0..d).rev().collect();
            self.phi = self.phi.select_columns(&idx);
            self.lambda.reverse();
            self.order = order;
        }
        self
    }

    /// `‖A·Φ − Φ·diag(Λ)‖_F`.
    pub fn residual(&self, a: &SymMatrix) -> f64 {
        let ap = a.as_matrix().matmul(&self.phi).expect("conforming");
        let mut r = 0.0;
        for i in 0..ap.rows() {
            for j in 0..ap.cols() {
                let e = ap.get(i, j) - self.phi.get(i, j) * self.lambda[j];
                r += e * e;
            }
        }
        r.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            tol: JACOBI_TOL,
            max_sweeps: JACOBI_MAX_SWEEPS,
        }
    }
}

/// Full eigen-decomposition of a symmetric matrix.
///
/// Each eigenvector is signed so that its largest-magnitude entry is positive.
pub fn eig_sym(a: &SymMatrix, order: SortOrder) -> Result<EigenDecomposition> {
    eig_sym_with(a, order, JacobiOptions::default())
}

pub fn eig_sym_with(
    a: &SymMatrix,
    order: SortOrder,
    opts: JacobiOptions,
) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let threshold = opts.tol * m.frobenius_norm();

    let off_norm = |m: &Matrix| {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += m.get(p, q) * m.get(p, q);
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == opts.max_sweeps {
            return Err(Error::ConvergenceFailure {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (c, s) = sym_schur2(m.get(p, p), apq, m.get(q, q));
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let lambda: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    match order {
        SortOrder::Descending => idx.sort_by(|&i, &j| lambda[j].total_cmp(&lambda[i])),
        SortOrder::Ascending => idx.sort_by(|&i, &j| lambda[i].total_cmp(&lambda[j])),
    }
    let mut phi = v.select_columns(&idx);
    for j in 0..n {
        let mut col = phi.column(j).into_vec();
        canonical_sign(&mut col);
        phi.set_column(j, &col);
    }
    Ok(EigenDecomposition {
        phi,
        lambda: idx.iter().map(|&i| lambda[i]).collect(),
        order,
    })
}

/// Cosine/sine of the rotation zeroing the `(p, q)` entry of a symmetric 2×2 block.
fn sym_schur2(app: f64, apq: f64, aqq: f64) -> (f64, f64) {
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let t = if tau == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// `M ← JᵀMJ`, `V ← VJ` for the plane rotation `J(p, q)`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let (mkp, mkq) = (m.get(k, p), m.get(k, q));
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m.get(p, k), m.get(q, k));
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// `Φ · diag(Λ) · Φᵀ`.
pub fn spectral_reconstruct(decomp: &EigenDecomposition) -> SymMatrix {
    let phi = &decomp.phi;
    let (rows, k) = phi.shape();
    let mut scaled = phi.clone();
    for j in 0..k {
        for i in 0..rows {
            scaled[(i, j)] *= decomp.lambda[j];
        }
    }
    let prod = scaled.matmul(&phi.transpose()).expect("conforming");
    SymMatrix::symmetrize(&prod).expect("square")
}

/// Eigenvalues as the real roots of `det(A − λI)`, descending, for `d ≤ 4`.
pub fn char_poly_eig(a: &SymMatrix) -> Result<Vec<f64>> {
    if a.dim() > CHAR_POLY_MAX_DIM {
        return Err(Error::UnsupportedDimension {
            dim: a.dim(),
            max: CHAR_POLY_MAX_DIM,
        });
    }
    let mut roots = real_roots(&char_poly(a))?;
    roots.reverse();
    Ok(roots)
}

/// Unit eigenvector for an (approximate) eigenvalue `lam`, from the null
/// space of `A − lam·I` by row reduction.
///
/// For a repeated eigenvalue the first basis vector under complete pivoting
/// is returned.
pub fn eigvec_for(a: &SymMatrix, lam: f64) -> Result<Vector> {
    let shifted = a.shift_diagonal(-lam);
    let scale = a.as_matrix().frobenius_norm();
    let basis = null_space(shifted.as_matrix(), 1e-10 * scale, 1);
    let mut v = basis.into_iter().next().expect("at least one vector").into_vec();
    canonical_sign(&mut v);
    let v = Vector::new(v)?;
    let residual = shifted.as_matrix().mul_vec(&v)?.norm();
    let tol = 1e-6 * scale;
    if residual > tol {
        return Err(Error::NoNullSpace {
            lambda: lam,
            residual,
            tol,
        });
    }
    Ok(v)
}
