//! Dense row-major matrices, symmetric matrices and vectors.
//!
//! Everything here is plain `f64` arithmetic on small desk-scale problems.
//! [`SymMatrix`] is the carrier for every symmetric operand in the crate
//! (A, B, scatter matrices, kernel Gram matrices); construction checks the
//! symmetry tolerance and stores the symmetrized part `(M + Mᵀ)/2`.

use std::ops::{Index, IndexMut};

use crate::eigen::{eig_sym, SortOrder};
use crate::error::{Error, Result};

/// Default relative tolerance for accepting a matrix as symmetric.
pub const DEFAULT_SYM_TOL: f64 = 1e-9;

/// Default relative pivot threshold below which a matrix counts as singular.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-12;

/// Largest dimension handled by exact cofactor expansion in [`determinant`].
pub const COFACTOR_MAX_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Result<Self> {
        let ncols = columns.len();
        let nrows = columns.first().map_or(0, Vector::dim);
        if columns.iter().any(|c| c.dim() != nrows) {
            return Err(Error::DimensionMismatch(
                "columns have different lengths".into(),
            ));
        }
        let mut m = Self::new(nrows, ncols, vec![0.0; nrows * ncols])?;
        for (j, c) in columns.iter().enumerate() {
            m.set_column(j, c.as_slice());
        }
        Ok(m)
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        assert_eq!(values.len(), self.rows);
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    /// Columns in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len().max(1));
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, k)] = self.get(i, j);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j).0).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entrywise difference; `INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A real symmetric `d×d` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Accepts `m` if it is symmetric within [`DEFAULT_SYM_TOL`] and stores `(m + mᵀ)/2`.
    pub fn new(m: Matrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_SYM_TOL)
    }

    /// Like [`SymMatrix::new`] with an explicit relative tolerance:
    /// `|m[i][j] − m[j][i]| ≤ tol × max(1, max|m|)`.
    pub fn with_tolerance(m: Matrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        let bound = tol * m.max_abs().max(1.0);
        let n = m.rows;
        let mut out = m.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (m.get(i, j), m.get(j, i));
                let gap = (a - b).abs();
                if gap > bound {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        gap,
                        tol: bound,
                    });
                }
                let avg = 0.5 * (a + b);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(Self(out))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Symmetric part `(m + mᵀ)/2` of a square matrix, without a tolerance check.
    pub fn symmetrize(m: &Matrix) -> Result<Self> {
        Self::with_tolerance(m.clone(), f64::INFINITY)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn from_diag(values: &[f64]) -> Self {
        Self(Matrix::from_diag(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `uᵀ M u`.
    pub fn quadratic_form(&self, u: &Vector) -> Result<f64> {
        Ok(self.0.mul_vec(u)?.dot(u))
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix(self.0.scale(s))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        Ok(SymMatrix(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        Ok(SymMatrix(self.0.sub(&other.0)?))
    }

    /// `M + s·I`.
    pub fn shift_diagonal(&self, s: f64) -> SymMatrix {
        let mut m = self.0.clone();
        for i in 0..self.dim() {
            m[(i, i)] += s;
        }
        SymMatrix(m)
    }

    /// `Pᵀ M P` for a rectangular `P`.
    pub fn congruence(&self, p: &Matrix) -> Result<SymMatrix> {
        let prod = p.transpose().matmul(&self.0)?.matmul(p)?;
        SymMatrix::symmetrize(&prod)
    }
}

/// A real column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension("vector must be non-empty".into()));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Self(values))
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    /// Unit vector `e_i` of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|v| v * s).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.matmul(b)
}

pub fn transpose(a: &Matrix) -> Matrix {
    a.transpose()
}

pub fn trace(a: &SymMatrix) -> f64 {
    trace_square(a.as_matrix())
}

/// Sum of the diagonal of any matrix (over `min(rows, cols)`).
pub fn trace_square(a: &Matrix) -> f64 {
    (0..a.rows().min(a.cols())).map(|i| a.get(i, i)).sum()
}

pub fn frobenius_norm_sq(a: &Matrix) -> f64 {
    a.frobenius_norm_sq()
}

/// Determinant: cofactor expansion up to [`COFACTOR_MAX_DIM`], LU above.
pub fn determinant(a: &SymMatrix) -> f64 {
    let m = a.as_matrix();
    if m.rows() <= COFACTOR_MAX_DIM {
        determinant_cofactor(m)
    } else {
        determinant_lu(m)
    }
}

/// Laplace expansion along the first row. Exponential cost; meant for tiny matrices.
pub fn determinant_cofactor(a: &Matrix) -> f64 {
    assert!(a.is_square());
    let idx: Vec<usize> = (0..a.rows()).collect();
    cofactor_rec(a, 0, &idx)
}

fn cofactor_rec(a: &Matrix, row: usize, cols: &[usize]) -> f64 {
    if cols.len() == 1 {
        return a.get(row, cols[0]);
    }
    let mut det = 0.0;
    let mut sign = 1.0;
    for &c in cols {
        let v = a.get(row, c);
        if v != 0.0 {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            det += sign * v * cofactor_rec(a, row + 1, &rest);
        }
        sign = -sign;
    }
    det
}

/// Determinant by LU with partial pivoting.
pub fn determinant_lu(a: &Matrix) -> f64 {
    assert!(a.is_square());
    let lu = Lu::decompose(a);
    lu.sign * (0..a.rows()).map(|i| lu.lu.get(i, i)).product::<f64>()
}

/// LU factorization with partial pivoting, `P·A = L·U`.
pub(crate) struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub(crate) fn decompose(a: &Matrix) -> Self {
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu.get(k, k).abs();
            for i in (k + 1)..n {
                let v = lu.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu.get(k, k);
            if pivot == 0.0 {
                continue;
            }
            for i in (k + 1)..n {
                let f = lu.get(i, k) / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in (k + 1)..n {
                        let u = lu.get(k, j);
                        lu[(i, j)] -= f * u;
                    }
                }
            }
        }
        Self { lu, perm, sign }
    }

    pub(crate) fn min_abs_pivot(&self) -> f64 {
        (0..self.lu.rows())
            .map(|i| self.lu.get(i, i).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `A x = b` for one right-hand side.
    fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.lu.get(i, i);
        }
        b.copy_from_slice(&x);
    }

    pub(crate) fn inverse(&self) -> Matrix {
        let n = self.lu.rows();
        let mut inv = Matrix::zeros(n, n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            inv.set_column(j, &col);
        }
        inv
    }
}

/// Inverse of a symmetric matrix.
///
/// Singularity is judged on the LU pivots: the matrix is rejected when the
/// smallest pivot is at most `DEFAULT_SINGULAR_TOL × max|a|`.
pub fn inverse(a: &SymMatrix) -> Result<SymMatrix> {
    inverse_with_tol(a, DEFAULT_SINGULAR_TOL)
}

pub fn inverse_with_tol(a: &SymMatrix, singular_tol: f64) -> Result<SymMatrix> {
    let inv = inverse_square(a.as_matrix(), singular_tol)?;
    SymMatrix::symmetrize(&inv)
}

pub(crate) fn inverse_square(a: &Matrix, singular_tol: f64) -> Result<Matrix> {
    let lu = Lu::decompose(a);
    let pivot = lu.min_abs_pivot();
    let tol = singular_tol * a.max_abs();
    if pivot <= tol || !pivot.is_finite() {
        return Err(Error::SingularMatrix { pivot, tol });
    }
    Ok(lu.inverse())
}

/// `H = I − (1/n)·𝟙𝟙ᵀ`.
pub fn centering_matrix(n: usize) -> SymMatrix {
    let mut m = Matrix::zeros(n, n);
    let off = 1.0 / n as f64;
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = if i == j { 1.0 - off } else { -off };
        }
    }
    SymMatrix(m)
}

/// True when the smallest eigenvalue of `a` is at least `−tol`.
pub fn is_psd(a: &SymMatrix, tol: f64) -> bool {
    match eig_sym(a, SortOrder::Ascending) {
        Ok(d) => d.lambda[0] >= -tol,
        Err(_) => false,
    }
}

/// Basis of the (numerical) null space of a square matrix by Gaussian
/// elimination with complete pivoting.
///
/// Pivots at or below `tol` are treated as zero. At least `min_dim` basis
/// vectors are returned: if fewer pivots fall under `tol`, the trailing
/// (smallest) pivots are declared free anyway. Ties in pivot choice go to the
/// lowest row, then the lowest column, so the result is deterministic.
/// Returned vectors are unit-norm but not mutually orthogonal.
pub(crate) fn null_space(m: &Matrix, tol: f64, min_dim: usize) -> Vec<Vector> {
    let n = m.rows();
    debug_assert!(m.is_square());
    let mut u = m.clone();
    let mut colperm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = u.get(i, j).abs();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if pi != k {
            for j in 0..n {
                u.data.swap(k * n + j, pi * n + j);
            }
        }
        if pj != k {
            for i in 0..n {
                u.data.swap(i * n + k, i * n + pj);
            }
            colperm.swap(k, pj);
        }
        pivots.push(best);
        let pivot = u.get(k, k);
        if pivot == 0.0 {
            break;
        }
        for i in (k + 1)..n {
            let f = u.get(i, k) / pivot;
            if f != 0.0 {
                for j in k..n {
                    let ukj = u.get(k, j);
                    u[(i, j)] -= f * ukj;
                }
            }
        }
    }
    let mut rank = pivots.iter().take_while(|&&p| p > tol).count();
    rank = rank.min(n.saturating_sub(min_dim.min(n)));

    let mut basis = Vec::with_capacity(n - rank);
    for free in rank..n {
        // x in permuted coordinates: x[free] = 1, other free vars 0.
        let mut x = vec![0.0; n];
        x[free] = 1.0;
        for i in (0..rank).rev() {
            let s: f64 = ((i + 1)..n).map(|j| u.get(i, j) * x[j]).sum();
            x[i] = -s / u.get(i, i);
        }
        let mut v = vec![0.0; n];
        for (k, &c) in colperm.iter().enumerate() {
            v[c] = x[k];
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        basis.push(Vector(v.into_iter().map(|a| a / norm).collect()));
    }
    basis
}

/// Flips `v` so its largest-magnitude entry (lowest index on ties) is positive.
pub(crate) fn canonical_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
