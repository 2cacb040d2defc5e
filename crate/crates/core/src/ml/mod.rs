//! Dimensionality reduction built on the eigensolvers: PCA, Fisher
//! discriminant analysis and kernel supervised PCA.

mod dataset;
mod fda;
mod kernel;
mod kspca;
mod pca;

pub use dataset::LabeledDataset;
pub use fda::{fda_fit, fda_transform, scatter_matrices, ScatterPair};
pub use kernel::{kernel_matrix, KernelSpec};
pub use kspca::{kspca_fit, kspca_fit_with, kspca_transform};
pub use pca::{covariance, pca_fit, pca_transform};

use serde::Serialize;

use crate::matrix::{Matrix, SymMatrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Pca,
    Fda,
    Kspca,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Pca => "pca",
            ModelKind::Fda => "fda",
            ModelKind::Kspca => "kspca",
        }
    }
}

/// Solver diagnostics carried by a fitted model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub residual: f64,
    pub b_orthonormality: f64,
    pub method: &'static str,
    pub epsilon_used: f64,
}

/// A fitted linear (or dual, for kernels) projection.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingModel {
    /// `d×p` directions, or `n×p` dual coefficients `Θ` for kernel SPCA.
    pub projection: Matrix,
    pub eigenvalues: Vec<f64>,
    pub kind: ModelKind,
    /// Training mean (PCA, FDA).
    pub mean: Option<Vector>,
    /// Feature kernel and training samples (kernel SPCA).
    pub kernel: Option<KernelSpec>,
    pub training: Option<Matrix>,
    /// Constraint matrix the projection is orthonormal against, after any
    /// regularization: `S_W` for FDA, `K_x` for kernel SPCA.
    pub constraint: Option<SymMatrix>,
    pub diagnostics: FitDiagnostics,
}

impl EmbeddingModel {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Subtract `mean` from every column of `x`.
pub(crate) fn center_columns(x: &Matrix, mean: &Vector) -> Matrix {
    let mut out = x.clone();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            out[(i, j)] -= mean[i];
        }
    }
    out
}

pub(crate) fn column_mean(x: &Matrix) -> Vector {
    let n = x.cols() as f64;
    let mean: Vec<f64> = (0..x.rows())
        .map(|i| x.row(i).iter().sum::<f64>() / n)
        .collect();
    Vector::from_slice(&mean).expect("finite mean")
}
