use super::{center_columns, column_mean, EmbeddingModel, FitDiagnostics, ModelKind};
use crate::eigen::{eig_sym, SortOrder};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};

/// `X_c X_cᵀ` for column-centered `X` (no `1/n` factor).
pub fn covariance(x: &Matrix) -> SymMatrix {
    let xc = center_columns(x, &column_mean(x));
    SymMatrix::symmetrize(&xc.matmul(&xc.transpose()).expect("conforming")).expect("finite")
}

pub fn pca_fit(x: &Matrix, p: usize) -> Result<EmbeddingModel> {
    let d = x.rows();
    if p == 0 || p > d {
        return Err(Error::InvalidArgument(format!(
            "number of components must be in 1..={d}, got {p}"
        )));
    }
    let s = covariance(x);
    let e = eig_sym(&s, SortOrder::Descending)?;
    let idx: Vec<usize> = (0..p).collect();
    let residual = e.residual(&s);
    let projection = e.phi.select_columns(&idx);
    let b_orthonormality = projection
        .transpose()
        .matmul(&projection)?
        .max_abs_diff(&Matrix::identity(p));
    Ok(EmbeddingModel {
        projection,
        eigenvalues: e.lambda[..p].to_vec(),
        kind: ModelKind::Pca,
        mean: Some(column_mean(x)),
        kernel: None,
        training: None,
        constraint: None,
        diagnostics: FitDiagnostics {
            residual,
            b_orthonormality,
            method: "jacobi",
            epsilon_used: 0.0,
        },
    })
}

/// `Uᵀ(x − μ)` for each column of `x_new`.
pub fn pca_transform(model: &EmbeddingModel, x_new: &Matrix) -> Result<Matrix> {
    linear_transform(model, ModelKind::Pca, x_new)
}

pub(crate) fn linear_transform(
    model: &EmbeddingModel,
    kind: ModelKind,
    x_new: &Matrix,
) -> Result<Matrix> {
    if model.kind != kind {
        return Err(Error::WrongModel {
            expected: kind.as_str(),
            found: model.kind.as_str(),
        });
    }
    let mean = model.mean.as_ref().expect("linear models store their mean");
    if x_new.rows() != mean.dim() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} features, input has {}",
            mean.dim(),
            x_new.rows()
        )));
    }
    model
        .projection
        .transpose()
        .matmul(&center_columns(x_new, mean))
}
