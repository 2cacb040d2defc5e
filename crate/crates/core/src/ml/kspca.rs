use super::{EmbeddingModel, FitDiagnostics, KernelSpec, LabeledDataset, ModelKind};
use super::kernel::kernel_matrix;
use crate::error::{Error, Result};
use crate::gen_eigen::{b_orthonormality, solve_rigorous_with, Pencil};
use crate::matrix::{centering_matrix, Matrix, SymMatrix};

/// Labels as a `1×n` feature row, for the label kernel.
fn label_row(ds: &LabeledDataset) -> Result<Matrix> {
    let labels = ds.labels().ok_or(Error::MissingLabels)?;
    Matrix::new(1, labels.len(), labels.iter().map(|&l| l as f64).collect())
}

/// Kernel SPCA with the default regularization of `K_x`.
pub fn kspca_fit(
    ds: &LabeledDataset,
    p: usize,
    kx: &KernelSpec,
    ky: &KernelSpec,
) -> Result<EmbeddingModel> {
    kspca_fit_with(ds, p, kx, ky, None)
}

/// Top-`p` generalized eigenvectors `Θ` of `(K_x H K_y H K_x, K_x)`.
/// `K_x` itself is not centered. Eigenpairs lying in the common null space
/// of both matrices are skipped.
pub fn kspca_fit_with(
    ds: &LabeledDataset,
    p: usize,
    kx: &KernelSpec,
    ky: &KernelSpec,
    epsilon: Option<f64>,
) -> Result<EmbeddingModel> {
    let n = ds.len();
    if p == 0 || p > n {
        return Err(Error::InvalidArgument(format!(
            "number of directions must be in 1..={n}, got {p}"
        )));
    }
    let x = ds.x();
    let k_x = kernel_matrix(x, x, kx)?;
    let y = label_row(ds)?;
    let k_y = kernel_matrix(&y, &y, ky)?;
    let h = centering_matrix(n).into_matrix();
    let a = k_x.matmul(&h)?.matmul(&k_y)?.matmul(&h)?.matmul(&k_x)?;
    let pencil = Pencil::new(SymMatrix::symmetrize(&a)?, SymMatrix::symmetrize(&k_x)?)?;
    let (sol, _) = solve_rigorous_with(&pencil, epsilon)?;

    let mut idx: Vec<usize> = (0..n).filter(|&j| !sol.deflated[j]).collect();
    idx.extend((0..n).filter(|&j| sol.deflated[j]));
    idx.truncate(p);
    let projection = sol.phi.select_columns(&idx);
    let eigenvalues = idx.iter().map(|&j| sol.lambda[j]).collect();
    let ortho = b_orthonormality(pencil.b(), &projection)?;
    Ok(EmbeddingModel {
        projection,
        eigenvalues,
        kind: ModelKind::Kspca,
        mean: None,
        kernel: Some(*kx),
        training: Some(x.clone()),
        constraint: Some(sol.effective_b),
        diagnostics: FitDiagnostics {
            residual: sol.residual,
            b_orthonormality: ortho,
            method: sol.method.as_str(),
            epsilon_used: sol.epsilon_used,
        },
    })
}

/// `Θᵀ k(X_train, x_new)`.
pub fn kspca_transform(model: &EmbeddingModel, x_new: &Matrix) -> Result<Matrix> {
    if model.kind != ModelKind::Kspca {
        return Err(Error::WrongModel {
            expected: ModelKind::Kspca.as_str(),
            found: model.kind.as_str(),
        });
    }
    let train = model.training.as_ref().expect("kernel models store training data");
    let spec = model.kernel.as_ref().expect("kernel models store their kernel");
    if x_new.rows() != train.rows() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} features, input has {}",
            train.rows(),
            x_new.rows()
        )));
    }
    let k = kernel_matrix(train, x_new, spec)?;
    model.projection.transpose().matmul(&k)
}
