use super::pca::linear_transform;
use super::{column_mean, EmbeddingModel, FitDiagnostics, LabeledDataset, ModelKind};
use crate::error::{Error, Result};
use crate::gen_eigen::{solve_rigorous_with, Pencil};
use crate::matrix::{Matrix, SymMatrix};

/// Between-class and within-class scatter.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatterPair {
    pub s_b: SymMatrix,
    pub s_w: SymMatrix,
}

fn add_outer(acc: &mut Matrix, v: &[f64]) {
    for i in 0..v.len() {
        for j in 0..v.len() {
            acc[(i, j)] += v[i] * v[j];
        }
    }
}

/// `S_B = Σ_j (μ_j − μ_t)(μ_j − μ_t)ᵀ` (unweighted by class size) and
/// `S_W = Σ_j Σ_i (x_{j,i} − μ_j)(x_{j,i} − μ_j)ᵀ`.
pub fn scatter_matrices(ds: &LabeledDataset) -> Result<ScatterPair> {
    let members = ds.class_members()?;
    if members.len() < 2 {
        return Err(Error::SingleClass);
    }
    let x = ds.x();
    let d = ds.dim();
    let mu_t = column_mean(x);
    let mut s_b = Matrix::zeros(d, d);
    let mut s_w = Matrix::zeros(d, d);
    for idx in &members {
        let class_x = x.select_columns(idx);
        let mu = column_mean(&class_x);
        let diff: Vec<f64> = (0..d).map(|i| mu[i] - mu_t[i]).collect();
        add_outer(&mut s_b, &diff);
        for k in 0..class_x.cols() {
            let dev: Vec<f64> = (0..d).map(|i| class_x.get(i, k) - mu[i]).collect();
            add_outer(&mut s_w, &dev);
        }
    }
    Ok(ScatterPair {
        s_b: SymMatrix::symmetrize(&s_b)?,
        s_w: SymMatrix::symmetrize(&s_w)?,
    })
}

/// Top-`p` generalized eigenvectors of `(S_B, S_W)`; `S_W` is regularized
/// by `epsilon` (default scaled `1e-5`) when singular. Columns satisfy
/// `wᵀ S_W w = 1` against the regularized `S_W`, stored as the model's
/// constraint.
pub fn fda_fit(ds: &LabeledDataset, p: usize, epsilon: Option<f64>) -> Result<EmbeddingModel> {
    let d = ds.dim();
    let classes = ds.classes()?;
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    if p == 0 || p > d {
        return Err(Error::InvalidArgument(format!(
            "number of directions must be in 1..={d}, got {p}"
        )));
    }
    if p > classes.len() - 1 {
        log::warn!(
            "requested {p} discriminant directions but S_B has rank at most {}",
            classes.len() - 1
        );
    }
    let sc = scatter_matrices(ds)?;
    let pencil = Pencil::new(sc.s_b, sc.s_w)?;
    let (sol, _) = solve_rigorous_with(&pencil, epsilon)?;
    let idx: Vec<usize> = (0..p).collect();
    let projection = sol.phi.select_columns(&idx);
    let b_orthonormality = crate::gen_eigen::b_orthonormality(&sol.effective_b, &projection)?;
    Ok(EmbeddingModel {
        projection,
        eigenvalues: sol.lambda[..p].to_vec(),
        kind: ModelKind::Fda,
        mean: Some(column_mean(ds.x())),
        kernel: None,
        training: None,
        constraint: Some(sol.effective_b),
        diagnostics: FitDiagnostics {
            residual: sol.residual,
            b_orthonormality,
            method: sol.method.as_str(),
            epsilon_used: sol.epsilon_used,
        },
    })
}

/// `Wᵀ(x − μ_t)` for each column of `x_new`.
pub fn fda_transform(model: &EmbeddingModel, x_new: &Matrix) -> Result<Matrix> {
    linear_transform(model, ModelKind::Fda, x_new)
}
