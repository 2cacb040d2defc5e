use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Kernel function over feature columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    Linear,
    /// `exp(−γ‖x − y‖²)`; `gamma: None` means `1/d`.
    Rbf { gamma: Option<f64> },
    /// `(xᵀy + coef0)^degree`.
    Polynomial { degree: u32, coef0: f64 },
    /// 1 when the two columns are equal, else 0. The default label kernel.
    Delta,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Rbf { gamma: Some(g) } if !(g.is_finite() && g > 0.0) => Err(
                Error::InvalidArgument(format!("rbf gamma must be positive, got {g}")),
            ),
            KernelSpec::Polynomial { degree: 0, .. } => Err(Error::InvalidArgument(
                "polynomial degree must be at least 1".into(),
            )),
            KernelSpec::Polynomial { coef0, .. } if !(coef0.is_finite() && coef0 >= 0.0) => Err(
                Error::InvalidArgument(format!("polynomial coef0 must be non-negative, got {coef0}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Rbf { .. } => "rbf",
            KernelSpec::Polynomial { .. } => "polynomial",
            KernelSpec::Delta => "delta",
        }
    }

    fn eval(&self, x: &[f64], y: &[f64], gamma_default: f64) -> f64 {
        let dot = || x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        match *self {
            KernelSpec::Linear => dot(),
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma.unwrap_or(gamma_default) * d2).exp()
            }
            KernelSpec::Polynomial { degree, coef0 } => (dot() + coef0).powi(degree as i32),
            KernelSpec::Delta => f64::from(u8::from(x == y)),
        }
    }
}

/// `K[i, j] = k(x1[:, i], x2[:, j])`.
pub fn kernel_matrix(x1: &Matrix, x2: &Matrix, spec: &KernelSpec) -> Result<Matrix> {
    spec.validate()?;
    if x1.rows() != x2.rows() {
        return Err(Error::DimensionMismatch(format!(
            "kernel inputs have {} and {} features",
            x1.rows(),
            x2.rows()
        )));
    }
    let a = x1.to_columns();
    let b = x2.to_columns();
    let gamma_default = 1.0 / x1.rows() as f64;
    let mut k = Matrix::zeros(a.len(), b.len());
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            k[(i, j)] = spec.eval(u, v, gamma_default);
        }
    }
    Ok(k)
}
