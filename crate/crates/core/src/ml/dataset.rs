use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Samples as the columns of `x` (`d×n`) with optional class labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    x: Matrix,
    labels: Option<Vec<usize>>,
}

impl LabeledDataset {
    pub fn new(x: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != x.cols() {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for {} samples",
                    l.len(),
                    x.cols()
                )));
            }
        }
        Ok(Self { x, labels })
    }

    pub fn unlabeled(x: Matrix) -> Self {
        Self { x, labels: None }
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn len(&self) -> usize {
        self.x.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.x.cols() == 0
    }

    /// Distinct class ids, ascending.
    pub fn classes(&self) -> Result<Vec<usize>> {
        let labels = self.labels.as_ref().ok_or(Error::MissingLabels)?;
        let mut c = labels.clone();
        c.sort_unstable();
        c.dedup();
        Ok(c)
    }

    /// Sample indices of each class, in the order of [`Self::classes`].
    pub fn class_members(&self) -> Result<Vec<Vec<usize>>> {
        let classes = self.classes()?;
        let labels = self.labels.as_ref().expect("checked");
        Ok(classes
            .iter()
            .map(|c| (0..labels.len()).filter(|&i| labels[i] == *c).collect())
            .collect())
    }
}
