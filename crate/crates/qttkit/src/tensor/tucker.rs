//! Tucker format: a small dense core contracted with per-mode factors.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::dense::check_budget;
use crate::tensor::{DenseTensor, Shape};

#[derive(Debug, Clone)]
pub struct TuckerTensor {
    shape: Shape,
    core: DenseTensor,
    factors: Vec<Matrix>,
    orthogonal: bool,
}

impl TuckerTensor {
    /// `core` has the rank shape `(r_1, …, r_d)`; `factors[l]` is `N_l × r_l`.
    /// Set `orthogonal` only when the factor columns are orthonormal.
    pub fn new(shape: Shape, core: DenseTensor, factors: Vec<Matrix>, orthogonal: bool) -> Result<Self> {
        if factors.len() != shape.order() || core.shape().order() != shape.order() {
            return Err(Error::InvalidArgument("tucker mode count mismatch".into()));
        }
        for (l, f) in factors.iter().enumerate() {
            let r = core.shape().dim(l);
            if f.rows != shape.dim(l) || f.cols != r {
                return Err(Error::InvalidArgument(format!(
                    "tucker factor {l} is {}x{}, expected {}x{r}",
                    f.rows,
                    f.cols,
                    shape.dim(l)
                )));
            }
            if r > shape.dim(l) {
                return Err(Error::InvalidArgument(format!(
                    "tucker rank {r} exceeds mode size {} in mode {l}",
                    shape.dim(l)
                )));
            }
        }
        Ok(TuckerTensor { shape, core, factors, orthogonal })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.core.shape().dims().to_vec()
    }

    pub fn core(&self) -> &DenseTensor {
        &self.core
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    pub fn to_dense(&self) -> Result<DenseTensor> {
        check_budget(self.shape.total())?;
        let mut acc = self.core.clone();
        for (l, f) in self.factors.iter().enumerate() {
            acc = acc.mode_apply(l, f);
        }
        Ok(acc)
    }

    /// Frobenius norm; for orthogonal factors this is just the core norm.
    pub fn norm(&self) -> f64 {
        if self.orthogonal {
            return self.core.frobenius_norm();
        }
        let mut acc = self.core.clone();
        for (l, f) in self.factors.iter().enumerate() {
            acc = acc.mode_apply(l, f);
        }
        acc.frobenius_norm()
    }
}
