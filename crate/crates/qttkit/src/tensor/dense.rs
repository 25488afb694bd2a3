//! Full (uncompressed) tensors: the brute-force oracle representation.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::Shape;

/// Default cap on dense materialization, in entries.
pub const DEFAULT_DENSE_BUDGET: usize = 1 << 24;

static BUDGET: OnceLock<usize> = OnceLock::new();

/// Entry budget for dense materialization. Defaults to 2^24 entries;
/// the `QTTKIT_DENSE_BUDGET` environment variable overrides it.
pub fn dense_budget() -> usize {
    *BUDGET.get_or_init(|| {
        std::env::var("QTTKIT_DENSE_BUDGET")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(DEFAULT_DENSE_BUDGET)
    })
}

pub(crate) fn check_budget(needed: usize) -> Result<()> {
    let budget = dense_budget();
    if needed > budget {
        Err(Error::DenseBudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Dense `d`-way array in column-major (mode-1 fastest) order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    values: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(shape: Shape) -> Self {
        let n = shape.total();
        DenseTensor { shape, values: vec![0.0; n] }
    }

    pub fn from_values(shape: Shape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.total() {
            return Err(Error::InvalidArgument(format!(
                "value buffer of length {} does not fill shape {shape}",
                values.len()
            )));
        }
        Ok(DenseTensor { shape, values })
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let total = shape.total();
        let mut values = Vec::with_capacity(total);
        for off in 0..total {
            values.push(f(&shape.multi_index(off)));
        }
        DenseTensor { shape, values }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, index: &[usize]) -> Result<f64> {
        Ok(self.values[self.shape.linear_index(index)?])
    }

    pub fn set(&mut self, index: &[usize], v: f64) -> Result<()> {
        let off = self.shape.linear_index(index)?;
        self.values[off] = v;
        Ok(())
    }

    /// Reinterpret the flat buffer under a new shape with the same total size.
    pub fn reshape(self, shape: Shape) -> Result<Self> {
        if shape.total() != self.values.len() {
            return Err(Error::ShapeMismatch {
                context: "reshape",
                left: self.shape.dims().to_vec(),
                right: shape.dims().to_vec(),
            });
        }
        Ok(DenseTensor { shape, values: self.values })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scalar_product(&self, other: &DenseTensor) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                context: "dense scalar product",
                left: self.shape.dims().to_vec(),
                right: other.shape.dims().to_vec(),
            });
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&mut self, a: f64) {
        for v in &mut self.values {
            *v *= a;
        }
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                context: "dense add",
                left: self.shape.dims().to_vec(),
                right: other.shape.dims().to_vec(),
            });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(DenseTensor { shape: self.shape.clone(), values })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        let mut neg = other.clone();
        neg.scale(-1.0);
        self.add(&neg)
    }

    /// Tensor product: result shape is `self.shape ++ other.shape`, with the
    /// left factor on the faster-running modes.
    pub fn tensor_product(&self, other: &DenseTensor) -> DenseTensor {
        let shape = self.shape.concat(&other.shape);
        let na = self.values.len();
        let mut values = Vec::with_capacity(na * other.values.len());
        for &b in &other.values {
            for &a in &self.values {
                values.push(a * b);
            }
        }
        DenseTensor { shape, values }
    }

    /// Mode-`p` unfolding with the selected mode on rows and the remaining
    /// modes, in their original order, flattened on columns.
    pub fn unfold_mode(&self, p: usize) -> Matrix {
        let dims = self.shape.dims();
        let np = dims[p];
        let rest: usize = self.values.len() / np;
        let before: usize = dims[..p].iter().product();
        let after: usize = dims[p + 1..].iter().product();
        let mut m = Matrix::zeros(np, rest);
        for a in 0..after {
            for i in 0..np {
                for b in 0..before {
                    let src = b + before * (i + np * a);
                    m.set(i, b + before * a, self.values[src]);
                }
            }
        }
        m
    }

    /// Contract mode `p` with `u`ᵀ (`u` is `N_p × r`): the classical mode
    /// product used by Tucker reconstruction and HOSVD projection.
    pub fn mode_multiply_transposed(&self, p: usize, u: &Matrix) -> DenseTensor {
        let dims = self.shape.dims();
        let np = dims[p];
        assert_eq!(u.rows, np, "mode product dimension mismatch");
        let r = u.cols;
        let before: usize = dims[..p].iter().product();
        let after: usize = dims[p + 1..].iter().product();
        let mut new_dims = dims.to_vec();
        new_dims[p] = r;
        let new_shape = Shape::new(new_dims).expect("valid shape");
        let mut out = vec![0.0; new_shape.total()];
        for a in 0..after {
            for i in 0..np {
                let base_in = before * (i + np * a);
                for k in 0..r {
                    let w = u.get(i, k);
                    if w == 0.0 {
                        continue;
                    }
                    let base_out = before * (k + r * a);
                    for b in 0..before {
                        out[base_out + b] += w * self.values[base_in + b];
                    }
                }
            }
        }
        DenseTensor { shape: new_shape, values: out }
    }

    /// Contract mode `p` with the matrix `m` acting from the left
    /// (`m` is `M × N_p`); used by dense operator application.
    pub fn mode_apply(&self, p: usize, m: &Matrix) -> DenseTensor {
        self.mode_multiply_transposed(p, &m.transpose())
    }
}
