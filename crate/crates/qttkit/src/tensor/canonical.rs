//! R-term canonical (CP) tensors and canonical operators.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::dense::check_budget;
use crate::tensor::{DenseTensor, Shape};

/// Sum of `R` rank-1 outer products; `factors[l]` is `N_l × R` and column
/// `α` holds the mode-`l` vector of the `α`-th term. `R = 0` encodes the
/// zero tensor.
#[derive(Debug, Clone)]
pub struct CanonicalTensor {
    shape: Shape,
    factors: Vec<Matrix>,
}

impl CanonicalTensor {
    pub fn new(shape: Shape, factors: Vec<Matrix>) -> Result<Self> {
        if factors.len() != shape.order() {
            return Err(Error::InvalidArgument(format!(
                "{} factor matrices for an order-{} tensor",
                factors.len(),
                shape.order()
            )));
        }
        let rank = factors.first().map_or(0, |f| f.cols);
        for (l, f) in factors.iter().enumerate() {
            if f.rows != shape.dim(l) || f.cols != rank {
                return Err(Error::InvalidArgument(format!(
                    "factor {l} is {}x{}, expected {}x{rank}",
                    f.rows,
                    f.cols,
                    shape.dim(l)
                )));
            }
        }
        Ok(CanonicalTensor { shape, factors })
    }

    pub fn zero(shape: Shape) -> Self {
        let factors = shape.dims().iter().map(|&n| Matrix::zeros(n, 0)).collect();
        CanonicalTensor { shape, factors }
    }

    /// Single outer product of the given mode vectors.
    pub fn rank_one(vectors: &[Vec<f64>]) -> Result<Self> {
        let shape = Shape::new(vectors.iter().map(|v| v.len()).collect())?;
        let factors = vectors
            .iter()
            .map(|v| Matrix::from_vec(v.len(), 1, v.clone()))
            .collect();
        CanonicalTensor::new(shape, factors)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.factors.first().map_or(0, |f| f.cols)
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    pub fn factor(&self, mode: usize) -> &Matrix {
        &self.factors[mode]
    }

    pub fn to_dense(&self) -> Result<DenseTensor> {
        check_budget(self.shape.total())?;
        let mut out = DenseTensor::zeros(self.shape.clone());
        for alpha in 0..self.rank() {
            // Progressive outer product over modes, mode 1 fastest.
            let mut acc: Vec<f64> = self.factors[0].col(alpha).to_vec();
            for f in &self.factors[1..] {
                let col = f.col(alpha);
                let mut next = Vec::with_capacity(acc.len() * col.len());
                for &c in col {
                    for &a in &acc {
                        next.push(a * c);
                    }
                }
                acc = next;
            }
            for (o, a) in out.values_mut().iter_mut().zip(&acc) {
                *o += *a;
            }
        }
        Ok(out)
    }

    /// Entry at a multi-index without materializing the dense tensor.
    pub fn entry(&self, index: &[usize]) -> Result<f64> {
        self.shape.linear_index(index)?;
        let mut sum = 0.0;
        for alpha in 0..self.rank() {
            let mut p = 1.0;
            for (l, f) in self.factors.iter().enumerate() {
                p *= f.get(index[l], alpha);
            }
            sum += p;
        }
        Ok(sum)
    }

    /// Concatenation of terms; ranks add.
    pub fn add(&self, other: &CanonicalTensor) -> Result<CanonicalTensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                context: "canonical add",
                left: self.shape.dims().to_vec(),
                right: other.shape.dims().to_vec(),
            });
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows, a.cols + b.cols);
                for j in 0..a.cols {
                    m.col_mut(j).copy_from_slice(a.col(j));
                }
                for j in 0..b.cols {
                    m.col_mut(a.cols + j).copy_from_slice(b.col(j));
                }
                m
            })
            .collect();
        Ok(CanonicalTensor { shape: self.shape.clone(), factors })
    }

    pub fn scale(&mut self, a: f64) {
        if let Some(f) = self.factors.first_mut() {
            f.scale(a);
        }
    }

    /// `⟨X, X⟩^{1/2}` computed format-natively.
    pub fn norm(&self) -> f64 {
        crate::algebra::scalar_product_canonical(self, self)
            .expect("matching shapes")
            .max(0.0)
            .sqrt()
    }
}

/// R-term canonical operator `Σ_k w_k ⊗_l A^{(l)}_k` between two product
/// spaces. Weights are kept explicit so that exponential-sum constructions
/// keep their quadrature coefficients inspectable.
#[derive(Debug, Clone)]
pub struct CanonicalMatrix {
    row_shape: Shape,
    col_shape: Shape,
    /// `factors[l][k]`: mode-`l` matrix of the `k`-th term.
    factors: Vec<Vec<Matrix>>,
    weights: Vec<f64>,
}

impl CanonicalMatrix {
    pub fn new(
        row_shape: Shape,
        col_shape: Shape,
        factors: Vec<Vec<Matrix>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if row_shape.order() != col_shape.order() || factors.len() != row_shape.order() {
            return Err(Error::InvalidArgument("canonical operator mode count mismatch".into()));
        }
        let rank = weights.len();
        for (l, per_mode) in factors.iter().enumerate() {
            if per_mode.len() != rank {
                return Err(Error::InvalidArgument(format!("mode {l} term count != {rank}")));
            }
            for m in per_mode {
                if m.rows != row_shape.dim(l) || m.cols != col_shape.dim(l) {
                    return Err(Error::InvalidArgument(format!(
                        "term matrix in mode {l} is {}x{}, expected {}x{}",
                        m.rows,
                        m.cols,
                        row_shape.dim(l),
                        col_shape.dim(l)
                    )));
                }
            }
        }
        Ok(CanonicalMatrix { row_shape, col_shape, factors, weights })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn row_shape(&self) -> &Shape {
        &self.row_shape
    }

    pub fn col_shape(&self) -> &Shape {
        &self.col_shape
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn term_factor(&self, mode: usize, term: usize) -> &Matrix {
        &self.factors[mode][term]
    }

    /// Dense matrix between the flattened (column-major) product spaces.
    pub fn to_dense_matrix(&self) -> Result<Matrix> {
        let rows = self.row_shape.total();
        let cols = self.col_shape.total();
        check_budget(rows.saturating_mul(cols))?;
        let mut out = Matrix::zeros(rows, cols);
        for k in 0..self.rank() {
            // Kronecker chain with mode 1 fastest: fold right-to-left.
            let mut acc = self.factors[self.factors.len() - 1][k].clone();
            for l in (0..self.factors.len() - 1).rev() {
                acc = acc.kron(&self.factors[l][k]);
            }
            acc.scale(self.weights[k]);
            out.add_assign(&acc);
        }
        Ok(out)
    }

    /// Apply to a canonical tensor: the result has rank `R · R_x` with
    /// weights folded into the first mode.
    pub fn apply(&self, x: &CanonicalTensor) -> Result<CanonicalTensor> {
        if self.col_shape != *x.shape() {
            return Err(Error::ShapeMismatch {
                context: "canonical operator apply",
                left: self.col_shape.dims().to_vec(),
                right: x.shape().dims().to_vec(),
            });
        }
        let d = self.row_shape.order();
        let out_rank = self.rank() * x.rank();
        let mut factors = Vec::with_capacity(d);
        for l in 0..d {
            let mut f = Matrix::zeros(self.row_shape.dim(l), out_rank);
            let mut col = 0;
            for k in 0..self.rank() {
                for beta in 0..x.rank() {
                    let mut y = self.factors[l][k].matvec(x.factor(l).col(beta));
                    if l == 0 {
                        for v in &mut y {
                            *v *= self.weights[k];
                        }
                    }
                    f.col_mut(col).copy_from_slice(&y);
                    col += 1;
                }
            }
            factors.push(f);
        }
        CanonicalTensor::new(self.row_shape.clone(), factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_zero_is_the_zero_tensor() {
        let z = CanonicalTensor::zero(Shape::new(vec![3, 2, 4]).unwrap());
        assert_eq!(z.rank(), 0);
        let d = z.to_dense().unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dense_and_entry_agree() {
        let x = CanonicalTensor::rank_one(&[vec![1.0, 2.0], vec![3.0, -1.0, 0.5]]).unwrap();
        let y = CanonicalTensor::rank_one(&[vec![0.0, 1.0], vec![1.0, 1.0, 1.0]]).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.rank(), 2);
        let d = s.to_dense().unwrap();
        for off in 0..d.shape().total() {
            let idx = d.shape().multi_index(off);
            assert_eq!(d.values()[off], s.entry(&idx).unwrap());
        }
    }

    #[test]
    fn canonical_operator_matches_kronecker() {
        let a = Matrix::from_fn(2, 2, |i, j| (i * 2 + j) as f64);
        let b = Matrix::from_fn(3, 3, |i, j| if i == j { 2.0 } else { -1.0 });
        let shape_r = Shape::new(vec![2, 3]).unwrap();
        let shape_c = shape_r.clone();
        let op = CanonicalMatrix::new(
            shape_r,
            shape_c,
            vec![vec![a.clone()], vec![b.clone()]],
            vec![1.5],
        )
        .unwrap();
        let dense = op.to_dense_matrix().unwrap();
        // Mode 1 is fastest, so the dense matrix is kron(b, a) scaled.
        let mut expect = b.kron(&a);
        expect.scale(1.5);
        assert!(dense.sub(&expect).frobenius_norm() < 1e-14);

        let x = CanonicalTensor::rank_one(&[vec![1.0, -1.0], vec![0.5, 0.0, 2.0]]).unwrap();
        let y = op.apply(&x).unwrap();
        let lhs = dense.matvec(x.to_dense().unwrap().values());
        let rhs = y.to_dense().unwrap();
        for (u, v) in lhs.iter().zip(rhs.values()) {
            assert!((u - v).abs() < 1e-13);
        }
    }
}
