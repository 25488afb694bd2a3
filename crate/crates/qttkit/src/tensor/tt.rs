//! Tensor-train (MPS) tensors, TT-operators (MPO) and the block rank
//! product `⋈` on core matrices.
//!
//! A TT tensor is a chain of 3-way cores `G_l` of size
//! `r_{l-1} × N_l × r_l` with `r_0 = r_d = 1`; an entry is the product of
//! the `d` slice matrices, `A(i_1,…,i_d) = G_1(i_1) G_2(i_2) ⋯ G_d(i_d)`.
//! Core `l` always carries mode `l`, which is the fastest-running index of
//! the column-major dense layout, so dense evaluation is a chain of
//! reshape-free matrix products.

use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};
use crate::tensor::dense::check_budget;
use crate::tensor::{DenseTensor, Shape};

/// Orthogonality state of a single TT core, maintained by decompositions
/// and invalidated by algebraic operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreOrtho {
    None,
    /// The left unfolding `(r_{l-1} N_l) × r_l` has orthonormal columns.
    Left,
    /// The right unfolding `r_{l-1} × (N_l r_l)` has orthonormal rows.
    Right,
}

/// One 3-way TT core, stored flat with the left bond fastest:
/// entry `(a, i, b)` lives at `a + left*(i + mode*b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TtCore {
    pub left: usize,
    pub mode: usize,
    pub right: usize,
    pub data: Vec<f64>,
}

impl TtCore {
    pub fn zeros(left: usize, mode: usize, right: usize) -> Self {
        TtCore { left, mode, right, data: vec![0.0; left * mode * right] }
    }

    #[inline]
    pub fn get(&self, a: usize, i: usize, b: usize) -> f64 {
        self.data[a + self.left * (i + self.mode * b)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, i: usize, b: usize, v: f64) {
        self.data[a + self.left * (i + self.mode * b)] = v;
    }

    /// `(left*mode) × right` unfolding; a pure reinterpretation of the buffer.
    pub fn unfold_left(&self) -> Matrix {
        Matrix::from_vec(self.left * self.mode, self.right, self.data.clone())
    }

    /// `left × (mode*right)` unfolding; a pure reinterpretation of the buffer.
    pub fn unfold_right(&self) -> Matrix {
        Matrix::from_vec(self.left, self.mode * self.right, self.data.clone())
    }

    pub fn from_unfold_left(m: &Matrix, left: usize, mode: usize) -> Self {
        assert_eq!(m.rows, left * mode);
        TtCore { left, mode, right: m.cols, data: m.data.clone() }
    }

    pub fn from_unfold_right(m: &Matrix, mode: usize, right: usize) -> Self {
        assert_eq!(m.cols, mode * right);
        TtCore { left: m.rows, mode, right, data: m.data.clone() }
    }

    /// The `left × right` slice matrix at mode index `i`.
    pub fn slice(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.left, self.right);
        for b in 0..self.right {
            for a in 0..self.left {
                m.set(a, b, self.get(a, i, b));
            }
        }
        m
    }
}

/// Tensor in TT format.
#[derive(Debug, Clone)]
pub struct TtTensor {
    shape: Shape,
    cores: Vec<TtCore>,
    ortho: Vec<CoreOrtho>,
}

impl TtTensor {
    pub fn new(cores: Vec<TtCore>) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::InvalidArgument("TT tensor needs at least one core".into()));
        }
        if cores[0].left != 1 || cores[cores.len() - 1].right != 1 {
            return Err(Error::InvalidArgument("boundary TT ranks must be 1".into()));
        }
        for w in cores.windows(2) {
            if w[0].right != w[1].left {
                return Err(Error::InvalidArgument(format!(
                    "adjacent bond dimensions differ: {} vs {}",
                    w[0].right, w[1].left
                )));
            }
        }
        let shape = Shape::new(cores.iter().map(|c| c.mode).collect())?;
        let ortho = vec![CoreOrtho::None; cores.len()];
        Ok(TtTensor { shape, cores, ortho })
    }

    pub(crate) fn new_with_ortho(cores: Vec<TtCore>, ortho: Vec<CoreOrtho>) -> Result<Self> {
        let mut t = TtTensor::new(cores)?;
        assert_eq!(ortho.len(), t.cores.len());
        t.ortho = ortho;
        Ok(t)
    }

    /// All-ones rank-1 tensor.
    pub fn ones(shape: &Shape) -> Self {
        let cores = shape
            .dims()
            .iter()
            .map(|&n| TtCore { left: 1, mode: n, right: 1, data: vec![1.0; n] })
            .collect();
        TtTensor::new(cores).expect("valid rank-1 chain")
    }

    /// Zero tensor with all bond ranks 1.
    pub fn zero(shape: &Shape) -> Self {
        let cores = shape.dims().iter().map(|&n| TtCore::zeros(1, n, 1)).collect();
        TtTensor::new(cores).expect("valid rank-1 chain")
    }

    /// Rank-1 outer product of mode vectors.
    pub fn rank_one(vectors: &[Vec<f64>]) -> Result<Self> {
        let cores = vectors
            .iter()
            .map(|v| TtCore { left: 1, mode: v.len(), right: 1, data: v.clone() })
            .collect();
        TtTensor::new(cores)
    }

    /// Point mass at the given multi-index.
    pub fn unit(shape: &Shape, index: &[usize]) -> Result<Self> {
        shape.linear_index(index)?;
        let vectors: Vec<Vec<f64>> = shape
            .dims()
            .iter()
            .zip(index)
            .map(|(&n, &i)| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        TtTensor::rank_one(&vectors)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn cores(&self) -> &[TtCore] {
        &self.cores
    }

    pub fn core(&self, l: usize) -> &TtCore {
        &self.cores[l]
    }

    pub(crate) fn replace_core(&mut self, l: usize, core: TtCore, ortho: CoreOrtho) {
        self.cores[l] = core;
        self.ortho[l] = ortho;
    }

    pub fn ortho_flags(&self) -> &[CoreOrtho] {
        &self.ortho
    }

    /// Bond ranks `(r_0, …, r_d)` including the unit boundaries.
    pub fn bond_ranks(&self) -> Vec<usize> {
        let mut r = Vec::with_capacity(self.cores.len() + 1);
        r.push(self.cores[0].left);
        for c in &self.cores {
            r.push(c.right);
        }
        r
    }

    pub fn max_bond_rank(&self) -> usize {
        self.bond_ranks().into_iter().max().unwrap_or(1)
    }

    /// Arithmetic mean of the internal bond ranks `r_1 … r_{d-1}`.
    pub fn average_bond_rank(&self) -> f64 {
        let r = self.bond_ranks();
        if r.len() <= 2 {
            return 1.0;
        }
        let inner = &r[1..r.len() - 1];
        inner.iter().sum::<usize>() as f64 / inner.len() as f64
    }

    /// Entry at a multi-index: the product of the slice matrices, evaluated
    /// as a running row vector.
    pub fn entry(&self, index: &[usize]) -> Result<f64> {
        self.shape.linear_index(index)?;
        let mut v = vec![1.0f64];
        for (l, core) in self.cores.iter().enumerate() {
            let i = index[l];
            let mut next = vec![0.0; core.right];
            for b in 0..core.right {
                let mut s = 0.0;
                for a in 0..core.left {
                    s += v[a] * core.get(a, i, b);
                }
                next[b] = s;
            }
            v = next;
        }
        Ok(v[0])
    }

    pub fn to_dense(&self) -> Result<DenseTensor> {
        check_budget(self.shape.total())?;
        let first = &self.cores[0];
        let mut acc = Matrix::from_vec(first.mode, first.right, first.data.clone());
        for core in &self.cores[1..] {
            let rhs = core.unfold_right();
            let prod = acc.matmul(&rhs);
            // (P, N*r') reinterpreted as (P*N, r'): same flat buffer.
            acc = Matrix::from_vec(prod.rows * core.mode, core.right, prod.data);
        }
        DenseTensor::from_values(self.shape.clone(), acc.data)
    }

    /// Multiply the tensor by a scalar (folded into the first core).
    pub fn scale(&mut self, a: f64) {
        for v in &mut self.cores[0].data {
            *v *= a;
        }
        self.ortho[0] = CoreOrtho::None;
    }

    pub fn norm(&self) -> f64 {
        crate::algebra::scalar_product_tt(self, self)
            .expect("matching shapes")
            .max(0.0)
            .sqrt()
    }

    /// Contract the trailing `values.len()` modes at fixed indices, returning
    /// the TT over the remaining leading modes.
    pub fn fix_trailing_modes(&self, values: &[usize]) -> Result<TtTensor> {
        let d = self.order();
        if values.len() >= d {
            return Err(Error::InvalidArgument("cannot fix every mode".into()));
        }
        let keep = d - values.len();
        // Right-to-left absorption of the fixed slices into a bond vector.
        let mut v = vec![1.0f64];
        for (k, &i) in values.iter().enumerate().rev() {
            let core = &self.cores[keep + k];
            if i >= core.mode {
                return Err(Error::IndexOutOfRange {
                    index: values.to_vec(),
                    shape: self.shape.dims()[keep..].to_vec(),
                });
            }
            let mut next = vec![0.0; core.left];
            for a in 0..core.left {
                let mut s = 0.0;
                for b in 0..core.right {
                    s += core.get(a, i, b) * v[b];
                }
                next[a] = s;
            }
            v = next;
        }
        let mut cores: Vec<TtCore> = self.cores[..keep].to_vec();
        let last = cores.last_mut().unwrap();
        let mut folded = TtCore::zeros(last.left, last.mode, 1);
        for i in 0..last.mode {
            for a in 0..last.left {
                let mut s = 0.0;
                for b in 0..last.right {
                    s += last.get(a, i, b) * v[b];
                }
                folded.set(a, i, 0, s);
            }
        }
        *last = folded;
        TtTensor::new(cores)
    }

    /// Split every mode `N_l = q^{L_l}` into `L_l` base-`q` cores by exact
    /// sequential SVD splits (little-endian digit order). Bond ranks between
    /// the new digit cores are the true unfolding ranks.
    pub fn quantize(&self, q: usize) -> Result<TtTensor> {
        let mut cores = Vec::new();
        for core in &self.cores {
            let levels = digit_count(core.mode, q).ok_or(Error::NotAPowerOfBase {
                len: core.mode,
                base: q,
            })?;
            split_core_into_digits(core, q, levels, &mut cores)?;
        }
        TtTensor::new(cores)
    }

    /// Append the cores of `other` (bond-1 junction): represents the tensor
    /// product `self ⊗ other` with `other` on the slower-running modes.
    pub fn tensor_product(&self, other: &TtTensor) -> TtTensor {
        let mut cores = self.cores.clone();
        cores.extend(other.cores.iter().cloned());
        TtTensor::new(cores).expect("boundary ranks are 1")
    }
}

pub(crate) fn digit_count(n: usize, q: usize) -> Option<usize> {
    if q < 2 {
        return None;
    }
    let mut levels = 0;
    let mut m = n;
    while m > 1 {
        if m % q != 0 {
            return None;
        }
        m /= q;
        levels += 1;
    }
    Some(levels.max(1).min(if n == 1 { 1 } else { levels }))
}

/// Split one core with mode size `digit^levels` into `levels` digit cores,
/// preserving the left/right bonds that connect it to its neighbours.
fn split_core_into_digits(
    core: &TtCore,
    digit: usize,
    levels: usize,
    out: &mut Vec<TtCore>,
) -> Result<()> {
    if levels <= 1 {
        out.push(core.clone());
        return Ok(());
    }
    let mut r_cur = core.left;
    let mut rest = core.mode / digit;
    let mut data = core.data.clone();
    for _ in 0..levels - 1 {
        let m = Matrix::from_vec(r_cur * digit, rest * core.right, data);
        let s = svd(&m)?;
        let r_new = s.truncation_rank(0.0, None).max(1);
        let mut u = Matrix::zeros(m.rows, r_new);
        for j in 0..r_new {
            u.col_mut(j).copy_from_slice(s.u.col(j));
        }
        out.push(TtCore::from_unfold_left(&u, r_cur, digit));
        let mut carry = Matrix::zeros(r_new, m.cols);
        for j in 0..m.cols {
            for i in 0..r_new {
                carry.set(i, j, s.sigma[i] * s.vt.get(i, j));
            }
        }
        r_cur = r_new;
        data = carry.data;
        rest /= digit;
    }
    debug_assert_eq!(rest, 1);
    out.push(TtCore { left: r_cur, mode: digit, right: core.right, data });
    Ok(())
}

/// One 4-way TT-operator core: entry `(a, i, j, b)` lives at
/// `a + left*(i + rows*(j + cols*b))`, i.e. the `(i, j)` pair is packed
/// column-major with the row index fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct TtMatCore {
    pub left: usize,
    pub rows: usize,
    pub cols: usize,
    pub right: usize,
    pub data: Vec<f64>,
}

impl TtMatCore {
    pub fn zeros(left: usize, rows: usize, cols: usize, right: usize) -> Self {
        TtMatCore { left, rows, cols, right, data: vec![0.0; left * rows * cols * right] }
    }

    #[inline]
    pub fn get(&self, a: usize, i: usize, j: usize, b: usize) -> f64 {
        self.data[a + self.left * (i + self.rows * (j + self.cols * b))]
    }

    #[inline]
    pub fn set(&mut self, a: usize, i: usize, j: usize, b: usize, v: f64) {
        self.data[a + self.left * (i + self.rows * (j + self.cols * b))] = v;
    }
}

/// Linear operator between two product spaces in TT (MPO) form.
#[derive(Debug, Clone)]
pub struct TtMatrix {
    row_shape: Shape,
    col_shape: Shape,
    cores: Vec<TtMatCore>,
}

impl TtMatrix {
    pub fn new(cores: Vec<TtMatCore>) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::InvalidArgument("TT matrix needs at least one core".into()));
        }
        if cores[0].left != 1 || cores[cores.len() - 1].right != 1 {
            return Err(Error::InvalidArgument("boundary TT ranks must be 1".into()));
        }
        for w in cores.windows(2) {
            if w[0].right != w[1].left {
                return Err(Error::InvalidArgument(format!(
                    "adjacent bond dimensions differ: {} vs {}",
                    w[0].right, w[1].left
                )));
            }
        }
        let row_shape = Shape::new(cores.iter().map(|c| c.rows).collect())?;
        let col_shape = Shape::new(cores.iter().map(|c| c.cols).collect())?;
        Ok(TtMatrix { row_shape, col_shape, cores })
    }

    pub fn identity(shape: &Shape) -> Self {
        let cores = shape
            .dims()
            .iter()
            .map(|&n| {
                let mut c = TtMatCore::zeros(1, n, n, 1);
                for i in 0..n {
                    c.set(0, i, i, 0, 1.0);
                }
                c
            })
            .collect();
        TtMatrix::new(cores).expect("valid identity chain")
    }

    pub fn row_shape(&self) -> &Shape {
        &self.row_shape
    }

    pub fn col_shape(&self) -> &Shape {
        &self.col_shape
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn cores(&self) -> &[TtMatCore] {
        &self.cores
    }

    pub fn core(&self, l: usize) -> &TtMatCore {
        &self.cores[l]
    }

    pub fn bond_ranks(&self) -> Vec<usize> {
        let mut r = Vec::with_capacity(self.cores.len() + 1);
        r.push(self.cores[0].left);
        for c in &self.cores {
            r.push(c.right);
        }
        r
    }

    pub fn max_bond_rank(&self) -> usize {
        self.bond_ranks().into_iter().max().unwrap_or(1)
    }

    pub fn average_bond_rank(&self) -> f64 {
        let r = self.bond_ranks();
        if r.len() <= 2 {
            return 1.0;
        }
        let inner = &r[1..r.len() - 1];
        inner.iter().sum::<usize>() as f64 / inner.len() as f64
    }

    pub fn scale(&mut self, a: f64) {
        for v in &mut self.cores[0].data {
            *v *= a;
        }
    }

    pub fn entry(&self, row: &[usize], col: &[usize]) -> Result<f64> {
        self.row_shape.linear_index(row)?;
        self.col_shape.linear_index(col)?;
        let mut v = vec![1.0f64];
        for (l, core) in self.cores.iter().enumerate() {
            let mut next = vec![0.0; core.right];
            for b in 0..core.right {
                let mut s = 0.0;
                for a in 0..core.left {
                    s += v[a] * core.get(a, row[l], col[l], b);
                }
                next[b] = s;
            }
            v = next;
        }
        Ok(v[0])
    }

    /// View with the `(i_l, j_l)` pairs packed into single modes of size
    /// `M_l · N_l`; shares the flat core layout.
    pub fn to_paired_tt(&self) -> TtTensor {
        let cores = self
            .cores
            .iter()
            .map(|c| TtCore {
                left: c.left,
                mode: c.rows * c.cols,
                right: c.right,
                data: c.data.clone(),
            })
            .collect();
        TtTensor::new(cores).expect("valid chain")
    }

    /// Inverse of [`Self::to_paired_tt`] for known row/column shapes.
    pub fn from_paired_tt(tt: &TtTensor, row_shape: &Shape, col_shape: &Shape) -> Result<Self> {
        if tt.order() != row_shape.order() || tt.order() != col_shape.order() {
            return Err(Error::InvalidArgument("paired TT order mismatch".into()));
        }
        let cores = tt
            .cores()
            .iter()
            .enumerate()
            .map(|(l, c)| {
                let (m, n) = (row_shape.dim(l), col_shape.dim(l));
                if c.mode != m * n {
                    return Err(Error::InvalidArgument(format!(
                        "paired mode {l} has size {} but {m}x{n} was requested",
                        c.mode
                    )));
                }
                Ok(TtMatCore { left: c.left, rows: m, cols: n, right: c.right, data: c.data.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        TtMatrix::new(cores)
    }

    /// Dense matrix between the flattened (column-major) product spaces.
    pub fn to_dense_matrix(&self) -> Result<Matrix> {
        let rows = self.row_shape.total();
        let cols = self.col_shape.total();
        check_budget(rows.saturating_mul(cols))?;
        let paired = self.to_paired_tt().to_dense()?;
        let mut out = Matrix::zeros(rows, cols);
        let d = self.order();
        let mut row_stride = vec![0usize; d];
        let mut col_stride = vec![0usize; d];
        let (mut rs, mut cs) = (1usize, 1usize);
        for l in 0..d {
            row_stride[l] = rs;
            col_stride[l] = cs;
            rs *= self.row_shape.dim(l);
            cs *= self.col_shape.dim(l);
        }
        for (off, &v) in paired.values().iter().enumerate() {
            let mut rem = off;
            let mut i = 0;
            let mut j = 0;
            for l in 0..d {
                let pair = rem % (self.cores[l].rows * self.cores[l].cols);
                rem /= self.cores[l].rows * self.cores[l].cols;
                i += (pair % self.cores[l].rows) * row_stride[l];
                j += (pair / self.cores[l].rows) * col_stride[l];
            }
            out.set(i, j, v);
        }
        Ok(out)
    }

    /// Dense application to a flat (column-major) vector; oracle-scale only.
    pub fn apply_dense(&self, x: &[f64]) -> Result<Vec<f64>> {
        let m = self.to_dense_matrix()?;
        Ok(m.matvec(x))
    }

    /// Split every square mode `N_l = q^{L_l}` into digit pairs: the QTT
    /// representation of the operator, exact up to round-off.
    pub fn quantize(&self, q: usize) -> Result<TtMatrix> {
        let mut cores: Vec<TtMatCore> = Vec::new();
        for core in &self.cores {
            if core.rows != core.cols {
                return Err(Error::InvalidArgument(
                    "quantize requires square per-mode blocks".into(),
                ));
            }
            let levels = digit_count(core.rows, q).ok_or(Error::NotAPowerOfBase {
                len: core.rows,
                base: q,
            })?;
            if levels <= 1 {
                cores.push(core.clone());
                continue;
            }
            // Permute (a, i, j, b) into (a, (i1 j1), …, (iL jL), b) with the
            // digit pairs packed column-major (row digit fastest).
            let mut permuted = vec![0.0; core.data.len()];
            let n = core.rows;
            let pair = q * q;
            let total_pairs = pair.pow(levels as u32);
            for b in 0..core.right {
                for j in 0..n {
                    for i in 0..n {
                        let mut key = 0usize;
                        let mut stride = 1usize;
                        let (mut ii, mut jj) = (i, j);
                        for _ in 0..levels {
                            key += (ii % q + q * (jj % q)) * stride;
                            ii /= q;
                            jj /= q;
                            stride *= pair;
                        }
                        for a in 0..core.left {
                            permuted[a + core.left * (key + total_pairs * b)] =
                                core.get(a, i, j, b);
                        }
                    }
                }
            }
            let fat = TtCore { left: core.left, mode: total_pairs, right: core.right, data: permuted };
            let mut split: Vec<TtCore> = Vec::new();
            split_core_into_digits(&fat, pair, levels, &mut split)?;
            for c in split {
                cores.push(TtMatCore {
                    left: c.left,
                    rows: q,
                    cols: q,
                    right: c.right,
                    data: c.data,
                });
            }
        }
        TtMatrix::new(cores)
    }

    /// Append the cores of `other` (bond-1 junction): the Kronecker-style
    /// operator acting as `self` on the fast modes and `other` on the slow.
    pub fn tensor_product(&self, other: &TtMatrix) -> TtMatrix {
        let mut cores = self.cores.clone();
        cores.extend(other.cores.iter().cloned());
        TtMatrix::new(cores).expect("boundary ranks are 1")
    }
}

/// Block matrix of equally-shaped dense tensors: the operand of the rank
/// product `⋈`.
#[derive(Debug, Clone)]
pub struct CoreMatrix {
    rows: usize,
    cols: usize,
    block_shape: Shape,
    blocks: Vec<DenseTensor>,
}

impl CoreMatrix {
    /// `blocks` in column-major block order (`blocks[i + rows*j]`).
    pub fn new(rows: usize, cols: usize, blocks: Vec<DenseTensor>) -> Result<Self> {
        if rows == 0 || cols == 0 || blocks.len() != rows * cols {
            return Err(Error::InvalidArgument("core matrix block count mismatch".into()));
        }
        let block_shape = blocks[0].shape().clone();
        for b in &blocks {
            if *b.shape() != block_shape {
                return Err(Error::InvalidArgument("core matrix blocks differ in shape".into()));
            }
        }
        Ok(CoreMatrix { rows, cols, block_shape, blocks })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn block_shape(&self) -> &Shape {
        &self.block_shape
    }

    pub fn block(&self, i: usize, j: usize) -> &DenseTensor {
        &self.blocks[i + self.rows * j]
    }
}

/// The rank product `⋈`: a regular matrix product of two core matrices
/// whose blocks multiply by tensor product,
/// `C(i,k) = Σ_j L(i,j) ⊗ R(j,k)`.
pub fn rank_join(left: &CoreMatrix, right: &CoreMatrix) -> Result<CoreMatrix> {
    if left.cols != right.rows {
        return Err(Error::ShapeMismatch {
            context: "rank_join",
            left: vec![left.rows, left.cols],
            right: vec![right.rows, right.cols],
        });
    }
    let shape = left.block_shape.concat(&right.block_shape);
    let mut blocks = Vec::with_capacity(left.rows * right.cols);
    for k in 0..right.cols {
        for i in 0..left.rows {
            let mut acc = DenseTensor::zeros(shape.clone());
            for j in 0..left.cols {
                let prod = left.block(i, j).tensor_product(right.block(j, k));
                acc = acc.add(&prod)?;
            }
            blocks.push(acc);
        }
    }
    // Column-major block storage was built k-major above; reorder.
    let mut ordered = Vec::with_capacity(blocks.len());
    for j in 0..right.cols {
        for i in 0..left.rows {
            ordered.push(blocks[i + left.rows * j].clone());
        }
    }
    CoreMatrix::new(left.rows, right.cols, ordered)
}

/// Contract a full chain with `⋈`; the chain must start with one block row
/// and end with one block column.
pub fn contract_core_chain(chain: &[CoreMatrix]) -> Result<DenseTensor> {
    if chain.is_empty() {
        return Err(Error::InvalidArgument("empty core chain".into()));
    }
    let mut acc = chain[0].clone();
    for next in &chain[1..] {
        acc = rank_join(&acc, next)?;
    }
    if acc.rows != 1 || acc.cols != 1 {
        return Err(Error::InvalidArgument(format!(
            "chain contracts to a {}x{} block matrix, expected 1x1",
            acc.rows, acc.cols
        )));
    }
    Ok(acc.block(0, 0).clone())
}

impl TtTensor {
    /// Assemble a TT tensor from a `⋈` chain of core matrices with
    /// vector-shaped (order-1) blocks.
    pub fn from_core_chain(chain: &[CoreMatrix]) -> Result<TtTensor> {
        let cores = chain
            .iter()
            .map(|cm| {
                if cm.block_shape.order() != 1 {
                    return Err(Error::InvalidArgument(
                        "TT chain blocks must be vectors".into(),
                    ));
                }
                let n = cm.block_shape.dim(0);
                let mut core = TtCore::zeros(cm.rows, n, cm.cols);
                for b in 0..cm.cols {
                    for a in 0..cm.rows {
                        for i in 0..n {
                            core.set(a, i, b, cm.block(a, b).values()[i]);
                        }
                    }
                }
                Ok(core)
            })
            .collect::<Result<Vec<_>>>()?;
        TtTensor::new(cores)
    }
}

impl TtMatrix {
    /// Assemble a TT operator from a `⋈` chain with matrix-shaped
    /// (order-2) blocks.
    pub fn from_core_chain(chain: &[CoreMatrix]) -> Result<TtMatrix> {
        let cores = chain
            .iter()
            .map(|cm| {
                if cm.block_shape.order() != 2 {
                    return Err(Error::InvalidArgument(
                        "TT operator chain blocks must be matrices".into(),
                    ));
                }
                let (m, n) = (cm.block_shape.dim(0), cm.block_shape.dim(1));
                let mut core = TtMatCore::zeros(cm.rows, m, n, cm.cols);
                for b in 0..cm.cols {
                    for a in 0..cm.rows {
                        let blk = cm.block(a, b);
                        for j in 0..n {
                            for i in 0..m {
                                core.set(a, i, j, b, blk.get(&[i, j]).unwrap());
                            }
                        }
                    }
                }
                Ok(core)
            })
            .collect::<Result<Vec<_>>>()?;
        TtMatrix::new(cores)
    }
}
