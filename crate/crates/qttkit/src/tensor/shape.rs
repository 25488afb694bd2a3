//! Mode-size bookkeeping shared by all tensor formats.

use crate::error::{Error, Result};

/// Mode sizes `(N_1, …, N_d)` of a `d`-way tensor.
///
/// Every dimension is at least 1 and the total size is guarded against
/// overflow at construction time. Indices are 0-based throughout the crate;
/// the 1-based convention appears only in documentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("shape must have at least one mode".into()));
        }
        if dims.iter().any(|&n| n == 0) {
            return Err(Error::InvalidArgument(format!("zero mode size in {dims:?}")));
        }
        let mut total: usize = 1;
        for &n in &dims {
            total = total
                .checked_mul(n)
                .ok_or_else(|| Error::SizeOverflow { dims: dims.clone() })?;
        }
        Ok(Shape(dims))
    }

    /// Cubic shape `N^d`.
    pub fn cubic(d: usize, n: usize) -> Result<Self> {
        Shape::new(vec![n; d])
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.0[mode]
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Column-major (mode-1 fastest) linear offset of a multi-index.
    pub fn linear_index(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.order() || index.iter().zip(&self.0).any(|(&i, &n)| i >= n) {
            return Err(Error::IndexOutOfRange { index: index.to_vec(), shape: self.0.clone() });
        }
        let mut off = 0;
        let mut stride = 1;
        for (i, n) in index.iter().zip(&self.0) {
            off += i * stride;
            stride *= n;
        }
        Ok(off)
    }

    /// Inverse of [`Self::linear_index`].
    pub fn multi_index(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = Vec::with_capacity(self.order());
        for &n in &self.0 {
            idx.push(offset % n);
            offset /= n;
        }
        idx
    }

    pub fn concat(&self, other: &Shape) -> Shape {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        Shape(dims)
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}
