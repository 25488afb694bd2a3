//! The q-adic folding between length-`q^L` vectors and `L`-way tensors of
//! mode size `q`.
//!
//! Digit `ν = 1` is the fastest (little-endian): a 0-based vector position
//! `i` maps to digits `(j_1, …, j_L)` with `i = Σ_ν j_ν q^{ν-1}`. Because
//! dense storage is column-major with mode 1 fastest, folding and unfolding
//! move no data; the digit arithmetic below is still exercised explicitly
//! by the index maps and their tests.

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor, Shape};

/// Folding map for one mode: `q^L = N` exactly, checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizationMap {
    q: usize,
    levels: usize,
    len: usize,
}

impl QuantizationMap {
    pub fn new(q: usize, len: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("base q = {q} must be at least 2")));
        }
        let mut levels = 0usize;
        let mut m = len;
        if m == 0 {
            return Err(Error::NotAPowerOfBase { len, base: q });
        }
        while m > 1 {
            if m % q != 0 {
                return Err(Error::NotAPowerOfBase { len, base: q });
            }
            m /= q;
            levels += 1;
        }
        if levels == 0 {
            return Err(Error::NotAPowerOfBase { len, base: q });
        }
        Ok(QuantizationMap { q, levels, len })
    }

    pub fn base(&self) -> usize {
        self.q
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[allow(clippy::len_without_is_empty)]
    /// Digits of a vector position, fastest digit first.
    pub fn digits(&self, mut index: usize) -> Result<Vec<usize>> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange { index: vec![index], shape: vec![self.len] });
        }
        let mut d = Vec::with_capacity(self.levels);
        for _ in 0..self.levels {
            d.push(index % self.q);
            index /= self.q;
        }
        Ok(d)
    }

    /// Vector position of a digit tuple.
    pub fn index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.levels || digits.iter().any(|&d| d >= self.q) {
            return Err(Error::IndexOutOfRange {
                index: digits.to_vec(),
                shape: vec![self.q; self.levels],
            });
        }
        let mut i = 0;
        for &d in digits.iter().rev() {
            i = i * self.q + d;
        }
        Ok(i)
    }

    pub fn folded_shape(&self) -> Shape {
        Shape::new(vec![self.q; self.levels]).expect("valid")
    }
}

/// Fold a vector of length `q^L` into the `L`-way quantized tensor.
///
/// Isometric: the flat data is carried over unchanged, entry `(j_1,…,j_L)`
/// of the result is the vector entry at `Σ_ν j_ν q^{ν-1}`.
pub fn fold(vector: &[f64], map: &QuantizationMap) -> Result<DenseTensor> {
    if vector.len() != map.len {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} does not match the map length {}",
            vector.len(),
            map.len
        )));
    }
    DenseTensor::from_values(map.folded_shape(), vector.to_vec())
}

/// Exact inverse of [`fold`].
pub fn unfold(tensor: &DenseTensor, map: &QuantizationMap) -> Result<Vec<f64>> {
    if *tensor.shape() != map.folded_shape() {
        return Err(Error::ShapeMismatch {
            context: "unfold",
            left: tensor.shape().dims().to_vec(),
            right: map.folded_shape().dims().to_vec(),
        });
    }
    Ok(tensor.values().to_vec())
}

/// Fold every mode of a tensor to base-`q` digits (the d > 1 per-mode map).
/// Every mode size must be a power of `q`; data is carried unchanged.
pub fn fold_tensor(tensor: &DenseTensor, q: usize) -> Result<DenseTensor> {
    let mut dims = Vec::new();
    for &n in tensor.shape().dims() {
        let m = QuantizationMap::new(q, n)?;
        dims.extend(std::iter::repeat(q).take(m.levels()));
    }
    tensor.clone().reshape(Shape::new(dims)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_identity_on_a_length_eight_vector() {
        let v: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let map = QuantizationMap::new(2, 8).unwrap();
        let t = fold(&v, &map).unwrap();
        for j1 in 0..2 {
            for j2 in 0..2 {
                for j3 in 0..2 {
                    let expect = (j1 + 2 * j2 + 4 * j3) as f64;
                    assert_eq!(t.get(&[j1, j2, j3]).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn fold_unfold_round_trip_exact() {
        let n = 1 << 10;
        let v: Vec<f64> = (0..n).map(|i| ((i * 2654435761_usize) % 1000) as f64 / 7.0).collect();
        let map = QuantizationMap::new(2, n).unwrap();
        let t = fold(&v, &map).unwrap();
        let w = unfold(&t, &map).unwrap();
        assert_eq!(v, w);
        // Norm preservation is trivially exact.
        let n1: f64 = v.iter().map(|x| x * x).sum();
        assert_eq!(n1.sqrt(), t.frobenius_norm());
    }

    #[test]
    fn geometric_vector_folds_to_an_outer_product() {
        // z = 2, N = 4, q = 2: fold equals [1,2] ⊗ [1,4].
        let v = vec![1.0, 2.0, 4.0, 8.0];
        let map = QuantizationMap::new(2, 4).unwrap();
        let t = fold(&v, &map).unwrap();
        let a = [1.0, 2.0];
        let b = [1.0, 4.0];
        for j1 in 0..2 {
            for j2 in 0..2 {
                assert_eq!(t.get(&[j1, j2]).unwrap(), a[j1] * b[j2]);
            }
        }
    }

    #[test]
    fn rejects_non_power_lengths() {
        assert!(matches!(
            QuantizationMap::new(2, 12),
            Err(Error::NotAPowerOfBase { len: 12, base: 2 })
        ));
        assert!(QuantizationMap::new(3, 27).is_ok());
        assert!(QuantizationMap::new(2, 1).is_err());
    }

    #[test]
    fn index_digit_bijection_sampled() {
        for &(q, levels) in &[(2usize, 20usize), (3, 12)] {
            let len = q.pow(levels as u32);
            let map = QuantizationMap::new(q, len).unwrap();
            let mut i = 1usize;
            while i < len {
                let d = map.digits(i).unwrap();
                assert_eq!(map.index(&d).unwrap(), i);
                i = i.saturating_mul(3) + 1;
            }
        }
    }
}
