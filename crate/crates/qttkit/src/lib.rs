//! Rank-structured tensor numerics toolkit.
//!
//! The crate implements the canonical, Tucker, tensor-train (TT/MPS) and
//! quantized-TT (QTT) formats together with format-aware multilinear
//! algebra, SVD-based decomposition and rounding, closed-form and
//! quadrature-based generators (quantized Laplacians, exponential-sum
//! operator inverses, a separable Newton-kernel tensor), logarithmic-cost
//! 1-D quadrature, assembled lattice summation of shifted Coulomb
//! potentials, and tensor-format parabolic dynamics (a Cayley-transform
//! Laguerre series and global space-time solvers for master equations).
//!
//! All values are immutable after construction and every operation is a
//! pure function of its inputs, so tensors can be shared freely across
//! threads for concurrent reads.

pub mod algebra;
pub mod decompose;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod lattice;
pub mod linalg;
pub mod quadrature;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{
    dense_budget, fold, fold_tensor, unfold, CanonicalMatrix, CanonicalTensor, DenseTensor,
    QuantizationMap, Shape, TtMatrix, TtTensor, TuckerTensor,
};

#[cfg(test)]
mod thread_safety {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn tensor_values_are_shareable_across_threads() {
        assert_send_sync::<DenseTensor>();
        assert_send_sync::<CanonicalTensor>();
        assert_send_sync::<TuckerTensor>();
        assert_send_sync::<TtTensor>();
        assert_send_sync::<TtMatrix>();
    }
}
