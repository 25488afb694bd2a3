//! Tensor representations: dense, canonical, Tucker, TT/MPS and TT
//! operators, plus the q-adic quantization map and serialization.

mod canonical;
mod dense;
mod quantize;
pub mod serialize;
mod shape;
mod tt;
mod tucker;

pub use canonical::{CanonicalMatrix, CanonicalTensor};
pub(crate) use dense::check_budget;
pub use dense::{dense_budget, DenseTensor, DEFAULT_DENSE_BUDGET};
pub use quantize::{fold, fold_tensor, unfold, QuantizationMap};
pub use shape::Shape;
pub use tt::{
    contract_core_chain, rank_join, CoreMatrix, CoreOrtho, TtCore, TtMatCore, TtMatrix, TtTensor,
};
pub use tucker::TuckerTensor;
