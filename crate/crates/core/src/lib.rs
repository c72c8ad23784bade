//! Low-rank tensor-network decompositions for neural-network weight tensors.
//!
//! The crate decomposes dense weight matrices into matrix product operators
//! (tensor trains), vectors into matrix product states, and 4-index kernels
//! into Tucker and CP forms; plans and executes tensor-network contractions
//! under a product-of-dimensions FLOP model; runs tensorized linear layers
//! forward and backward; rewrites an MPO as a stack of sparse fully-connected
//! layers with gauge freedom on its bonds; keeps activations in MPS form
//! through whole forward passes; and serializes everything in a single-file
//! binary container driven by the `tnz` CLI.

mod svd;

pub mod container;
pub mod decompose;
pub mod error;
pub mod layers;
pub mod network;
pub mod stack;
pub mod tensor;
pub mod tensorized;

#[cfg(test)]
pub(crate) mod test_oracles;

pub use error::{Error, Result};
pub use tensor::{delta_tensor, DenseTensor, FactorResult, Index, IndexRole};
