//! Inclusion relations H_K ⊆ H_G between reproducing kernel Hilbert spaces and
//! the embedding constant λ(K,G) = inf{λ : λG − K is a kernel}.

pub mod algebra;
pub mod error;
pub mod hilbert_schmidt;
pub mod inclusion;
pub mod kernel;
pub mod psd;
pub mod special;

pub use error::{Error, Result};
