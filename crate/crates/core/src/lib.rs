//! Entanglement witnesses from mutually unbiased bases.
//!
//! The crate builds the witness families W(M_m, s) and their partial
//! transposes from arbitrary MUB selections, the PPT state families they
//! detect, and the machinery to verify everything: detection values, PPT
//! checks, the submatrix obstruction to decomposability, and constructive
//! decompositions for the decomposable cases. Exact reference matrices for
//! the d = 3 and d = 4 families are shipped in [`fixtures`].

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod mubs;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
