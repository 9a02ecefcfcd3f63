//! Invariants of convolutional codes over prime fields: free and column
//! distances, generalized weights, generalized Hamming weights, code weight,
//! duals and reverses, MDS/MDP/sMDS status and optimal-anticode
//! classification. Every search-based number carries an exactness
//! certificate.

pub mod algebra;
pub mod classify;
pub mod cli;
pub mod code;
pub mod codefile;
pub mod error;
pub mod genweights;
pub mod metrics;
pub mod oracle;
pub mod polymat;

pub use algebra::{Poly, PrimeField};
pub use code::{code_equals, new_code, BlockCode, ConvolutionalCode};
pub use error::{Error, Result};
pub use polymat::{PolyMatrix, PolyVector};
