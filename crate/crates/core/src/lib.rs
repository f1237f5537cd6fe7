//! Exact computer algebra for the recursive Grassmann algebra: its classical
//! basis and serial numbers, the Clifford/spinor operator ladder over duplex
//! spaces, recursive Pauli metrics, the so(3,3) Yang algebra on real chiral
//! spinors, and cumulation over many cells with its contraction limit.

pub mod basis;
pub mod clifford;
pub mod contraction;
pub mod error;
pub mod expr;
pub mod grassmann;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod pauli;
pub mod report;
pub mod scalar;
pub mod tables;
pub mod yang;

pub use error::{PlexusError, Result};
