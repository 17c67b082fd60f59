//! Exact tensor-network laboratory for abelian quantum doubles.
//!
//! The crate builds fixed-point PEPS for the toric code, the color code (as
//! two stacked toric layers) and Z_N toric codes, inserts anyon strings and
//! anyon-permuting domain walls on the virtual level, terminates walls in
//! twist defects, and checks the resulting identities by exact contraction.
//!
//! Modules, bottom up:
//!
//! - [`tensor`], [`linalg`]: dense complex tensors and matrices.
//! - [`pauli`]: Z_N Pauli products, Clifford conjugation, a text grammar.
//! - [`anyons`]: abelian anyon models and symmetry enumeration.
//! - [`peps`]: site tensors, networks and the double-layer contraction.
//! - [`walls`]: domain-wall MPOs and their algebra.
//! - [`twists`]: wall end vectors, braiding and fusion of twists.
//! - [`stabilizers`]: stabilizer registries for twisted states.
//! - [`harness`]: named verification suites and reports.

pub mod anyons;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod netfile;
pub mod pauli;
pub mod peps;
pub mod stabilizers;
pub mod suites;
pub mod symplectic;
pub mod tableau;
pub mod tensor;
pub mod twists;
pub mod walls;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tensor::{delta_tensor, equal_up_to_scalar, xor_tensor, Tensor};
