//! Mutually unbiased bases, magic-simplex Bell-diagonal qudit states, and the
//! MUB correlation witness for detecting (bound) entanglement.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, partial
//!   transpose and trace, a Jacobi Hermitian eigensolver.
//! - [`galois`]: arithmetic in GF(p^m) for the small fields MUB
//!   constructions need.
//! - [`mub`]: complete MUB sets for d ∈ {2,3,4,5,7,8,9}, a three-basis set
//!   for d = 6, and overlap verification.
//! - [`simplex`]: Weyl operators, Bell projectors, simplex states, the
//!   four-parameter family and its n-pair multipartite lift.
//! - [`criteria`]: positivity, PPT and the MUB witness.
//! - [`explore`]: slice scans, witness extremisation, incomplete-set and
//!   multipartite comparisons, CSV/JSON output.

pub mod criteria;
pub mod error;
pub mod explore;
pub mod galois;
pub mod linalg;
pub mod mub;
pub mod par;
pub mod simplex;

pub use error::{Error, Result};
pub use linalg::{Matrix, TensorShape};
