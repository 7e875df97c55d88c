//! Pseudo-unitary deleting and cloning machines for a two-qubit
//! pseudo-Hermitian Hamiltonian, their simulation in ordinary quantum
//! mechanics through unitary dilation and post-selection, and the
//! clone-amplified state discrimination they enable.
//!
//! Module map:
//! - [`linalg`]: small dense complex matrices, eigen/SVD/exponential
//! - [`pseudo`]: `H(θ)`, metric `η`, inner-product and pseudo-unitarity checks
//! - [`machines`]: the state pair, deleting/cloning operators, frame fitting
//! - [`discrim`]: Helstrom bounds and Monte Carlo discrimination
//! - [`dilation`]: 8×8 unitary dilation, post-selection, success probability
//! - [`cli`]: report generation behind the `pseudo-sim` binary
//! - [`par`]: rayon/sequential execution of the Monte Carlo loops

pub mod cli;
pub mod dilation;
pub mod discrim;
pub mod error;
pub mod linalg;
pub mod machines;
pub mod par;
pub mod pseudo;

pub use error::{Error, Result};
pub use linalg::{CMat, Ket, C64};
