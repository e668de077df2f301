//! Numerical machinery for the two-mode quantization of the Bateman damped
//! oscillator.
//!
//! The crate builds the truncated Fock-space operators ([`fockspace`]), the
//! Bateman Hamiltonian and its pseudo-Bogoliubov barred ladder ([`model`]),
//! the Bogoliubov vacuum with its biorthogonal eigenvector ladder
//! ([`states`]), and the position-space Hermite-Gaussian eigenfunctions
//! together with the distributional analysis of the improper pairing
//! ([`position`]). The [`cli`] module wraps all of it into named check suites.

pub mod cli;
pub mod error;
pub mod fockspace;
pub mod model;
pub mod position;
pub mod states;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;
