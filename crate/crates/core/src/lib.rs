//! Statevector simulation of a two-syndrome error-detection code for
//! `(2n+1)`-qubit entangled states whose terms are closed under bitwise
//! complement.
//!
//! The crate covers state construction ([`states`]), a dense simulator
//! ([`statevector`], [`kernels`]), single-qubit error models
//! ([`error_model`]), the detection circuit and its syndrome statistics
//! ([`protocol`]), and the ibmqx5 device model with OpenQASM output
//! ([`device`], [`qasm`]).
//!
//! With the default `parallel` feature, gate kernels on large states and
//! sweep points run on rayon. Disabling the feature gives a sequential
//! build with identical numerical output.

pub mod device;
pub mod error;
pub mod error_model;
pub mod kernels;
pub mod protocol;
pub mod qasm;
pub mod states;
pub mod statevector;

pub use error::{Error, Result};
pub use num_complex::Complex64;
