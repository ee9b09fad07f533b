//! Spectral wave-packet propagation under a modified dispersion law, plus a
//! Fourier-side solver suite for linear differential equations with periodic
//! potentials.

pub mod arith;
pub mod cli;
pub mod dispersion;
pub mod error;
pub mod hill;
pub mod numeric;
pub mod oracle;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
