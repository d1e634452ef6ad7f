//! Numerical machinery for classical-quantum wiretap channels: Hermitian
//! matrix kernels, information quantities, secrecy exponents, finite-field
//! code ensembles, and desk-scale code simulations.

pub mod channels;
pub mod codes;
pub mod error;
pub mod exponents;
pub mod gf;
pub mod hermitian;
pub mod optim;
pub mod quantities;

pub use error::{Error, Result};
