//! Partition function and edge statistics of the critical honeycomb dimer
//! model on an `m x n` torus, computed three ways: brute-force enumeration,
//! the exact Fourier product over boundary-condition sectors, and the
//! asymptotic theory built on Gaussian-window polylogarithm integrals.

pub mod error;
pub mod polylog;
pub mod signed_log;

pub use error::{Error, Result};
pub use signed_log::SignedLog;
pub mod enumerate;
pub mod kasteleyn;
pub mod resonance;
pub mod scan;
pub mod verify;
