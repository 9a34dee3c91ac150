//! Group-averaged covariance estimation at desk scale.
//!
//! A single observation `x` is averaged over the orbit of a finite unitary
//! group to produce a covariance estimate. The choice of group selects the
//! transform: cyclic shifts give the periodogram, shift-plus-reflection gives
//! DCT-like spectra, the time-frequency lattice gives the ambiguity function.
//! The commutativity residual ranks candidate groups against a covariance, and
//! the double-commutator GEVP finds the best generator in a basis blindly.
//!
//! The crate is `no_std` (with `alloc`); all IO lives in the companion
//! `adlab` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod estimator;
pub mod gevp;
pub mod groups;
pub mod linalg;
pub mod model;
pub mod residual;
pub mod studies;
pub mod transforms;
pub mod wavelet;

pub use error::Error;
pub use linalg::{CMatrix, CVector};
pub use model::{HermitianOperator, Signal};
