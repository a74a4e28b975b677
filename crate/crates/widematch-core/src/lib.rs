//! Rate-optimal wideband matching for small-antenna transmitters.
//!
//! The crate models a transmitter (single Chu antenna or a coupled two-element
//! array behind an analog beamformer), derives the Bode-Fano integral
//! constraints that any lossless matching network must obey for the
//! equivalent load, and solves the waterfilling problem that maximizes the
//! achievable rate under those constraints. Benchmarks (ideal, no matching,
//! conjugate matching, frequency-flat transmission) and an LC-ladder fitter
//! that realizes the optimum with discrete components are included.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command-line
//! front end live in the companion `widematch` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bodefano;
pub mod ladder;
pub mod linalg;
pub mod nelder_mead;
pub mod network;
pub mod optimizer;
pub mod pipeline;
pub mod poly;
pub mod quad;
pub mod rational;

mod error;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
