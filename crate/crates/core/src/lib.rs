//! Signature-three elliptic functions.
//!
//! This crate evaluates the degree-three analogues of the Jacobi dn
//! function: a small-lattice function dn3 and a big-lattice function W,
//! each expressed through a Weierstrass P function on its own period
//! lattice, together with the fundamental periods of both lattices and a
//! scaling identity that transports one lattice onto the other.

pub mod elliptic;
pub mod error;
pub mod hyper;
pub mod numerics;
pub mod oracle;
pub mod wp;

pub use elliptic::Sig3System;
pub use error::Error;
pub use hyper::Modulus;
pub use num_complex::Complex64;
pub use wp::{Invariants, WeierstrassContext};

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
