//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Error`].  The variants
//! split into three groups: numerical-engine failures (`NonConvergence`,
//! `NonFinite`, `StepUnderflow`), structural rejections of bad input
//! (`Domain`, `NonRectangular`, `NonRealInvariants`), and pole/consistency
//! conditions raised by the elliptic layer (`NearPole`, `Dn3Pole`, `WPole`,
//! `PoleVerificationFailed`, `CriticalValueMismatch`).

use thiserror::Error;

/// Errors produced by quadrature, ODE integration, and the elliptic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An adaptive scheme hit its refinement limit before meeting tolerance.
    #[error("{what} did not converge within {limit} refinements")]
    NonConvergence { what: &'static str, limit: u32 },

    /// An integrand or stencil evaluation returned NaN or infinity.
    #[error("non-finite evaluation at {location}")]
    NonFinite { location: String },

    /// The Weierstrass cubic discriminant g2^3 - 27 g3^2 is not positive, so
    /// the root triple is not real-distinct and the period lattice is not
    /// rectangular.
    #[error("discriminant {discriminant:e} is not positive; period lattice is not rectangular")]
    NonRectangular { discriminant: f64 },

    /// The adaptive ODE step size shrank below the resolvable scale.
    #[error("ODE step size underflowed near u = {at}")]
    StepUnderflow { at: f64 },

    /// An argument lies outside the documented domain of the operation.
    #[error("argument {value} outside domain: expected {expected}")]
    Domain { value: f64, expected: &'static str },

    /// The evaluation point reduced into the exclusion disc around a lattice
    /// point, where the Weierstrass function has its double pole.
    #[error("evaluation point within {exclusion:e} of a lattice point")]
    NearPole { exclusion: f64 },

    /// dn3 was evaluated at one of its poles: |p(z) + 1/3| fell below the
    /// pole-reporting threshold.
    #[error("dn3 pole: |p(z) + 1/3| = {denom:e} below threshold")]
    Dn3Pole { denom: f64 },

    /// W was evaluated at one of its poles: |6 - P(z)| fell below the
    /// pole-reporting threshold.
    #[error("W pole: |6 - P(z)| = {denom:e} below threshold")]
    WPole { denom: f64 },

    /// Rescaled invariants acquired an imaginary part, so the scale factor
    /// does not map a real pair (g2, g3) to a real pair.
    #[error("scaled invariants are not real: imaginary part {imag:e}")]
    NonRealInvariants { imag: f64 },

    /// The claimed pole locations failed their residue check.
    #[error("pole verification failed: {detail}")]
    PoleVerificationFailed { detail: String },

    /// W evaluated at a lattice corner disagreed with its closed-form
    /// critical value.
    #[error("critical value mismatch: {detail}")]
    CriticalValueMismatch { detail: String },
}
