//! Shared numerical machinery: quadrature, the Weierstrass cubic, adaptive
//! ODE integration with dense output, and complex differentiation.
//!
//! Two quadrature routines cover the two integrand classes that occur in
//! this crate.  [`integrate_smooth`] is adaptive Gauss–Legendre for
//! integrands that are smooth on the closed interval; [`integrate_sqrt_singular`]
//! is tanh-sinh (double-exponential) quadrature, which tolerates inverse
//! square-root singularities at either endpoint because its transformed
//! nodes approach the endpoints double-exponentially fast.

mod cubic;
mod diff;
mod gauss;
mod ode;
mod tanh_sinh;

pub use cubic::{solve_weierstrass_cubic, CubicRoots};
pub use diff::complex_derivative;
pub use gauss::integrate_smooth;
pub use ode::{solve_ode_scalar, OdeSolution};
pub use tanh_sinh::integrate_sqrt_singular;

use crate::error::Error;

/// Accuracy controls shared by the quadrature and refinement routines.
///
/// `abs_tol` and `rel_tol` combine as `max(abs_tol, rel_tol * |I|)`; the
/// absolute term keeps integrals that are nearly zero from demanding
/// unattainable relative accuracy.  `max_refinement` caps panel-bisection
/// depth in [`integrate_smooth`] and the level count in
/// [`integrate_sqrt_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance on the integral value; must be positive.
    pub abs_tol: f64,
    /// Relative tolerance on the integral value; must be non-negative.
    pub rel_tol: f64,
    /// Refinement cap (bisection depth or tanh-sinh level); at least 1.
    pub max_refinement: u32,
}

impl QuadratureConfig {
    /// Defaults tuned so quadrature error stays comfortably below the
    /// 1e-8 agreement targets used throughout the elliptic layer.
    pub const DEFAULT: Self = Self {
        abs_tol: 1e-11,
        rel_tol: 1e-11,
        max_refinement: 40,
    };

    /// Validates the field invariants, returning a domain error on the
    /// first violated one.
    pub fn check(&self) -> Result<(), Error> {
        if !self.abs_tol.is_finite() || self.abs_tol <= 0.0 {
            return Err(Error::Domain {
                value: self.abs_tol,
                expected: "abs_tol > 0 and finite",
            });
        }
        if !self.rel_tol.is_finite() || self.rel_tol < 0.0 {
            return Err(Error::Domain {
                value: self.rel_tol,
                expected: "rel_tol >= 0 and finite",
            });
        }
        if self.max_refinement == 0 {
            return Err(Error::Domain {
                value: 0.0,
                expected: "max_refinement >= 1",
            });
        }
        Ok(())
    }

    /// The tolerance actually enforced for an integral of magnitude `scale`.
    pub(crate) fn tolerance_for(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::DEFAULT
    }
}
