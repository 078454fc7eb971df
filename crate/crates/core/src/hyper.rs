//! Modulus parameter and Gauss hypergeometric kernels.
//!
//! Everything downstream is parameterised by a modulus kappa in (0, 1),
//! its complement lambda = sqrt(1 - kappa^2), and the modular angle
//! alpha = arcsin(kappa).  Two hypergeometric values drive the period
//! computations:
//!
//! ```text
//! f_half(x) = 2F1(1/3, 2/3; 1/2; x) = cos(arcsin(sqrt x) / 3) / sqrt(1 - x)
//! f_one(x)  = 2F1(1/3, 2/3; 1;   x) = (2/pi) Int_0^{pi/2} f_half(x sin^2 t) dt
//! ```
//!
//! The closed form for f_half makes it cheap enough to sit inside
//! integrands; f_one is obtained by integrating it, with node clustering
//! at the right endpoint because that is where the integrand concentrates
//! as x -> 1.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use crate::error::Error;
use crate::numerics::{integrate_smooth, integrate_sqrt_singular, QuadratureConfig};

/// A modulus kappa in the open interval (0, 1) together with its exact
/// complementary partner lambda = sqrt(1 - kappa^2).
///
/// Both values are stored so that [`Modulus::complementary`] is an exact
/// involution: swapping twice returns bit-identical fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    kappa: f64,
    lambda: f64,
}

impl Modulus {
    /// Validates and wraps a modulus.  The endpoints 0 and 1 are excluded
    /// because the lattices degenerate there.
    pub fn new(kappa: f64) -> Result<Self, Error> {
        if !kappa.is_finite() || kappa <= 0.0 || kappa >= 1.0 {
            return Err(Error::Domain {
                value: kappa,
                expected: "modulus in the open interval (0, 1)",
            });
        }
        // (1 - kappa)(1 + kappa) loses less precision than 1 - kappa^2
        // when kappa is close to 1.
        let lambda = ((1.0 - kappa) * (1.0 + kappa)).sqrt();
        Ok(Self { kappa, lambda })
    }

    /// The modulus kappa.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// The complementary modulus lambda = sqrt(1 - kappa^2).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// kappa^2.
    pub fn kappa_sq(&self) -> f64 {
        self.kappa * self.kappa
    }

    /// lambda^2.
    pub fn lambda_sq(&self) -> f64 {
        self.lambda * self.lambda
    }

    /// The modular angle alpha = arcsin(kappa), in (0, pi/2).
    pub fn alpha(&self) -> f64 {
        self.kappa.asin()
    }

    /// The complementary modulus object, with kappa and lambda exchanged
    /// exactly.
    pub fn complementary(&self) -> Self {
        Self {
            kappa: self.lambda,
            lambda: self.kappa,
        }
    }
}

/// 2F1(1/3, 2/3; 1/2; x) for x in [0, 1), via the closed form
/// cos(arcsin(sqrt x) / 3) / sqrt(1 - x).
pub fn f_half(x: f64) -> Result<f64, Error> {
    if !x.is_finite() || !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            expected: "argument in [0, 1)",
        });
    }
    Ok(f_half_unchecked(x))
}

/// [`f_half`] without the domain check, for use inside integrands and
/// right-hand sides that already guarantee x in [0, 1).  Out-of-domain
/// arguments produce NaN rather than an error.
pub fn f_half_unchecked(x: f64) -> f64 {
    (x.sqrt().asin() / 3.0).cos() / (1.0 - x).sqrt()
}

/// 2F1(1/3, 2/3; 1; x) for x in [0, 1), as the average
/// (2/pi) Int_0^{pi/2} f_half(x sin^2 t) dt.
pub fn f_one(x: f64) -> Result<f64, Error> {
    if !x.is_finite() || !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            expected: "argument in [0, 1)",
        });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let cfg = QuadratureConfig::DEFAULT;
    let integrand = |t: f64| {
        let s = t.sin();
        f_half_unchecked(x * s * s)
    };
    let v = integrate_sqrt_singular(integrand, 0.0, FRAC_PI_2, &cfg)?;
    Ok(FRAC_2_PI * v)
}

/// The incomplete integral u(phi) = Int_0^phi f_half(kappa^2 sin^2 psi) dpsi.
///
/// Its derivative in phi is f_half(kappa^2 sin^2 phi), which is what the
/// amplitude solver uses to invert it.  Negative phi is allowed; the map
/// is odd.
pub fn incomplete_integral(m: &Modulus, phi: f64) -> Result<f64, Error> {
    if !phi.is_finite() {
        return Err(Error::Domain {
            value: phi,
            expected: "finite amplitude",
        });
    }
    let k2 = m.kappa_sq();
    let cfg = QuadratureConfig::DEFAULT;
    integrate_smooth(
        |psi: f64| {
            let s = psi.sin();
            f_half_unchecked(k2 * s * s)
        },
        0.0,
        phi,
        &cfg,
    )
}
