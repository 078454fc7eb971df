//! The signature-three layer: dn3 and W, their lattices, and the
//! transfer between them.
//!
//! Both functions are rational images of a Weierstrass P on a rectangular
//! lattice parameterised by a modulus kappa:
//!
//! ```text
//! dn3(z) = 1 - (4 kappa^2 / 9) / (p(z) + 1/3)      (small lattice)
//! W(z)   = 4 lambda^2 / (6 - P(z)) - 1             (big lattice)
//! ```
//!
//! where p has invariants g2 = (4/27)(8 lambda^2 + 1),
//! g3 = (8/729)(8 lambda^4 + 20 lambda^2 - 1) and P has invariants
//! G2 = 48 (1 + 8 kappa^2), G3 = 64 (1 - 20 kappa^2 - 8 kappa^4).
//!
//! The real half-period of the small lattice has four independent
//! evaluation routes, all exposed here: the hypergeometric formula
//! (pi/2) f_one(kappa^2) plus three integral representations (an angular
//! integral, a degree-six Chebyshev form, and an integral over the
//! function's own value range).  Each integral has inverse square-root
//! endpoint singularities that are removed exactly by quadratic
//! substitution before Gauss-Legendre quadrature, so the routes agree to
//! near machine precision and make strong cross-checks.
//!
//! The two lattices are images of each other: the big-lattice P at
//! modulus kappa equals -18 times the small-lattice p at the
//! complementary modulus lambda evaluated at 3 sqrt(2) i z.
//! [`TransferPair`] packages that identity.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::Error;
use crate::hyper::{f_one, Modulus};
use crate::numerics::{integrate_smooth, QuadratureConfig};
use crate::wp::{Invariants, WeierstrassContext};
use crate::Result;

/// Denominator magnitude below which dn3 / W evaluation reports a pole
/// instead of returning a huge value.
const POLE_DENOM_THRESHOLD: f64 = 1e-12;

/// Invariants of the small lattice (the one carrying dn3), expressed in
/// the complementary modulus: g2 = (4/27)(8 lambda^2 + 1),
/// g3 = (8/729)(8 lambda^4 + 20 lambda^2 - 1).
pub fn small_invariants(m: &Modulus) -> Invariants {
    let l2 = m.lambda_sq();
    Invariants {
        g2: 4.0 / 27.0 * (8.0 * l2 + 1.0),
        g3: 8.0 / 729.0 * ((8.0 * l2 + 20.0) * l2 - 1.0),
    }
}

/// Invariants of the big lattice (the one carrying W):
/// G2 = 48 (1 + 8 kappa^2), G3 = 64 (1 - 20 kappa^2 - 8 kappa^4).
pub fn big_invariants(m: &Modulus) -> Invariants {
    let k2 = m.kappa_sq();
    Invariants {
        g2: 48.0 * (1.0 + 8.0 * k2),
        g3: 64.0 * (1.0 - (20.0 + 8.0 * k2) * k2),
    }
}

/// Small-lattice periods from the hypergeometric formulas:
/// returns (omega, omega'_im) where omega = (pi/2) f_one(kappa^2) is the
/// real half-period and i omega'_im with
/// omega'_im = (sqrt 3 / 2) pi f_one(lambda^2) is the imaginary one.
pub fn periods_small(m: &Modulus) -> Result<(f64, f64)> {
    let fk = f_one(m.kappa_sq())?;
    let fl = f_one(m.lambda_sq())?;
    Ok((FRAC_PI_2 * fk, 0.5 * 3.0_f64.sqrt() * PI * fl))
}

/// Big-lattice periods from the hypergeometric formulas:
/// returns (Omega, Omega'_im) with Omega = (pi / (2 sqrt 6)) f_one(kappa^2)
/// and Omega'_im = (pi / (6 sqrt 2)) f_one(lambda^2).
pub fn periods_big(m: &Modulus) -> Result<(f64, f64)> {
    let fk = f_one(m.kappa_sq())?;
    let fl = f_one(m.lambda_sq())?;
    Ok((PI / (2.0 * 6.0_f64.sqrt()) * fk, PI / (6.0 * SQRT_2) * fl))
}

/// Imaginary parts of the lattice ratios omega'/omega (small) and
/// Omega'/Omega (big); both ratios are purely imaginary and the small one
/// is exactly three times the big one.
pub fn lattice_ratios(m: &Modulus) -> Result<(f64, f64)> {
    let fk = f_one(m.kappa_sq())?;
    let fl = f_one(m.lambda_sq())?;
    let base = fl / fk;
    Ok((3.0_f64.sqrt() * base, base / 3.0_f64.sqrt()))
}

/// sin(x)/x, stable through x = 0.
fn sin_ratio(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// The real half-period omega as the angular integral
/// sqrt 2 Int_0^alpha cos(psi/3) / sqrt(cos 2 psi - cos 2 alpha) dpsi.
///
/// The difference of cosines is expanded as
/// 2 sin(alpha + psi) sin(alpha - psi) and the endpoint singularity at
/// psi = alpha removed by psi = alpha - s^2, which leaves a smooth
/// integrand (sin(s^2)/s^2 never cancels).
pub fn omega_via_mehler(m: &Modulus) -> Result<f64> {
    let alpha = m.alpha();
    let cfg = QuadratureConfig::DEFAULT;
    integrate_smooth(
        |s: f64| {
            let s2 = s * s;
            2.0 * ((alpha - s2) / 3.0).cos()
                / ((2.0 * alpha - s2).sin() * sin_ratio(s2)).sqrt()
        },
        0.0,
        alpha.sqrt(),
        &cfg,
    )
}

/// The degree-six Chebyshev polynomial T6(x) = 32x^6 - 48x^4 + 18x^2 - 1,
/// satisfying T6(cos t) = cos 6t.
pub fn chebyshev_t6(x: f64) -> f64 {
    let x2 = x * x;
    ((32.0 * x2 - 48.0) * x2 + 18.0) * x2 - 1.0
}

/// The real half-period omega as
/// sqrt 6 Int dx / sqrt(T6(x) - cos 2 alpha) between the two middle roots
/// of T6(x) = cos 2 alpha.
///
/// T6(x) - cos 2 alpha factors exactly over its six roots
/// +-cos(alpha/3), +-cos((pi - alpha)/3), +-cos((pi + alpha)/3); the
/// factored product is used instead of the expanded polynomial because
/// near a root the polynomial subtraction loses half the significant
/// digits while the product keeps them all.  Both square-root endpoints
/// are removed by quadratic substitution.
pub fn omega_via_chebyshev(m: &Modulus) -> Result<f64> {
    let alpha = m.alpha();
    let r1 = (alpha / 3.0).cos();
    let r2 = ((PI - alpha) / 3.0).cos();
    let r3 = ((PI + alpha) / 3.0).cos();
    // The remaining roots are exact negations: cos((2pi - alpha)/3) = -r3,
    // cos((2pi + alpha)/3) = -r2, and -cos(alpha/3) = -r1.
    let (r4, r5, r6) = (-r3, -r2, -r1);
    let cfg = QuadratureConfig::DEFAULT;
    let mid = 0.5 * (r2 + r3);
    let lower = integrate_smooth(
        |s: f64| {
            let x = r3 + s * s;
            2.0 / (32.0 * (r1 - x) * (r2 - x) * (x - r4) * (x - r5) * (x - r6)).sqrt()
        },
        0.0,
        (mid - r3).sqrt(),
        &cfg,
    )?;
    let upper = integrate_smooth(
        |s: f64| {
            let x = r2 - s * s;
            2.0 / (32.0 * (r1 - x) * (x - r3) * (x - r4) * (x - r5) * (x - r6)).sqrt()
        },
        0.0,
        (r2 - mid).sqrt(),
        &cfg,
    )?;
    Ok(6.0_f64.sqrt() * (lower + upper))
}

/// The real half-period omega as an integral over the value range of dn3,
/// (3/2) Int_{d1}^{1} ddelta / sqrt((1 - delta)(delta^3 + 3 delta^2 - 4 lambda^2)).
///
/// The cubic factors exactly over d_j = 2 cos(2 (pi j_sign + alpha)/3) - 1
/// (the same critical cosines as the W cubic, shifted); the factored form
/// is used for the same cancellation reason as in the Chebyshev route,
/// and both endpoint singularities are removed by quadratic substitution.
pub fn omega_via_delta_integral(m: &Modulus) -> Result<f64> {
    let alpha = m.alpha();
    let d1 = 2.0 * (2.0 * alpha / 3.0).cos() - 1.0;
    let d2 = 2.0 * (2.0 * (PI - alpha) / 3.0).cos() - 1.0;
    let d3 = 2.0 * (2.0 * (PI + alpha) / 3.0).cos() - 1.0;
    let cfg = QuadratureConfig::DEFAULT;
    let mid = 0.5 * (d1 + 1.0);
    let lower = integrate_smooth(
        |s: f64| {
            let d = d1 + s * s;
            2.0 / ((1.0 - d) * (d - d2) * (d - d3)).sqrt()
        },
        0.0,
        (mid - d1).sqrt(),
        &cfg,
    )?;
    let upper = integrate_smooth(
        |s: f64| {
            let d = 1.0 - s * s;
            2.0 / ((d - d1) * (d - d2) * (d - d3)).sqrt()
        },
        0.0,
        (1.0 - mid).sqrt(),
        &cfg,
    )?;
    Ok(1.5 * (lower + upper))
}

/// The three critical values of W, taken at the half-period, the corner,
/// and the imaginary half-period of the big lattice.  They are the three
/// roots of 4W^3 - 3W = cos 2 alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalTriple {
    /// W(Omega) = cos(2 alpha / 3).
    pub at_omega: f64,
    /// W(Omega + Omega') = cos(2 (pi - alpha) / 3).
    pub at_corner: f64,
    /// W(Omega') = cos(2 (pi + alpha) / 3).
    pub at_omega_prime: f64,
}

/// The poles of dn3 and W closest to the origin.  Both functions are
/// elliptic, so every pole is one of these shifted by a lattice vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleLocations {
    /// dn3 poles at +-(2/3) omega' (purely imaginary).
    pub dn3: [Complex64; 2],
    /// W poles at +-(2/3) Omega (real).
    pub big_w: [Complex64; 2],
}

/// Both lattices of one modulus, ready to evaluate dn3, W, and their
/// derivatives anywhere in the complex plane.
#[derive(Debug, Clone)]
pub struct Sig3System {
    modulus: Modulus,
    small: WeierstrassContext,
    big: WeierstrassContext,
}

impl Sig3System {
    /// Builds both Weierstrass contexts for the given modulus.
    pub fn new(modulus: Modulus) -> Result<Self> {
        let small = WeierstrassContext::new(small_invariants(&modulus))?;
        let big = WeierstrassContext::new(big_invariants(&modulus))?;
        Ok(Self {
            modulus,
            small,
            big,
        })
    }

    /// The modulus this system was built for.
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The small-lattice Weierstrass context (underlying dn3).
    pub fn small_context(&self) -> &WeierstrassContext {
        &self.small
    }

    /// The big-lattice Weierstrass context (underlying W).
    pub fn big_context(&self) -> &WeierstrassContext {
        &self.big
    }

    /// dn3(z) = 1 - (4 kappa^2 / 9) / (p(z) + 1/3).
    ///
    /// At lattice points p has its pole and dn3 its removable value 1.
    /// Where p(z) + 1/3 vanishes (at +-(2/3) omega' modulo the lattice)
    /// dn3 has an actual pole and `Dn3Pole` is returned.
    pub fn dn3(&self, z: Complex64) -> Result<Complex64> {
        match self.small.wp(z) {
            Ok(p) => {
                let denom = p + 1.0 / 3.0;
                if denom.norm() < POLE_DENOM_THRESHOLD {
                    return Err(Error::Dn3Pole {
                        denom: denom.norm(),
                    });
                }
                Ok(1.0 - (4.0 * self.modulus.kappa_sq() / 9.0) / denom)
            }
            Err(Error::NearPole { .. }) => Ok(Complex64::new(1.0, 0.0)),
            Err(e) => Err(e),
        }
    }

    /// dn3'(z) = (4 kappa^2 / 9) p'(z) / (p(z) + 1/3)^2.
    ///
    /// Zero at lattice points (dn3 has a critical point at its maximum).
    pub fn dn3_prime(&self, z: Complex64) -> Result<Complex64> {
        match self.small.wp_and_prime(z) {
            Ok((p, dp)) => {
                let denom = p + 1.0 / 3.0;
                if denom.norm() < POLE_DENOM_THRESHOLD {
                    return Err(Error::Dn3Pole {
                        denom: denom.norm(),
                    });
                }
                Ok((4.0 * self.modulus.kappa_sq() / 9.0) * dp / (denom * denom))
            }
            Err(Error::NearPole { .. }) => Ok(Complex64::new(0.0, 0.0)),
            Err(e) => Err(e),
        }
    }

    /// W(z) = 4 lambda^2 / (6 - P(z)) - 1.
    ///
    /// At lattice points P has its pole and W its removable value -1.
    /// Where P(z) = 6 (at +-(2/3) Omega modulo the lattice) W has an
    /// actual pole and `WPole` is returned.
    pub fn big_w(&self, z: Complex64) -> Result<Complex64> {
        match self.big.wp(z) {
            Ok(p) => {
                let denom = 6.0 - p;
                if denom.norm() < POLE_DENOM_THRESHOLD {
                    return Err(Error::WPole {
                        denom: denom.norm(),
                    });
                }
                Ok(4.0 * self.modulus.lambda_sq() / denom - 1.0)
            }
            Err(Error::NearPole { .. }) => Ok(Complex64::new(-1.0, 0.0)),
            Err(e) => Err(e),
        }
    }

    /// W'(z) = 4 lambda^2 P'(z) / (6 - P(z))^2.
    pub fn big_w_prime(&self, z: Complex64) -> Result<Complex64> {
        match self.big.wp_and_prime(z) {
            Ok((p, dp)) => {
                let denom = 6.0 - p;
                if denom.norm() < POLE_DENOM_THRESHOLD {
                    return Err(Error::WPole {
                        denom: denom.norm(),
                    });
                }
                Ok(4.0 * self.modulus.lambda_sq() * dp / (denom * denom))
            }
            Err(Error::NearPole { .. }) => Ok(Complex64::new(0.0, 0.0)),
            Err(e) => Err(e),
        }
    }

    /// y6(z)^2 = (W(z) + 1) / 2 = 2 lambda^2 / (6 - P(z)).
    pub fn y6_squared(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.big_w(z)? + 1.0) / 2.0)
    }

    /// Residual of the dn3 differential equation
    /// 9 (dn3')^2 = 4 (1 - dn3)(dn3^3 + 3 dn3^2 - 4 lambda^2)
    /// at z (zero up to rounding wherever dn3 is finite).
    pub fn dn3_ode_residual(&self, z: Complex64) -> Result<f64> {
        let d = self.dn3(z)?;
        let dp = self.dn3_prime(z)?;
        let l2 = self.modulus.lambda_sq();
        let lhs = 9.0 * dp * dp;
        let rhs = 4.0 * (1.0 - d) * (d * d * d + 3.0 * d * d - 4.0 * l2);
        Ok((lhs - rhs).norm())
    }

    /// Residual of the W differential equation
    /// (W')^2 = 8 (W + 1)(4W^3 - 3W - cos 2 alpha) at z, using
    /// cos 2 alpha = 1 - 2 kappa^2.
    pub fn big_w_ode_residual(&self, z: Complex64) -> Result<f64> {
        let w = self.big_w(z)?;
        let wp = self.big_w_prime(z)?;
        let cos2a = 1.0 - 2.0 * self.modulus.kappa_sq();
        let lhs = wp * wp;
        let rhs = 8.0 * (w + 1.0) * (4.0 * w * w * w - 3.0 * w - cos2a);
        Ok((lhs - rhs).norm())
    }

    /// The poles of dn3 and W nearest the origin, from the computed
    /// half-periods.
    pub fn pole_locations(&self) -> PoleLocations {
        let dn3_im = 2.0 / 3.0 * self.small.half_period_imag();
        let w_re = 2.0 / 3.0 * self.big.half_period_real();
        PoleLocations {
            dn3: [
                Complex64::new(0.0, dn3_im),
                Complex64::new(0.0, -dn3_im),
            ],
            big_w: [Complex64::new(w_re, 0.0), Complex64::new(-w_re, 0.0)],
        }
    }

    /// The critical values of W in closed form, after verifying that the
    /// directly evaluated W agrees with each of them to 1e-8 at the
    /// corresponding half-period point.  A disagreement reports
    /// `CriticalValueMismatch`.
    pub fn critical_values(&self) -> Result<CriticalTriple> {
        let alpha = self.modulus.alpha();
        let closed = CriticalTriple {
            at_omega: (2.0 * alpha / 3.0).cos(),
            at_corner: (2.0 * (PI - alpha) / 3.0).cos(),
            at_omega_prime: (2.0 * (PI + alpha) / 3.0).cos(),
        };
        let om = Complex64::new(self.big.half_period_real(), 0.0);
        let omp = Complex64::new(0.0, self.big.half_period_imag());
        let checks = [
            (om, closed.at_omega, "real half-period"),
            (om + omp, closed.at_corner, "corner"),
            (omp, closed.at_omega_prime, "imaginary half-period"),
        ];
        for (z, expect, which) in checks {
            let w = self.big_w(z)?;
            if (w - expect).norm() > 1e-8 {
                return Err(Error::CriticalValueMismatch {
                    detail: format!(
                        "W at the {which}: computed {w}, closed form {expect}"
                    ),
                });
            }
        }
        Ok(closed)
    }
}

/// The big lattice at modulus kappa and the small lattice at the
/// complementary modulus lambda, which are the same lattice up to the
/// scaling z -> 3 sqrt(2) i z.  On the function level,
/// P_kappa(z) = -18 p_lambda(3 sqrt(2) i z).
#[derive(Debug, Clone)]
pub struct TransferPair {
    big: WeierstrassContext,
    small_partner: WeierstrassContext,
}

impl TransferPair {
    /// Builds both sides for the given modulus.
    pub fn new(m: &Modulus) -> Result<Self> {
        Ok(Self {
            big: WeierstrassContext::new(big_invariants(m))?,
            small_partner: WeierstrassContext::new(small_invariants(&m.complementary()))?,
        })
    }

    /// Left side: the big-lattice P at modulus kappa.
    pub fn big_value(&self, z: Complex64) -> Result<Complex64> {
        self.big.wp(z)
    }

    /// Right side: -18 p_lambda(3 sqrt(2) i z).
    pub fn transported_value(&self, z: Complex64) -> Result<Complex64> {
        let gamma = Complex64::new(0.0, 3.0 * SQRT_2);
        Ok(-18.0 * self.small_partner.wp(gamma * z)?)
    }

    /// |left - right| at z.
    pub fn residual(&self, z: Complex64) -> Result<f64> {
        Ok((self.big_value(z)? - self.transported_value(z)?).norm())
    }
}

/// One-off evaluation of the transfer residual; builds a [`TransferPair`]
/// internally, so loops should construct the pair once instead.
pub fn transfer_residual(m: &Modulus, z: Complex64) -> Result<f64> {
    TransferPair::new(m)?.residual(z)
}
