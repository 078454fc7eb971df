//! Weierstrass P on rectangular lattices.
//!
//! Real invariants (g2, g3) with positive discriminant g2^3 - 27 g3^2
//! give a cubic 4t^3 - g2 t - g3 with three real roots e1 > e2 > e3 and a
//! rectangular period lattice: one real half-period and one purely
//! imaginary half-period, recovered from the root gaps by the convergent
//! integrals
//!
//! ```text
//! H_re = Int_0^inf ds / sqrt((s^2 + e1-e2)(s^2 + e1-e3))
//! H_im = Int_0^inf ds / sqrt((s^2 + e1-e3)(s^2 + e2-e3))
//! ```
//!
//! (the substitutions t = e1 + s^2 and t = e3 - s^2 applied to the
//! defining period integrals, which removes their endpoint square-root
//! singularities exactly).
//!
//! Evaluation reduces the argument to the fundamental rectangle centred
//! on the pole, halves it into a trust disc where the Laurent series
//! converges fast, and climbs back out with the algebraic duplication
//! formulas, so accuracy is uniform over the whole lattice.

use num_complex::Complex64;

use crate::error::Error;
use crate::numerics::{integrate_smooth, solve_weierstrass_cubic, CubicRoots, QuadratureConfig};

/// Lattice invariants (g2, g3) of a Weierstrass cubic 4t^3 - g2 t - g3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    /// Quadratic invariant g2.
    pub g2: f64,
    /// Cubic invariant g3.
    pub g3: f64,
}

impl Invariants {
    /// The cubic discriminant g2^3 - 27 g3^2; positive exactly when the
    /// root triple is real and distinct (rectangular lattice).
    ///
    /// The two terms cancel severely when the roots nearly collide, so
    /// the products and the subtraction are carried in compensated
    /// (double-double) arithmetic and only the final result is rounded;
    /// a plain evaluation would lose up to half the digits of the
    /// difference.
    pub fn discriminant(&self) -> f64 {
        // Error-free product: a * b = p + e exactly.
        fn two_prod(a: f64, b: f64) -> (f64, f64) {
            let p = a * b;
            (p, a.mul_add(b, -p))
        }
        // Error-free sum: a + b = s + e exactly.
        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        }
        let (sq, sq_lo) = two_prod(self.g2, self.g2);
        let (cube, cube_lo) = two_prod(sq, self.g2);
        let cube_lo = cube_lo + sq_lo * self.g2;

        let (g3sq, g3sq_lo) = two_prod(self.g3, self.g3);
        let (t, t_lo) = two_prod(27.0, g3sq);
        let t_lo = t_lo + 27.0 * g3sq_lo;

        let (d, d_lo) = two_sum(cube, -t);
        d + (d_lo + cube_lo - t_lo)
    }
}

/// Rescales invariants under z -> gamma z, which sends (g2, g3) to
/// (gamma^-4 g2, gamma^-6 g3) for the function P(z/gamma); equivalently,
/// the lattice gamma L has invariants (gamma^-4 g2, gamma^-6 g3).  This
/// helper computes (gamma^4 g2, gamma^6 g3), the invariants whose P
/// satisfies P(z; gamma^4 g2, gamma^6 g3) = gamma^2 P(gamma z; g2, g3)
/// after the matching argument scaling.
///
/// The result must come out real (up to rounding) to describe a
/// rectangular lattice again; otherwise `NonRealInvariants` is returned.
pub fn homogeneity_scale(inv: &Invariants, gamma: Complex64) -> Result<Invariants, Error> {
    let g4 = gamma.powi(4);
    let g6 = gamma.powi(6);
    let g2 = g4 * inv.g2;
    let g3 = g6 * inv.g3;
    let worst = g2.im.abs().max(g3.im.abs());
    if worst > 1e-12 * (1.0 + g2.re.abs().max(g3.re.abs())) {
        return Err(Error::NonRealInvariants { imag: worst });
    }
    Ok(Invariants {
        g2: g2.re,
        g3: g3.re,
    })
}

/// Upper bound on the Laurent subscript before the tail is declared
/// non-convergent.  At the trust radius used below the series terms decay
/// like 0.41^k, so convergence is reached far earlier.
const MAX_LAURENT: usize = 80;

/// A Weierstrass P function on a rectangular lattice, with its
/// half-periods, root triple, and precomputed Laurent coefficients.
#[derive(Debug, Clone)]
pub struct WeierstrassContext {
    inv: Invariants,
    roots: CubicRoots,
    half_re: f64,
    half_im: f64,
    /// Laurent coefficients c_k of P(z) = z^-2 + sum c_k z^(2k-2),
    /// stored from k = 2 upward.
    laurent: Vec<f64>,
    trust_radius: f64,
    pole_exclusion: f64,
}

impl WeierstrassContext {
    /// Builds the evaluation context: solves the cubic, computes both
    /// half-periods by quadrature, and expands the Laurent series far
    /// enough for full double precision inside the trust radius.
    pub fn new(inv: Invariants) -> Result<Self, Error> {
        if !inv.g2.is_finite() || !inv.g3.is_finite() {
            return Err(Error::Domain {
                value: if inv.g2.is_finite() { inv.g3 } else { inv.g2 },
                expected: "finite invariants",
            });
        }
        let roots = solve_weierstrass_cubic(inv.g2, inv.g3)?;
        let half_re = half_period_integral(roots.e1 - roots.e2, roots.e1 - roots.e3)?;
        let half_im = half_period_integral(roots.e1 - roots.e3, roots.e2 - roots.e3)?;
        let min_lattice = (2.0 * half_re).min(2.0 * half_im);
        let trust_radius = 0.4 * min_lattice;
        let laurent = laurent_coefficients(&inv, trust_radius)?;
        Ok(Self {
            inv,
            roots,
            half_re,
            half_im,
            laurent,
            trust_radius,
            pole_exclusion: 1e-6 * min_lattice,
        })
    }

    /// The invariants this context was built from.
    pub fn invariants(&self) -> Invariants {
        self.inv
    }

    /// The ordered real root triple e1 > e2 > e3.
    pub fn roots(&self) -> CubicRoots {
        self.roots
    }

    /// The real half-period.
    pub fn half_period_real(&self) -> f64 {
        self.half_re
    }

    /// The imaginary part of the purely imaginary half-period.
    pub fn half_period_imag(&self) -> f64 {
        self.half_im
    }

    /// Radius around lattice points inside which evaluation refuses to
    /// operate and reports `NearPole`.
    pub fn pole_exclusion(&self) -> f64 {
        self.pole_exclusion
    }

    /// Translates z by lattice vectors into the fundamental rectangle
    /// [-H_re, H_re] x [-H_im, H_im] centred on the pole at the origin.
    pub fn reduce_to_fundamental(&self, z: Complex64) -> Complex64 {
        let px = 2.0 * self.half_re;
        let py = 2.0 * self.half_im;
        Complex64::new(
            z.re - px * (z.re / px).round(),
            z.im - py * (z.im / py).round(),
        )
    }

    /// P(z).
    pub fn wp(&self, z: Complex64) -> Result<Complex64, Error> {
        self.wp_and_prime(z).map(|(p, _)| p)
    }

    /// P'(z).
    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64, Error> {
        self.wp_and_prime(z).map(|(_, dp)| dp)
    }

    /// P(z) and P'(z) together (they share all the work).
    pub fn wp_and_prime(&self, z: Complex64) -> Result<(Complex64, Complex64), Error> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite {
                location: format!("argument {z}"),
            });
        }
        let zr = self.reduce_to_fundamental(z);
        let r = zr.norm();
        if r < self.pole_exclusion {
            return Err(Error::NearPole {
                exclusion: self.pole_exclusion,
            });
        }
        let mut doublings = 0u32;
        let mut scale = 1.0;
        while r / scale > self.trust_radius {
            scale *= 2.0;
            doublings += 1;
        }
        let (mut p, mut dp) = self.laurent_eval(zr / scale);
        for _ in 0..doublings {
            (p, dp) = self.duplicate(p, dp);
        }
        if !(p.re.is_finite() && p.im.is_finite() && dp.re.is_finite() && dp.im.is_finite()) {
            return Err(Error::NonFinite {
                location: format!("P at {z}"),
            });
        }
        Ok((p, dp))
    }

    /// Laurent series for P and P' inside the trust radius.
    fn laurent_eval(&self, w: Complex64) -> (Complex64, Complex64) {
        let w2 = w * w;
        let mut p = w2.inv();
        let mut dp = -2.0 * (w2 * w).inv();
        // power = w^(2k-4), starting at k = 2.
        let mut power = Complex64::new(1.0, 0.0);
        for (i, &ck) in self.laurent.iter().enumerate() {
            let k = (i + 2) as f64;
            p += ck * power * w2;
            dp += (2.0 * k - 2.0) * ck * power * w;
            power *= w2;
        }
        (p, dp)
    }

    /// Algebraic duplication: maps (P(w), P'(w)) to (P(2w), P'(2w)) using
    /// P'' = 6 P^2 - g2/2.  The outward-doubling path never lands on a
    /// point where P' vanishes (that would require the reduced argument
    /// to sit on the lattice itself, which the pole exclusion rejects),
    /// so the divisions are safe.
    fn duplicate(&self, p: Complex64, dp: Complex64) -> (Complex64, Complex64) {
        let ddp = 6.0 * p * p - 0.5 * self.inv.g2;
        let ratio = ddp / dp;
        let p2 = -2.0 * p + 0.25 * ratio * ratio;
        let dp2 = -dp + ddp * (12.0 * p * dp * dp - ddp * ddp) / (4.0 * dp * dp * dp);
        (p2, dp2)
    }
}

/// Int_0^inf ds / sqrt((s^2 + a)(s^2 + b)) for a >= b > 0: the common
/// shape of both half-period integrals after substitution.  The body is
/// integrated to a cutoff S chosen so that the first neglected term of
/// the tail expansion Int_S^inf = 1/S - (a+b)/(6 S^3) + ... is below the
/// quadrature tolerance, then the leading tail 1/S is added back.
fn half_period_integral(a: f64, b: f64) -> Result<f64, Error> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::NonRectangular {
            discriminant: f64::NAN,
        });
    }
    let cfg = QuadratureConfig::DEFAULT;
    let tail_tol = cfg.abs_tol.min(1e-11);
    let s_max = ((a + b) / (6.0 * tail_tol)).cbrt().max(10.0);
    let body = integrate_smooth(
        |s: f64| 1.0 / ((s * s + a) * (s * s + b)).sqrt(),
        0.0,
        s_max,
        &cfg,
    )?;
    Ok(body + 1.0 / s_max)
}

/// Laurent coefficients c_k, k >= 2, of P(z) = z^-2 + sum c_k z^(2k-2):
/// c_2 = g2/20, c_3 = g3/28, and for k >= 4
/// c_k = 3 / ((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}.
/// Expansion stops once two consecutive terms at the trust radius fall
/// below 1e-17.
fn laurent_coefficients(inv: &Invariants, trust_radius: f64) -> Result<Vec<f64>, Error> {
    let mut c: Vec<f64> = vec![inv.g2 / 20.0, inv.g3 / 28.0];
    let r2 = trust_radius * trust_radius;
    let mut quiet = 0u32;
    for k in 4..=MAX_LAURENT {
        let mut s = 0.0;
        for m in 2..=(k - 2) {
            s += c[m - 2] * c[k - m - 2];
        }
        let ck = 3.0 * s / (((2 * k + 1) * (k - 3)) as f64);
        c.push(ck);
        if ck.abs() * r2.powi(k as i32 - 1) < 1e-17 {
            quiet += 1;
            if quiet >= 2 {
                return Ok(c);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "Laurent tail of the P series",
        limit: MAX_LAURENT as u32,
    })
}
