//! Independent construction of dn3 on the real axis by inverting the
//! incomplete integral, with no Weierstrass machinery involved.
//!
//! The amplitude phi(u) is defined by
//!
//! ```text
//! u = Int_0^phi f_half(kappa^2 sin^2 t) dt,
//! ```
//!
//! inverted here in two stages: a Runge-Kutta march of
//! dphi/du = 1 / f_half(kappa^2 sin^2 phi) lays down nodes across the
//! requested range, then every node is polished by Newton iteration
//! against the quadrature-defined integral itself.  The march alone
//! would carry the solver's accumulated truncation error; Newton alone
//! would lack starting values.  Together each node is pinned to
//! quadrature accuracy, so values produced here are genuinely
//! independent of the lattice route to dn3 and can arbitrate it.
//!
//! Queries between nodes start from a cubic Hermite interpolant (the
//! node derivatives are known exactly from the defining equation) and
//! apply the same Newton polish.  The derivative
//! delta(u) = phi'(u) = 1 / f_half(kappa^2 sin^2 phi(u)) equals dn3 on
//! the real axis; [`psi_check`] verifies the equivalent closed form
//! cos(psi) / cos(psi/3) with psi = arcsin(kappa sin phi).

use crate::error::Error;
use crate::hyper::{f_half_unchecked, incomplete_integral, Modulus};
use crate::numerics::{solve_ode_scalar, OdeSolution};
use crate::Result;

/// Iteration cap for each Newton polish; the map is smooth and strictly
/// monotone, so convergence takes two or three steps from any reasonable
/// starting value.
const MAX_NEWTON: u32 = 12;

/// The inverted amplitude phi on [0, u_max], ready for interpolation.
#[derive(Debug, Clone)]
pub struct PhiSolution {
    modulus: Modulus,
    u_max: f64,
    tol: f64,
    /// Unpolished dense output of the Runge-Kutta march.
    raw: OdeSolution,
    /// Node abscissas (strictly increasing, first is 0).
    nodes_u: Vec<f64>,
    /// Newton-refined phi at each node.
    nodes_phi: Vec<f64>,
    /// Exact derivative 1 / f_half(kappa^2 sin^2 phi) at each node.
    nodes_dphi: Vec<f64>,
}

/// phi'(u) for a given phi value; always well defined because
/// kappa^2 sin^2 phi stays inside [0, kappa^2] and kappa < 1.
fn phi_slope(m: &Modulus, phi: f64) -> f64 {
    let s = phi.sin();
    1.0 / f_half_unchecked(m.kappa_sq() * s * s)
}

/// Newton-polishes a phi estimate until the integral residual
/// incomplete_integral(phi) - u drops below `target`, returning the
/// refined phi.
fn newton_polish(m: &Modulus, u: f64, mut phi: f64, target: f64) -> Result<f64> {
    for _ in 0..MAX_NEWTON {
        let residual = incomplete_integral(m, phi)? - u;
        if residual.abs() < target {
            return Ok(phi);
        }
        phi -= residual * phi_slope(m, phi);
    }
    Err(Error::NonConvergence {
        what: "Newton inversion of the incomplete integral",
        limit: MAX_NEWTON,
    })
}

/// Builds the amplitude inverse on [0, u_max].
///
/// `tol` controls both the Runge-Kutta march and the per-node Newton
/// refinement target.  A range of four real half-periods covers the
/// conventional uses (two full periods, enough to test periodicity
/// twice).
pub fn build_phi(m: &Modulus, u_max: f64, tol: f64) -> Result<PhiSolution> {
    if !(u_max.is_finite() && u_max > 0.0) {
        return Err(Error::Domain {
            value: u_max,
            expected: "positive finite range",
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain {
            value: tol,
            expected: "positive finite tolerance",
        });
    }
    let modulus = *m;
    let raw = solve_ode_scalar(
        |_, phi| phi_slope(&modulus, phi),
        0.0,
        0.0,
        u_max,
        tol,
    )?;

    let points = raw.step_points();
    let mut nodes_u = Vec::with_capacity(points.len());
    let mut nodes_phi = Vec::with_capacity(points.len());
    let mut nodes_dphi = Vec::with_capacity(points.len());
    for (u, phi_raw) in points {
        let phi = if u == 0.0 {
            0.0
        } else {
            newton_polish(&modulus, u, phi_raw, tol)?
        };
        nodes_u.push(u);
        nodes_phi.push(phi);
        nodes_dphi.push(phi_slope(&modulus, phi));
    }

    Ok(PhiSolution {
        modulus,
        u_max,
        tol,
        raw,
        nodes_u,
        nodes_phi,
        nodes_dphi,
    })
}

impl PhiSolution {
    /// The modulus this solution was built for.
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The top of the built range.
    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// The tolerance used for the march and the node refinement.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The amplitude phi(u), polished to quadrature accuracy.
    pub fn phi(&self, u: f64) -> Result<f64> {
        let slack = 1e-12 * (1.0 + self.u_max);
        if !u.is_finite() || u < -slack || u > self.u_max + slack {
            return Err(Error::Domain {
                value: u,
                expected: "argument inside the built range",
            });
        }
        let u = u.clamp(0.0, self.u_max);

        // Cubic Hermite start from the bracketing refined nodes.
        let hi = self
            .nodes_u
            .partition_point(|&n| n <= u)
            .clamp(1, self.nodes_u.len() - 1);
        let lo = hi - 1;
        let h = self.nodes_u[hi] - self.nodes_u[lo];
        let t = (u - self.nodes_u[lo]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let guess = self.nodes_phi[lo] * (2.0 * t3 - 3.0 * t2 + 1.0)
            + self.nodes_dphi[lo] * h * (t3 - 2.0 * t2 + t)
            + self.nodes_phi[hi] * (-2.0 * t3 + 3.0 * t2)
            + self.nodes_dphi[hi] * h * (t3 - t2);

        // The quadrature behind the residual is accurate to about 1e-11,
        // so demanding much less than that would chase noise.
        let target = 1e-12 * (1.0 + u) + 0.1 * self.tol.min(1e-9);
        newton_polish(&self.modulus, u, guess, target)
    }

    /// The unpolished Runge-Kutta value of phi(u), exposed so the
    /// refinement can be compared against the raw march.
    pub fn raw_phi(&self, u: f64) -> Result<f64> {
        self.raw.eval(u)
    }
}

/// delta(u) = phi'(u) = 1 / f_half(kappa^2 sin^2 phi(u)); equals dn3 on
/// the real axis, taking values in (0, 1].
pub fn delta_oracle(sol: &PhiSolution, u: f64) -> Result<f64> {
    Ok(phi_slope(&sol.modulus, sol.phi(u)?))
}

/// Residual of the closed form for delta: with psi = arcsin(kappa sin
/// phi(u)), returns |delta(u) - cos(psi) / cos(psi/3)|.
pub fn psi_check(sol: &PhiSolution, u: f64) -> Result<f64> {
    let phi = sol.phi(u)?;
    let delta = phi_slope(&sol.modulus, phi);
    let psi = (sol.modulus.kappa() * phi.sin()).asin();
    Ok((delta - psi.cos() / (psi / 3.0).cos()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{periods_small, Sig3System};
    use num_complex::Complex64;

    fn solution(kappa: f64) -> (PhiSolution, f64) {
        let m = Modulus::new(kappa).unwrap();
        let omega = periods_small(&m).unwrap().0;
        (build_phi(&m, 4.0 * omega, 1e-10).unwrap(), omega)
    }

    #[test]
    fn tiny_modulus_gives_the_identity_map() {
        let m = Modulus::new(1e-6).unwrap();
        let sol = build_phi(&m, 2.0, 1e-11).unwrap();
        let got = sol.phi(1.7).unwrap();
        assert!((got - 1.7).abs() < 2e-12, "got {got}, expect 1.7");
    }

    #[test]
    fn quarter_and_half_turns_at_the_half_periods() {
        let (sol, omega) = solution(0.6);
        let got = sol.phi(omega).unwrap();
        let expect = std::f64::consts::FRAC_PI_2;
        assert!((got - expect).abs() < 1e-11, "got {got}, expect {expect}");
        let got = sol.phi(2.0 * omega).unwrap();
        let expect = std::f64::consts::PI;
        assert!((got - expect).abs() < 1e-11, "got {got}, expect {expect}");
    }

    #[test]
    fn reference_amplitude_value() {
        // Frozen from an extended-precision inversion at kappa = 0.6.
        let (sol, _) = solution(0.6);
        let got = sol.phi(0.37).unwrap();
        let expect = 0.367_371_075_014_804_3;
        assert!((got - expect).abs() < 1e-12, "got {got}, expect {expect}");
    }

    #[test]
    fn reference_delta_values() {
        let (sol, omega) = solution(0.6);
        let got = delta_oracle(&sol, 0.37).unwrap();
        let expect = 0.979_069_245_706_977_7;
        assert!((got - expect).abs() < 1e-11, "got {got}, expect {expect}");

        let got = delta_oracle(&sol, 0.0).unwrap();
        assert_eq!(got, 1.0, "delta(0) should be exactly 1, got {got}");

        let alpha = sol.modulus().alpha();
        let got = delta_oracle(&sol, omega).unwrap();
        let expect = 2.0 * (2.0 * alpha / 3.0).cos() - 1.0;
        assert!((got - expect).abs() < 1e-11, "got {got}, expect {expect}");
    }

    #[test]
    fn delta_matches_the_lattice_route() {
        // The two constructions share nothing past f_half, so agreement
        // here validates both.
        let (sol, omega) = solution(0.6);
        let sys = Sig3System::new(*sol.modulus()).unwrap();
        let mut u = 0.05;
        while u < 2.0 * omega {
            let oracle = delta_oracle(&sol, u).unwrap();
            let lattice = sys.dn3(Complex64::new(u, 0.0)).unwrap();
            assert!(
                (lattice - oracle).norm() < 1e-10,
                "u = {u}: lattice {lattice}, oracle {oracle}"
            );
            u += 0.3;
        }
    }

    #[test]
    fn closed_form_for_delta_holds() {
        let (sol, omega) = solution(0.35);
        let mut u = 0.0;
        while u <= 2.0 * omega {
            let r = psi_check(&sol, u).unwrap();
            assert!(r < 1e-12, "residual {r} at u = {u}");
            u += 0.17;
        }
    }

    #[test]
    fn delta_has_the_real_period() {
        let (sol, omega) = solution(0.45);
        for u in [0.1, 0.8, 1.9] {
            let a = delta_oracle(&sol, u).unwrap();
            let b = delta_oracle(&sol, u + 2.0 * omega).unwrap();
            assert!((a - b).abs() < 1e-11, "u = {u}: {a} vs {b}");
        }
    }

    #[test]
    fn refinement_stays_near_the_raw_march() {
        let (sol, _) = solution(0.7);
        let mut u = 0.0;
        while u <= sol.u_max() {
            let refined = sol.phi(u).unwrap();
            let raw = sol.raw_phi(u).unwrap();
            assert!(
                (refined - raw).abs() < 10.0 * sol.tolerance(),
                "u = {u}: refined {refined}, raw {raw}"
            );
            u += 0.23;
        }
    }

    #[test]
    fn amplitude_is_strictly_increasing() {
        let (sol, _) = solution(0.85);
        let mut prev = sol.phi(0.0).unwrap();
        let mut u = 0.05;
        while u <= sol.u_max() {
            let next = sol.phi(u).unwrap();
            assert!(next > prev, "phi not increasing at u = {u}");
            prev = next;
            u += 0.05;
        }
    }

    #[test]
    fn extrema_sit_at_the_lattice_points() {
        let (sol, omega) = solution(0.5);
        let alpha = sol.modulus().alpha();
        let floor = 2.0 * (2.0 * alpha / 3.0).cos() - 1.0;
        let mut u = 0.0;
        while u <= 2.0 * omega {
            let d = delta_oracle(&sol, u).unwrap();
            assert!(d <= 1.0 + 1e-13, "delta {d} above 1 at u = {u}");
            assert!(d >= floor - 1e-13, "delta {d} below floor at u = {u}");
            u += 0.11;
        }
    }

    #[test]
    fn arguments_outside_the_range_are_rejected() {
        let (sol, _) = solution(0.5);
        assert!(matches!(sol.phi(-0.5), Err(Error::Domain { .. })));
        assert!(matches!(
            sol.phi(sol.u_max() + 0.5),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            build_phi(sol.modulus(), -1.0, 1e-10),
            Err(Error::Domain { .. })
        ));
    }
}
