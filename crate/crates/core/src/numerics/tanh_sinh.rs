//! Tanh-sinh (double-exponential) quadrature.
//!
//! The substitution x = mid + half*tanh((pi/2)*sinh t) maps the interval to
//! the whole real line and makes the trapezoid weights decay
//! double-exponentially, so integrands with inverse square-root
//! singularities at either endpoint still converge quickly.  Node positions
//! are computed as exact distances from the endpoints,
//!
//! ```text
//! b - x(t) = half * 2 / (exp(2w) + 1),    w = (pi/2) sinh t,
//! ```
//!
//! which stays accurate (no cancellation) even when the node sits within
//! 1e-300 of the endpoint.
//!
//! Levels halve the trapezoid step; the loop stops when two successive
//! levels agree within tolerance or the configured level cap is reached.

use std::f64::consts::FRAC_PI_2;

use super::QuadratureConfig;
use crate::error::Error;

/// Cap on w = (pi/2) sinh t so exp(2w) stays below overflow; beyond this the
/// node weight is ~1e-300 and contributes nothing at double precision.
const MAX_EXPONENT: f64 = 350.0;

/// Safety valve against a runaway level loop on a non-integrable integrand.
const MAX_NODES_PER_SIDE: u64 = 1 << 24;

/// Integrates over [a, b], tolerating inverse square-root endpoint
/// singularities.
///
/// The integrand must be finite strictly inside (a, b); nodes never touch
/// the endpoints themselves.  Passing `b < a` integrates the reversed
/// interval and negates the result; `a == b` yields zero.
pub fn integrate_sqrt_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, Error> {
    cfg.check()?;
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_sqrt_singular(f, b, a, cfg).map(std::ops::Neg::neg);
    }

    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut previous = f64::NAN;

    for level in 0..=cfg.max_refinement {
        let h = 0.5f64.powi(level as i32);
        let centre = f(mid);
        if !centre.is_finite() {
            return Err(non_finite(mid));
        }
        let mut sum = FRAC_PI_2 * centre;
        let mut quiet_terms = 0u32;
        let mut k: u64 = 1;
        loop {
            let t = k as f64 * h;
            let w = FRAC_PI_2 * t.sinh();
            if w > MAX_EXPONENT {
                break;
            }
            let weight = FRAC_PI_2 * t.cosh() / (w.cosh() * w.cosh());
            let distance = half * 2.0 / ((2.0 * w).exp() + 1.0);
            // Once the offset drops below the spacing of representable
            // numbers next to an endpoint, the node coordinate collides
            // with the endpoint itself and the integrand can no longer be
            // sampled on that side.  The unreachable tail is doubly
            // exponentially damped, so dropping it is the best double
            // precision allows; for integrands with an actual singularity
            // at an endpoint of order-one magnitude this limits the rule
            // to roughly 1e-8 absolute accuracy, which is why the period
            // integrals desingularise by substitution instead of relying
            // on this routine.
            let x_upper = b - distance;
            let x_lower = a + distance;
            if x_upper >= b && x_lower <= a {
                break;
            }
            let mut pair = 0.0;
            if x_upper < b {
                let upper = f(x_upper);
                if !upper.is_finite() {
                    return Err(non_finite(x_upper));
                }
                pair += upper;
            }
            if x_lower > a {
                let lower = f(x_lower);
                if !lower.is_finite() {
                    return Err(non_finite(x_lower));
                }
                pair += lower;
            }
            let term = weight * pair;
            sum += term;
            // Stop scanning outward once terms are far below the rounding
            // level of the running sum; require two in a row so a single
            // accidental zero does not end the pass early.
            if w > 10.0 && term.abs() <= f64::EPSILON * sum.abs() {
                quiet_terms += 1;
                if quiet_terms >= 2 {
                    break;
                }
            } else {
                quiet_terms = 0;
            }
            k += 1;
            if k > MAX_NODES_PER_SIDE {
                return Err(Error::NonConvergence {
                    what: "tanh-sinh node scan",
                    limit: cfg.max_refinement,
                });
            }
        }

        let estimate = sum * h * half;
        if level >= 2 {
            let diff = (estimate - previous).abs();
            if diff <= cfg.tolerance_for(estimate)
                || diff <= 8.0 * f64::EPSILON * estimate.abs()
            {
                return Ok(estimate);
            }
        }
        previous = estimate;
    }

    Err(Error::NonConvergence {
        what: "tanh-sinh level refinement",
        limit: cfg.max_refinement,
    })
}

fn non_finite(x: f64) -> Error {
    Error::NonFinite {
        location: format!("integrand at {x:e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_smooth;
    use std::f64::consts::PI;

    const CFG: QuadratureConfig = QuadratureConfig::DEFAULT;

    #[test]
    fn semicircle_weight_integrates_to_pi() {
        // Both endpoints carry 1/sqrt singularities at coordinates of
        // magnitude one, so the rounding wall next to the endpoints caps
        // the attainable accuracy near 1e-8.
        let v = integrate_sqrt_singular(|x| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0, &CFG).unwrap();
        assert!((v - PI).abs() < 2e-7, "got {v}, expect {PI}");
    }

    #[test]
    fn left_endpoint_inverse_sqrt() {
        // With the singular endpoint at zero the node offsets stay
        // representable all the way down, so full accuracy survives.
        let v = integrate_sqrt_singular(|x| 1.0 / x.sqrt(), 0.0, 1.0, &CFG).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn right_endpoint_inverse_sqrt() {
        // The singular endpoint sits at 1.0, where the nearest
        // representable neighbour is one machine epsilon away; see the
        // accuracy note on the scan truncation.
        let v = integrate_sqrt_singular(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, &CFG).unwrap();
        assert!((v - 2.0).abs() < 1e-7, "got {v}");
    }

    #[test]
    fn agrees_with_gauss_on_smooth_integrands() {
        for (f, a, b) in [
            (f64::exp as fn(f64) -> f64, 0.0, 1.0),
            (f64::cos, -0.5, 1.2),
            (|x: f64| 1.0 / (1.0 + x * x), 0.0, 3.0),
        ] {
            let ts = integrate_sqrt_singular(f, a, b, &CFG).unwrap();
            let gl = integrate_smooth(f, a, b, &CFG).unwrap();
            assert!((ts - gl).abs() < 1e-10, "ts {ts} vs gl {gl}");
        }
    }

    #[test]
    fn reversed_interval_negates() {
        let fwd = integrate_sqrt_singular(|x| 1.0 / x.sqrt(), 0.0, 1.0, &CFG).unwrap();
        let rev = integrate_sqrt_singular(|x| 1.0 / x.sqrt(), 1.0, 0.0, &CFG).unwrap();
        assert!((fwd + rev).abs() < 1e-14);
    }

    #[test]
    fn empty_interval_is_zero() {
        let v = integrate_sqrt_singular(|x| 1.0 / x.sqrt(), 0.3, 0.3, &CFG).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn interior_nan_reports_nonfinite() {
        let r = integrate_sqrt_singular(|x| (x - 0.5).ln(), 0.0, 1.0, &CFG);
        assert!(matches!(r, Err(Error::NonFinite { .. })), "got {r:?}");
    }

    #[test]
    fn level_cap_reports_nonconvergence() {
        // One level is never enough to certify agreement.
        let cfg = QuadratureConfig {
            max_refinement: 1,
            ..QuadratureConfig::DEFAULT
        };
        let r = integrate_sqrt_singular(|x| 1.0 / x.sqrt(), 0.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::NonConvergence { .. })), "got {r:?}");
    }
}
