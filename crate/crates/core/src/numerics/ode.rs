//! Adaptive scalar ODE integration with continuous (dense) output.
//!
//! The integrator is the Dormand–Prince 5(4) embedded pair with its
//! standard quartic interpolant, so solution values are available at any
//! point of the integration span, not just at step ends.  Step acceptance
//! uses an error-per-unit-step criterion,
//!
//! ```text
//! |err_step| <= tol * (1 + max(|y|)) * h / span,
//! ```
//!
//! which bounds the accumulated global error by roughly `tol` instead of
//! letting it grow with the step count.

use crate::error::Error;

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// b - b_hat: weights of the embedded 4th-order error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Weights of the fifth interpolation coefficient.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const MAX_STEPS: u32 = 4_000_000;

/// One accepted step and the coefficients of its interpolant.
#[derive(Debug, Clone, Copy)]
struct Segment {
    u: f64,
    h: f64,
    /// Interpolant value at local coordinate s in [0, 1]:
    /// c0 + s*(c1 + (1-s)*(c2 + s*(c3 + (1-s)*c4))).
    cont: [f64; 5],
}

/// Dense solution of a scalar initial value problem on [u0, u1].
#[derive(Debug, Clone)]
pub struct OdeSolution {
    segments: Vec<Segment>,
    u0: f64,
    u1: f64,
    y0: f64,
    y1: f64,
}

impl OdeSolution {
    /// Integration span (u0, u1).
    pub fn span(&self) -> (f64, f64) {
        (self.u0, self.u1)
    }

    /// Solution value at the end of the span.
    pub fn end_value(&self) -> f64 {
        self.y1
    }

    /// Accepted step points (u_k, y_k), including both span ends.
    pub fn step_points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.segments.len() + 1);
        pts.push((self.u0, self.y0));
        for seg in &self.segments {
            pts.push((seg.u + seg.h, seg.cont[0] + seg.cont[1]));
        }
        pts
    }

    /// Interpolated solution value anywhere in the span.
    pub fn eval(&self, u: f64) -> Result<f64, Error> {
        let slack = 1e-12 * (1.0 + self.u0.abs().max(self.u1.abs()));
        if u < self.u0 - slack || u > self.u1 + slack {
            return Err(Error::Domain {
                value: u,
                expected: "point inside the integration span",
            });
        }
        let u = u.clamp(self.u0, self.u1);
        // Binary search for the segment containing u.
        let idx = self
            .segments
            .partition_point(|seg| seg.u + seg.h < u)
            .min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        let s = ((u - seg.u) / seg.h).clamp(0.0, 1.0);
        let [c0, c1, c2, c3, c4] = seg.cont;
        Ok(c0 + s * (c1 + (1.0 - s) * (c2 + s * (c3 + (1.0 - s) * c4))))
    }
}

/// Integrates dy/du = rhs(u, y) from (u0, y0) to u1 > u0.
///
/// `tol` controls both the per-step error test and (through the
/// error-per-unit-step scaling) the accumulated error over the whole span.
/// The returned [`OdeSolution`] interpolates y at any point of the span
/// with accuracy comparable to the step-end values.
pub fn solve_ode_scalar<F: Fn(f64, f64) -> f64>(
    rhs: F,
    u0: f64,
    y0: f64,
    u1: f64,
    tol: f64,
) -> Result<OdeSolution, Error> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain {
            value: tol,
            expected: "tol > 0 and finite",
        });
    }
    if !u1.is_finite() || !u0.is_finite() || u1 <= u0 {
        return Err(Error::Domain {
            value: u1,
            expected: "finite span with u1 > u0",
        });
    }
    let span = u1 - u0;
    let h_min = span * 1e-14;

    let mut u = u0;
    let mut y = y0;
    let mut h = span / 100.0;
    let mut k1 = rhs(u, y);
    check_finite(k1, u)?;

    let mut segments = Vec::new();
    let mut steps: u32 = 0;

    while u < u1 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NonConvergence {
                what: "ODE step budget",
                limit: MAX_STEPS,
            });
        }
        if h < h_min {
            return Err(Error::StepUnderflow { at: u });
        }
        if u + h > u1 {
            h = u1 - u;
        }

        let k2 = rhs(u + C[1] * h, y + h * A2[0] * k1);
        let k3 = rhs(u + C[2] * h, y + h * (A3[0] * k1 + A3[1] * k2));
        let k4 = rhs(u + C[3] * h, y + h * (A4[0] * k1 + A4[1] * k2 + A4[2] * k3));
        let k5 = rhs(
            u + C[4] * h,
            y + h * (A5[0] * k1 + A5[1] * k2 + A5[2] * k3 + A5[3] * k4),
        );
        let k6 = rhs(
            u + C[5] * h,
            y + h * (A6[0] * k1 + A6[1] * k2 + A6[2] * k3 + A6[3] * k4 + A6[4] * k5),
        );
        let y_new = y + h * (B[0] * k1 + B[2] * k3 + B[3] * k4 + B[4] * k5 + B[5] * k6);
        let k7 = rhs(u + h, y_new);
        for (v, at) in [(k2, u + C[1] * h), (k7, u + h)] {
            check_finite(v, at)?;
        }
        if !y_new.is_finite() {
            return Err(Error::NonFinite {
                location: format!("ODE state at u = {:e}", u + h),
            });
        }

        let err = h
            * (E[0] * k1 + E[2] * k3 + E[3] * k4 + E[4] * k5 + E[5] * k6 + E[6] * k7);
        let scale = tol * (1.0 + y.abs().max(y_new.abs())) * (h / span);
        let ratio = err.abs() / scale;

        if ratio <= 1.0 {
            // Accept: store the interpolant for this step.
            let ydiff = y_new - y;
            let bspl = h * k1 - ydiff;
            let cont = [
                y,
                ydiff,
                bspl,
                ydiff - h * k7 - bspl,
                h * (D[0] * k1
                    + D[2] * k3
                    + D[3] * k4
                    + D[4] * k5
                    + D[5] * k6
                    + D[6] * k7),
            ];
            segments.push(Segment { u, h, cont });
            u += h;
            y = y_new;
            k1 = k7; // first-same-as-last
        }

        // Error-per-unit-step makes the local test scale like h^4.
        let grow = if ratio > 0.0 {
            0.9 * ratio.powf(-0.25)
        } else {
            5.0
        };
        h *= grow.clamp(0.2, 5.0);
    }

    Ok(OdeSolution {
        segments,
        u0,
        u1,
        y0,
        y1: y,
    })
}

fn check_finite(v: f64, at: f64) -> Result<(), Error> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            location: format!("ODE right-hand side at u = {at:e}"),
        })
    }
}
