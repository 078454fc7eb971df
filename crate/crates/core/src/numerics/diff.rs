//! Finite-difference differentiation of complex-analytic functions.
//!
//! For an analytic f the derivative along any direction determines f', so a
//! real-direction central stencil suffices.  The fourth-order five-point
//! rule
//!
//! ```text
//! f'(z) ~ [f(z-2h) - 8 f(z-h) + 8 f(z+h) - f(z+2h)] / (12h)
//! ```
//!
//! balances truncation (h^4) against rounding (eps/h) around
//! h ~ 1e-3 for functions of order-one scale; callers pick h to match the
//! scale of their lattice.

use num_complex::Complex64;

use crate::error::Error;

/// Fourth-order central difference approximation to f'(z) using real
/// offsets of size `h` and `2h`.
///
/// Fails with `Domain` on a non-positive step and `NonFinite` when the
/// function is not finite at a stencil point.
pub fn complex_derivative<F: Fn(Complex64) -> Complex64>(
    f: F,
    z: Complex64,
    h: f64,
) -> Result<Complex64, Error> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain {
            value: h,
            expected: "finite positive differencing step",
        });
    }
    let offsets = [-2.0 * h, -h, h, 2.0 * h];
    let coeffs = [1.0, -8.0, 8.0, -1.0];
    let mut acc = Complex64::new(0.0, 0.0);
    for (&dx, &c) in offsets.iter().zip(coeffs.iter()) {
        let w = z + Complex64::new(dx, 0.0);
        let v = f(w);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite {
                location: format!("stencil point {w}"),
            });
        }
        acc += c * v;
    }
    Ok(acc / (12.0 * h))
}
