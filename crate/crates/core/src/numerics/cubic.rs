//! Real root triple of the Weierstrass cubic 4t^3 - g2 t - g3.
//!
//! A positive discriminant g2^3 - 27 g3^2 guarantees three distinct real
//! roots (and forces g2 > 0), so the trigonometric form of the cubic
//! solution applies unconditionally: in monic depressed form
//! t^3 + p t + q with p = -g2/4, q = -g3/4, the roots are
//!
//! ```text
//! t_k = 2 sqrt(-p/3) * cos( (theta - 2 pi k) / 3 ),    k = 0, 1, 2,
//! theta = arccos( (3q / 2p) * sqrt(-3/p) ),
//! ```
//!
//! which avoids the cancellation that the Cardano radicals suffer when two
//! roots approach each other.

use crate::error::Error;

/// Roots of 4t^3 - g2 t - g3 in descending order, e1 >= e2 >= e3.
///
/// Their sum vanishes (the cubic has no quadratic term), and for a positive
/// discriminant all three are distinct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl CubicRoots {
    /// Largest residual |4e^3 - g2 e - g3| over the three roots.
    pub fn residual(&self, g2: f64, g3: f64) -> f64 {
        [self.e1, self.e2, self.e3]
            .iter()
            .map(|&e| (4.0 * e * e * e - g2 * e - g3).abs())
            .fold(0.0, f64::max)
    }
}

/// Solves 4t^3 - g2 t - g3 = 0 for its three real roots.
///
/// Fails with `NonRectangular` when the discriminant g2^3 - 27 g3^2 is not
/// strictly positive, since the associated period lattice is rectangular
/// exactly when the root triple is real and distinct.
pub fn solve_weierstrass_cubic(g2: f64, g3: f64) -> Result<CubicRoots, Error> {
    let discriminant = g2 * g2 * g2 - 27.0 * g3 * g3;
    if !discriminant.is_finite() || discriminant <= 0.0 {
        return Err(Error::NonRectangular { discriminant });
    }
    let p = -0.25 * g2;
    let q = -0.25 * g3;
    let amplitude = 2.0 * (-p / 3.0).sqrt();
    let cos_arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
    let theta = cos_arg.clamp(-1.0, 1.0).acos();
    let mut roots = [0.0f64; 3];
    for (k, slot) in roots.iter_mut().enumerate() {
        let angle = (theta - 2.0 * std::f64::consts::PI * k as f64) / 3.0;
        *slot = amplitude * angle.cos();
    }
    roots.sort_by(|a, b| b.partial_cmp(a).expect("roots are finite"));
    Ok(CubicRoots {
        e1: roots[0],
        e2: roots[1],
        e3: roots[2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_cubic_has_unit_roots() {
        // 4t^3 - 4t = 4t(t-1)(t+1)
        let r = solve_weierstrass_cubic(4.0, 0.0).unwrap();
        assert!((r.e1 - 1.0).abs() < 1e-15);
        assert!(r.e2.abs() < 1e-15);
        assert!((r.e3 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn roots_sum_to_zero_and_satisfy_cubic() {
        // Invariant pair with a strongly asymmetric root triple.
        let (g2, g3) = (240.0, -704.0);
        let r = solve_weierstrass_cubic(g2, g3).unwrap();
        assert!((r.e1 + r.e2 + r.e3).abs() < 1e-12);
        assert!(r.residual(g2, g3) < 1e-10 * g3.abs().max(g2.abs()));
        assert!(r.e1 > r.e2 && r.e2 > r.e3);
    }

    #[test]
    fn small_invariant_pair_roots_are_accurate() {
        let (g2, g3) = (20.0 / 27.0, 88.0 / 729.0);
        let r = solve_weierstrass_cubic(g2, g3).unwrap();
        assert!(r.residual(g2, g3) < 1e-13);
        assert!((r.e1 + r.e2 + r.e3).abs() < 1e-14);
    }

    #[test]
    fn negative_discriminant_is_rejected() {
        let r = solve_weierstrass_cubic(1.0, 1.0);
        assert!(matches!(r, Err(Error::NonRectangular { .. })), "got {r:?}");
    }

    #[test]
    fn zero_discriminant_is_rejected() {
        // g2 = 3, g3 = 1 gives 27 - 27 = 0: a repeated root.
        let r = solve_weierstrass_cubic(3.0, 1.0);
        assert!(matches!(r, Err(Error::NonRectangular { .. })), "got {r:?}");
    }

    #[test]
    fn near_degenerate_triple_keeps_full_residual_accuracy() {
        // Two roots within ~1e-4 of each other: the regime where Cardano
        // radicals lose digits but the trigonometric form does not.
        let (g2, g3) = (1.3215, 0.29235);
        let r = solve_weierstrass_cubic(g2, g3).unwrap();
        assert!(r.residual(g2, g3) < 1e-12, "residual {}", r.residual(g2, g3));
        assert!(r.e2 - r.e3 < 1e-2, "triple should be nearly degenerate");
    }
}
