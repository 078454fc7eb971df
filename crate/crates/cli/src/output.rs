//! Number and table formatting shared by the subcommands.

use num_complex::Complex64;

/// Formats a double with 15 significant digits in lowercase scientific
/// notation, the round-trippable table format.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.14e}")
}

/// Formats a complex value as `<re>+<im>i` with both parts in the table
/// format.
pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_f(z.re), sign, fmt_f(z.im.abs()))
}
