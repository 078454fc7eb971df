//! Value parsers for the command line.  Every parser returns
//! `Result<_, String>` so clap reports failures as usage errors
//! (exit code 2).

use num_complex::Complex64;

/// Which function a command evaluates.  The names are case-sensitive:
/// lowercase `p` is the small-lattice Weierstrass function, uppercase
/// `P` the big-lattice one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    /// dn3, the small-lattice degree-three analogue of Jacobi dn.
    Dn3,
    /// W, the big-lattice companion function.
    BigW,
    /// y6^2 = (W + 1)/2.
    Y6Sq,
    /// The small-lattice Weierstrass function p.
    SmallP,
    /// The big-lattice Weierstrass function P.
    BigP,
}

/// Output format for tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A parsed modulus grid, kept in command-line order.
#[derive(Debug, Clone)]
pub struct Grid(pub Vec<f64>);

/// Parses a modulus and enforces the open interval (0, 1).
pub fn parse_kappa(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() || v <= 0.0 || v >= 1.0 {
        return Err(format!("modulus must satisfy 0 < kappa < 1, got {v}"));
    }
    Ok(v)
}

/// Parses a tolerance: any finite positive number.
pub fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("tolerance must be positive, got {v}"));
    }
    Ok(v)
}

/// Parses a sample count of at least 2.
pub fn parse_count(s: &str) -> Result<usize, String> {
    let v: usize = s
        .parse()
        .map_err(|_| format!("`{s}` is not a whole number"))?;
    if v < 2 {
        return Err(format!("need at least 2 samples, got {v}"));
    }
    Ok(v)
}

/// Parses the case-sensitive function selector.
pub fn parse_function(s: &str) -> Result<FunctionKind, String> {
    match s {
        "dn3" => Ok(FunctionKind::Dn3),
        "W" => Ok(FunctionKind::BigW),
        "y6sq" => Ok(FunctionKind::Y6Sq),
        "p" => Ok(FunctionKind::SmallP),
        "P" => Ok(FunctionKind::BigP),
        other => Err(format!(
            "unknown function `{other}` (expected dn3, W, y6sq, p, or P; \
             p and P are case-sensitive)"
        )),
    }
}

/// Parses a complex point written as `<re>`, `<im>i`, or `<re>+<im>i`
/// (also with `-`); each part may use scientific notation.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = |t: &str| format!("`{t}` is not a complex point like 1.5, 2i, or 0.3-0.4i");
    let t = s.trim();
    if t.is_empty() {
        return Err(bad(s));
    }
    let finite = |v: f64| -> Result<f64, String> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("complex components must be finite, got {v}"))
        }
    };

    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map_err(|_| bad(s))
            .and_then(finite)
            .map(|re| Complex64::new(re, 0.0));
    };

    // Split the imaginary tail off at the last sign that does not belong
    // to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-')
                && !matches!(bytes[k - 1], b'e' | b'E')
        });

    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };

    let re = if re_part.is_empty() {
        0.0
    } else {
        finite(re_part.parse::<f64>().map_err(|_| bad(s))?)?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => finite(im_part.parse::<f64>().map_err(|_| bad(s))?)?,
    };
    Ok(Complex64::new(re, im))
}

/// Parses a modulus grid: either one modulus or `start:stop:step`, all
/// inside (0, 1), stepping inclusively from start to stop.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => Ok(Grid(vec![parse_kappa(parts[0])?])),
        3 => {
            let start = parse_kappa(parts[0])?;
            let stop = parse_kappa(parts[1])?;
            let step: f64 = parts[2]
                .parse()
                .map_err(|_| format!("`{}` is not a number", parts[2]))?;
            if !step.is_finite() || step <= 0.0 {
                return Err(format!("grid step must be positive, got {step}"));
            }
            if start > stop {
                return Err(format!(
                    "grid start {start} exceeds stop {stop}"
                ));
            }
            let mut values = Vec::new();
            let mut k = 0u32;
            loop {
                let v = start + f64::from(k) * step;
                // One-in-a-billion slack keeps 0.1:0.9:0.1 at nine rows
                // despite accumulated rounding.
                if v > stop + 1e-9 * step {
                    break;
                }
                if v < 1.0 {
                    values.push(v);
                }
                k += 1;
            }
            Ok(Grid(values))
        }
        _ => Err(format!(
            "`{s}` is not a grid; expected start:stop:step or a single modulus"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_bounds_are_open() {
        assert!(parse_kappa("0.5").is_ok());
        assert!(parse_kappa("0").is_err());
        assert!(parse_kappa("1").is_err());
        assert!(parse_kappa("1.2").is_err());
        assert!(parse_kappa("-0.3").is_err());
        assert!(parse_kappa("abc").is_err());
        assert!(parse_kappa("nan").is_err());
    }

    #[test]
    fn complex_forms() {
        let cases = [
            ("1.5", 1.5, 0.0),
            ("-2", -2.0, 0.0),
            ("2i", 0.0, 2.0),
            ("-0.5i", 0.0, -0.5),
            ("i", 0.0, 1.0),
            ("-i", 0.0, -1.0),
            ("0.3+0.4i", 0.3, 0.4),
            ("0.3-0.4i", 0.3, -0.4),
            ("-1e-3+2.5e-2i", -1e-3, 2.5e-2),
            ("1.5e+2i", 0.0, 150.0),
            ("2+i", 2.0, 1.0),
        ];
        for (text, re, im) in cases {
            let z = parse_complex(text).unwrap();
            assert_eq!((z.re, z.im), (re, im), "parsing {text}");
        }
        for text in ["", "abc", "1+2j", "1++2i", "infi", "nan"] {
            assert!(parse_complex(text).is_err(), "accepted {text}");
        }
    }

    #[test]
    fn grid_stepping_is_inclusive() {
        let g = parse_grid("0.1:0.9:0.1").unwrap().0;
        assert_eq!(g.len(), 9);
        assert!((g[0] - 0.1).abs() < 1e-15);
        assert!((g[8] - 0.9).abs() < 1e-9);

        let single = parse_grid("0.7071067811865476").unwrap().0;
        assert_eq!(single.len(), 1);

        assert!(parse_grid("0.9:0.1:0.1").is_err());
        assert!(parse_grid("0.1:0.9:-0.1").is_err());
        assert!(parse_grid("0:0.9:0.1").is_err());
        assert!(parse_grid("0.1:1.0:0.1").is_err());
        assert!(parse_grid("a:b:c").is_err());
        assert!(parse_grid("0.1:0.9").is_err());
    }

    #[test]
    fn function_names_are_case_sensitive() {
        assert_eq!(parse_function("p").unwrap(), FunctionKind::SmallP);
        assert_eq!(parse_function("P").unwrap(), FunctionKind::BigP);
        assert_eq!(parse_function("W").unwrap(), FunctionKind::BigW);
        assert!(parse_function("w").is_err());
        assert!(parse_function("DN3").is_err());
    }
}
