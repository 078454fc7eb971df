//! Subcommand bodies.  Each returns the finished text so the binary only
//! decides where it goes (stdout or a file) and which exit code follows.

use num_complex::Complex64;
use rayon::prelude::*;
use sig3::elliptic::{lattice_ratios, periods_big, periods_small, Sig3System};
use sig3::hyper::Modulus;
use sig3::Error;

use crate::output::{fmt_complex, fmt_f};
use crate::parse::{Format, FunctionKind};
use crate::report::{Direction, VerificationReport};

/// Fixed CSV header of the period table; downstream plotting depends on
/// these exact column names.
pub const PERIODS_HEADER: &str =
    "kappa,omega,omega_prime_im,Omega,Omega_prime_im,ratio_small_im,ratio_big_im";

const PERIOD_COLUMNS: [&str; 7] = [
    "kappa",
    "omega",
    "omega_prime_im",
    "Omega",
    "Omega_prime_im",
    "ratio_small_im",
    "ratio_big_im",
];

/// Lays out a verification report, one line per check plus an overall
/// verdict.
pub fn render_report(report: &VerificationReport) -> String {
    let mut out = format!(
        "modulus kappa = {}, tolerance {}\n",
        fmt_f(report.kappa),
        fmt_f(report.tol)
    );
    for check in &report.checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        let relation = match check.direction {
            Direction::Below => "tolerance",
            Direction::Above => "must exceed",
        };
        out.push_str(&format!(
            "{status} {:<20} residual {:>21} {relation} {}\n",
            check.name,
            fmt_f(check.residual),
            fmt_f(check.tolerance)
        ));
    }
    out.push_str(&format!(
        "overall: {} ({} checks)\n",
        if report.overall { "PASS" } else { "FAIL" },
        report.checks.len()
    ));
    out
}

/// Builds the period table over a modulus grid, one row per modulus in
/// input order; rows are computed in parallel.
pub fn periods_table(grid: &[f64], format: Format) -> Result<String, Error> {
    let rows = grid
        .par_iter()
        .map(|&kappa| {
            let m = Modulus::new(kappa)?;
            let (om, om_im) = periods_small(&m)?;
            let (big_om, big_om_im) = periods_big(&m)?;
            let (ratio_small, ratio_big) = lattice_ratios(&m)?;
            Ok([kappa, om, om_im, big_om, big_om_im, ratio_small, ratio_big])
        })
        .collect::<Result<Vec<[f64; 7]>, Error>>()?;

    Ok(match format {
        Format::Csv => {
            let mut out = String::from(PERIODS_HEADER);
            out.push('\n');
            for row in &rows {
                let line: Vec<String> = row.iter().map(|&v| fmt_f(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (name, &v) in PERIOD_COLUMNS.iter().zip(row) {
                        obj.insert((*name).to_string(), serde_json::Value::from(v));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut text = serde_json::json!({ "rows": rows }).to_string();
            text.push('\n');
            text
        }
    })
}

/// True for the errors that mean "the function has a pole here" rather
/// than a computation failure.
pub fn is_pole_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NearPole { .. } | Error::Dn3Pole { .. } | Error::WPole { .. }
    )
}

fn evaluate(sys: &Sig3System, kind: FunctionKind, z: Complex64) -> Result<Complex64, Error> {
    match kind {
        FunctionKind::Dn3 => sys.dn3(z),
        FunctionKind::BigW => sys.big_w(z),
        FunctionKind::Y6Sq => sys.y6_squared(z),
        FunctionKind::SmallP => sys.small_context().wp(z),
        FunctionKind::BigP => sys.big_context().wp(z),
    }
}

/// Evaluates one function at one point; a pole prints as the bare token
/// `pole` (still a success).
pub fn eval_point(kind: FunctionKind, kappa: f64, z: Complex64) -> Result<String, Error> {
    let sys = Sig3System::new(Modulus::new(kappa)?)?;
    match evaluate(&sys, kind, z) {
        Ok(v) => Ok(fmt_complex(v)),
        Err(e) if is_pole_error(&e) => Ok("pole".to_string()),
        Err(e) => Err(e),
    }
}

/// The function's pole representatives and the lattice periods that
/// translate them, for flagging pole-adjacent samples.
fn pole_geometry(sys: &Sig3System, kind: FunctionKind) -> (Vec<Complex64>, f64, f64) {
    let poles = sys.pole_locations();
    let small = (
        2.0 * sys.small_context().half_period_real(),
        2.0 * sys.small_context().half_period_imag(),
    );
    let big = (
        2.0 * sys.big_context().half_period_real(),
        2.0 * sys.big_context().half_period_imag(),
    );
    let origin = vec![Complex64::new(0.0, 0.0)];
    match kind {
        FunctionKind::Dn3 => (poles.dn3.to_vec(), small.0, small.1),
        FunctionKind::BigW | FunctionKind::Y6Sq => (poles.big_w.to_vec(), big.0, big.1),
        FunctionKind::SmallP => (origin, small.0, small.1),
        FunctionKind::BigP => (origin, big.0, big.1),
    }
}

/// Distance from a difference vector to the nearest lattice translate.
fn lattice_distance(d: Complex64, period_re: f64, period_im: f64) -> f64 {
    let re = d.re - (d.re / period_re).round() * period_re;
    let im = d.im - (d.im / period_im).round() * period_im;
    re.hypot(im)
}

/// Samples one function at `n` equally spaced points of the segment
/// [from, to].  A sample is flagged as a pole when evaluation reports
/// one or when the point lies within half a sample spacing of an actual
/// pole (modulo the lattice); flagged points that could not be
/// evaluated carry NaN values.
pub fn sample_table(
    kind: FunctionKind,
    kappa: f64,
    from: Complex64,
    to: Complex64,
    n: usize,
    format: Format,
) -> Result<String, Error> {
    let sys = Sig3System::new(Modulus::new(kappa)?)?;
    let (pole_reps, period_re, period_im) = pole_geometry(&sys, kind);
    let half_spacing = (to - from).norm() / ((n - 1) as f64) / 2.0;

    let mut rows: Vec<(Complex64, Complex64, bool)> = Vec::with_capacity(n);
    for j in 0..n {
        let t = j as f64 / (n - 1) as f64;
        let z = from + (to - from) * t;
        let (value, errored) = match evaluate(&sys, kind, z) {
            Ok(v) => (v, false),
            Err(e) if is_pole_error(&e) => (Complex64::new(f64::NAN, f64::NAN), true),
            Err(e) => return Err(e),
        };
        let adjacent = pole_reps
            .iter()
            .any(|&p| lattice_distance(z - p, period_re, period_im) < half_spacing);
        rows.push((z, value, errored || adjacent));
    }

    Ok(match format {
        Format::Csv => {
            let mut out = String::from("z_re,z_im,value_re,value_im,pole\n");
            for (z, v, pole) in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_f(z.re),
                    fmt_f(z.im),
                    fmt_f(v.re),
                    fmt_f(v.im),
                    u8::from(*pole)
                ));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(z, v, pole)| {
                    serde_json::json!({
                        "z_re": z.re,
                        "z_im": z.im,
                        "value_re": v.re,
                        "value_im": v.im,
                        "pole": pole,
                    })
                })
                .collect();
            let mut text = serde_json::json!({ "kappa": kappa, "rows": rows }).to_string();
            text.push('\n');
            text
        }
    })
}
