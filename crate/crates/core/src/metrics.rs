//! Error measures shared by the oracle checks.

use num_complex::Complex64;

/// `max|a − b| / max|b|`, the max-norm relative error of `a` against the
/// reference `b`. Returns the absolute max error when `b` is all zero.
pub fn rel_max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// `10·log10(power)`, floored at -400 dB for exact zeros.
pub fn power_db(power: f64) -> f64 {
    if power > 0.0 {
        10.0 * power.log10()
    } else {
        -400.0
    }
}
