//! Number formatting shared by every CSV writer.

/// 17 significant digits in scientific notation, enough to round-trip any
/// `f64` exactly. Non-finite values print as `NaN`, `inf` or `-inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Parses a value written by [`fmt_f64`].
pub fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}
