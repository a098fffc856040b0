//! Fixed float formatting for data files.

/// 17 significant digits in scientific notation; the same value always
/// renders to the same bytes.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        // Fold -0 into 0.
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// Like [`fmt_float`], but `None` renders as an empty field.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}
