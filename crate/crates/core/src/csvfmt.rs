//! Number formatting shared by every CSV writer.

/// Formats `x` with 12 significant digits; infinities become `inf` / `-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// Parses a value written by [`num`].
pub fn parse_num(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        other => other.parse().ok(),
    }
}

/// Joins formatted values with commas.
pub fn row<I: IntoIterator<Item = f64>>(values: I) -> String {
    values.into_iter().map(num).collect::<Vec<_>>().join(",")
}
