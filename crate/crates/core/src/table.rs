//! Plain-text number formatting shared by CSV dumps and the CLI.

/// 17 significant digits, scientific notation, `.` as decimal point.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}
