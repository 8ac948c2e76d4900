//! Decimal rendering with a fixed number of significant digits.

/// Renders `v` in plain decimal notation with `digits` significant digits.
///
/// The digit position is taken from the correctly rounded scientific form,
/// so values such as 9.9999996 render as `10.0000` rather than gaining a
/// digit. Non-finite values render as Rust prints them.
pub fn format_sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific rendering always has an exponent");
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}
