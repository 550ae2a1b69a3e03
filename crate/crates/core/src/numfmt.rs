//! `%g`-style formatting with a fixed number of significant digits.

/// Formats `value` with `digits` significant digits, switching to scientific
/// notation outside `1e-4 <= |value| < 10^digits` and trimming trailing zeros.
pub fn significant(value: f64, digits: usize) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if !value.is_finite() {
        return format!("{value}");
    }
    if value == 0.0 {
        return "0".to_string();
    }
    // Let the float formatter do the rounding, then read back the exponent so a
    // carry like 9.999995 -> 1.00000e1 lands in the right branch.
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent marker");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, value)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
