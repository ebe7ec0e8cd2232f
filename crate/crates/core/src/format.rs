//! Fixed-precision decimal rendering shared by the text writers.

/// Significant digits used for every number this crate writes.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Renders `x` with `digits` significant digits, in plain notation for
/// moderate exponents and scientific notation otherwise. Trailing zeros are
/// dropped; the output parses back with `str::parse::<f64>`.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

/// [`format_sig`] at [`SIGNIFICANT_DIGITS`].
pub fn sig9(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

/// Value of `x` after a round trip through [`sig9`].
pub fn round_sig9(x: f64) -> f64 {
    sig9(x).parse().unwrap_or(x)
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}
