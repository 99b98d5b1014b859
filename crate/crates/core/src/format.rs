//! Locale-free number formatting for byte-stable CSV and report output.

/// Formats `x` with `digits` significant digits, trimming trailing zeros.
///
/// Positional notation is used for magnitudes in `[1e-6, 1e15)`, scientific
/// (`1.5e-9`) outside it. Uses '.' as the decimal separator.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&exponent) {
        let s = format!("{:.*e}", digits.saturating_sub(1), x);
        let (mantissa, exp) = s
            .split_once('e')
            .expect("scientific format has an exponent");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Twelve significant digits, the precision used for all emitted tables.
pub fn num(x: f64) -> String {
    sig(x, 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(13.0 / 18.0), "0.722222222222");
        assert_eq!(num(0.8), "0.8");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-1e-20), "-1e-20");
        assert_eq!(num(2.5e-7), "2.5e-7");
        assert_eq!(num(1.5e-6), "0.0000015");
        assert_eq!(num(2.0f64.sqrt() * 100.0), "141.421356237");
        assert_eq!(num(-1e-300 * 0.0), "0");
    }
}
