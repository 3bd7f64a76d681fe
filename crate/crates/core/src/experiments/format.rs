//! Locale-independent number serialization for reports and CSV.

/// Significant digits of every serialized number.
pub const SIGNIFICANT_DIGITS: usize = 12;
/// Magnitudes below this (other than zero) use scientific notation.
pub const SCIENTIFIC_BELOW: f64 = 1e-4;
/// Magnitudes at or above this use scientific notation as well.
pub const SCIENTIFIC_ABOVE: f64 = 1e15;

/// Formats `x` with 12 significant digits; `INF`/`-INF`/`NAN` for non-finite values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NAN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "INF".to_string() } else { "-INF".to_string() };
    }
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    if x.abs() < SCIENTIFIC_BELOW || x.abs() >= SCIENTIFIC_ABOVE {
        return sci;
    }
    // exponent after rounding, so 9.99999999999951 lands on 10.0000000000
    let exp: i32 = sci[sci.find('e').map_or(sci.len(), |i| i + 1)..]
        .parse()
        .unwrap_or(0);
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Extended real with `+∞`.
pub fn format_ext(x: Option<f64>) -> String {
    match x {
        Some(v) => format_number(v),
        None => "INF".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn significant(s: &str) -> usize {
        let mantissa = s.split('e').next().unwrap();
        let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
        digits.trim_start_matches('0').len().max(if digits.chars().all(|c| c == '0') { digits.len() } else { 0 })
    }

    #[test]
    fn fixed_notation() {
        assert_eq!(format_number(std::f64::consts::LN_2), "0.693147180560");
        assert_eq!(format_number(-1.5), "-1.50000000000");
        assert_eq!(format_number(1234.5), "1234.50000000");
        assert_eq!(format_number(1e-4), "0.000100000000000");
        assert_eq!(format_number(0.0), "0.00000000000");
    }

    #[test]
    fn rounding_across_a_power_of_ten() {
        assert_eq!(format_number(9.999_999_999_999_95), "10.0000000000");
        assert_eq!(format_number(0.00099999999999999), "0.00100000000000");
    }

    #[test]
    fn scientific_notation() {
        assert_eq!(format_number(1.25e-5), "1.25000000000e-5");
        assert_eq!(format_number(-3e-9), "-3.00000000000e-9");
        assert_eq!(format_number(2e20), "2.00000000000e20");
    }

    #[test]
    fn special_values() {
        assert_eq!(format_number(f64::INFINITY), "INF");
        assert_eq!(format_number(f64::NEG_INFINITY), "-INF");
        assert_eq!(format_number(f64::NAN), "NAN");
        assert_eq!(format_ext(None), "INF");
    }

    #[test]
    fn always_twelve_digits() {
        for x in [0.123456789012345, 98765.4321, 1.0, 0.5e-3, 7.7e-12, 31415926.5] {
            assert_eq!(significant(&format_number(x)), 12, "{}", format_number(x));
        }
    }
}
