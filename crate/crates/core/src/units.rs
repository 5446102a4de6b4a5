//! Unit conversions used at the I/O boundary. Everything inside the crate is
//! SI with angles in radians and rotational speeds in rad/s.

use std::f64::consts::PI;

pub const GRAVITY: f64 = 9.81;

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad.to_degrees()
}

pub fn rpm_to_rad_s(rpm: f64) -> f64 {
    rpm * 2.0 * PI / 60.0
}

pub fn rad_s_to_rpm(omega: f64) -> f64 {
    omega * 60.0 / (2.0 * PI)
}

/// Formats `value` with `digits` significant digits, using plain decimal
/// notation where it stays short and scientific notation otherwise.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let digits = digits.max(1);
    let exponent = value.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{value:.decimals$}");
        // rounding can carry into a new leading digit (9.9999 -> 10.000)
        let sig: usize = s.chars().filter(char::is_ascii_digit).skip_while(|c| *c == '0').count();
        if sig > digits && decimals > 0 {
            let decimals = decimals - 1;
            return format!("{value:.decimals$}");
        }
        s
    } else {
        let precision = digits - 1;
        format!("{value:.precision$e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rpm_round_trip() {
        let omega = rpm_to_rad_s(2500.0);
        assert!((omega - 261.799_387_799_149_4).abs() < 1e-9);
        assert!((rad_s_to_rpm(omega) - 2500.0).abs() < 1e-9);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(39.074299358, 9), "39.0742994");
        assert_eq!(format_significant(0.000640252305, 9), "0.000640252305");
        assert_eq!(format_significant(-1.5, 9), "-1.50000000");
        assert_eq!(format_significant(9.9999999999, 9), "10.0000000");
        assert_eq!(format_significant(0.0, 9), "0");
        assert_eq!(format_significant(1.234e-9, 3), "1.23e-9");
        let x = 0.123456789123_f64;
        let parsed: f64 = format_significant(x, 9).parse().unwrap();
        assert!(((parsed - x) / x).abs() < 5e-9);
    }
}
