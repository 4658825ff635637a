//! Number formatting for reports.

/// Rounds half away from zero to `digits` decimals and keeps trailing
/// zeros. Rounding looks at the exact stored value, so 1.005 (held just
/// below) gives 1.00 at two digits.
pub fn fixed(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if digits >= 1074 {
        return fixed(x, 1073) + &"0".repeat(digits - 1073);
    }
    // f64 has at most 1074 fractional decimal digits, so this is exact.
    let exact = format!("{:.1074}", x.abs());
    let (int_part, frac_part) = exact.split_once('.').expect("fixed-point output");
    let mut digits_vec: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes().take(digits))
        .map(|b| b - b'0')
        .collect();
    let round_up = frac_part.as_bytes()[digits] >= b'5';
    if round_up {
        let mut i = digits_vec.len();
        loop {
            if i == 0 {
                digits_vec.insert(0, 1);
                break;
            }
            i -= 1;
            if digits_vec[i] == 9 {
                digits_vec[i] = 0;
            } else {
                digits_vec[i] += 1;
                break;
            }
        }
    }
    let int_len = digits_vec.len() - digits;
    let mut out = String::with_capacity(digits_vec.len() + 2);
    if x < 0.0 && digits_vec.iter().any(|&d| d != 0) {
        out.push('-');
    }
    for (i, d) in digits_vec.iter().enumerate() {
        if i == int_len {
            out.push('.');
        }
        out.push((b'0' + d) as char);
    }
    out
}

/// Integral values as integers, anything else via [`fixed`].
pub fn number(x: f64, digits: usize) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        fixed(x, 0)
    } else {
        fixed(x, digits)
    }
}

/// Percentages at one decimal, ties to even.
pub fn percent(x: f64) -> String {
    let s = format!("{x:.1}");
    if s == "-0.0" {
        "0.0".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_away_from_zero() {
        assert_eq!(fixed(2.5, 0), "3");
        assert_eq!(fixed(-2.5, 0), "-3");
        assert_eq!(fixed(0.125, 2), "0.13");
        assert_eq!(fixed(20.0 / 3.0 + 0.001, 3), "6.668");
        assert_eq!(fixed(10.0 / 3.0 + 0.001, 2), "3.33");
        assert_eq!(fixed(4.0, 3), "4.000");
        assert_eq!(fixed(9.9996, 3), "10.000");
        assert_eq!(fixed(0.0, 2), "0.00");
        assert_eq!(fixed(1.005, 2), "1.00");
        assert_eq!(fixed(0.5, 2000).len(), 2002);
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(fixed(-0.0, 3), "0.000");
        assert_eq!(fixed(-0.0001, 3), "0.000");
        assert_eq!(fixed(-0.0006, 3), "-0.001");
    }

    #[test]
    fn integers_and_percents() {
        assert_eq!(number(12.0, 3), "12");
        assert_eq!(number(-2.0, 3), "-2");
        assert_eq!(number(2.5, 3), "2.500");
        assert_eq!(percent(6.25), "6.2");
        assert_eq!(percent(100.0 * 6.0 / 14.0), "42.9");
        assert_eq!(percent(12.5), "12.5");
    }
}
