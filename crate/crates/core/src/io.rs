//! Text formats shared by the library and the command-line front end.

use crate::error::{Error, Result};

/// Formats `x` like C's `%.17g`: 17 significant digits, which is enough for
/// any `f64` to survive a text round trip bit-for-bit.
pub fn format_g17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Joins values with commas using [`format_g17`].
pub fn format_csv_row(values: &[f64]) -> String {
    values.iter().map(|v| format_g17(*v)).collect::<Vec<_>>().join(",")
}

/// Parses a comma separated list of reals. Surrounding whitespace and
/// brackets (`[1, 2]`) are tolerated.
pub fn parse_csv_row(row: &str) -> Result<Vec<f64>> {
    let trimmed = row.trim().trim_start_matches('[').trim_end_matches(']');
    if trimmed.trim().is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    trimmed
        .split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{field:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(format_g17(2.75), "2.75");
        assert_eq!(format_g17(-1.0), "-1");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_g17(2.815e11), "281500000000");
        assert_eq!(format_g17(1.86e30), "1.8600000000000001e+30");
        assert_eq!(format_g17(0.0), "0");
    }

    #[test]
    fn parses_rows() {
        assert_eq!(parse_csv_row("2,-1, -1").unwrap(), vec![2.0, -1.0, -1.0]);
        assert_eq!(parse_csv_row("[1.5, -1.5]").unwrap(), vec![1.5, -1.5]);
        assert!(parse_csv_row("").is_err());
        assert!(parse_csv_row("1,x").is_err());
    }

    proptest! {
        #[test]
        fn g17_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL) {
            let back: f64 = format_g17(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
