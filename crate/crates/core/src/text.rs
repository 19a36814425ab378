//! Text form of complex parameters: `a`, `bi`, `a+bi`, `a-bi`, with `i`
//! standing for `1i`.

use crate::error::{Error, Result};
use crate::linalg::Complex;

pub fn parse_complex(text: &str) -> Result<Complex> {
    let err = || Error::Parse(text.to_owned());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(parse_real(s).ok_or_else(err)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i]).ok_or_else(err)?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_real(t).ok_or_else(err)?,
    };
    Ok(Complex::new(re, im))
}

fn parse_real(t: &str) -> Option<f64> {
    let ok = !t.is_empty()
        && t.chars().any(|ch| ch.is_ascii_digit())
        && t.chars()
            .all(|ch| ch.is_ascii_digit() || matches!(ch, '.' | '+' | '-' | 'e' | 'E'));
    if !ok {
        return None;
    }
    t.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Inverse of [`parse_complex`] using Rust's shortest round-trip float form.
pub fn format_complex(z: Complex) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn forms() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(parse_complex("1i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_complex("i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex::new(0.0, -1.0));
        assert_eq!(parse_complex("0.3-0.4i").unwrap(), Complex::new(0.3, -0.4));
        assert_eq!(parse_complex("-2+i").unwrap(), Complex::new(-2.0, 1.0));
        assert_eq!(
            parse_complex("1e-3+2E+1i").unwrap(),
            Complex::new(1e-3, 20.0)
        );
        assert_eq!(parse_complex(" 7 ").unwrap(), Complex::new(7.0, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "", "abc", "1+", "nan", "inf", "1e999", "1+2j", "--1", "1+2i3", "ii", "+-i",
        ] {
            assert_eq!(parse_complex(bad), Err(Error::Parse(bad.into())), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn format_round_trips(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = Complex::new(re, im);
            prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
