//! Small helpers for complex numbers: literal parsing and angle handling.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parses literals such as `-i`, `2`, `0.5-1.5i`, `3i`, `1e-3+2e-1i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Config("empty complex literal".into()));
    }
    let bad = || Error::Config(format!("cannot parse complex literal `{text}`"));

    if !s.ends_with(['i', 'j']) {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    }
    let body = &s[..s.len() - 1];
    // Split at the last sign that is not an exponent sign or the leading sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Formats without locale or exponent surprises; inverse of [`parse_complex`].
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > PI {
        t -= two_pi;
    }
    if t <= -PI {
        t += two_pi;
    }
    t
}
