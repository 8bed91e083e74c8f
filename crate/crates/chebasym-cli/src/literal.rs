//! Complex literals of the form `a+bi`, read either as binary64 or exactly.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CliError, CliResult};

fn bad(s: &str) -> CliError {
    CliError::Usage(format!("cannot read `{s}` as a complex number (expected a+bi)"))
}

/// Splits `a+bi` into its real and imaginary texts; either may be empty.
fn split(s: &str) -> CliResult<(String, String)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad(s));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok((t, String::new()));
    };
    // the last sign that does not belong to an exponent starts the imaginary part
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .unwrap_or(0);
    let (re, im) = body.split_at(cut);
    let im = match im {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => other.to_string(),
    };
    Ok((re.to_string(), im))
}

/// Reads `a+bi` as binary64 parts.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let (re, im) = split(s)?;
    let part = |p: &str| -> CliResult<f64> {
        if p.is_empty() {
            return Ok(0.0);
        }
        let v: f64 = p.trim_start_matches('+').parse().map_err(|_| bad(s))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(s))
        }
    };
    Ok(Complex64::new(part(&re)?, part(&im)?))
}

/// Reads a decimal (with optional exponent) or `p/q` exactly.
pub fn parse_rational(p: &str) -> Option<BigRational> {
    let p = p.trim_start_matches('+');
    if p.is_empty() {
        return Some(BigRational::zero());
    }
    if let Some((n, d)) = p.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (mant, exp) = match p.find(['e', 'E']) {
        Some(k) => (&p[..k], p[k + 1..].parse::<i32>().ok()?),
        None => (p, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut v = BigRational::from_integer(digits);
    if scale >= 0 {
        v *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -v } else { v })
}

/// Reads `a+bi` exactly; decimals are taken at face value, not rounded to binary.
pub fn parse_exact(s: &str) -> CliResult<Complex<BigRational>> {
    let (re, im) = split(s)?;
    let re = parse_rational(&re).ok_or_else(|| bad(s))?;
    let im = parse_rational(&im).ok_or_else(|| bad(s))?;
    Ok(Complex::new(re, im))
}

/// Renders an exact rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
