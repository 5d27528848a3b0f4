//! Command-line value syntax: complex numbers "a+bi" and grids
//! "v1,v2,..." or "start:stop:count".

use num_complex::Complex64;

use crate::geom::Point;

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// "3", "-0.5", "2.4i", "0.3+1.7i", "1e-3-2i", "i", "-i".
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = s.strip_suffix('i') else {
        return real(&s).map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(t),
    };
    let z = match split {
        Some(j) => Complex64::new(real(&body[..j])?, imag(&body[j..])?),
        None => Complex64::new(0.0, imag(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{text}` is not a finite complex number"))
    }
}

/// Comma list of complex numbers.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}

/// Comma list of points of the upper half-plane.
pub fn parse_points(text: &str) -> Result<Vec<Point>, String> {
    parse_complex_list(text)?
        .into_iter()
        .map(|z| Point::from_complex(z).map_err(|e| e.to_string()))
        .collect()
}

/// "a,b,c" or "start:stop:count" (count >= 1, endpoints included).
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => text.split(',').map(real).collect(),
        3 => {
            let (a, b) = (real(parts[0])?, real(parts[1])?);
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("grid count `{}` is not a positive integer", parts[2]))?;
            match n {
                0 => Err("grid count must be at least 1".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(format!("`{text}` is neither a comma list nor start:stop:count")),
    }
}

/// "name=value" with a positive value.
pub fn parse_tolerance(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("`{text}` is not of the form name=value"))?;
    let v = real(value)?;
    if !(v > 0.0) {
        return Err(format!("tolerance `{name}` must be positive, got {v}"));
    }
    Ok((name.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_complex("2.4i").unwrap(), c(0.0, 2.4));
        assert_eq!(parse_complex("0.3+1.7i").unwrap(), c(0.3, 1.7));
        assert_eq!(parse_complex("-1-2i").unwrap(), c(-1.0, -2.0));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), c(1e-3, -20.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2+i").unwrap(), c(2.0, 1.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
        for bad in ["", "x", "1+", "1+2j", "nan", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2:9:1").unwrap(), vec![2.0]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert_eq!(parse_complex_list("3,2+1i").unwrap(), vec![c(3.0, 0.0), c(2.0, 1.0)]);
        assert!(parse_points("1+1i,2i").is_ok());
        assert!(parse_points("1-1i").is_err());
    }

    #[test]
    fn tolerances() {
        assert_eq!(parse_tolerance("roundtrip=1e-6").unwrap(), ("roundtrip".into(), 1e-6));
        assert!(parse_tolerance("roundtrip=0").is_err());
        assert!(parse_tolerance("roundtrip").is_err());
    }
}
