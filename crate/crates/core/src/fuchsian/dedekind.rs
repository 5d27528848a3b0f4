//! Dedekind sums in exact rational arithmetic.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest modulus handled; keeps every intermediate fraction inside i128.
pub const MAX_MODULUS: i64 = 1_000_000_000_000;

/// s(d, c) by the reciprocity law and the Euclidean algorithm.
pub fn dedekind_sum(d: i64, c: i64) -> Result<Ratio<i128>> {
    if c < 1 {
        return Err(Error::domain(format!("dedekind_sum needs c >= 1, got {c}")));
    }
    if c > MAX_MODULUS {
        return Err(Error::domain(format!("dedekind_sum modulus {c} too large")));
    }
    if d.gcd(&c) != 1 {
        return Err(Error::domain(format!("gcd({d}, {c}) != 1")));
    }
    let mut h = d.rem_euclid(c) as i128;
    let mut k = c as i128;
    let mut acc = Ratio::from_integer(0i128);
    let mut sign = 1i128;
    let quarter = Ratio::new(1i128, 4);
    while k != 1 {
        // s(h,k) + s(k,h) = -1/4 + (h^2 + k^2 + 1)/(12 h k)
        let term = Ratio::new(h * h + k * k + 1, 12 * h * k) - quarter;
        acc += term * sign;
        sign = -sign;
        let next = k % h;
        k = h;
        h = next;
    }
    Ok(acc)
}

pub(crate) fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
