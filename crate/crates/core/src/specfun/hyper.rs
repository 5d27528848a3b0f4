//! Gauss hypergeometric series and the functions built on it.

use num_complex::Complex64;

use super::gamma::{log_gamma, recip_gamma};
use crate::error::{Error, Result};

/// Truncation policy for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    max_terms: usize,
    rel_tol: f64,
}

impl SeriesControl {
    pub const MAX_ADAPTIVE_TERMS: usize = 10_000_000;

    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms < 64 {
            return Err(Error::domain(format!("max_terms {max_terms} < 64")));
        }
        if !(rel_tol > 0.0 && rel_tol <= 1e-6) {
            return Err(Error::domain(format!("rel_tol {rel_tol} outside (0, 1e-6]")));
        }
        Ok(Self { max_terms, rel_tol })
    }

    /// Default tolerance with a term budget scaled to the slow convergence near z = 1.
    pub fn adaptive(z: f64) -> Self {
        let base = Self::default();
        if z.abs() < 1.0 {
            let need = (80.0 / (1.0 - z.abs())).ceil();
            let need = need.min(Self::MAX_ADAPTIVE_TERMS as f64) as usize;
            Self {
                max_terms: base.max_terms.max(need),
                ..base
            }
        } else {
            base
        }
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 4096,
            rel_tol: 1e-15,
        }
    }
}

fn near_nonpositive_integer(c: Complex64) -> bool {
    c.im.abs() <= 1e-12 && c.re <= 1e-12 && (c.re - c.re.round()).abs() <= 1e-12
}

/// F(a, b; c; z) for real z in (-1, 1], by the defining series.
///
/// At z = 1 the Gauss summation theorem is used, which needs Re(c-a-b) > 0.
pub fn gauss_2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
    ctl: SeriesControl,
) -> Result<Complex64> {
    if near_nonpositive_integer(c) {
        return Err(Error::Pole { what: "gauss_2f1 lower parameter", at: c });
    }
    if z == 1.0 {
        let e = c - a - b;
        if e.re <= 0.0 {
            return Err(Error::domain(format!(
                "F(a,b;c;1) needs Re(c-a-b) > 0, got {}",
                e.re
            )));
        }
        let num = log_gamma(c)? + log_gamma(e)?;
        return Ok(num.exp() * recip_gamma(c - a) * recip_gamma(c - b));
    }
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::domain(format!("series argument {z} outside (-1, 1]")));
    }
    let one = Complex64::new(1.0, 0.0);
    if z == 0.0 {
        return Ok(one);
    }
    let mut term = one;
    let mut sum = one;
    for j in 0..ctl.max_terms {
        let jf = j as f64;
        let step = (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * z;
        term *= step;
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        let ratio = step.norm();
        if ratio < 1.0 {
            let r = ratio.max(z.abs());
            if term.norm() * r / (1.0 - r) <= ctl.rel_tol * sum.norm() {
                return finite(sum);
            }
        }
    }
    Err(Error::NoConvergence {
        terms: ctl.max_terms,
    })
}

fn finite(v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain("hypergeometric series overflowed"))
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Generalized Chebyshev function cosh(2k arccosh x) for x >= 1.
pub fn cheb_t2k(x: f64, k: f64) -> Result<f64> {
    if !(x >= 1.0 - 1e-12) {
        return Err(Error::domain(format!("cheb_t2k needs x >= 1, got {x}")));
    }
    cheb_t2k_shifted((x - 1.0).max(0.0), k)
}

/// Same function parametrized by e = x - 1, accurate when x is close to 1.
pub fn cheb_t2k_shifted(e: f64, k: f64) -> Result<f64> {
    if !(e >= 0.0) {
        return Err(Error::domain(format!("cheb_t2k_shifted needs e >= 0, got {e}")));
    }
    let angle = (e + e.sqrt() * (2.0 + e).sqrt()).ln_1p();
    let v = (2.0 * k * angle).cosh();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain("cheb_t2k overflow"))
    }
}

/// Ferrers function P_nu^mu(x) on (0, 1) through its hypergeometric form.
pub fn legendre_p(nu: f64, mu: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("legendre_p needs 0 < x < 1, got {x}")));
    }
    let arg = (1.0 - x) / 2.0;
    let f = gauss_2f1(re(-nu), re(nu + 1.0), 1.0 - mu, arg, SeriesControl::default())?;
    let ratio = ((1.0 + x) / (1.0 - x)).ln();
    Ok(recip_gamma(1.0 - mu) * (mu * 0.5 * ratio).exp() * f)
}

/// |(1/s)[(s+k)F(-k,k+1;s+1;z) + (s-k)F(k,1-k;s+1;z)] - 2F(-k,k;s;z)|.
pub fn contiguous_residual(k: f64, s: Complex64, z: f64) -> Result<f64> {
    if near_nonpositive_integer(s) {
        return Err(Error::Pole { what: "contiguous_residual", at: s });
    }
    let ctl = SeriesControl::default();
    let f1 = gauss_2f1(re(-k), re(k + 1.0), s + 1.0, z, ctl)?;
    let f2 = gauss_2f1(re(k), re(1.0 - k), s + 1.0, z, ctl)?;
    let f0 = gauss_2f1(re(-k), re(k), s, z, ctl)?;
    let lhs = ((s + k) * f1 + (s - k) * f2) / s;
    Ok((lhs - 2.0 * f0).norm())
}
