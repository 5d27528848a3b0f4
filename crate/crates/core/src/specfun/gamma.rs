//! Gamma-family functions on the complex plane and the real digamma.

use num_complex::Complex64;
use crate::error::{Error, Result};

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_2,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol && z.re <= tol && (z.re - z.re.round()).abs() <= tol
}

/// Principal logarithm with the cut on the negative axis approached from above.
pub(crate) fn principal_ln(z: Complex64) -> Complex64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Complex64::new(z.norm().ln(), im.atan2(z.re))
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    HALF_LN_2PI + (zm + 0.5) * principal_ln(t) - t + principal_ln(series)
}

/// log Gamma on the principal branch, analytic off the cut (-inf, 0].
///
/// Left of Re z = 1/2 the value is pulled back from the right half-plane by
/// the recurrence Gamma(z+1) = z Gamma(z), summing principal logarithms.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("log_gamma of non-finite {z}")));
    }
    if is_nonpositive_integer(z, 1e-12) {
        return Err(Error::Pole { what: "log_gamma", at: z });
    }
    if z.re >= 0.5 {
        return Ok(lanczos_ln_gamma(z));
    }
    let n = (0.5 - z.re).ceil() as usize;
    let mut acc = lanczos_ln_gamma(z + n as f64);
    for j in 0..n {
        acc -= principal_ln(z + j as f64);
    }
    Ok(acc)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    let v = log_gamma(z)?.exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("Gamma overflows at {z}")))
    }
}

/// 1/Gamma(z), entire: zero at the nonpositive integers.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Real log Gamma for x > 0.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::domain(format!("ln_gamma_real needs x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// psi(x) for x > 0: shift up past 10, then the asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("digamma needs finite x > 0, got {x}")));
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    // Bernoulli tail: B_2n / (2n x^2n)
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                    - r * (1.0 / 240.0
                        - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

/// Rising factorial (a)_n as a plain product.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}
