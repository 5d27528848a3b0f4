//! Point-pair functions: the resolvent function k_s(sigma), its s-difference,
//! and the radial profile of the geometric kernel in three forms.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::Quadrature;
use crate::shc::lift_ratio;
use crate::specfun::{gauss_2f1, legendre_p, log_gamma, SeriesControl};

fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn excluded(s: Complex64, k: f64) -> bool {
    // s = +-k - n
    [s - k, s + k]
        .iter()
        .any(|v| v.im.abs() < 1e-12 && v.re < 1e-12 && (v.re - v.re.round()).abs() < 1e-12)
}

/// Gamma(s-k)Gamma(s+k) / (4 pi Gamma(2s)).
pub fn resolvent_prefactor(s: Complex64, k: f64) -> Result<Complex64> {
    if excluded(s, k) {
        return Err(Error::Pole { what: "resolvent point-pair function", at: s });
    }
    let ln = log_gamma(s - k)? + log_gamma(s + k)? - log_gamma(2.0 * s)?;
    Ok(ln.exp() / (4.0 * PI))
}

/// k_s(sigma) = sigma^-s Gamma(s-k)Gamma(s+k)/(4 pi Gamma(2s)) F(s+k, s-k; 2s; 1/sigma).
pub fn ks_pointpair(sigma: f64, s: Complex64, k: f64) -> Result<Complex64> {
    if !(sigma > 1.0 + 1e-12) {
        return Err(Error::Singularity { sigma });
    }
    let pref = resolvent_prefactor(s, k)?;
    let z = 1.0 / sigma;
    let f = gauss_2f1(s + k, s - k, 2.0 * s, z, SeriesControl::adaptive(z))?;
    Ok(pref * (-s * sigma.ln()).exp() * f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GkDifference {
    pub value: f64,
    pub bound: f64,
    pub bound_ok: bool,
}

/// k_s(sigma) - k_{s+1}(sigma) for real s > |k|, summed as one series, with its bound.
///
/// The bound s sigma^-s / (2 pi (s^2 - k^2)) is attained at sigma = 1, so the
/// comparison allows a relative slack of 1e-12.
pub fn gk_difference(sigma: f64, s: f64, k: f64) -> Result<GkDifference> {
    if !(s > k.abs()) {
        return Err(Error::domain(format!("gk_difference needs real s > |k|, got s = {s}, k = {k}")));
    }
    if !(sigma >= 1.0) {
        return Err(Error::domain(format!("sigma must be >= 1, got {sigma}")));
    }
    let pref = resolvent_prefactor(cr(s), k)?.re;
    let z = 1.0 / sigma;
    let f = gauss_2f1(cr(s + k), cr(s - k), cr(2.0 * s + 1.0), z, SeriesControl::adaptive(z))?.re;
    let decay = sigma.powf(-s);
    let value = pref * decay * f;
    let bound = s * decay / (2.0 * PI * (s * s - k * k));
    Ok(GkDifference {
        value,
        bound,
        bound_ok: value.abs() <= bound * (1.0 + 1e-12),
    })
}

/// Gamma(s-k)Gamma(s+k) / (sqrt(2 pi) Gamma(s)^2).
pub fn phi_s_prefactor(s: Complex64, k: f64) -> Result<Complex64> {
    if excluded(s, k) {
        return Err(Error::Pole { what: "profile prefactor", at: s });
    }
    let ln = log_gamma(s - k)? + log_gamma(s + k)? - 2.0 * log_gamma(s)?;
    Ok(ln.exp() / (2.0 * PI).sqrt())
}

/// (1+2u)^-s F(-k, k; s; 1/(2(1+u))).
pub fn phi_s_shape(u: f64, s: Complex64, k: f64) -> Result<Complex64> {
    if !(u >= 0.0) {
        return Err(Error::domain(format!("u must be >= 0, got {u}")));
    }
    let f = gauss_2f1(cr(-k), cr(k), s, 0.5 / (1.0 + u), SeriesControl::default())?;
    Ok((-s * (2.0 * u).ln_1p()).exp() * f)
}

fn check_profile_domain(s: Complex64, k: f64) -> Result<()> {
    if s.re > 1f64.max(k.abs()) {
        Ok(())
    } else {
        Err(Error::domain(format!("profile needs Re(s) > max(1, |k|), got s = {s}, k = {k}")))
    }
}

/// The radial profile Phi_s(4u) of the geometric kernel in closed form.
pub fn phi_s_closed(u: f64, s: Complex64, k: f64) -> Result<Complex64> {
    check_profile_domain(s, k)?;
    Ok(phi_s_prefactor(s, k)? * phi_s_shape(u, s, k)?)
}

/// The same profile as the inverse-transform integral
/// Gamma(s+1/2)/(pi Gamma(s)) 2^(s-1/2) int (4u+t^2+2)^-(s+1/2) rho(t)^k dt,
/// rho(t) = (sqrt(4u+4+t^2)-t)/(sqrt(4u+4+t^2)+t).
pub fn phi_s_integral(u: f64, s: Complex64, k: f64) -> Result<Complex64> {
    check_profile_domain(s, k)?;
    if !(u >= 0.0) {
        return Err(Error::domain(format!("u must be >= 0, got {u}")));
    }
    let alpha = 4.0 * u + 4.0;
    let expo = -(s + 0.5);
    // fold t < 0 onto t > 0: rho(-t) = 1/rho(t)
    let f = |t: f64| {
        let rho = lift_ratio(alpha, t);
        (expo * (alpha - 2.0 + t * t).ln()).exp() * (rho.powf(k) + rho.powf(-k))
    };
    let q = Quadrature::with_tol(1e-15, 1e-12).integrate_to_infinity(f, 0.0, alpha.sqrt())?;
    let ln = log_gamma(s + 0.5)? - log_gamma(s)? + (s - 0.5) * std::f64::consts::LN_2;
    Ok(ln.exp() / PI * q.value)
}

/// The profile through Ferrers functions of argument u/(u+1), u > 0.
pub fn phi_s_legendre(u: f64, s: Complex64, k: f64) -> Result<Complex64> {
    check_profile_domain(s, k)?;
    if !(u > 0.0) {
        return Err(Error::domain(format!("Ferrers route needs u > 0, got {u}")));
    }
    let x = u / (u + 1.0);
    let p_plus = legendre_p(k, -s, x)?;
    let p_minus = legendre_p(-k, -s, x)?;
    let ln = log_gamma(s + k)? + log_gamma(s - k)? - log_gamma(s)?;
    let pref = ln.exp() * 2f64.powf(-1.5) / PI.sqrt();
    let comb = (s + k) * p_plus + (s - k) * p_minus;
    Ok(pref * comb * (-0.5 * s * (2.0 * u).ln_1p()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn resolvent_values() {
        let v = ks_pointpair(2.0, cr(1.0), 0.0).unwrap();
        assert!((v.re - 2f64.ln() / (4.0 * PI)).abs() < 1e-14);
        for (s, k) in [(2.5, 0.3), (3.0, 1.5)] {
            let sig = 1e6;
            let v = ks_pointpair(sig, cr(s), k).unwrap() * sig.powf(s);
            let want = resolvent_prefactor(cr(s), k).unwrap();
            assert!(((v - want) / want).norm() < 1e-5);
            let a = ks_pointpair(3.3, cr(s), k).unwrap();
            let b = ks_pointpair(3.3, cr(s), -k).unwrap();
            assert!((a - b).norm() <= 1e-15 * a.norm());
        }
        assert!(matches!(ks_pointpair(1.0, cr(2.0), 0.0), Err(Error::Singularity { .. })));
        assert!(matches!(ks_pointpair(2.0, cr(-1.0), 1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn difference_matches_two_evaluations() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..300 {
            let k: f64 = rng.gen_range(-2.0..2.0);
            let s = k.abs() + rng.gen_range(0.1..5.0);
            let sigma = rng.gen_range(1.05..50.0);
            let g = gk_difference(sigma, s, k).unwrap();
            let two = ks_pointpair(sigma, cr(s), k).unwrap() - ks_pointpair(sigma, cr(s + 1.0), k).unwrap();
            assert!((g.value - two.re).abs() <= 1e-11 * g.value.abs().max(1e-300), "{sigma} {s} {k}");
            assert!(g.bound_ok && g.value > 0.0);
        }
        let g = gk_difference(1.0, 2.0, 0.0).unwrap();
        assert!((g.value - g.bound).abs() < 1e-14);
    }

    #[test]
    fn profile_forms_agree() {
        let v = phi_s_closed(0.7, cr(2.5), 0.0).unwrap();
        assert!((v.re - 2.4f64.powf(-2.5) / (2.0 * PI).sqrt()).abs() < 1e-15);
        for &(u, s, k) in &[(1.0, 2.0, 0.0), (0.5, 3.0, 1.0), (0.0, 2.5, 0.5), (2.0, 4.0, 1.3)] {
            let a = phi_s_closed(u, cr(s), k).unwrap();
            let b = phi_s_integral(u, cr(s), k).unwrap();
            assert!((a - b).norm() < 1e-10, "{u} {s} {k}: {a} {b}");
        }
        let a = phi_s_closed(0.6, cr(2.5), 0.3).unwrap();
        let b = phi_s_legendre(0.6, cr(2.5), 0.3).unwrap();
        assert!((a - b).norm() < 1e-12, "{a} {b}");
        let s = Complex64::new(2.2, 0.7);
        let a = phi_s_closed(0.4, s, 0.6).unwrap();
        let b = phi_s_integral(0.4, s, 0.6).unwrap();
        assert!((a - b).norm() < 1e-10);
        assert!(phi_s_closed(0.4, cr(1.0), 0.0).is_err());
    }
}
