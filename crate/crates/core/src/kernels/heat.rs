//! The weight-k heat kernel on the half-plane, its Gaussian majorant, the
//! heat-equation residual, and the Poisson kernel obtained by subordination.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{h_k, pair_metrics, Point, WeightContext};
use crate::quad::{tanh_sinh, QuadValue, Quadrature};
use crate::specfun::cheb_t2k_shifted;

fn quad() -> Quadrature {
    Quadrature::with_tol(1e-300, 1e-12)
}

fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// Free heat kernel as a function of the hyperbolic distance rho.
///
/// Integrated in v with r = rho + v^2, which removes the inverse square root
/// at r = rho; cosh r - cosh rho = 2 sinh((r+rho)/2) sinh(v^2/2).
pub fn heat_pointpair(t: f64, rho: f64, k: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("heat kernel needs t > 0, got {t}")));
    }
    if !(rho >= 0.0) {
        return Err(Error::domain(format!("distance must be >= 0, got {rho}")));
    }
    let pref = 2f64.sqrt() * (-t / 4.0 - rho * rho / (4.0 * t)).exp() / (4.0 * PI * t).powf(1.5);
    if pref == 0.0 {
        return Ok(0.0);
    }
    let ch = (0.5 * rho).cosh();
    let f = |v: f64| -> Complex64 {
        let v2 = v * v;
        let r = rho + v2;
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        // e^{-r^2/4t} relative to e^{-rho^2/4t}
        let gauss = (-(2.0 * rho * v2 + v2 * v2) / (4.0 * t)).exp();
        if gauss == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if r + rho > 80.0 {
            return Complex64::new(far_integrand(r, rho, v2, t, k), 0.0);
        }
        Complex64::new(gauss * near_integrand(r, rho, v2, ch, k), 0.0)
    };
    let w = (4.0 * t).powf(0.25).min((2.0 * t / rho.max(1e-12)).sqrt()).max(1e-4);
    let q = quad().integrate_to_infinity(f, 0.0, w)?;
    let v = pref * q.value.re;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::QuadratureFailure {
            estimate: f64::INFINITY,
            tolerance: 0.0,
        })
    }
}

/// The heat integrand without its Gaussian factor.
fn near_integrand(r: f64, rho: f64, v2: f64, ch: f64, k: f64) -> f64 {
    let e = 2.0 * (0.25 * (r + rho)).sinh() * (0.25 * v2).sinh() / ch;
    let cheb = cheb_t2k_shifted(e, k).unwrap_or(f64::INFINITY);
    // 2v / sqrt(sinh(v^2/2)) = 2 sqrt(2) / sqrt(sinhc(v^2/2))
    let jac = 2.0 * 2f64.sqrt() / sinhc(0.5 * v2).sqrt();
    r * cheb * jac / (2.0 * (0.5 * (r + rho)).sinh()).sqrt()
}

fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// The heat integrand in log form, for r + rho large.
fn far_integrand(r: f64, rho: f64, v2: f64, t: f64, k: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let ln_gauss = -(2.0 * rho * v2 + v2 * v2) / (4.0 * t);
    let ln_e = ln2 + ln_sinh(0.25 * (r + rho)) + ln_sinh(0.25 * v2) - (0.5 * rho).cosh().ln();
    let e = ln_e.exp();
    // acosh(1 + 2e) without forming e^2
    let angle = if ln_e > 30.0 {
        ln_e + ln2
    } else {
        (e + e.sqrt() * (2.0 + e).sqrt()).ln_1p()
    };
    let x = 2.0 * k.abs() * angle;
    let ln_cheb = x - ln2 + (-2.0 * x).exp().ln_1p();
    // 2v / sqrt(sinh(v^2/2)) with v^2 = r - rho
    let ln_jac = ln2 + 0.5 * v2.ln() - 0.5 * ln_sinh(0.5 * v2);
    let ln_den = 0.5 * (ln2 + ln_sinh(0.5 * (r + rho)));
    (r.ln() + ln_gauss + ln_cheb + ln_jac - ln_den).exp()
}

/// G_k(t): heat_pointpair(t, rho, k) <= e^{-rho^2/8t} G_k(t).
pub fn heat_majorant(t: f64, k: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("heat kernel needs t > 0, got {t}")));
    }
    let ak = k.abs();
    let f = |r: f64| {
        let v = if r == 0.0 {
            2.0
        } else {
            r * (ak * r - r * r / (8.0 * t)).exp() / (0.5 * r).sinh()
        };
        Complex64::new(v, 0.0)
    };
    let q = quad().integrate_to_infinity(f, 0.0, 1.0)?;
    Ok((-t / 4.0).exp() / (4.0 * PI * t).powf(1.5) * q.value.re)
}

/// Bound on sum over rho_g > rho_cut of e^{-rho^2/8t} G when N(rho) <= c e^rho:
/// G c e^{2t} [e^{-(rho_cut-4t)^2/8t} + sqrt(2 pi t) erfc((rho_cut-4t)/sqrt(8t))].
pub fn heat_tail(t: f64, rho_cut: f64, k: f64, counting_constant: f64) -> Result<f64> {
    let g = heat_majorant(t, k)?;
    let x = (rho_cut - 4.0 * t) / (8.0 * t).sqrt();
    let body = (-x * x).exp() + (2.0 * PI * t).sqrt() * libm::erfc(x);
    Ok(g * counting_constant * (2.0 * t).exp() * body)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    Three,
    Five,
}

/// Residuals of (d/dt + Delta_k) on the identity term for both phase conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeReport {
    /// phase H_k(z, w)
    pub residual_plus: f64,
    /// phase H_k(z, w)^-1
    pub residual_minus: f64,
    pub best: f64,
    pub best_sign: i8,
    /// |d/dt F| at the point, for scale
    pub time_derivative: f64,
}

fn d1(f: &dyn Fn(f64) -> Complex64, h: f64, st: Stencil) -> Complex64 {
    match st {
        Stencil::Three => (f(h) - f(-h)) / (2.0 * h),
        Stencil::Five => (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h),
    }
}

fn d2(f: &dyn Fn(f64) -> Complex64, h: f64, st: Stencil) -> Complex64 {
    match st {
        Stencil::Three => (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h),
        Stencil::Five => {
            (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) / (12.0 * h * h)
        }
    }
}

/// Finite-difference (d/dt + Delta_k) F with Delta_k = -y^2 (dxx + dyy) + 2iky dx,
/// F(t, z) = H_k(z, w)^{+-1} heat_pointpair(t, d(z, w), k).
pub fn heat_pde_residual(t: f64, z: Point, w: Point, k: f64, h: f64, stencil: Stencil) -> Result<PdeReport> {
    if pair_metrics(z, w).u == 0.0 {
        return Err(Error::Singularity { sigma: 1.0 });
    }
    if !(h > 0.0 && h < 0.5 * z.y && h < 0.5 * t) {
        return Err(Error::domain(format!("step {h} too large for t = {t}, Im z = {}", z.y)));
    }
    let ctx = WeightContext::new(k)?;
    let fail = std::cell::Cell::new(None);
    let kernel = |tt: f64, p: Point| -> f64 {
        match heat_pointpair(tt, pair_metrics(p, w).dist, k) {
            Ok(v) => v,
            Err(e) => {
                fail.set(Some(e));
                f64::NAN
            }
        }
    };
    let mut res = [0.0; 2];
    let mut dt_scale: f64 = 0.0;
    for (slot, sign) in [(0usize, 1.0), (1, -1.0)] {
        let f = |tt: f64, x: f64, y: f64| -> Complex64 {
            let p = Point { x, y };
            let h = h_k(p, w, &ctx);
            let phase = if sign > 0.0 { h } else { h.inv() };
            phase * kernel(tt, p)
        };
        let ft = |d: f64| f(t + d, z.x, z.y);
        let fx = |d: f64| f(t, z.x + d, z.y);
        let fy = |d: f64| f(t, z.x, z.y + d);
        let dt = d1(&ft, h, stencil);
        let dx = d1(&fx, h, stencil);
        let dxx = d2(&fx, h, stencil);
        let dyy = d2(&fy, h, stencil);
        let i = Complex64::new(0.0, 1.0);
        let lap = -z.y * z.y * (dxx + dyy) + 2.0 * i * k * z.y * dx;
        res[slot] = (dt + lap).norm();
        dt_scale = dt_scale.max(dt.norm());
    }
    if let Some(e) = fail.take() {
        return Err(e);
    }
    let (best, best_sign) = if res[0] <= res[1] { (res[0], 1) } else { (res[1], -1) };
    Ok(PdeReport {
        residual_plus: res[0],
        residual_minus: res[1],
        best,
        best_sign,
        time_derivative: dt_scale,
    })
}

/// (a/sqrt(4 pi)) int_0^inf f(t) e^{-a^2/4t} t^{-3/2} dt.
///
/// Double-exponential rule on (0, split); beyond the split t = split/x^2 maps
/// the half-line onto (0, 1), where the same rule is used.
pub fn subordinate<F>(f: F, a: f64, split: f64) -> Result<QuadValue>
where
    F: Fn(f64) -> Complex64,
{
    if !(a > 0.0) {
        return Err(Error::domain(format!("subordination needs a > 0, got {a}")));
    }
    let a2 = a * a;
    let zero = Complex64::new(0.0, 0.0);
    let near = |t: f64| {
        let wt = (-a2 / (4.0 * t)).exp() * t.powf(-1.5);
        if wt == 0.0 || !wt.is_finite() {
            zero
        } else {
            f(t) * wt
        }
    };
    let far = |x: f64| {
        let t = split / (x * x);
        if !t.is_finite() {
            return zero;
        }
        f(t) * ((-a2 * x * x / (4.0 * split)).exp() * 2.0 / split.sqrt())
    };
    let tol = 1e-14;
    let lo = tanh_sinh(near, 0.0, split, tol)?;
    let hi = tanh_sinh(far, 0.0, 1.0, tol)?;
    let c = a / (4.0 * PI).sqrt();
    let value = (lo.value + hi.value) * c;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::QuadratureFailure {
            estimate: f64::INFINITY,
            tolerance: tol,
        });
    }
    Ok(QuadValue {
        value,
        error: (lo.error + hi.error) * c,
    })
}

/// Split point of the t-integral: a^2 / (4 (shift + 1/4) + 1).
pub fn subordination_split(a: f64, shift: f64) -> f64 {
    a * a / (4.0 * (shift + 0.25).max(0.0) + 1.0)
}

/// |(a/sqrt(4 pi)) int e^{-t lambda} e^{-a^2/4t} t^{-3/2} dt - e^{-a sqrt(lambda)}|.
pub fn subordination_check(lambda: f64, a: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::domain(format!("lambda must be >= 0, got {lambda}")));
    }
    let q = subordinate(|t| Complex64::new((-t * lambda).exp(), 0.0), a, subordination_split(a, lambda))?;
    Ok((q.value.re - (-a * lambda.sqrt()).exp()).abs() + q.value.im.abs())
}

/// Identity term of the heat kernel on the quotient: H_k(z, w)^-1 heat_pointpair(t, d(z, w), k).
pub fn heat_identity_term(t: f64, z: Point, w: Point, k: f64) -> Result<Complex64> {
    let ctx = WeightContext::new(k)?;
    let kv = heat_pointpair(t, pair_metrics(z, w).dist, k)?;
    Ok(h_k(z, w, &ctx).inv() * kv)
}

/// Free-space Poisson kernel shifted by -Z, from the heat identity term.
pub fn poisson_free(u: f64, zshift: Complex64, z: Point, w: Point, k: f64) -> Result<QuadValue> {
    let ctx = WeightContext::new(k)?;
    if !(u > 0.0) {
        return Err(Error::domain(format!("Poisson kernel needs u > 0, got {u}")));
    }
    if zshift.re < -ctx.lambda0 - 1e-12 {
        return Err(Error::domain(format!(
            "Re(Z) = {} below -lambda0 = {}",
            zshift.re, -ctx.lambda0
        )));
    }
    let phase = h_k(z, w, &ctx).inv();
    let rho = pair_metrics(z, w).dist;
    poisson_radial(u, zshift, rho, k).map(|q| QuadValue {
        value: q.value * phase,
        error: q.error,
    })
}

/// The subordinated radial heat kernel at distance rho.
pub fn poisson_radial(u: f64, zshift: Complex64, rho: f64, k: f64) -> Result<QuadValue> {
    let lambda0 = WeightContext::new(k)?.lambda0;
    let fail = std::cell::Cell::new(None);
    let f = |t: f64| match heat_pointpair(t, rho, k) {
        Ok(v) => (-zshift * t).exp() * v,
        Err(e) => {
            fail.set(Some(e));
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let q = subordinate(f, u, subordination_split(u, lambda0 + zshift.re));
    if let Some(e) = fail.take() {
        return Err(e);
    }
    q
}
