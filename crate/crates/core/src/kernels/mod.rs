//! Point-pair kernels and their truncated sums over the modular group.
//!
//! Every group sum runs over a displacement ball sigma(z, g w) <= R and
//! reports a tail certificate built from the counting function measured on
//! that same ball.

mod heat;
mod pointpair;
mod pretrace;

pub use heat::{
    heat_identity_term, heat_majorant, heat_pde_residual, heat_pointpair, heat_tail, poisson_free,
    poisson_radial, subordinate, subordination_check, subordination_split, PdeReport, Stencil,
};
pub use pointpair::{
    gk_difference, ks_pointpair, phi_s_closed, phi_s_integral, phi_s_legendre, phi_s_prefactor,
    phi_s_shape, resolvent_prefactor, GkDifference,
};
pub use pretrace::{
    digamma_term, modular_domain_inputs, pretrace_rhs, sup_norm_constants, PretraceValue,
    SupNormConstants, SupNormInputs,
};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuchsian::{enumerate_ball, BallResult, GroupElement, MultiplierSystem};
use crate::geom::{h_k, j_phase, moebius_act, pair_metrics, Point};
use crate::quad::pairwise_sum;
use crate::specfun::{gauss_2f1, SeriesControl};

/// Factor applied to the measured counting constant in every tail bound.
pub const DEFAULT_TAIL_COEFF: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    pub s: Complex64,
    pub k: f64,
    pub trunc_r: f64,
    pub tail_coeff: f64,
}

impl KernelParams {
    pub fn new(s: Complex64, k: f64, trunc_r: f64) -> Result<Self> {
        if !(trunc_r >= 1.0) || !trunc_r.is_finite() {
            return Err(Error::domain(format!("truncation radius must be >= 1, got {trunc_r}")));
        }
        Ok(Self {
            s,
            k,
            trunc_r,
            tail_coeff: DEFAULT_TAIL_COEFF,
        })
    }

    pub fn with_radius(&self, trunc_r: f64) -> Result<Self> {
        Ok(Self {
            tail_coeff: self.tail_coeff,
            ..Self::new(self.s, self.k, trunc_r)?
        })
    }

    fn require_convergent(&self) -> Result<()> {
        if self.s.re > 1.0 + 1e-9 {
            Ok(())
        } else {
            Err(Error::Convergence { re_s: self.s.re })
        }
    }
}

/// A truncated group sum with its certified truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// JSON record of one kernel evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelRecord {
    pub kernel: &'static str,
    pub z: [f64; 2],
    pub w: [f64; 2],
    pub s_re: f64,
    pub s_im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Poisson parameter u and spectral shift Z
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<[f64; 2]>,
    pub k: f64,
    #[serde(rename = "R")]
    pub trunc_r: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl KernelRecord {
    pub fn new(kernel: &'static str, z: Point, w: Point, s: Complex64, k: f64, trunc_r: f64, v: &KernelValue) -> Self {
        Self {
            kernel,
            z: [z.x, z.y],
            w: [w.x, w.y],
            s_re: s.re,
            s_im: s.im,
            t: None,
            u: None,
            shift: None,
            k,
            trunc_r,
            value_re: v.value.re,
            value_im: v.value.im,
            tail_bound: v.tail_bound,
            terms_used: v.terms_used,
        }
    }
}

impl KernelRecord {
    pub fn with_time(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_poisson(mut self, u: f64, shift: Complex64) -> Self {
        self.u = Some(u);
        self.shift = Some([shift.re, shift.im]);
        self
    }
}

/// max N(rho)/e^rho over the ball, where N counts elements with d(z, g w) < rho.
pub fn counting_constant(ball: &BallResult) -> f64 {
    let mut sig = ball.sigmas.clone();
    sig.sort_by(f64::total_cmp);
    sig.iter()
        .enumerate()
        .map(|(i, &s)| (i + 1) as f64 / (2.0 * s - 1.0 + (4.0 * s * (s - 1.0)).sqrt()))
        .fold(1.0, f64::max)
}

fn check_weight(ms: &MultiplierSystem, k: f64) -> Result<()> {
    if (ms.k - k).abs() > 1e-12 {
        return Err(Error::domain(format!("multiplier weight {} differs from kernel weight {k}", ms.k)));
    }
    Ok(())
}

/// Sums term(g, g w, sigma) over the ball in canonical order.
fn ball_sum<F>(ball: &BallResult, w: Point, term: F) -> Result<Complex64>
where
    F: Fn(&GroupElement, Point, f64) -> Result<Complex64> + Sync,
{
    let terms: Vec<Result<Complex64>> = ball
        .elements
        .par_iter()
        .zip(ball.sigmas.par_iter())
        .map(|(g, &sigma)| term(g, moebius_act(&g.to_mat2(), w), sigma))
        .collect();
    let vals = terms.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&vals))
}

/// sum_j |(-k)_j (k)_j| / ((a)_j j!) 2^-j, dominating |F(-k, k; s; x)| for x <= 1/2, Re s >= a.
fn profile_series_bound(k: f64, a: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..10_000 {
        let jf = j as f64;
        term *= ((-k + jf) * (k + jf)).abs() / ((a + jf) * (jf + 1.0)) * 0.5;
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Bound on sum over sigma > R of coeff sigma^-a when N(sigma) <= 4 c sigma.
fn power_tail(c_scaled: f64, coeff: f64, a: f64, r: f64) -> f64 {
    4.0 * c_scaled * coeff * a * r.powf(1.0 - a) / (a - 1.0)
}

/// Geometric kernel: prefactor times the sum of chi(g) Phi-shape(u(z, g w)) J_g(w) H_k(z, g w).
pub fn geometric_kernel(z: Point, w: Point, p: &KernelParams, ms: &MultiplierSystem) -> Result<KernelValue> {
    p.require_convergent()?;
    check_weight(ms, p.k)?;
    let ctx = *ms.weight();
    let pref = phi_s_prefactor(p.s, p.k)?;
    let ball = enumerate_ball(z, w, p.trunc_r)?;
    let sum = ball_sum(&ball, w, |g, gw, sigma| {
        let shape = phi_s_shape(sigma - 1.0, p.s, p.k)?;
        Ok(ms.chi(g) * shape * j_phase(&g.to_mat2(), w, &ctx) * h_k(z, gw, &ctx))
    })?;
    let a = p.s.re;
    let c = p.tail_coeff * counting_constant(&ball);
    // cosh d = 2 sigma - 1 >= sigma, and N <= c e^rho <= 2c (2 sigma - 1)
    let r = 2.0 * p.trunc_r - 1.0;
    let tail = 2.0 * pref.norm() * profile_series_bound(p.k, a) * c * a * r.powf(1.0 - a) / (a - 1.0);
    Ok(KernelValue {
        value: pref * sum,
        tail_bound: tail,
        terms_used: ball.len(),
    })
}

/// Resolvent kernel: (1/2) sum of chi(g) k_s(sigma(z, g w)) J_g(w) H_k(z, g w).
pub fn resolvent_kernel(z: Point, w: Point, p: &KernelParams, ms: &MultiplierSystem) -> Result<KernelValue> {
    p.require_convergent()?;
    check_weight(ms, p.k)?;
    let ctx = *ms.weight();
    let ball = enumerate_ball(z, w, p.trunc_r)?;
    if let Some(&sigma) = ball.sigmas.iter().find(|&&s| s <= 1.0 + 1e-10) {
        return Err(Error::Singularity { sigma });
    }
    let sum = ball_sum(&ball, w, |g, gw, sigma| {
        let kv = ks_pointpair(sigma, p.s, p.k)?;
        Ok(ms.chi(g) * kv * j_phase(&g.to_mat2(), w, &ctx) * h_k(z, gw, &ctx))
    })?;
    let c = p.tail_coeff * counting_constant(&ball);
    let tail = resolvent_tail(p.s, p.k, p.trunc_r, c)?;
    Ok(KernelValue {
        value: 0.5 * sum,
        tail_bound: tail,
        terms_used: ball.len(),
    })
}

/// Bound on (1/2) sum over sigma > R of |k_s(sigma)|.
pub(crate) fn resolvent_tail(s: Complex64, k: f64, r: f64, c: f64) -> Result<f64> {
    let a = s.re;
    if r <= 1.0 {
        return Ok(f64::INFINITY);
    }
    let pref = resolvent_prefactor(s, k)?.norm();
    let z = 1.0 / r;
    let re = |x: f64| Complex64::new(x, 0.0);
    let f = gauss_2f1(re((s + k).norm()), re((s - k).norm()), re(2.0 * a), z, SeriesControl::adaptive(z))
        .map(|v| v.re)
        .unwrap_or(f64::INFINITY);
    Ok(0.5 * power_tail(c, pref * f, a, r))
}

/// Heat kernel on the quotient: (1/2) sum of conj(chi(g)) J_g(w)^-1 H_k(z, g w)^-1 K(t; d(z, g w)).
pub fn heat_kernel_m(t: f64, z: Point, w: Point, trunc_r: f64, ms: &MultiplierSystem) -> Result<KernelValue> {
    heat_kernel_m_with(t, z, w, trunc_r, DEFAULT_TAIL_COEFF, ms)
}

pub fn heat_kernel_m_with(
    t: f64,
    z: Point,
    w: Point,
    trunc_r: f64,
    tail_coeff: f64,
    ms: &MultiplierSystem,
) -> Result<KernelValue> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("heat kernel needs t > 0, got {t}")));
    }
    let ctx = *ms.weight();
    let k = ms.k;
    let ball = enumerate_ball(z, w, trunc_r)?;
    let sum = ball_sum(&ball, w, |g, gw, _| {
        let rho = pair_metrics(z, gw).dist;
        let kv = heat_pointpair(t, rho, k)?;
        let phase = ms.chi(g).conj() * j_phase(&g.to_mat2(), w, &ctx).conj() * h_k(z, gw, &ctx).conj();
        Ok(phase * kv)
    })?;
    let c = tail_coeff * counting_constant(&ball);
    let rho_cut = (2.0 * trunc_r - 1.0).acosh();
    let tail = 0.5 * heat_tail(t, rho_cut, k, c)?;
    Ok(KernelValue {
        value: 0.5 * sum,
        tail_bound: tail,
        terms_used: ball.len(),
    })
}

/// Group-summed Poisson kernel shifted by -Z; refuses when the subordinated
/// heat tail exceeds `tolerance`.
pub fn poisson_kernel_m(
    u: f64,
    zshift: Complex64,
    z: Point,
    w: Point,
    trunc_r: f64,
    ms: &MultiplierSystem,
    tolerance: f64,
) -> Result<KernelValue> {
    let ctx = *ms.weight();
    let k = ms.k;
    if zshift.re < -ctx.lambda0 - 1e-12 {
        return Err(Error::domain(format!("Re(Z) = {} below -lambda0 = {}", zshift.re, -ctx.lambda0)));
    }
    let ball = enumerate_ball(z, w, trunc_r)?;
    let c = DEFAULT_TAIL_COEFF * counting_constant(&ball);
    let rho_cut = (2.0 * trunc_r - 1.0).acosh();
    let split = subordination_split(u, ctx.lambda0 + zshift.re);
    let tail = subordinate(
        |t| {
            let v = heat_tail(t, rho_cut, k, c).unwrap_or(f64::INFINITY);
            Complex64::new(0.5 * v * (-zshift.re * t).exp(), 0.0)
        },
        u,
        split,
    )
    .map(|q| q.value.re)
    .unwrap_or(f64::INFINITY);
    if !(tail <= tolerance) {
        return Err(Error::TailTooLarge { tail, tolerance });
    }
    let sum = ball_sum(&ball, w, |g, gw, _| {
        let rho = pair_metrics(z, gw).dist;
        let pv = poisson_radial(u, zshift, rho, k)?.value;
        let phase = ms.chi(g).conj() * j_phase(&g.to_mat2(), w, &ctx).conj() * h_k(z, gw, &ctx).conj();
        Ok(phase * pv)
    })?;
    Ok(KernelValue {
        value: 0.5 * sum,
        tail_bound: tail,
        terms_used: ball.len(),
    })
}
