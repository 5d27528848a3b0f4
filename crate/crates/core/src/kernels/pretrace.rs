//! Right-hand side of the resolvent pre-trace formula and the constants of
//! the eigenfunction sup-norm bound.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::{counting_constant, gk_difference, ks_pointpair, resolvent_tail, DEFAULT_TAIL_COEFF};
use crate::error::{Error, Result};
use crate::fuchsian::{enumerate_ball, MultiplierSystem};
use crate::geom::{h_k, j_phase, moebius_act, pair_metrics, Point, WeightContext};
use crate::quad::pairwise_sum;
use crate::specfun::digamma;

/// -(d/4 pi)(psi(s+k) + psi(s-k) - psi(t+k) - psi(t-k)).
pub fn digamma_term(s: f64, t: f64, k: f64, d_dim: usize) -> Result<f64> {
    let psi = digamma(s + k)? + digamma(s - k)? - digamma(t + k)? - digamma(t - k)?;
    Ok(-(d_dim as f64) / (4.0 * PI) * psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PretraceValue {
    pub value: f64,
    /// imaginary part of the assembled sum; zero up to rounding and truncation
    pub imag: f64,
    pub digamma_term: f64,
    pub group_term: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// The pre-trace right-hand side at the point z, summing over g != +-I with sigma(z, g z) <= R.
///
/// When t = s + 1 the difference k_s - k_t is summed as one series, which stays
/// finite on the diagonal; otherwise elements fixing z are a singularity.
pub fn pretrace_rhs(z: Point, s: f64, t: f64, trunc_r: f64, ms: &MultiplierSystem) -> Result<PretraceValue> {
    let k = ms.k;
    let lo = 1f64.max(k.abs());
    if !(s > lo && t > lo && s < t) {
        return Err(Error::domain(format!(
            "pre-trace needs max(1, |k|) < s < t, got s = {s}, t = {t}, k = {k}"
        )));
    }
    let ctx: WeightContext = *ms.weight();
    let unit_step = (t - s - 1.0).abs() < 1e-14;
    let ball = enumerate_ball(z, z, trunc_r)?;
    let terms: Vec<Result<Complex64>> = ball
        .elements
        .iter()
        .zip(&ball.sigmas)
        .filter(|(g, _)| !g.is_plus_minus_identity())
        .map(|(g, &sigma)| {
            let diff = if unit_step {
                gk_difference(sigma, s, k)?.value
            } else {
                if sigma <= 1.0 + 1e-10 {
                    return Err(Error::Singularity { sigma });
                }
                let re = |x: f64| Complex64::new(x, 0.0);
                (ks_pointpair(sigma, re(s), k)? - ks_pointpair(sigma, re(t), k)?).re
            };
            let gz = moebius_act(&g.to_mat2(), z);
            Ok(ms.chi(g) * diff * j_phase(&g.to_mat2(), z, &ctx) * h_k(z, gz, &ctx))
        })
        .collect();
    let vals = terms.into_iter().collect::<Result<Vec<_>>>()?;
    let group = 0.5 * pairwise_sum(&vals);
    let dig = digamma_term(s, t, k, ms.d_dim)?;
    let c = DEFAULT_TAIL_COEFF * counting_constant(&ball);
    let tail = if unit_step {
        // |g_k| <= s sigma^-s / (2 pi (s^2 - k^2))
        let coeff = s / (2.0 * PI * (s * s - k * k));
        0.5 * 4.0 * c * coeff * s * trunc_r.powf(1.0 - s) / (s - 1.0)
    } else {
        let re = |x: f64| Complex64::new(x, 0.0);
        resolvent_tail(re(s), k, trunc_r, c)? + resolvent_tail(re(t), k, trunc_r, c)?
    };
    Ok(PretraceValue {
        value: dig + group.re,
        imag: group.im,
        digamma_term: dig,
        group_term: group.re,
        tail_bound: tail,
        terms_used: vals.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNormInputs {
    pub k: f64,
    pub d_dim: usize,
    /// hyperbolic area of the fundamental domain
    pub vol: f64,
    /// hyperbolic diameter of the truncated domain actually used
    pub diam: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNormConstants {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub script_c: f64,
    pub lambda0: f64,
}

/// A, C(k, M, d) and its companion (C (|k|+2))^(1/2).
pub fn sup_norm_constants(inp: &SupNormInputs) -> Result<SupNormConstants> {
    if !(inp.vol > 0.0 && inp.diam > 0.0 && inp.d_dim > 0) {
        return Err(Error::domain("sup-norm inputs must be positive"));
    }
    let ctx = WeightContext::new(inp.k)?;
    let ak = inp.k.abs();
    let d = inp.d_dim as f64;
    let ratio = (ak + 2.0) / (ak + 1.0);
    let c = d * (ak + 2.0) / (8.0 * PI * (ak + 1.0))
        + ratio * ratio * (d / (2.0 * inp.vol)) * (1.5 * inp.diam).exp();
    Ok(SupNormConstants {
        a: ctx.a,
        c,
        script_c: (c * (ak + 2.0)).sqrt(),
        lambda0: ctx.lambda0,
    })
}

/// Inputs for the modular group: area pi/3 and the diameter of the
/// domain {|x| <= 1/2, |z| >= 1, y <= y_cut}, measured on its boundary.
pub fn modular_domain_inputs(k: f64, d_dim: usize, y_cut: f64) -> Result<SupNormInputs> {
    let low = 3f64.sqrt() / 2.0;
    if !(y_cut > low) {
        return Err(Error::domain(format!("cut height {y_cut} must exceed sqrt(3)/2")));
    }
    const N: usize = 400;
    let mut pts = Vec::with_capacity(4 * N);
    for i in 0..=N {
        let f = i as f64 / N as f64;
        let th = PI / 3.0 + f * PI / 3.0;
        pts.push(Point { x: th.cos(), y: th.sin() });
        let y = low + f * (y_cut - low);
        pts.push(Point { x: -0.5, y });
        pts.push(Point { x: 0.5, y });
        pts.push(Point { x: -0.5 + f, y: y_cut });
    }
    let mut diam: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            diam = diam.max(pair_metrics(*p, *q).dist);
        }
    }
    Ok(SupNormInputs {
        k,
        d_dim,
        vol: PI / 3.0,
        diam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_value() {
        let v = digamma_term(3.0, 4.0, 1.0, 1).unwrap();
        assert!((v - 3.0 / (16.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn constants() {
        let c = sup_norm_constants(&SupNormInputs { k: 2.0, d_dim: 1, vol: 1.0, diam: 1.0 }).unwrap();
        assert_eq!(c.a, 1.5);
        let c = sup_norm_constants(&SupNormInputs { k: 0.5, d_dim: 1, vol: 1.0, diam: 1.0 }).unwrap();
        assert_eq!(c.lambda0, 0.25);
        let c = sup_norm_constants(&SupNormInputs { k: 0.0, d_dim: 1, vol: PI / 3.0, diam: 3.0 }).unwrap();
        let want = 1.0 / (4.0 * PI) + 4.0 * (3.0 / (2.0 * PI)) * 4.5f64.exp();
        assert!((c.c - want).abs() < 1e-12 * want);
        let m = modular_domain_inputs(0.0, 1, 2.0).unwrap();
        assert!((m.diam - 3f64.ln()).abs() < 1e-3, "{}", m.diam);
    }

    #[test]
    fn pretrace_positive_and_bounded() {
        let z = Point { x: 0.0, y: 2.0 };
        for (k, ms) in [
            (0.0, MultiplierSystem::trivial(0.0).unwrap()),
            (0.5, MultiplierSystem::eta_power(0.5).unwrap()),
        ] {
            let s = k + 2.0;
            let v = pretrace_rhs(z, s, s + 1.0, 200.0, &ms).unwrap();
            assert!(v.value > 0.0, "{v:?}");
            assert!(v.imag.abs() <= 1e-9 + v.tail_bound);
            let bound = sup_norm_constants(&modular_domain_inputs(k, 1, 2.0).unwrap()).unwrap().c;
            assert!(v.value <= bound);
        }
    }
}
