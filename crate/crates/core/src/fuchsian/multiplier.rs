//! Unitary multiplier systems of real weight on SL(2, Z).

use num_complex::Complex64;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use super::dedekind::{dedekind_sum, ratio_to_f64};
use super::{random_word, GroupElement};
use crate::error::{Error, Result};
use crate::geom::{omega_k, WeightContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    Trivial,
    EtaPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierSystem {
    pub kind: MultiplierKind,
    pub k: f64,
    pub d_dim: usize,
    pub convention_sign: i8,
    #[serde(skip)]
    ctx: WeightContext,
    #[serde(skip)]
    exponent: f64,
}

/// The eta phase of g: eta(gz) = e^{i phase} (cz+d)^{1/2} eta(z) on c > 0 or c = 0, d > 0.
pub fn eta_phase(g: &GroupElement) -> Result<f64> {
    Ok(PI * ratio_to_f64(&eta_phase_over_pi(g)?))
}

fn eta_phase_over_pi(g: &GroupElement) -> Result<Ratio<i128>> {
    if g.c > 0 {
        let s = dedekind_sum(g.d, g.c)?;
        let lead = Ratio::new(g.a as i128 + g.d as i128, 12 * g.c as i128);
        Ok(lead - s - Ratio::new(1, 4))
    } else if g.c == 0 && g.d > 0 {
        Ok(Ratio::new(g.b as i128, 12))
    } else {
        Err(Error::domain(format!(
            "eta_phase needs c > 0 or (c = 0, d > 0); got c = {}, d = {}",
            g.c, g.d
        )))
    }
}

const SETUP_PAIRS: usize = 256;
const SETUP_SEED: u64 = 0x5eed_e7a;
const SETUP_TOL: f64 = 1e-10;

impl MultiplierSystem {
    /// chi = 1; only consistent for integral weight.
    pub fn trivial(k: f64) -> Result<Self> {
        if (k - k.round()).abs() > 1e-12 {
            return Err(Error::domain(format!("trivial multiplier needs integral weight, got {k}")));
        }
        Ok(Self {
            kind: MultiplierKind::Trivial,
            k,
            d_dim: 1,
            convention_sign: 1,
            ctx: WeightContext::new(k)?,
            exponent: 0.0,
        })
    }

    /// chi = exp(+-4ik * eta phase), the sign fixed by a consistency sweep.
    pub fn eta_power(k: f64) -> Result<Self> {
        let mut best = f64::INFINITY;
        for sign in [1i8, -1] {
            let ms = Self::with_convention(k, sign, 4.0)?;
            let r = ms.sweep_residual(SETUP_PAIRS, SETUP_SEED, 12);
            if r <= SETUP_TOL {
                return Ok(ms);
            }
            best = best.min(r);
        }
        Err(Error::Convention { residual: best })
    }

    /// Unchecked eta-type system exp(sign * i * factor * k * phase).
    pub fn with_convention(k: f64, sign: i8, factor: f64) -> Result<Self> {
        Ok(Self {
            kind: MultiplierKind::EtaPower,
            k,
            d_dim: 1,
            convention_sign: sign,
            ctx: WeightContext::new(k)?,
            exponent: sign as f64 * factor * k,
        })
    }

    pub fn weight(&self) -> &WeightContext {
        &self.ctx
    }

    pub fn chi(&self, g: &GroupElement) -> Complex64 {
        match self.kind {
            MultiplierKind::Trivial => Complex64::new(1.0, 0.0),
            MultiplierKind::EtaPower => self.chi_eta(g),
        }
    }

    fn chi_covered(&self, g: &GroupElement) -> Complex64 {
        let phase = eta_phase(g).expect("covered sector");
        Complex64::from_polar(1.0, self.exponent * phase)
    }

    fn chi_eta(&self, g: &GroupElement) -> Complex64 {
        if g.c > 0 || (g.c == 0 && g.d > 0) {
            return self.chi_covered(g);
        }
        // g = (-I)(-g) with -g covered
        let h = g.neg();
        let minus = GroupElement::MINUS_IDENTITY;
        let w = omega_k(&minus.to_mat2(), &h.to_mat2(), &self.ctx)
            .expect("winding of -I is base-point free");
        w * self.chi_minus_identity() * self.chi_covered(&h)
    }

    /// exp(-2 pi i k).
    pub fn chi_minus_identity(&self) -> Complex64 {
        match self.kind {
            MultiplierKind::Trivial => Complex64::new(1.0, 0.0),
            MultiplierKind::EtaPower => Complex64::from_polar(1.0, -2.0 * PI * self.k),
        }
    }

    /// |chi(g1 g2) - omega_k(g1, g2) chi(g1) chi(g2)|; infinite if the winding is inconsistent.
    pub fn consistency_residual(&self, g1: &GroupElement, g2: &GroupElement) -> f64 {
        let w = match omega_k(&g1.to_mat2(), &g2.to_mat2(), &self.ctx) {
            Ok(w) => w,
            Err(_) => return f64::INFINITY,
        };
        (self.chi(&g1.mul(g2)) - w * self.chi(g1) * self.chi(g2)).norm()
    }

    /// Largest residual over random word pairs.
    pub fn sweep_residual(&self, pairs: usize, seed: u64, max_len: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..pairs)
            .map(|_| {
                let g1 = random_word(&mut rng, max_len);
                let g2 = random_word(&mut rng, max_len);
                self.consistency_residual(&g1, &g2)
            })
            .fold(0.0, f64::max)
    }
}
