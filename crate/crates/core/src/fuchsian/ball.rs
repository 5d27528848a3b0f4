//! Metric balls {g : sigma(z, g w) <= R} in SL(2, Z).

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{DiscreteGroup, GroupElement};
use crate::error::{Error, Result};
use crate::geom::{moebius_act, pair_metrics, Point};

pub const DEFAULT_CANDIDATE_CAP: usize = 10_000_000;

// entries beyond this lose exactness in the f64 action
const EXACT_ENTRY_LIMIT: i64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallResult {
    /// Ordered by (c, d, translate index).
    pub elements: Vec<GroupElement>,
    #[serde(skip)]
    pub sigmas: Vec<f64>,
    pub radius_sigma: f64,
    pub certified: bool,
}

impl BallResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Rows a, b, c, d.
    pub fn rows(&self) -> Vec<[i64; 4]> {
        self.elements.iter().map(|g| [g.a, g.b, g.c, g.d]).collect()
    }

    /// Elements and displacements with sigma <= r, for r not above the radius.
    pub fn restrict(&self, r: f64) -> BallResult {
        let (elements, sigmas) = self
            .elements
            .iter()
            .zip(&self.sigmas)
            .filter(|(_, &s)| s <= r)
            .map(|(g, &s)| (*g, s))
            .unzip();
        BallResult {
            elements,
            sigmas,
            radius_sigma: r,
            certified: self.certified,
        }
    }
}

/// SL(2, Z), including -I.
#[derive(Debug, Clone, Copy)]
pub struct ModularGroup {
    pub candidate_cap: usize,
}

impl Default for ModularGroup {
    fn default() -> Self {
        Self {
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

/// Upper root of (1+q)^2 = 4Rq: the largest height ratio allowed inside the ball.
fn height_ratio_bound(r: f64) -> f64 {
    2.0 * r - 1.0 + 2.0 * (r * (r - 1.0)).sqrt()
}

fn lift(c: i64, d: i64) -> (i64, i64) {
    if c == 0 {
        return (d, 0);
    }
    let e = d.extended_gcd(&c);
    // e.x * d + e.y * c = 1, so (a, b) = (x, -y) has a d - b c = 1
    debug_assert_eq!(e.gcd, 1);
    (e.x, -e.y)
}

impl ModularGroup {
    fn sweep_row(
        &self,
        z: Point,
        w: Point,
        r: f64,
        c: i64,
        bound: f64,
        budget: &AtomicUsize,
    ) -> Result<Vec<(GroupElement, f64)>> {
        let mut out = Vec::new();
        let cf = c as f64;
        let rem = bound - cf * cf * w.y * w.y;
        if rem < 0.0 {
            return Ok(out);
        }
        let center = -cf * w.x;
        let half = rem.sqrt();
        let d_lo = (center - half).floor() as i64 - 1;
        let d_hi = (center + half).ceil() as i64 + 1;
        for d in d_lo..=d_hi {
            if c.gcd(&d) != 1 {
                continue;
            }
            let (a0, b0) = lift(c, d);
            let g0 = GroupElement { a: a0, b: b0, c, d };
            let p0 = moebius_act(&g0.to_mat2(), w);
            let disc = 4.0 * r * z.y * p0.y - (z.y + p0.y).powi(2);
            let slack = 1e-9 * (4.0 * r * z.y * p0.y);
            if disc < -slack {
                continue;
            }
            let spread = disc.max(0.0).sqrt();
            let shift = z.x - p0.x;
            let n_lo = (shift - spread).floor() as i64 - 1;
            let n_hi = (shift + spread).ceil() as i64 + 1;
            let used = budget.fetch_add((n_hi - n_lo + 1) as usize, Ordering::Relaxed);
            if used > self.candidate_cap {
                return Err(Error::BudgetExceeded {
                    cap: self.candidate_cap,
                });
            }
            for n in n_lo..=n_hi {
                let g = GroupElement {
                    a: a0 + n * c,
                    b: b0 + n * d,
                    c,
                    d,
                };
                let gw = moebius_act(&g.to_mat2(), w);
                let sigma = pair_metrics(z, gw).sigma;
                if sigma <= r {
                    out.push((g, sigma));
                }
            }
        }
        Ok(out)
    }
}

impl DiscreteGroup for ModularGroup {
    fn enumerate_ball(&self, z: Point, w: Point, radius_sigma: f64) -> Result<BallResult> {
        let r = radius_sigma;
        if !(r >= 1.0) || !r.is_finite() {
            return Err(Error::domain(format!("ball radius sigma must be >= 1, got {r}")));
        }
        // |cw + d|^2 <= t+ Im(w)/Im(z) for every member
        let bound = height_ratio_bound(r) * w.y / z.y * (1.0 + 1e-12);
        let c_max = (bound.sqrt() / w.y).floor() as i64 + 1;
        let budget = AtomicUsize::new(0);
        let rows: Vec<Result<Vec<(GroupElement, f64)>>> = (-c_max..=c_max)
            .into_par_iter()
            .map(|c| self.sweep_row(z, w, r, c, bound, &budget))
            .collect();
        let mut elements = Vec::new();
        let mut sigmas = Vec::new();
        for row in rows {
            for (g, s) in row? {
                elements.push(g);
                sigmas.push(s);
            }
        }
        let certified = elements.iter().all(|g| g.max_entry() < EXACT_ENTRY_LIMIT);
        Ok(BallResult {
            elements,
            sigmas,
            radius_sigma: r,
            certified,
        })
    }
}

/// The same ball by exhaustive search over integer matrices with entries
/// bounded from the geometry of the ball alone. Slow; meant as an oracle.
pub fn brute_force_ball(z: Point, w: Point, r: f64) -> BTreeSet<GroupElement> {
    let tp = height_ratio_bound(r);
    let mw = tp * w.y / z.y;
    let mz = tp * z.y / w.y;
    let cb = (mw.sqrt() / w.y).ceil() as i64 + 1;
    let db = (mw.sqrt() * (1.0 + w.x.abs() / w.y)).ceil() as i64 + 1;
    let ab = (mz.sqrt() * (1.0 + z.x.abs() / z.y)).ceil() as i64 + 1;
    let mut set = BTreeSet::new();
    let mut keep = |g: GroupElement| {
        let s = pair_metrics(z, moebius_act(&g.to_mat2(), w)).sigma;
        if s <= r {
            set.insert(g);
        }
    };
    for a in -ab..=ab {
        for c in -cb..=cb {
            for d in -db..=db {
                if c == 0 {
                    if a * d == 1 {
                        // b free: bounded by the horizontal spread
                        let span = (4.0 * r * z.y * tp * z.y).sqrt() + z.x.abs() + w.x.abs() + 2.0;
                        let bb = span.ceil() as i64;
                        for b in -bb..=bb {
                            keep(GroupElement { a, b, c, d });
                        }
                    }
                } else if (a * d - 1) % c == 0 {
                    keep(GroupElement { a, b: (a * d - 1) / c, c, d });
                }
            }
        }
    }
    set
}
