//! The modular group cover SL(2, Z): elements, metric balls, the counting
//! function, Dedekind sums and eta-power multiplier systems.

mod ball;
mod dedekind;
mod multiplier;

pub use ball::{brute_force_ball, BallResult, ModularGroup, DEFAULT_CANDIDATE_CAP};
pub use dedekind::{dedekind_sum, MAX_MODULUS};
pub use multiplier::{eta_phase, MultiplierKind, MultiplierSystem};

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point};

/// An integer matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b, self.c, self.d].serialize(s)
    }
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::domain(format!("({a},{b};{c},{d}) has determinant {det}")));
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    pub const MINUS_IDENTITY: Self = Self { a: -1, b: 0, c: 0, d: -1 };
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    pub const T_INV: Self = Self { a: 1, b: -1, c: 0, d: 1 };
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d && self.a.abs() == 1
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2 {
            a: self.a as f64,
            b: self.b as f64,
            c: self.c as f64,
            d: self.d as f64,
        }
    }

    pub fn max_entry(&self) -> i64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// A random word of length 1..=max_len in the letters T, S, -I.
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> GroupElement {
    let len = rng.gen_range(1..=max_len);
    (0..len).fold(GroupElement::IDENTITY, |acc, _| {
        let letter = match rng.gen_range(0..3) {
            0 => GroupElement::T,
            1 => GroupElement::S,
            _ => GroupElement::MINUS_IDENTITY,
        };
        acc.mul(&letter)
    })
}

/// What a group must offer for truncated sums over it.
pub trait DiscreteGroup: Sync {
    fn enumerate_ball(&self, z: Point, w: Point, radius_sigma: f64) -> Result<BallResult>;

    /// N(rho; z, w): elements with hyperbolic distance d(z, gw) < rho.
    fn counting_n(&self, rho: f64, z: Point, w: Point) -> Result<usize> {
        if !(rho > 0.0) {
            return Err(Error::domain(format!("counting radius must be positive, got {rho}")));
        }
        let r = 0.5 * (1.0 + rho.cosh());
        let ball = self.enumerate_ball(z, w, r)?;
        Ok(ball
            .elements
            .iter()
            .zip(&ball.sigmas)
            .filter(|(_, &s)| s < r)
            .count())
    }
}

/// Ball in the modular group with the default candidate cap.
pub fn enumerate_ball(z: Point, w: Point, radius_sigma: f64) -> Result<BallResult> {
    ModularGroup::default().enumerate_ball(z, w, radius_sigma)
}

pub fn counting_n(rho: f64, z: Point, w: Point) -> Result<usize> {
    ModularGroup::default().counting_n(rho, z, w)
}
