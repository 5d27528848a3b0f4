//! Upper half-plane geometry and the weight-k factors built on arguments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("point {x}+{y}i is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub const I: Point = Point { x: 0.0, y: 1.0 };
}

/// Real 2x2 matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("determinant {det} is not 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// j(g, z) = cz + d
    pub fn j(&self, z: Point) -> Complex64 {
        Complex64::new(self.c * z.x + self.d, self.c * z.y)
    }
}

/// Weight k split as k1 + k2 with k1 integral and k2 in (-1/2, 1/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightContext {
    pub k: f64,
    pub k1: i64,
    pub k2: f64,
    pub a: f64,
    pub lambda0: f64,
}

impl WeightContext {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::domain("weight must be finite"));
        }
        let k1 = (k - 0.5).ceil() as i64;
        let k2 = k - k1 as f64;
        let ak = k.abs();
        Ok(Self {
            k,
            k1,
            k2,
            a: (ak - 0.5).max(0.5),
            lambda0: ak * (1.0 - ak),
        })
    }
}

/// u, sigma = 1 + u, cosh d = 1 + 2u and d for a pair of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairMetrics {
    pub u: f64,
    pub sigma: f64,
    pub cosh_d: f64,
    pub dist: f64,
}

impl PairMetrics {
    pub fn from_u(u: f64) -> Self {
        Self {
            u,
            sigma: 1.0 + u,
            cosh_d: 1.0 + 2.0 * u,
            dist: 2.0 * u.sqrt().asinh(),
        }
    }

    pub fn from_sigma(sigma: f64) -> Self {
        Self::from_u(sigma - 1.0)
    }
}

/// Argument in (-pi, pi], with a signed zero imaginary part read as +0.
pub fn principal_arg(z: Complex64) -> f64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    im.atan2(z.re)
}

pub fn moebius_act(g: &Mat2, z: Point) -> Point {
    let j = g.j(z);
    let n = j.norm_sqr();
    let num = Complex64::new(g.a * z.x + g.b, g.a * z.y);
    let x = (num * j.conj()).re / n;
    Point { x, y: z.y / n }
}

pub fn pair_metrics(z: Point, w: Point) -> PairMetrics {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    PairMetrics::from_u((dx * dx + dy * dy) / (4.0 * z.y * w.y))
}

/// exp(2ik arg(cz+d)).
pub fn j_phase(g: &Mat2, z: Point, ctx: &WeightContext) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * ctx.k * principal_arg(g.j(z)))
}

/// arg of 1 - zeta = 2i Im(w) / (z - conj w), in (-pi/2, pi/2).
fn h_angle(z: Point, w: Point) -> f64 {
    let t = Complex64::new(z.x - w.x, z.y + w.y);
    let at = principal_arg(t);
    debug_assert!((0.0..PI).contains(&at));
    FRAC_PI_2 - at
}

/// The weight-k point-pair phase ((1-zeta)^2/|1-zeta|^2)^k, zeta = (z-w)/(z-conj w).
pub fn h_k(z: Point, w: Point, ctx: &WeightContext) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * ctx.k * h_angle(z, w))
}

fn winding_at(g1: &Mat2, g2: &Mat2, z: Point) -> f64 {
    let g12 = g1.mul(g2);
    let gz = moebius_act(g2, z);
    let total = principal_arg(g1.j(gz)) + principal_arg(g2.j(z)) - principal_arg(g12.j(z));
    total / (2.0 * PI)
}

/// The integer w(g1, g2) measuring the branch defect of arg j under products.
pub fn winding_w(g1: &Mat2, g2: &Mat2) -> Result<i32> {
    let first = winding_at(g1, g2, Point { x: 0.0, y: 2.0 });
    let second = winding_at(g1, g2, Point { x: 1.0, y: 3.0 });
    let r = first.round();
    if (first - r).abs() > 1e-6 || (second - r).abs() > 1e-6 {
        return Err(Error::Consistency { first, second });
    }
    Ok(r as i32)
}

/// exp(4 pi i k w(g1, g2)).
pub fn omega_k(g1: &Mat2, g2: &Mat2, ctx: &WeightContext) -> Result<Complex64> {
    let w = winding_w(g1, g2)?;
    Ok(Complex64::from_polar(1.0, 4.0 * PI * ctx.k * w as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const S: Mat2 = Mat2 { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };
    const T: Mat2 = Mat2 { a: 1.0, b: 1.0, c: 0.0, d: 1.0 };

    fn random_sl2(rng: &mut ChaCha8Rng) -> Mat2 {
        // product of a rotation, a dilation and a shear keeps det = 1 to rounding
        let th: f64 = rng.gen_range(-PI..PI);
        let l: f64 = rng.gen_range(-1.0..1.0f64);
        let l = l.exp();
        let t: f64 = rng.gen_range(-3.0..3.0);
        let rot = Mat2 { a: th.cos(), b: -th.sin(), c: th.sin(), d: th.cos() };
        let dil = Mat2 { a: l, b: 0.0, c: 0.0, d: 1.0 / l };
        let sh = Mat2 { a: 1.0, b: t, c: 0.0, d: 1.0 };
        rot.mul(&dil).mul(&sh)
    }

    fn random_point(rng: &mut ChaCha8Rng) -> Point {
        Point { x: rng.gen_range(-2.0..2.0), y: rng.gen_range(0.2..3.0) }
    }

    #[test]
    fn actions() {
        let i = Point::I;
        assert_eq!(moebius_act(&Mat2::IDENTITY, i), i);
        let si = moebius_act(&S, i);
        assert!((si.x).abs() < 1e-15 && (si.y - 1.0).abs() < 1e-15);
        let t2 = moebius_act(&T, Point { x: 0.0, y: 2.0 });
        assert_eq!(t2, Point { x: 1.0, y: 2.0 });
        assert!(Mat2::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(Point::new(0.0, 0.0).is_err());
    }

    #[test]
    fn metrics() {
        let m = pair_metrics(Point::I, Point { x: 0.0, y: 4.0 });
        assert!((m.u - 9.0 / 16.0).abs() < 1e-15);
        assert!((m.cosh_d - 17.0 / 8.0).abs() < 1e-15);
        assert!((m.dist - 4f64.ln()).abs() < 1e-14);
        let z = Point { x: 0.3, y: 1.1 };
        let m = pair_metrics(z, z);
        assert_eq!((m.u, m.sigma, m.dist), (0.0, 1.0, 0.0));
    }

    #[test]
    fn invariance_and_action_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let g = random_sl2(&mut rng);
            let h = random_sl2(&mut rng);
            let (z, w) = (random_point(&mut rng), random_point(&mut rng));
            let a = pair_metrics(z, w);
            let b = pair_metrics(moebius_act(&g, z), moebius_act(&g, w));
            assert!((a.u - b.u).abs() <= 1e-10 * a.u.max(1.0));
            let p = moebius_act(&g.mul(&h), z);
            let q = moebius_act(&g, moebius_act(&h, z));
            assert!((p.z() - q.z()).norm() < 1e-12 * p.z().norm().max(1.0));
            assert!((a.u - pair_metrics(w, z).u).abs() < 1e-15);
        }
    }

    #[test]
    fn weight_context() {
        for &k in &[0.0, 0.5, -0.5, 1.3, -2.7, 2.0, 0.49] {
            let c = WeightContext::new(k).unwrap();
            assert!(c.k2 > -0.5 && c.k2 <= 0.5);
            assert_eq!(c.k1 as f64 + c.k2, k);
            assert!(c.lambda0 >= 0.25 - c.a * c.a - 1e-15);
        }
        assert_eq!(WeightContext::new(2.0).unwrap().a, 1.5);
        assert_eq!(WeightContext::new(0.5).unwrap().lambda0, 0.25);
    }

    #[test]
    fn phases() {
        let ctx = WeightContext::new(0.37).unwrap();
        assert_eq!(j_phase(&T, Point::I, &ctx), Complex64::new(1.0, 0.0));
        let v = j_phase(&S, Point::I, &ctx);
        assert!((v - Complex64::from_polar(1.0, PI * 0.37)).norm() < 1e-15);
        let z = Point { x: 0.4, y: 0.9 };
        assert!((h_k(z, z, &ctx) - 1.0).norm() < 1e-15);
        let c0 = WeightContext::new(0.0).unwrap();
        assert_eq!(h_k(z, Point::I, &c0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn h_k_matches_defining_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let (z, w) = (random_point(&mut rng), random_point(&mut rng));
            let k: f64 = rng.gen_range(-3.0..3.0);
            let ctx = WeightContext::new(k).unwrap();
            let zeta = (z.z() - w.z()) / (z.z() - w.z().conj());
            let base = (1.0 - zeta) * (1.0 - zeta) / (1.0 - zeta).norm_sqr();
            // branch rule: k1 integer power times principal k2 power
            let direct = base.powi(ctx.k1 as i32) * (base.ln() * ctx.k2).exp();
            assert!((h_k(z, w, &ctx) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn point_pair_transformation_and_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst_h: f64 = 0.0;
        let mut worst_c: f64 = 0.0;
        for _ in 0..1000 {
            let g = random_sl2(&mut rng);
            let eta = random_sl2(&mut rng);
            let (z, w) = (random_point(&mut rng), random_point(&mut rng));
            let ctx = WeightContext::new(rng.gen_range(-3.0..3.0)).unwrap();
            let lhs = h_k(moebius_act(&g, z), moebius_act(&g, w), &ctx);
            let rhs = h_k(z, w, &ctx) * j_phase(&g, z, &ctx) / j_phase(&g, w, &ctx);
            worst_h = worst_h.max((lhs - rhs).norm());
            let lhs = j_phase(&eta, moebius_act(&g, z), &ctx) * j_phase(&g, z, &ctx);
            let rhs = omega_k(&eta, &g, &ctx).unwrap() * j_phase(&eta.mul(&g), z, &ctx);
            worst_c = worst_c.max((lhs - rhs).norm());
        }
        assert!(worst_h <= 1e-12, "{worst_h}");
        assert!(worst_c <= 1e-12, "{worst_c}");
    }

    #[test]
    fn winding_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let g = random_sl2(&mut rng);
            assert_eq!(winding_w(&Mat2::IDENTITY, &g).unwrap(), 0);
            assert!(winding_w(&g, &random_sl2(&mut rng)).unwrap().abs() <= 1);
        }
        // S*S = -I: arg(S(Si) ...) evaluated by hand at z = i: pi/2 + pi/2 - pi = 0
        assert_eq!(winding_w(&S, &S).unwrap(), 0);
        let minus = Mat2::IDENTITY.neg();
        // -I * -I = I: pi + pi - 0 = 2 pi
        assert_eq!(winding_w(&minus, &minus).unwrap(), 1);
        let ctx = WeightContext::new(0.25).unwrap();
        assert!((omega_k(&minus, &minus, &ctx).unwrap() + 1.0).norm() < 1e-15);
        // z-independence at random points
        let g1 = Mat2 { a: 2.0, b: 1.0, c: -3.0, d: -1.0 };
        let g2 = Mat2 { a: -1.0, b: 0.0, c: 5.0, d: -1.0 };
        let w0 = winding_at(&g1, &g2, Point { x: 0.0, y: 2.0 });
        for _ in 0..20 {
            let z = random_point(&mut rng);
            assert!((winding_at(&g1, &g2, z) - w0).abs() < 1e-9);
        }
    }
}
