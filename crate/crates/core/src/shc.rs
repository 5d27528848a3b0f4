//! Transform pipeline between point-pair profiles and spectral multipliers.
//!
//! Forward: profile Phi -> Q -> g -> H(r). Inverse: g -> Q -> Phi.
//! Also the closed-form transform of the wave test function g_s and its
//! Pochhammer recurrence in s, which continues it to the left.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::WeightContext;
use crate::quad::{QuadValue, Quadrature};
use crate::specfun::{log_gamma, pochhammer};

type RealToComplex = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Radial profile Phi(x), x = |z-w|^2/(Im z Im w), with algebraic decay (4+x)^-delta.
#[derive(Clone)]
pub struct ProfileFunction {
    eval: RealToComplex,
    pub decay_exponent: f64,
}

impl fmt::Debug for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProfileFunction(delta = {})", self.decay_exponent)
    }
}

impl ProfileFunction {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static, decay_exponent: f64) -> Self {
        Self {
            eval: Arc::new(f),
            decay_exponent,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    /// The profile whose transform is H(r, g_s): x -> phi_s_closed(x/4, s, k).
    pub fn phi_s(p: &WaveTestParams) -> Result<Self> {
        let pref = crate::kernels::phi_s_prefactor(p.s, p.k)?;
        let (s, k) = (p.s, p.k);
        Ok(Self::new(
            move |x| {
                crate::kernels::phi_s_shape(x / 4.0, s, k).map_or(nan(), |v| pref * v)
            },
            s.re,
        ))
    }

    /// Largest |Phi(x)| (4+x)^delta over the sample points.
    pub fn decay_constant(&self, samples: &[f64]) -> f64 {
        samples
            .iter()
            .map(|&x| self.eval(x).norm() * (4.0 + x).powf(self.decay_exponent))
            .fold(0.0, f64::max)
    }
}

/// Even test function g(u) with exponential decay rate `decay_a`.
#[derive(Clone)]
pub struct EvenTestFunction {
    eval: RealToComplex,
    derivative: Option<RealToComplex>,
    pub decay_a: f64,
    pub smooth_order: u32,
}

impl fmt::Debug for EvenTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EvenTestFunction(a = {}, n = {}, analytic derivative: {})",
            self.decay_a,
            self.smooth_order,
            self.derivative.is_some()
        )
    }
}

impl EvenTestFunction {
    pub fn new(
        f: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        decay_a: f64,
        smooth_order: u32,
    ) -> Self {
        Self {
            eval: Arc::new(f),
            derivative: None,
            decay_a,
            smooth_order,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        (self.eval)(u)
    }

    pub fn derivative(&self, u: f64) -> Option<Complex64> {
        self.derivative.as_ref().map(|d| d(u))
    }

    /// g_s(u) = Gamma(s-1/2)/Gamma(s) cosh(u)^-(s-1/2), in the class a = A, n = 4.
    pub fn g_s(p: &WaveTestParams) -> Result<Self> {
        let c = wave_constant(p.s)?;
        let nu = p.s - 0.5;
        let a = WeightContext::new(p.k)?.a;
        let g = Self::new(move |u: f64| c * cosh_pow(u, -nu), a, 4);
        Ok(g.with_derivative(move |u: f64| -c * nu * u.tanh() * cosh_pow(u, -nu)))
    }
}

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

/// cosh(u)^p without overflow for large |u|.
fn cosh_pow(u: f64, p: Complex64) -> Complex64 {
    let au = u.abs();
    // ln cosh u = |u| - ln 2 + ln(1 + e^{-2|u|})
    let ln_cosh = au - std::f64::consts::LN_2 + (-2.0 * au).exp().ln_1p();
    (p * ln_cosh).exp()
}

fn wave_constant(s: Complex64) -> Result<Complex64> {
    Ok((log_gamma(s - 0.5)? - log_gamma(s)?).exp())
}

/// Spectral side H(r), with the decay exponent delta of h(r) << (1+|r|)^(-2-delta) when known.
#[derive(Clone)]
pub struct FourierSide {
    eval: Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
    pub delta: Option<f64>,
}

impl fmt::Debug for FourierSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FourierSide(delta = {:?})", self.delta)
    }
}

impl FourierSide {
    pub fn eval(&self, r: Complex64) -> Result<Complex64> {
        (self.eval)(r)
    }

    /// Numerical transform of g, tagged with the delta of a decay report.
    pub fn of(g: EvenTestFunction, report: Option<&DecayReport>) -> Self {
        Self {
            eval: Arc::new(move |r| fourier_h(&g, r).map(|q| q.value)),
            delta: report.map(|r| r.delta),
        }
    }

    /// Closed form for g_s.
    pub fn of_g_s(p: WaveTestParams) -> Self {
        Self {
            eval: Arc::new(move |r| h_gs_closed(&p, r)),
            delta: Some(2.0),
        }
    }
}

/// Spectral parameter s of the wave test function, with its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveTestParams {
    pub s: Complex64,
    pub k: f64,
}

impl WaveTestParams {
    pub fn new(s: Complex64, k: f64) -> Result<Self> {
        if !(s.re > 1f64.max(k.abs())) {
            return Err(Error::domain(format!(
                "wave test function needs Re(s) > max(1, |k|), got s = {s}, k = {k}"
            )));
        }
        Ok(Self { s, k })
    }

    /// No range check; for the continued coefficient function.
    pub fn unchecked(s: Complex64, k: f64) -> Self {
        Self { s, k }
    }
}

fn quad() -> Quadrature {
    Quadrature {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 4000,
    }
}

fn check_error(q: QuadValue, limit: f64) -> Result<QuadValue> {
    if q.error <= limit.max(1e-12 * q.value.norm()) {
        Ok(q)
    } else {
        Err(Error::QuadratureFailure {
            estimate: q.error,
            tolerance: limit,
        })
    }
}

/// Q(y) = int Phi(y+v^2) ((sqrt(y+4)+iv)/(sqrt(y+4)-iv))^k dv.
pub fn q_forward(phi: &ProfileFunction, y: f64, k: f64) -> Result<QuadValue> {
    if !(y >= 0.0) {
        return Err(Error::domain(format!("q_forward needs y >= 0, got {y}")));
    }
    let root = (y + 4.0).sqrt();
    // the v and -v phases are conjugate, so the sum is 2 cos(2k atan(v/root))
    let f = |v: f64| phi.eval(y + v * v) * (2.0 * (2.0 * k * v.atan2(root)).cos());
    let q = quad().integrate_to_infinity(f, 0.0, root.max(1.0))?;
    check_error(q, 1e-10)
}

/// Q'(y) for Q = q_forward(phi): Q/(2(y+4)) + int Phi'(y+v^2) (1 + v^2/(y+4)) (phase) dv,
/// with Phi' from 5-point differences of the profile itself.
pub fn q_forward_derivative(phi: &ProfileFunction, y: f64, k: f64) -> Result<QuadValue> {
    let q0 = q_forward(phi, y, k)?;
    let r2 = y + 4.0;
    let root = r2.sqrt();
    let dphi = |x: f64| {
        let h = 1e-3 * (1.0 + x);
        let lo = (x - 2.0 * h).max(0.0);
        if lo == x - 2.0 * h {
            (phi.eval(x - 2.0 * h) - 8.0 * phi.eval(x - h) + 8.0 * phi.eval(x + h) - phi.eval(x + 2.0 * h))
                / (12.0 * h)
        } else {
            five_point(&|t| phi.eval(t), x)
        }
    };
    let f = |v: f64| dphi(y + v * v) * ((1.0 + v * v / r2) * 2.0 * (2.0 * k * v.atan2(root)).cos());
    let q = quad().integrate_to_infinity(f, 0.0, root.max(1.0))?;
    Ok(QuadValue {
        value: q0.value / (2.0 * r2) + q.value,
        error: q0.error / (2.0 * r2) + q.error,
    })
}

/// H(r) from a profile by the forward steps: Q, then g(u) = Q(4 sinh^2(u/2)), then the cosine transform.
pub fn forward_h(phi: &ProfileFunction, r: Complex64, k: f64) -> Result<QuadValue> {
    let fail = std::cell::Cell::new(None);
    let f = |u: f64| {
        let sh = (0.5 * u).sinh();
        match q_forward(phi, 4.0 * sh * sh, k) {
            Ok(q) => 2.0 * (r * u).cos() * q.value,
            Err(e) => {
                fail.set(Some(e));
                nan()
            }
        }
    };
    let width = if r.norm() > 1.0 { 1.0 / r.norm() } else { 1.0 };
    let q = Quadrature::with_tol(1e-12, 1e-9).integrate_to_infinity(f, 0.0, width);
    if let Some(e) = fail.take() {
        return Err(e);
    }
    q
}

/// g(u) = Q(2(cosh u - 1)).
pub fn g_from_q<F>(q: F, u: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let sh = (0.5 * u).sinh();
    q(4.0 * sh * sh)
}

/// H(r) = 2 int_0^inf cos(ur) g(u) du.
pub fn fourier_h(g: &EvenTestFunction, r: Complex64) -> Result<QuadValue> {
    if r.im.abs() > g.decay_a * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "|Im r| = {} exceeds the decay rate {}",
            r.im.abs(),
            g.decay_a
        )));
    }
    let width = if r.norm() > 1.0 { 1.0 / r.norm() } else { 1.0 };
    let f = |u: f64| 2.0 * (r * u).cos() * g.eval(u);
    let q = quad().integrate_to_infinity(f, 0.0, width)?;
    check_error(q, 1e-10)
}

/// Inverse cosine transform g(u) = (1/pi) int_0^inf H(r) cos(ur) dr.
pub fn inverse_fourier(h: &FourierSide, u: f64) -> Result<QuadValue> {
    let f = |r: f64| {
        h.eval(Complex64::new(r, 0.0))
            .map_or(nan(), |v| v * (u * r).cos() / std::f64::consts::PI)
    };
    quad().integrate_to_infinity(f, 0.0, 1.0)
}

/// 2^{s-3/2} Gamma((s-1/2-ir)/2) Gamma((s-1/2+ir)/2) / Gamma(s).
pub fn h_gs_closed(p: &WaveTestParams, r: Complex64) -> Result<Complex64> {
    let s = p.s;
    if !(s.re - 0.5 > r.im.abs()) {
        return Err(Error::domain(format!(
            "closed form needs Re(s) - 1/2 > |Im r|, got s = {s}, r = {r}"
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    let a = (s - 0.5 - i * r) * 0.5;
    let b = (s - 0.5 + i * r) * 0.5;
    let ln = (s - 1.5) * std::f64::consts::LN_2 + log_gamma(a)? + log_gamma(b)? - log_gamma(s)?;
    Ok(ln.exp())
}

fn recurrence_roots(s: Complex64, r: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    (s * 0.5 - 0.25 - i * r * 0.5, s * 0.5 - 0.25 + i * r * 0.5)
}

/// Distance in s below which a catalogued pole is reported.
pub const POLE_RADIUS: f64 = 1e-3;

/// 2^{-2n} (s)_{2n} / ((s/2-1/4-ir/2)_n (s/2-1/4+ir/2)_n), so that H(r, g_s) = factor H(r, g_{s+2n}).
pub fn h_recurrence_factor(p: &WaveTestParams, r: Complex64, n: usize) -> Result<Complex64> {
    let (a, b) = recurrence_roots(p.s, r);
    for j in 0..n {
        for root in [a + j as f64, b + j as f64] {
            if root.norm() < 1e-14 {
                return Err(Error::Pole {
                    what: "h_recurrence_factor",
                    at: p.s,
                });
            }
        }
    }
    let num = pochhammer(p.s, 2 * n) * 2f64.powi(-2 * n as i32);
    Ok(num / (pochhammer(a, n) * pochhammer(b, n)))
}

/// The continued coefficient function factor(s, r, n) * H(r, g_{s+2n}).
pub fn h_continued(p: &WaveTestParams, r: Complex64, n: usize) -> Result<Complex64> {
    let bound = 1f64.max(p.k.abs()) + 0.5;
    if !(p.s.re + 2.0 * n as f64 > bound) {
        return Err(Error::domain(format!(
            "continuation depth n = {n} too small for Re(s) = {}",
            p.s.re
        )));
    }
    let (a, b) = recurrence_roots(p.s, r);
    for m in 0..n {
        // a + m = 0 at s = 1/2 + ir - 2m; the distance in s is twice |a + m|
        for root in [a + m as f64, b + m as f64] {
            if 2.0 * root.norm() < POLE_RADIUS {
                return Err(Error::Pole {
                    what: "continued Fourier coefficient",
                    at: p.s,
                });
            }
        }
    }
    let shifted = WaveTestParams::unchecked(p.s + 2.0 * n as f64, p.k);
    Ok(h_recurrence_factor(p, r, n)? * h_gs_closed(&shifted, r)?)
}

/// Q(y) = g(2 log(sqrt(y+4)/2 + sqrt(y)/2)) = g(2 asinh(sqrt(y)/2)).
pub fn q_inverse(g: &EvenTestFunction, y: f64) -> Result<Complex64> {
    if !(y >= 0.0) {
        return Err(Error::domain(format!("q_inverse needs y >= 0, got {y}")));
    }
    Ok(g.eval(2.0 * (0.5 * y.sqrt()).asinh()))
}

/// How Q' was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

/// Q'(y) for Q = q_inverse(g): from g' when available, else 5-point differences.
pub fn q_prime(g: &EvenTestFunction, y: f64) -> (Complex64, DerivativeSource) {
    if g.derivative.is_some() {
        if y > 1e-8 {
            let u = 2.0 * (0.5 * y.sqrt()).asinh();
            // dy/du = 2 sinh u = sqrt(y (y + 4))
            let d = g.derivative(u).expect("checked") / (y * (y + 4.0)).sqrt();
            return (d, DerivativeSource::Analytic);
        }
    }
    let q = |t: f64| q_inverse(g, t).unwrap_or(nan());
    (five_point(&q, y), DerivativeSource::FiniteDifference)
}

/// Central 5-point derivative with h = 1e-5 (1+|y|); one-sided near y = 0.
pub fn five_point<F: Fn(f64) -> Complex64>(q: &F, y: f64) -> Complex64 {
    let h = 1e-5 * (1.0 + y.abs());
    if y >= 2.0 * h {
        (q(y - 2.0 * h) - 8.0 * q(y - h) + 8.0 * q(y + h) - q(y + 2.0 * h)) / (12.0 * h)
    } else {
        (-25.0 * q(y) + 48.0 * q(y + h) - 36.0 * q(y + 2.0 * h) + 16.0 * q(y + 3.0 * h)
            - 3.0 * q(y + 4.0 * h))
            / (12.0 * h)
    }
}

/// (sqrt(a+t^2)-t)/(sqrt(a+t^2)+t) for t >= 0 without cancellation.
pub(crate) fn lift_ratio(a: f64, t: f64) -> f64 {
    let root = (a + t * t).sqrt();
    let den = root + t;
    a / (den * den)
}

/// Phi(x) = -(1/pi) int Q'(x+t^2) ((sqrt(x+4+t^2)-t)/(sqrt(x+4+t^2)+t))^k dt.
pub fn phi_inverse<F>(q_prime: F, x: f64, k: f64) -> Result<QuadValue>
where
    F: Fn(f64) -> Complex64,
{
    if !(x >= 0.0) {
        return Err(Error::domain(format!("phi_inverse needs x >= 0, got {x}")));
    }
    let a = x + 4.0;
    let f = |t: f64| {
        let rho = lift_ratio(a, t);
        q_prime(x + t * t) * (rho.powf(k) + rho.powf(-k))
    };
    let q = quad().integrate_to_infinity(f, 0.0, a.sqrt())?;
    let scale = -1.0 / std::f64::consts::PI;
    Ok(QuadValue {
        value: q.value * scale,
        error: q.error / std::f64::consts::PI,
    })
}

/// Result of a decay-class test for an even test function.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub decay_a: f64,
    pub smooth_order: u32,
    pub evenness_residual: f64,
    /// sup |g^(j)(u)| e^{a|u|} on the sample grid, j = 0..=n
    pub weighted_sup: Vec<f64>,
    pub delta: f64,
    pub derivative_source: DerivativeSource,
}

fn nth_difference<F: Fn(f64) -> Complex64>(g: &F, u: f64, order: u32, h: f64) -> Complex64 {
    // central difference: sum (-1)^i C(n,i) g(u + (n/2 - i) h) / h^n
    let n = order as i32;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    for i in 0..=n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += g(u + (0.5 * n as f64 - i as f64) * h) * (sign * binom);
        binom = binom * (n - i) as f64 / (i + 1) as f64;
    }
    acc / h.powi(n)
}

/// Checks evenness and e^{a|u|}-boundedness of g and its first n derivatives.
///
/// Boundedness is read as: the weighted supremum over the outer half of the
/// grid does not exceed twice the one over the inner half (nor 1 when that is smaller).
pub fn decay_class_check(g: &EvenTestFunction, a: f64, n: u32) -> Result<DecayReport> {
    const U_MAX: f64 = 40.0;
    const POINTS: usize = 2001;
    let grid: Vec<f64> = (0..POINTS).map(|i| U_MAX * i as f64 / (POINTS - 1) as f64).collect();
    let mut evenness: f64 = 0.0;
    for &u in &grid {
        let (p, m) = (g.eval(u), g.eval(-u));
        let res = (p - m).norm() / p.norm().max(1.0);
        evenness = evenness.max(res);
        if !(res <= 1e-13) {
            return Err(Error::ClassViolation(format!(
                "not even at u = {u}: g(u) = {p}, g(-u) = {m}"
            )));
        }
    }
    let f = |u: f64| g.eval(u);
    let mut sups = Vec::new();
    for order in 0..=n {
        let h = 1e-2;
        let weighted = |u: f64| {
            let v = if order == 0 { f(u) } else { nth_difference(&f, u, order, h) };
            v.norm() * (a * u).exp()
        };
        let half = POINTS / 2;
        let mut inner: f64 = 0.0;
        for &u in &grid[..half] {
            inner = inner.max(weighted(u));
        }
        let mut outer: f64 = 0.0;
        for &u in &grid[half..] {
            let w = weighted(u);
            if !w.is_finite() || w > 2.0 * inner.max(0.5) {
                return Err(Error::ClassViolation(format!(
                    "derivative {order}: |g^({order})(u)| e^(a|u|) = {w:e} at u = {u} exceeds the bound {:e} from |u| <= {}",
                    2.0 * inner.max(0.5),
                    U_MAX / 2.0
                )));
            }
            outer = outer.max(w);
        }
        sups.push(inner.max(outer));
    }
    Ok(DecayReport {
        decay_a: a,
        smooth_order: n,
        evenness_residual: evenness,
        weighted_sup: sups,
        delta: n as f64 - 2.0,
        derivative_source: if g.derivative.is_some() {
            DerivativeSource::Analytic
        } else {
            DerivativeSource::FiniteDifference
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(s: f64, k: f64) -> WaveTestParams {
        WaveTestParams::new(c(s, 0.0), k).unwrap()
    }

    #[test]
    fn q_forward_simple() {
        let zero = ProfileFunction::new(|_| c(0.0, 0.0), 2.0);
        assert_eq!(q_forward(&zero, 1.0, 0.3).unwrap().value, c(0.0, 0.0));
        let exp = ProfileFunction::new(|x| c((-x).exp(), 0.0), 10.0);
        let q = q_forward(&exp, 1.0, 0.0).unwrap();
        assert!((q.value.re - PI.sqrt() * (-1.0f64).exp()).abs() < 1e-12);
        assert!(q.error <= 1e-10);
    }

    #[test]
    fn g_from_q_composition() {
        let q = |y: f64| Ok(c((-y).exp(), 0.0));
        let v = g_from_q(q, 1.0).unwrap();
        assert!((v.re - (-2.0 * (1f64.cosh() - 1.0)).exp()).abs() < 1e-15);
        assert_eq!(g_from_q(q, 1.3).unwrap(), g_from_q(q, -1.3).unwrap());
        assert_eq!(g_from_q(q, 0.0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn fourier_of_g_s() {
        let p = params(2.0, 0.0);
        let g = EvenTestFunction::g_s(&p).unwrap();
        let gamma34 = crate::specfun::gamma(c(0.75, 0.0)).unwrap().re;
        let want = 2f64.sqrt() * gamma34 * gamma34;
        let num = fourier_h(&g, c(0.0, 0.0)).unwrap().value;
        let closed = h_gs_closed(&p, c(0.0, 0.0)).unwrap();
        assert!((num.re - want).abs() < 1e-10, "{num} vs {want}");
        assert!((closed.re - want).abs() < 1e-13);
        let p = params(2.5, 0.0);
        let g = EvenTestFunction::g_s(&p).unwrap();
        let a = fourier_h(&g, c(1.7, 0.0)).unwrap().value;
        let b = fourier_h(&g, c(-1.7, 0.0)).unwrap().value;
        assert!((a - b).norm() < 1e-12);
        let num = fourier_h(&g, c(1.0, 0.0)).unwrap().value;
        let closed = h_gs_closed(&p, c(1.0, 0.0)).unwrap();
        assert!((num - closed).norm() < 1e-9);
        assert!(closed.im.abs() < 1e-15);
        assert!(fourier_h(&g, c(0.0, 2.0)).is_err());
    }

    #[test]
    fn recurrence() {
        assert_eq!(h_recurrence_factor(&params(2.5, 0.0), c(1.0, 0.0), 0).unwrap(), c(1.0, 0.0));
        for (s, r, n) in [(2.5, 1.0, 1), (3.2, 0.4, 2)] {
            let p = params(s, 0.0);
            let f = h_recurrence_factor(&p, c(r, 0.0), n).unwrap();
            let lhs = h_gs_closed(&p, c(r, 0.0)).unwrap();
            let rhs = f * h_gs_closed(&params(s + 2.0 * n as f64, 0.0), c(r, 0.0)).unwrap();
            assert!((lhs - rhs).norm() <= 1e-11, "{s} {r} {n}");
        }
    }

    #[test]
    fn continuation() {
        let p = WaveTestParams::unchecked(c(3.0, 0.0), 0.0);
        let v = h_continued(&p, c(1.0, 0.0), 1).unwrap();
        assert!((v - h_gs_closed(&p, c(1.0, 0.0)).unwrap()).norm() < 1e-10);
        let p = WaveTestParams::unchecked(c(0.1, 0.0), 0.0);
        let a = h_continued(&p, c(2.0, 0.0), 2).unwrap();
        let b = h_continued(&p, c(2.0, 0.0), 3).unwrap();
        assert!(a.re.is_finite() && (a - b).norm() <= 1e-9 * a.norm().max(1.0));
        // pole at s = 1/2 + i - 2
        let pole = c(-1.5, 1.0);
        let near = WaveTestParams::unchecked(pole + c(5e-4, 0.0), 0.0);
        assert!(matches!(h_continued(&near, c(1.0, 0.0), 2), Err(Error::Pole { .. })));
        let mut last = 0.0;
        for e in [1e-1, 1e-2, 2e-3] {
            let p = WaveTestParams::unchecked(pole + c(e, 0.0), 0.0);
            let v = h_continued(&p, c(1.0, 0.0), 2).unwrap().norm();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn q_inverse_round_trip() {
        let p = params(2.5, 0.0);
        let g = EvenTestFunction::g_s(&p).unwrap();
        assert_eq!(q_inverse(&g, 0.0).unwrap(), g.eval(0.0));
        for u in [0.0, 0.5, 2.0] {
            let back = g_from_q(|y| q_inverse(&g, y), u).unwrap();
            assert!((back - g.eval(u)).norm() < 1e-12);
        }
        let direct = g.eval((1.0f64 + 1.5).acosh());
        assert!((q_inverse(&g, 3.0).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn phi_inverse_gaussian() {
        let v = phi_inverse(|y| c(-(-y).exp(), 0.0), 1.0, 0.0).unwrap();
        assert!((v.value.re - (-1.0f64).exp() / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn q_prime_sources_agree() {
        let g = EvenTestFunction::g_s(&params(2.5, 0.5)).unwrap();
        let plain = EvenTestFunction::new(
            {
                let g = g.clone();
                move |u| g.eval(u)
            },
            0.5,
            4,
        );
        for y in [0.3, 1.0, 4.0] {
            let (a, sa) = q_prime(&g, y);
            let (b, sb) = q_prime(&plain, y);
            assert_eq!((sa, sb), (DerivativeSource::Analytic, DerivativeSource::FiniteDifference));
            assert!((a - b).norm() < 1e-9, "{a} {b}");
        }
    }

    #[test]
    fn decay_classes() {
        let g = EvenTestFunction::g_s(&params(2.5, 0.0)).unwrap();
        let rep = decay_class_check(&g, 0.5, 4).unwrap();
        assert_eq!(rep.delta, 2.0);
        let odd = EvenTestFunction::new(|u| c(u, 0.0), 0.0, 2);
        assert!(matches!(decay_class_check(&odd, 0.0, 2), Err(Error::ClassViolation(_))));
        let lorentz = EvenTestFunction::new(|u| c(1.0 / (1.0 + u * u), 0.0), 0.0, 2);
        assert!(decay_class_check(&lorentz, 1.0, 2).is_err());
        assert!(decay_class_check(&lorentz, 0.0, 2).is_ok());
    }

    #[test]
    fn forward_pipeline_matches_closed_form() {
        for (k, s) in [(0.0, 2.5), (1.3, 4.0)] {
            let p = params(s, k);
            let phi = ProfileFunction::phi_s(&p).unwrap();
            for r in [0.0, 1.0] {
                let h = forward_h(&phi, c(r, 0.0), k).unwrap().value;
                let want = h_gs_closed(&p, c(r, 0.0)).unwrap();
                assert!((h - want).norm() <= 1e-5 * want.norm(), "{k} {s} {r}: {h} {want}");
            }
        }
    }

    #[test]
    fn profile_round_trip() {
        for k in [0.0, 0.5] {
            let p = params(2.5, k);
            let phi = ProfileFunction::phi_s(&p).unwrap();
            for x in [0.0, 1.0, 4.0] {
                let back = phi_inverse(|y| q_forward_derivative(&phi, y, k).map_or(nan(), |q| q.value), x, k)
                    .unwrap()
                    .value;
                assert!((back - phi.eval(x)).norm() < 1e-7, "{k} {x}: {back} {}", phi.eval(x));
            }
        }
    }
}
