//! Deterministic adaptive quadrature.
//!
//! Globally adaptive Gauss-Kronrod (10/21 points) on finite intervals,
//! dyadic panels for half-lines, and a tanh-sinh rule for integrands with
//! endpoint singularities. Interval results are summed pairwise in left-to-right
//! order, so the output is a pure function of the integrand and the settings.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadValue {
    pub value: Complex64,
    pub error: f64,
}

impl QuadValue {
    fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_478,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> QuadValue {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_k = fc.norm() * WGK[10];
    let mut vals = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        vals[j] = (f1, f2);
        kron += (f1 + f2) * WGK[j];
        abs_k += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        asc += ((vals[j].0 - mean).norm() + (vals[j].1 - mean).norm()) * WGK[j];
    }
    let value = kron * half;
    let resabs = abs_k * half.abs();
    let resasc = asc * half.abs();
    let mut err = ((kron - gauss) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        err = f64::INFINITY;
    }
    QuadValue { value, error: err }
}

struct Piece {
    a: f64,
    b: f64,
    q: QuadValue,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.q
            .error
            .total_cmp(&o.q.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

/// Sum in a fixed binary tree over the given order.
pub(crate) fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

impl Quadrature {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }

    /// Adaptive integration without the failure check; the flag tells whether
    /// the tolerance was met.
    pub fn adapt<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> (QuadValue, bool) {
        if a == b {
            return (QuadValue::zero(), true);
        }
        let first = gk21(f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Piece { a, b, q: first });
        let mut total = first.value;
        let mut err = first.error;
        let mut converged = err <= self.target(total);
        while !converged && heap.len() < self.max_intervals {
            let worst = heap.pop().expect("non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
                heap.push(worst);
                break;
            }
            let left = gk21(f, worst.a, mid);
            let right = gk21(f, mid, worst.b);
            total += left.value + right.value - worst.q.value;
            err += left.error + right.error - worst.q.error;
            heap.push(Piece { a: worst.a, b: mid, q: left });
            heap.push(Piece { a: mid, b: worst.b, q: right });
            // refresh the running error to keep cancellation drift out
            if heap.len() % 64 == 0 {
                err = heap.iter().map(|p| p.q.error).sum();
            }
            converged = err <= self.target(total);
        }
        let mut pieces = heap.into_vec();
        pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
        let vals: Vec<Complex64> = pieces.iter().map(|p| p.q.value).collect();
        let value = pairwise_sum(&vals);
        let error: f64 = pieces.iter().map(|p| p.q.error).sum();
        let ok = error <= self.target(value) && error.is_finite();
        (QuadValue { value, error }, ok)
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Result<QuadValue> {
        let (q, ok) = self.adapt(&f, a, b);
        self.check(q, ok)
    }

    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadValue> {
        self.integrate(|x| Complex64::new(f(x), 0.0), a, b)
    }

    fn check(&self, q: QuadValue, ok: bool) -> Result<QuadValue> {
        if ok {
            Ok(q)
        } else {
            Err(Error::QuadratureFailure {
                estimate: q.error,
                tolerance: self.target(q.value),
            })
        }
    }

    /// Integral over [a, inf) on panels of width first_width * 2^j.
    ///
    /// Stops after two consecutive panels fall below a quarter of the target;
    /// the last panel magnitude is added to the error as a tail allowance.
    pub fn integrate_to_infinity<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        a: f64,
        first_width: f64,
    ) -> Result<QuadValue> {
        let (q, ok) = self.half_line(&f, a, first_width);
        self.check(q, ok)
    }

    fn half_line<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, first_width: f64) -> (QuadValue, bool) {
        let panel_rule = Quadrature {
            abs_tol: self.abs_tol / 8.0,
            ..*self
        };
        let mut vals = Vec::new();
        let mut err = 0.0;
        let mut ok = true;
        let mut lo = a;
        let mut width = first_width;
        let mut small_run = 0;
        let mut running = Complex64::new(0.0, 0.0);
        for _ in 0..80 {
            let hi = lo + width;
            let (q, pok) = panel_rule.adapt(f, lo, hi);
            ok &= pok;
            vals.push(q.value);
            running += q.value;
            err += q.error;
            let mag = q.value.norm() + q.error;
            if mag <= 0.25 * self.target(running) {
                small_run += 1;
                if small_run >= 2 {
                    err += mag;
                    let value = pairwise_sum(&vals);
                    return (QuadValue { value, error: err }, ok && err <= self.target(value));
                }
            } else {
                small_run = 0;
            }
            lo = hi;
            width *= 2.0;
        }
        let value = pairwise_sum(&vals);
        (QuadValue { value, error: f64::INFINITY }, false)
    }

    /// Integral over the whole line, split at `center`.
    pub fn integrate_real_line<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        center: f64,
        first_width: f64,
    ) -> Result<QuadValue> {
        let (r, okr) = self.half_line(&f, center, first_width);
        let (l, okl) = self.half_line(&|x: f64| f(2.0 * center - x), center, first_width);
        let q = QuadValue {
            value: l.value + r.value,
            error: l.error + r.error,
        };
        self.check(q, okl && okr)
    }
}

/// Double-exponential rule on (a, b); the integrand is never evaluated at the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadValue> {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let t_max = 3.6;
    let node = |t: f64| -> Complex64 {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        // distance to the nearer endpoint, free of cancellation
        let gap = half / (u.abs().exp() * ch);
        let x = if t < 0.0 { a + gap } else { b - gap };
        let x = if t == 0.0 { center } else { x };
        if x <= a.min(b) || x >= a.max(b) {
            return Complex64::new(0.0, 0.0);
        }
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        f(x) * w
    };
    let mut h = 0.5;
    let n0 = (t_max / h) as i64;
    let mut terms: Vec<Complex64> = (-n0..=n0).map(|i| node(i as f64 * h)).collect();
    let mut estimate = pairwise_sum(&terms) * h;
    for _level in 0..9 {
        h *= 0.5;
        let n = (t_max / h) as i64;
        let fresh: Vec<Complex64> = (-n..=n).filter(|i| i % 2 != 0).map(|i| node(i as f64 * h)).collect();
        terms.extend(fresh);
        let next = pairwise_sum(&terms) * h;
        let diff = (next - estimate).norm();
        estimate = next;
        if diff <= tol.max(1e-15 * next.norm()) {
            return Ok(QuadValue {
                value: next,
                error: diff,
            });
        }
    }
    Err(Error::QuadratureFailure {
        estimate: f64::NAN,
        tolerance: tol,
    })
}
