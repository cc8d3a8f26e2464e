//! Globally adaptive 21-point Gauss–Kronrod quadrature, plus the two
//! variable changes used for integrals over the half line.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::sum::NeumaierSum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { rel_tol: 1e-10, abs_tol: 1e-14, max_intervals: 4000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
    #[error("interval limit reached (value {value}, error estimate {abs_error})")]
    MaxIntervals { value: f64, abs_error: f64 },
    #[error("roundoff prevents reaching tolerance (value {value}, error estimate {abs_error})")]
    Roundoff { value: f64, abs_error: f64 },
    #[error("invalid integration limits")]
    BadLimits,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = libm::pow(200.0 * err / resasc, 1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * resabs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite { at: x })
        }
    };
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let fc = eval(center)?;
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let h = half.abs();
    Ok(Segment { a, b, value: res_k * half, error: rescale_error(err, res_abs * h, res_asc * h) })
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadEstimate, QuadError> {
    integrate_pieces(f, &[a, b], cfg)
}

/// Integrate `f` over `[points[0], points[last]]`, starting from the
/// partition given by `points` (sorted ascending; duplicates are ignored).
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadEstimate, QuadError> {
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
        return Err(QuadError::BadLimits);
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(QuadError::BadLimits);
    }
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(&mut f, w[0], w[1])?);
        }
    }
    if heap.is_empty() {
        return Ok(QuadEstimate { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    let totals = |heap: &BinaryHeap<Segment>, frozen: &[Segment]| {
        let mut v = NeumaierSum::new();
        let mut e = NeumaierSum::new();
        for s in heap.iter().chain(frozen.iter()) {
            v.add(s.value);
            e.add(s.error);
        }
        (v.value(), e.value())
    };
    let mut value = NeumaierSum::new();
    let mut error = 0.0;
    for s in heap.iter() {
        value.add(s.value);
        error += s.error;
    }
    let mut since_refresh = 0;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.value().abs());
        if error <= tol || since_refresh >= 64 {
            let (v, e) = totals(&heap, &frozen);
            value = NeumaierSum::new();
            value.add(v);
            error = e;
            since_refresh = 0;
            if e <= cfg.abs_tol.max(cfg.rel_tol * v.abs()) {
                return Ok(QuadEstimate { value: v, abs_error: e, intervals: heap.len() + frozen.len() });
            }
        }
        if heap.len() + frozen.len() >= cfg.max_intervals {
            let (v, e) = totals(&heap, &frozen);
            return Err(QuadError::MaxIntervals { value: v, abs_error: e });
        }
        let Some(worst) = heap.pop() else {
            let (v, e) = totals(&heap, &frozen);
            return Err(QuadError::Roundoff { value: v, abs_error: e });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            frozen.push(worst);
            continue;
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        value.add(-worst.value);
        value.add(left.value);
        value.add(right.value);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        since_refresh += 1;
    }
}

/// `\int_0^\infty f(t) dt`.  The range `[1, inf)` is folded onto `(0, 1]` by
/// `t = 1/x`; `breaks` are interior points of `(0, inf)` where `f` is
/// rough (kinks, peaks, log singularities).
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadEstimate, QuadError> {
    // y in [0,1]: t = y.  y in [1,2]: x = 2 - y, t = 1/x, dt = dx / x^2.
    let g = |y: f64| {
        if y <= 1.0 {
            f(y)
        } else {
            let x = 2.0 - y;
            f(1.0 / x) / (x * x)
        }
    };
    let pts = folded_points(breaks, 0.0, f64::INFINITY, |t| t);
    integrate_pieces(g, &pts, cfg)
}

/// `\int_lo^hi f(t) t^{-(s+1)} dt` for `0 < s < 1` and `0 <= lo < hi <= inf`.
///
/// On `(0, 1]` the substitution `t = w^{1/(1-s)}` turns the weight into a
/// bounded factor when `f(t) = O(t)`; on `[1, inf)` the fold `t = 1/x`
/// leaves `f(1/x) x^{s-1}`, integrable when `f(t) = O(1/t)`.
pub fn integrate_mellin<F: FnMut(f64) -> f64>(
    mut f: F,
    s: f64,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadEstimate, QuadError> {
    if !(s > 0.0 && s < 1.0) || !(lo >= 0.0) || !(hi > lo) {
        return Err(QuadError::BadLimits);
    }
    let p = 1.0 / (1.0 - s);
    let g = |y: f64| {
        if y <= 1.0 {
            let t = libm::pow(y, p);
            if t == 0.0 {
                return 0.0;
            }
            p * f(t) / t
        } else {
            let x = 2.0 - y;
            f(1.0 / x) * libm::pow(x, s - 1.0)
        }
    };
    let pts = folded_points(breaks, lo, hi, |t| libm::pow(t, 1.0 - s));
    integrate_pieces(g, &pts, cfg)
}

// Map t-breakpoints onto the folded coordinate: t <= 1 goes through `low`
// (which must fix 0 and 1), t > 1 goes to 2 - 1/t.
fn folded_points(breaks: &[f64], lo: f64, hi: f64, low: impl Fn(f64) -> f64) -> Vec<f64> {
    let fold = |t: f64| if t <= 1.0 { low(t) } else { 2.0 - 1.0 / t };
    let (ylo, yhi) = (fold(lo), fold(hi));
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 3);
    pts.push(ylo);
    if lo < 1.0 && hi > 1.0 {
        pts.push(1.0);
    }
    for &b in breaks {
        if b > lo && b < hi && b.is_finite() {
            pts.push(fold(b));
        }
    }
    pts.push(yhi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
