//! Test oracles that share no code with the library: a tanh-sinh rule,
//! kernels written with plain complex logarithms, and bisection.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// `int_0^1 f`, where `f` receives `(t, 1 - t)` with both parts accurate.
pub fn tanh_sinh01(mut f: impl FnMut(f64, f64) -> f64) -> f64 {
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    let mut k = -640i32;
    while k <= 640 {
        let u = k as f64 * h;
        let v = FRAC_PI_2 * u.sinh();
        // t = (1 + tanh v) / 2 = 1 / (1 + e^{-2v})
        let t = 1.0 / (1.0 + (-2.0 * v).exp());
        let c = 1.0 / (1.0 + (2.0 * v).exp());
        let w = 0.5 * FRAC_PI_2 * u.cosh() / (v.cosh() * v.cosh());
        if t > 0.0 && c > 0.0 && w > 0.0 && w.is_finite() {
            sum += w * f(t, c);
        }
        k += 1;
    }
    sum * h
}

/// `int_0^inf f` split at 1, with `t = 1/x` on the upper part.
pub fn half_line(mut f: impl FnMut(f64) -> f64) -> f64 {
    let lower = tanh_sinh01(|t, _| f(t));
    let upper = tanh_sinh01(|x, _| f(1.0 / x) / (x * x));
    lower + upper
}

/// `int_0^inf log|1 - e^{i theta} t| t^{-s-1} dt`.  Above 1 it substitutes
/// `t = y^{-1/s}`, which turns the slowly decaying tail into a log singularity at 0.
pub fn mellin_log(theta: f64, s: f64) -> f64 {
    let lower = tanh_sinh01(|t, _| log_abs_1m(theta, t) * t.powf(-s - 1.0));
    let upper = tanh_sinh01(|y, _| {
        let log_t = -y.ln() / s;
        let inv_t = y.powf(1.0 / s);
        log_t + log_abs_1m(theta, inv_t)
    }) / s;
    lower + upper
}

/// `log|1 - e^{i phi} t|`, accurate for small `t`.
pub fn log_abs_1m(phi: f64, t: f64) -> f64 {
    0.5 * (t * t - 2.0 * t * phi.cos()).ln_1p()
}

/// `L_theta(t)` straight from its definition.
pub fn l_direct(theta: f64, tau: f64, t: f64) -> f64 {
    2.0 * log_abs_1m(theta, t) - log_abs_1m(theta + tau, t) - log_abs_1m(tau - theta, t)
}

/// Root of `f` on `[a, b]` given a sign change.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if f(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
