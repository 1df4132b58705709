//! Sine/cosine integrals and the complementary error function.

use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_CUTOFF: f64 = 2.0;
const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 200;

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Returns `(Si(x), Ci(x))`. `Ci` is undefined for `x <= 0` and returned as NaN
/// (or `-inf` at zero).
pub fn sici(x: f64) -> (f64, f64) {
    let t = x.abs();
    if t == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let (si, ci) = if t > SERIES_CUTOFF {
        continued_fraction(t)
    } else {
        power_series(t)
    };
    if x < 0.0 {
        (-si, f64::NAN)
    } else {
        (si, ci)
    }
}

pub fn sine_integral(x: f64) -> f64 {
    sici(x).0
}

// Lentz evaluation of the continued fraction for E1(i t).
fn continued_fraction(t: f64) -> (f64, f64) {
    let tiny = f64::MIN_POSITIVE * 1e10;
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..MAX_TERMS {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    let h = Complex64::new(t.cos(), -t.sin()) * h;
    (std::f64::consts::FRAC_PI_2 + h.im, -h.re)
}

fn power_series(t: f64) -> (f64, f64) {
    let mut sin_sum = 0.0;
    let mut cos_sum = 0.0;
    let mut fact = 1.0;
    let mut sign = 1.0;
    for k in 1..MAX_TERMS {
        fact *= t / k as f64;
        let term = fact / k as f64;
        if k % 2 == 1 {
            sin_sum += sign * term;
        } else {
            cos_sum -= sign * term;
            sign = -sign;
        }
        if term < EPS * sin_sum.abs().max(1e-300) {
            break;
        }
    }
    (sin_sum, cos_sum + t.ln() + EULER_GAMMA)
}
