#![allow(dead_code)]

use std::f64::consts::PI;

pub const EULER: f64 = 0.577_215_664_901_532_9;

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

pub fn si(x: f64) -> f64 {
    simpson(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, 40_000)
}

pub fn ci(x: f64) -> f64 {
    EULER
        + x.ln()
        + simpson(
            |t| if t == 0.0 { 0.0 } else { (t.cos() - 1.0) / t },
            0.0,
            x,
            40_000,
        )
}

pub fn sigma2_gue(l: f64) -> f64 {
    let x = 2.0 * PI * l;
    (x.ln() + EULER + 1.0 - x.cos() - ci(x)) / (PI * PI) + l * (1.0 - 2.0 / PI * si(x))
}

pub fn sigma2_goe(l: f64) -> f64 {
    let s = si(PI * l);
    2.0 * sigma2_gue(l) + s * s / (PI * PI) - s / PI
}

pub fn sigma2_gse(l: f64) -> f64 {
    let s = si(2.0 * PI * l);
    0.5 * sigma2_gue(2.0 * l) + s * s / (4.0 * PI * PI)
}

/// Unit-rate Poisson process of `n` points.
pub fn poisson_process(n: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x += -(1.0 - rng.random::<f64>()).ln();
            x
        })
        .collect()
}
