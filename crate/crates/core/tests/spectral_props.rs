mod common;

use primechaos::sieve::{first_n_primes, primes_after_index};
use primechaos::spectral::*;
use primechaos::unfold::{unfold, UnfoldMethod, UnfoldedSequence};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_distr::{Distribution, Poisson};

fn poisson_sequence(n: usize, seed: u64) -> UnfoldedSequence {
    UnfoldedSequence::from_values(common::poisson_process(n, seed)).unwrap()
}

fn unfolded_primes(k: u64, n: u64) -> UnfoldedSequence {
    unfold(&primes_after_index(k, n).unwrap(), UnfoldMethod::RiemannR).unwrap()
}

#[test]
fn poisson_nnsd_matches_exponential() {
    let h = nnsd(&poisson_sequence(100_000, 1), 0.1, 4.0).unwrap();
    let n = h.total_spacings() as f64;
    for (left, right, density) in h.bins() {
        let p = (-left).exp() - (-right).exp();
        let sd = (p * (1.0 - p) / n).sqrt() / (right - left);
        let expected = p / (right - left);
        assert!(
            (density - expected).abs() < 3.0 * sd,
            "[{left}, {right}): {density} vs {expected}"
        );
    }
}

#[test]
fn poisson_third_central_moment() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let dist = Poisson::new(3.0).unwrap();
    let counts: Vec<u32> = (0..1_000_000)
        .map(|_| dist.sample(&mut rng) as u32)
        .collect();
    let mu3 = moments(&counts, 3);
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / counts.len() as f64;
    let cubes: Vec<f64> = counts.iter().map(|&c| (c as f64 - mean).powi(3)).collect();
    let var = cubes.iter().map(|x| (x - mu3).powi(2)).sum::<f64>() / cubes.len() as f64;
    let se = (var / cubes.len() as f64).sqrt();
    assert!((mu3 - 3.0).abs() < 3.0 * se, "{mu3} ± {se}");
}

#[test]
fn poisson_fluctuation_statistics() {
    let seq = poisson_sequence(1_000_000, 2);
    let [s2, g1, g2] = all_statistics(&seq, &[1.0, 2.0, 3.0, 4.0, 5.0], 0.25).unwrap();
    for p in s2.points() {
        assert!((p.value - p.l).abs() < 3.0 * p.stderr, "Σ² {p:?}");
    }
    let g1_4 = g1.points()[3];
    assert!((g1_4.value - 0.5).abs() < 3.0 * g1_4.stderr, "γ₁ {g1_4:?}");
    let g2_2 = g2.points()[1];
    assert!((g2_2.value - 0.5).abs() < 3.0 * g2_2.stderr, "γ₂ {g2_2:?}");
}

#[test]
fn number_variance_vanishes_for_short_windows() {
    let sequences = [poisson_sequence(10_000, 3), unfolded_primes(0, 10_000)];
    for seq in &sequences {
        let c = number_variance(seq, &[0.01], 0.25).unwrap();
        assert!(c.points()[0].value < 0.02, "{:?}", c.points());
    }
}

#[test]
fn half_window_resampling_agrees() {
    let seq = unfolded_primes(0, 100_000);
    for l in standard_l_grid() {
        let a = number_variance(&seq, &[l], 0.25).unwrap().points()[0];
        let b = all_statistics_offset(&seq, &[l], 0.25, l / 2.0).unwrap()[0].points()[0];
        let tol = 2.0 * a.stderr.hypot(b.stderr);
        assert!((a.value - b.value).abs() < tol, "L={l}: {a:?} vs {b:?}");
    }
}

#[test]
fn variance_agrees_with_one_and_two_pass_algorithms() {
    let seq = unfolded_primes(0, 50_000);
    for l in [0.3, 1.7, 4.9] {
        let counts = window_counts(&seq, l, 0.25).unwrap();
        let xs: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let two_pass = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let (mut m, mut m2) = (0.0, 0.0);
        for (i, &x) in xs.iter().enumerate() {
            let d = x - m;
            m += d / (i + 1) as f64;
            m2 += d * (x - m);
        }
        let one_pass = m2 / n;
        let got = moments(&counts, 2);
        assert!((got - two_pass).abs() <= 1e-10 * two_pass, "L={l}");
        assert!((got - one_pass).abs() <= 1e-10 * one_pass, "L={l}");
    }
}

fn first_hundred_histogram() -> SpacingHistogram {
    let seq = unfold(&first_n_primes(100).unwrap(), UnfoldMethod::RiemannR).unwrap();
    nnsd(&seq, DEFAULT_BIN_WIDTH, DEFAULT_S_MAX).unwrap()
}

#[test]
fn first_hundred_primes_show_level_repulsion() {
    let h = first_hundred_histogram();
    assert_eq!(h.densities()[0], 0.0);
    assert!(h.mode_bin() > 0);
}

#[test]
#[ignore = "twin-prime gaps put the 0.1-wide mode bin at [0.3, 0.4), below the GOE mode"]
fn first_hundred_primes_mode_near_goe_mode() {
    let h = first_hundred_histogram();
    let (left, right, _) = h.bins().nth(h.mode_bin()).unwrap();
    assert!(
        left >= 0.6 - 1e-9 && right <= 1.0 + 1e-9,
        "mode bin [{left}, {right})"
    );
}

#[test]
fn poisson_sequence_has_no_plateau() {
    let (_, est) = saturation_scan(&poisson_sequence(20_000, 5), 4000.0, 40, 0.25).unwrap();
    assert_eq!(est, None);
}

#[test]
fn prime_number_variance_saturates_later_for_larger_primes() {
    let low = unfold(&first_n_primes(10_000).unwrap(), UnfoldMethod::RiemannR).unwrap();
    let high = unfolded_primes(10_000, 10_000);
    let (_, a) = saturation_scan(&low, 4000.0, 40, 0.25).unwrap();
    let (_, b) = saturation_scan(&high, 4000.0, 40, 0.25).unwrap();
    let (a, b) = (
        a.expect("plateau for primes 1-10000"),
        b.expect("plateau for primes 10001-20000"),
    );
    assert!(b.l_saturation > a.l_saturation, "{a:?} vs {b:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn statistics_are_shift_invariant(
        ticks in proptest::collection::vec(1u32..4096, 40..400),
        shift in -1000i32..1000,
    ) {
        // Dyadic values keep the shifted sequence exact.
        let mut x = 0.0;
        let values: Vec<f64> = ticks.iter().map(|&t| { x += t as f64 / 1024.0; x }).collect();
        let seq = UnfoldedSequence::from_values(values).unwrap();
        let moved = seq.shifted(shift as f64).unwrap();
        let l = (seq.span() / 4.0).min(3.0);
        let a = all_statistics(&seq, &[l], 0.25).unwrap();
        let b = all_statistics(&moved, &[l], 0.25).unwrap();
        for (ca, cb) in a.iter().zip(&b) {
            let (pa, pb) = (ca.points()[0], cb.points()[0]);
            prop_assert!(pa.value == pb.value || (pa.value.is_nan() && pb.value.is_nan()));
        }
        prop_assert_eq!(nnsd(&seq, 0.1, 4.0).unwrap(), nnsd(&moved, 0.1, 4.0).unwrap());
    }

    #[test]
    fn nnsd_mass_is_at_most_one(gaps in proptest::collection::vec(0.001f64..8.0, 1..300)) {
        let mut x = 0.0;
        let mut values = vec![0.0];
        for g in &gaps {
            x += g;
            values.push(x);
        }
        let seq = UnfoldedSequence::from_values(values).unwrap();
        let h = nnsd(&seq, 0.1, 4.0).unwrap();
        prop_assert!(h.mass() <= 1.0 + 1e-12);
        prop_assert!(h.densities().iter().all(|&d| d >= 0.0));
        let wide = nnsd(&seq, 0.1, 8.5).unwrap();
        prop_assert!((wide.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn number_variance_is_nonnegative(gaps in proptest::collection::vec(0.01f64..3.0, 30..300)) {
        let mut x = 0.0;
        let values: Vec<f64> = gaps.iter().map(|g| { x += g; x }).collect();
        let seq = UnfoldedSequence::from_values(values).unwrap();
        let grid: Vec<f64> = standard_l_grid().into_iter().filter(|&l| l < seq.span() / 2.0).collect();
        prop_assume!(!grid.is_empty());
        let c = number_variance(&seq, &grid, 0.25).unwrap();
        prop_assert!(c.points().iter().all(|p| p.value >= 0.0 && p.stderr >= 0.0));
    }
}
