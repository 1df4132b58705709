use primechaos::ensembles::sigma2_br;
use primechaos::fitting::*;
use primechaos::sieve::first_n_primes;
use primechaos::spectral::*;
use primechaos::unfold::{unfold, UnfoldMethod};

fn synthetic(rho1: f64) -> StatisticCurve {
    StatisticCurve::exact(
        Statistic::Sigma2,
        standard_l_grid()
            .into_iter()
            .map(|l| (l, sigma2_br(l, rho1).unwrap())),
    )
    .unwrap()
}

fn prime_fit(n: u64) -> BrFit {
    let seq = unfold(&first_n_primes(n).unwrap(), UnfoldMethod::RiemannR).unwrap();
    let curve = number_variance(&seq, &standard_l_grid(), DEFAULT_WINDOW_STEP).unwrap();
    fit_rho1(&curve, DEFAULT_FIT_L_MIN, DEFAULT_FIT_L_MAX).unwrap()
}

#[test]
fn round_trip_recovery() {
    for rho1 in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let fit = fit_rho1(&synthetic(rho1), 0.0, 5.0).unwrap();
        assert!((fit.rho1 - rho1).abs() < 1e-4, "{rho1}: {fit:?}");
    }
}

#[test]
fn objective_is_unimodal_for_noiseless_curves() {
    for rho1 in [0.0, 0.1, 0.33, 0.5, 0.9, 1.0] {
        let curve = synthetic(rho1);
        let values: Vec<f64> = (0..=140)
            .map(|i| -0.2 + 0.01 * i as f64)
            .map(|r| residual_sum_of_squares(&curve, 0.0, 5.0, r, false).unwrap())
            .collect();
        let best = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(
            values[..=best].windows(2).all(|w| w[1] <= w[0]),
            "rho1={rho1}"
        );
        assert!(
            values[best..].windows(2).all(|w| w[1] >= w[0]),
            "rho1={rho1}"
        );
    }
}

#[test]
fn first_ten_thousand_primes() {
    let fit = prime_fit(10_000);
    assert!((fit.rho1 - 0.328879).abs() < 0.05, "{fit:?}");
}

#[test]
fn first_hundred_primes_are_near_goe() {
    let fit = prime_fit(100);
    assert!(fit.rho1.abs() < 0.05, "{fit:?}");
    assert!(!fit.at_boundary);
}

#[test]
fn rho1_increases_with_sequence_length() {
    let fits: Vec<f64> = [100, 1_000, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&n| prime_fit(n).rho1)
        .collect();
    assert!(fits.windows(2).all(|w| w[1] > w[0]), "{fits:?}");
}
