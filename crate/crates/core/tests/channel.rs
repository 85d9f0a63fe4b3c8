mod common;

use common::{bessel_k_oracle, ks_distance};
use nhs_core::channel::{
    exponential, gamma_cdf, gamma_cdf_small_x, gamma_pdf, min_order_pdf, sample_realization,
};
use nhs_core::montecarlo::trial_rng;
use nhs_core::quad::{integrate_to_infinity, Tolerance};
use nhs_core::{LinkScale, Scenario, SystemParams};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

const N: usize = 1_000_000;

fn unit() -> LinkScale {
    LinkScale::new(1.0).unwrap()
}

fn unit_params(m: usize) -> SystemParams {
    SystemParams::new(Scenario {
        m_devices: m,
        ..Scenario::default()
    })
    .unwrap()
}

#[test]
fn sample_means() {
    let params = unit_params(2);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
    let (mut h0, mut g0, mut g1, mut s0) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..N {
        let r = sample_realization(&params, &mut rng);
        assert_eq!(r.gamma.len(), 2);
        h0 += r.h0_sq;
        g0 += r.gamma[0];
        g1 += r.gamma[1];
        s0 += r.s0_sq;
    }
    let n = N as f64;
    for (name, mean) in [("h0", h0 / n), ("g0", g0 / n), ("g1", g1 / n), ("s0", s0 / n)] {
        assert!((mean - 1.0).abs() < 0.01, "{name}: {mean}");
    }
}

#[test]
fn sampling_respects_rates() {
    let params = SystemParams::new(Scenario {
        d0: 2.0,
        phi: 2.0,
        ..Scenario::default()
    })
    .unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    let mean = (0..200_000).map(|_| sample_realization(&params, &mut rng).h0_sq).sum::<f64>() / 200_000.0;
    assert!((mean - 0.25).abs() < 0.005, "{mean}");
}

#[test]
fn empirical_cdf_matches_closed_form() {
    let params = unit_params(1);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2024);
    let sample: Vec<f64> = (0..N).map(|_| sample_realization(&params, &mut rng).gamma[0]).collect();
    let d = ks_distance(sample, |x| gamma_cdf(x, unit()).unwrap());
    assert!(d < 0.002, "KS = {d}");
}

#[test]
fn min_of_three_matches_order_statistic() {
    let params = unit_params(3);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(99);
    let sample: Vec<f64> = (0..N)
        .map(|_| sample_realization(&params, &mut rng).sorted_gamma()[0])
        .collect();
    // CDF of the minimum: 1 - (1 - F)^3
    let d = ks_distance(sample, |x| 1.0 - (1.0 - gamma_cdf(x, unit()).unwrap()).powi(3));
    assert!(d < 0.002, "KS = {d}");
}

#[test]
fn seeded_streams_repeat() {
    let params = unit_params(4);
    let a: Vec<_> = (0..100).map(|t| sample_realization(&params, &mut trial_rng(3, t))).collect();
    let b: Vec<_> = (0..100).map(|t| sample_realization(&params, &mut trial_rng(3, t))).collect();
    assert_eq!(a, b);
    let c = sample_realization(&params, &mut trial_rng(4, 0));
    assert_ne!(a[0], c);
}

#[test]
fn sorted_gamma_is_ascending() {
    let params = unit_params(6);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    for _ in 0..1000 {
        let r = sample_realization(&params, &mut rng);
        let s = r.sorted_gamma();
        assert!(s.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn pdf_values() {
    let f = gamma_pdf(1.0, unit()).unwrap();
    assert!((f / (2.0 * bessel_k_oracle(0.0, 2.0)) - 1.0).abs() < 1e-12);
    assert!((f - 0.227_787_745_4).abs() < 1e-8);
    assert!(gamma_pdf(0.0, unit()).is_err());
    assert!(gamma_pdf(-1.0, unit()).is_err());
}

#[test]
fn pdf_integrates_to_one() {
    for l in [1.0, 0.01, 1e4] {
        let scale = LinkScale::new(l).unwrap();
        // x = t^2 removes the logarithmic singularity at the origin
        let est = integrate_to_infinity(
            |t| if t == 0.0 { 0.0 } else { 2.0 * t * gamma_pdf(t * t, scale).unwrap() },
            0.0,
            Tolerance::new(1e-13, 1e-12),
        )
        .unwrap();
        assert!((est.value - 1.0).abs() < 1e-8, "L = {l}: {}", est.value);
    }
}

#[test]
fn min_order_pdf_integrates_to_one() {
    let est = integrate_to_infinity(
        |t| if t == 0.0 { 0.0 } else { 2.0 * t * min_order_pdf(t * t, 5, unit()).unwrap() },
        0.0,
        Tolerance::new(1e-13, 1e-12),
    )
    .unwrap();
    assert!((est.value - 1.0).abs() < 1e-7, "{}", est.value);
}

#[test]
fn min_order_single_device_is_pdf() {
    for x in [1e-6, 0.1, 1.0, 7.5, 40.0] {
        assert_eq!(min_order_pdf(x, 1, unit()).unwrap(), gamma_pdf(x, unit()).unwrap());
    }
}

#[test]
fn cdf_derivative_is_pdf() {
    for x in [0.1, 1.0, 5.0] {
        let h = 1e-5 * x;
        let d = (gamma_cdf(x + h, unit()).unwrap() - gamma_cdf(x - h, unit()).unwrap()) / (2.0 * h);
        let f = gamma_pdf(x, unit()).unwrap();
        assert!((d / f - 1.0).abs() < 1e-6, "x = {x}: {d} vs {f}");
    }
}

#[test]
fn cdf_values() {
    assert_eq!(gamma_cdf(0.0, unit()).unwrap(), 0.0);
    assert_eq!(gamma_cdf(f64::INFINITY, unit()).unwrap(), 1.0);
    let expected = 1.0 - 2.0 * bessel_k_oracle(1.0, 2.0);
    assert!((gamma_cdf(1.0, unit()).unwrap() - expected).abs() < 1e-13);
    assert!((gamma_cdf(1.0, unit()).unwrap() - 0.720_268_236_366_955).abs() < 1e-12);
    assert!(gamma_cdf(-1e-3, unit()).is_err());
}

#[test]
fn cdf_monotone_and_bounded() {
    for l in [1e-3, 1.0, 1e3] {
        let scale = LinkScale::new(l).unwrap();
        let mut prev = 0.0;
        for k in 0..4000 {
            let x = 1e-12 * 1.01f64.powi(k);
            let f = gamma_cdf(x, scale).unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(f >= prev, "L = {l}, x = {x}");
            prev = f;
        }
    }
}

#[test]
fn small_argument_cdf() {
    let x = 1e-3;
    let approx = gamma_cdf_small_x(x, unit()).unwrap();
    assert!((approx - 6.907_755_278_982_137e-3).abs() < 1e-15);
    assert!((approx / gamma_cdf(x, unit()).unwrap() - 1.0).abs() < 0.05);
    let x = 1e-4;
    let rel = gamma_cdf_small_x(x, unit()).unwrap() / gamma_cdf(x, unit()).unwrap() - 1.0;
    assert!(rel.abs() < 0.02, "{rel}");
    assert!(gamma_cdf_small_x(1e-300, unit()).unwrap() < 1e-296);
    assert!(gamma_cdf_small_x(1.0, unit()).is_err());
    assert!(gamma_cdf_small_x(0.0, unit()).is_err());
}

#[test]
fn product_of_exponentials_matches_cdf() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(77);
    let n = 400_000;
    let xs = [0.1, 0.5, 1.0, 2.0];
    let mut hits = [0u64; 4];
    for _ in 0..n {
        let v = exponential(&mut rng, 1.0) * exponential(&mut rng, 1.0);
        for (h, &x) in hits.iter_mut().zip(&xs) {
            if v <= x {
                *h += 1;
            }
        }
    }
    for (h, &x) in hits.iter().zip(&xs) {
        let f = gamma_cdf(x, unit()).unwrap();
        let p_hat = *h as f64 / n as f64;
        let sd = (f * (1.0 - f) / n as f64).sqrt();
        assert!((p_hat - f).abs() < 3.0 * sd, "x = {x}: {p_hat} vs {f}");
    }
}

#[test]
fn link_scale_and_params_validation() {
    assert!(LinkScale::new(0.0).is_err());
    assert!(LinkScale::new(f64::NAN).is_err());
    for bad in [
        Scenario { m_devices: 0, ..Scenario::default() },
        Scenario { alpha: 1.0, ..Scenario::default() },
        Scenario { beta: 0.0, ..Scenario::default() },
        Scenario { eta: 1.5, ..Scenario::default() },
        Scenario { r0: 0.0, ..Scenario::default() },
        Scenario { d0: -1.0, ..Scenario::default() },
    ] {
        assert!(SystemParams::new(bad).is_err(), "{bad:?}");
    }
}
