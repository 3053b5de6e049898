//! Closed forms checked against numerical integration of the densities.

use dftt_core::theory::{
    indicator_covariance, indicator_variance, joint_pdf, joint_survival, marginal_pdf, survival,
    TheoryParams,
};

/// Composite 5-point Gauss-Legendre on `[a, b]`.
fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683,
        0.538_469_310_105_683,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            NODES
                .iter()
                .zip(WEIGHTS)
                .map(|(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

fn energy(m: u64) -> f64 {
    2.0 * (m * m) as f64
}

#[test]
fn test_marginal_normalised_with_mean_two_m() {
    for m in [3u64, 10, 100, 1000] {
        let e = energy(m);
        // the density decays on a scale of 2m, so panels must resolve it
        let panels = 400.max(4 * m as usize);
        let mass = integrate(|u| marginal_pdf(u, m), 0.0, e, panels);
        let mean = integrate(|u| u * marginal_pdf(u, m), 0.0, e, panels);
        assert!((mass - 1.0).abs() < 1e-8, "m={m} mass={mass}");
        assert!(
            (mean / (2.0 * m as f64) - 1.0).abs() < 1e-8,
            "m={m} mean={mean}"
        );
    }
}

#[test]
fn test_joint_normalised() {
    for m in [3u64, 10, 50] {
        let e = energy(m);
        let mass = integrate(
            |u| integrate(|v| joint_pdf(u, v, m), 0.0, e - u, 60),
            0.0,
            e,
            60,
        );
        assert!((mass - 1.0).abs() < 1e-8, "m={m} mass={mass}");
    }
}

#[test]
fn test_joint_marginalises_to_marginal() {
    let m = 20u64;
    let e = energy(m);
    for frac in [0.0, 0.01, 0.1, 0.3, 0.7] {
        let u = frac * e;
        let integrated = integrate(|v| joint_pdf(u, v, m), 0.0, e - u, 200);
        assert!((integrated - marginal_pdf(u, m)).abs() < 1e-6 * marginal_pdf(0.0, m));
    }
}

#[test]
fn test_survival_and_variance_from_quadrature() {
    for m in [10u64, 100, 1000] {
        let params = TheoryParams::log005(m).unwrap();
        let t2 = params.t2();
        let e = energy(m);
        let tail = integrate(|u| marginal_pdf(u, m), t2, e, 400.max(4 * m as usize));
        assert!((tail - survival(t2, m)).abs() < 1e-9, "m={m}");
        let q = tail;
        assert!((indicator_variance(&params).unwrap() - (q - q * q)).abs() < 1e-9);
    }
}

#[test]
fn test_covariance_numerator_is_joint_survival_covariance() {
    for m in [10u64, 40] {
        let params = TheoryParams::log005(m).unwrap();
        let t2 = params.t2();
        let e = energy(m);
        // P(|f_i|^2 > T^2, |f_j|^2 > T^2) by quadrature over the triangle
        let both = integrate(
            |u| integrate(|v| joint_pdf(u, v, m), t2, (e - u).max(t2), 80),
            t2,
            e - t2,
            80,
        );
        assert!((both - joint_survival(t2, t2, m)).abs() < 1e-8, "m={m}");
        let q = survival(t2, m);
        let cov = both - q * q;
        assert!(
            (cov - indicator_covariance(&params).unwrap()).abs() < 1e-8,
            "m={m}"
        );
    }
}
