use std::f64::consts::PI;
use std::sync::OnceLock;

use mudomain_core::distribution::{lift_phi, DistributionSpec, PhiFunction, QuantileFn};
use mudomain_core::spectral::{
    cosine_coefficients, divergence_probe, doubling_schedule, parseval_variance, FourierCoefficients,
    GrowthClassification,
};
use proptest::prelude::*;

fn phi_of(spec: DistributionSpec) -> PhiFunction {
    lift_phi(QuantileFn::from_spec(&spec).unwrap())
}

fn uniform_coeffs() -> &'static FourierCoefficients {
    static C: OnceLock<FourierCoefficients> = OnceLock::new();
    C.get_or_init(|| cosine_coefficients(&phi_of(DistributionSpec::uniform(-1.0, 1.0).unwrap()), 4096).unwrap())
}

fn power_coeffs() -> &'static FourierCoefficients {
    static C: OnceLock<FourierCoefficients> = OnceLock::new();
    C.get_or_init(|| cosine_coefficients(&phi_of(DistributionSpec::power(1.0).unwrap()), 4096).unwrap())
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// Second moment of a density on [−1, 1] by Simpson.
fn variance_oracle(pdf: impl Fn(f64) -> f64) -> f64 {
    simpson(|x| x * x * pdf(x), -1.0, 1.0, 20_000)
}

#[test]
fn uniform_coefficients_from_antiderivative() {
    // φ(θ) = 2θ/π − 1 on [0, π]; an antiderivative of φ(θ)cos(nθ) is
    // φ(θ)sin(nθ)/n + (2/π)cos(nθ)/n²
    let c = uniform_coeffs();
    for n in 1..=99usize {
        let nf = n as f64;
        let g = |t: f64| (2.0 * t / PI - 1.0) * (nf * t).sin() / nf + (2.0 / PI) * (nf * t).cos() / (nf * nf);
        let exact = 2.0 / PI * (g(PI) - g(0.0));
        if n % 2 == 1 {
            assert!((exact + 8.0 / (PI * PI * nf * nf)).abs() < 1e-14);
            assert!((c.get(n) - exact).abs() <= 1e-8, "a_{n} = {} vs {exact}", c.get(n));
        } else {
            assert!(c.get(n).abs() <= 1e-10, "a_{n} = {}", c.get(n));
        }
    }
}

#[test]
fn parseval_matches_variance() {
    let var_u = variance_oracle(|_| 0.5);
    let var_p = variance_oracle(|x| x.abs());
    assert!((var_u - 1.0 / 3.0).abs() < 1e-12);
    assert!((var_p - 0.5).abs() < 1e-12);
    let pu = parseval_variance(uniform_coeffs());
    let pp = parseval_variance(power_coeffs());
    assert!((pu - var_u).abs() <= 1e-5, "{pu}");
    assert!((pp - var_p).abs() <= 1e-5, "{pp}");
}

#[test]
fn power_parseval_at_larger_order() {
    let c = cosine_coefficients(&phi_of(DistributionSpec::power(1.0).unwrap()), 10_000).unwrap();
    assert!((parseval_variance(&c) - 0.5).abs() <= 1e-4);
}

#[test]
fn tail_and_quadrature_diagnostics_are_small() {
    for c in [uniform_coeffs(), power_coeffs()] {
        assert!(c.quadrature_error() < 1e-10, "{}", c.quadrature_error());
        assert!(c.tail_estimate() >= 0.0 && c.tail_estimate() < 1e-5, "{}", c.tail_estimate());
    }
}

#[test]
fn power_law_coefficients_against_quadrature() {
    // q(u) = sign(2u − 1)·|2u − 1|^{1/2} for α = 1
    let q = |u: f64| {
        let s = 2.0 * u - 1.0;
        s.signum() * s.abs().sqrt()
    };
    let c = power_coeffs();
    for n in [1usize, 2, 3, 5, 8, 13] {
        // substitute θ = π/2 ± s² around the square-root point
        let nf = n as f64;
        let f = |t: f64| q(t / PI) * (nf * t).cos();
        let h = (PI / 2.0).sqrt();
        let left = simpson(|s| f(PI / 2.0 - s * s) * 2.0 * s, 0.0, h, 40_000);
        let right = simpson(|s| f(PI / 2.0 + s * s) * 2.0 * s, 0.0, h, 40_000);
        let exact = 2.0 / PI * (left + right);
        assert!((c.get(n) - exact).abs() < 1e-9, "a_{n}: {} vs {exact}", c.get(n));
    }
}

#[test]
fn probes_separate_convergent_and_divergent_examples() {
    let sched = doubling_schedule(4096);
    let u = divergence_probe(uniform_coeffs(), PI / 2.0, &sched);
    match u.classification {
        GrowthClassification::Convergent { estimate } => {
            let catalan: f64 = (0..200_000).map(|k| (-1f64).powi(k) / ((2 * k + 1) as f64).powi(2)).sum();
            assert!((estimate + 8.0 / (PI * PI) * catalan).abs() < 1e-6, "{estimate}");
        }
        other => panic!("uniform probe: {other:?}"),
    }
    let p = divergence_probe(power_coeffs(), PI / 2.0, &sched);
    assert!(matches!(p.classification, GrowthClassification::Convergent { .. }), "{p:?}");

    let fe = cosine_coefficients(&phi_of(DistributionSpec::flat_exp()), 4096).unwrap();
    let f = divergence_probe(&fe, PI / 2.0, &sched);
    assert_eq!(f.classification, GrowthClassification::Divergent, "{f:?}");
    assert!(f.partial_sums.last().unwrap().abs() > 1.0);
}

#[test]
fn probe_rejects_malformed_schedule() {
    let c = uniform_coeffs();
    let r = divergence_probe(c, 1.0, &[64, 32, 16]);
    assert_eq!(r.classification, GrowthClassification::Undetermined);
    let r = divergence_probe(c, 1.0, &[4]);
    assert_eq!(r.classification, GrowthClassification::Undetermined);
}

fn small_coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conjugate_series_is_odd(a in small_coeffs(), theta in -PI..PI) {
        let c = FourierCoefficients::from_vec(a);
        let s = c.conjugate();
        prop_assert!((s.eval(theta) + s.eval(-theta)).abs() <= 1e-12);
    }

    #[test]
    fn conjugate_is_linear(a in small_coeffs(), b in small_coeffs(), lam in -3.0f64..3.0, theta in -PI..PI) {
        let n = a.len().max(b.len());
        let get = |v: &Vec<f64>, i: usize| v.get(i).copied().unwrap_or(0.0);
        let mix: Vec<f64> = (0..n).map(|i| get(&a, i) + lam * get(&b, i)).collect();
        let (ca, cb, cm) = (
            FourierCoefficients::from_vec(a.clone()),
            FourierCoefficients::from_vec(b.clone()),
            FourierCoefficients::from_vec(mix),
        );
        let lhs = cm.conjugate().eval(theta);
        let rhs = ca.conjugate().eval(theta) + lam * cb.conjugate().eval(theta);
        prop_assert!((lhs - rhs).abs() <= 1e-11);
    }

    #[test]
    fn conjugate_matches_direct_sum(a in small_coeffs(), theta in -PI..PI) {
        let direct: f64 = a.iter().enumerate().map(|(i, x)| x * ((i + 1) as f64 * theta).sin()).sum();
        let c = FourierCoefficients::from_vec(a);
        prop_assert!((c.conjugate().eval(theta) - direct).abs() <= 1e-11);
    }

    #[test]
    fn bessel_partial_sums_increase_to_variance(n in 1usize..4096) {
        let c = power_coeffs();
        let lo = parseval_variance(&c.truncated(n));
        let hi = parseval_variance(&c.truncated((n + 1).min(4096)));
        prop_assert!(lo <= hi);
        prop_assert!(hi <= 0.5 + 1e-9);
    }
}
