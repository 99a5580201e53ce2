use std::f64::consts::PI;
use std::sync::Arc;

use mudomain_core::distribution::{build_cdf, detect_gaps, lift_phi, DistributionSpec, QuantileFn};
use mudomain_core::Error;
use proptest::prelude::*;

/// Composite Simpson's rule, kept separate from the library quadrature.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

#[test]
fn flat_exponential_normalisation() {
    // κ = 1 / (2∫₀¹ e^{−1/x} dx); the integrand is flat at 0 so Simpson converges fast
    let g1 = simpson(|x| if x == 0.0 { 0.0 } else { (-1.0 / x).exp() }, 0.0, 1.0, 200_000);
    let kappa = 0.5 / g1;
    assert!((kappa - 3.367_105_246_857_703).abs() < 1e-10, "{kappa}");
    let q = QuantileFn::from_spec(&DistributionSpec::flat_exp()).unwrap();
    assert!((q.pdf(0.5) - kappa * (-2.0f64).exp()).abs() < 1e-10);
    assert_eq!(q.cdf(1.0), 1.0);
    assert!((q.cdf(0.0) - 0.5).abs() < 1e-15);
}

#[test]
fn power_cdf_table_against_closed_form() {
    for alpha in [0.5, 1.0, 2.0] {
        let t = build_cdf(&DistributionSpec::power(alpha).unwrap(), 256).unwrap();
        for k in 0..=400 {
            let x = -1.0 + 2.0 * k as f64 / 400.0;
            let exact = 0.5 + 0.5 * x.signum() * x.abs().powf(alpha + 1.0);
            assert!((t.eval(x) - exact).abs() < 1e-8, "α={alpha} x={x}");
        }
    }
}

#[test]
fn density_route_matches_builtin_uniform() {
    let spec = DistributionSpec::from_density(Arc::new(|_| 0.5), -1.0, 1.0).unwrap();
    let q = QuantileFn::from_spec(&spec).unwrap();
    for k in 1..100 {
        let u = k as f64 / 100.0;
        assert!((q.value(u) - (2.0 * u - 1.0)).abs() < 1e-9);
    }
    assert!((q.inf_density() - 0.5).abs() < 1e-12);
}

#[test]
fn density_normalisation_is_checked() {
    let spec = DistributionSpec::from_density(Arc::new(|_| 1.0), -1.0, 1.0).unwrap();
    assert!(matches!(QuantileFn::from_spec(&spec), Err(Error::Normalization { .. })));
}

#[test]
fn negative_alpha_is_rejected() {
    assert!(matches!(DistributionSpec::power(-0.5), Err(Error::InvalidSpec(_))));
}

#[test]
fn two_interval_gap() {
    let q = QuantileFn::from_spec(&DistributionSpec::two_interval_uniform()).unwrap();
    let gaps = detect_gaps(&q, 1e-6);
    assert_eq!(gaps.len(), 1);
    assert_eq!(gaps[0].u, 0.5);
    assert_eq!((gaps[0].left_x, gaps[0].right_x), (-1.0, 1.0));
    assert_eq!(q.value(0.5), -1.0);
    assert_eq!(q.value_right(0.5), 1.0);
}

#[test]
fn phi_singular_set_of_power_law() {
    let phi = lift_phi(QuantileFn::from_spec(&DistributionSpec::power(1.0).unwrap()).unwrap());
    let s = phi.singular_points();
    assert_eq!(s.len(), 2);
    assert!((s[1] - PI / 2.0).abs() < 1e-15 && (s[0] + PI / 2.0).abs() < 1e-15);
    assert!(matches!(phi.derivative(PI / 2.0), Err(Error::Singularity { .. })));
}

fn builtin() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        Just(DistributionSpec::uniform(-1.0, 1.0).unwrap()),
        (0.0f64..4.0).prop_map(|a| DistributionSpec::power(a).unwrap()),
        Just(DistributionSpec::flat_exp()),
        Just(DistributionSpec::two_interval_uniform()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantile_is_nondecreasing(spec in builtin(), u in 0.001f64..0.999, du in 0.0f64..0.001) {
        let q = QuantileFn::from_spec(&spec).unwrap();
        prop_assert!(q.value(u + du) >= q.value(u));
    }

    #[test]
    fn cdf_of_quantile_returns_level(spec in builtin(), u in 0.001f64..0.999) {
        let q = QuantileFn::from_spec(&spec).unwrap();
        let x = q.value(u);
        // F(q(u)) ≥ u, and no smaller x reaches u
        prop_assert!(q.cdf(x) >= u - 1e-12);
        prop_assert!(q.cdf(x - 1e-9) <= u + 1e-9);
    }

    #[test]
    fn phi_is_even_and_periodic(spec in builtin(), theta in -PI..PI) {
        let phi = lift_phi(QuantileFn::from_spec(&spec).unwrap());
        prop_assert_eq!(phi.eval(theta), phi.eval(-theta));
        prop_assert!((phi.eval(theta + 2.0 * PI) - phi.eval(theta)).abs() < 1e-9);
    }

    #[test]
    fn shift_moves_quantile(shift in -2.0f64..2.0, u in 0.01f64..0.99) {
        let base = QuantileFn::from_spec(&DistributionSpec::uniform(-1.0, 1.0).unwrap()).unwrap();
        let moved = QuantileFn::from_spec(&DistributionSpec::uniform(-1.0, 1.0).unwrap().with_shift(shift)).unwrap();
        prop_assert!((moved.value(u) - base.value(u) - shift).abs() < 1e-12);
    }
}
