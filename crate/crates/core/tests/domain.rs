use std::f64::consts::PI;
use std::sync::OnceLock;

use mudomain_core::distribution::{lift_phi, DistributionSpec, PhiFunction, QuantileFn};
use mudomain_core::domain::{
    boundary, boundedness_verdict, discrete_univalence_check, eval_map, point_in_domain, BoundaryCurve,
    BoundaryOptions, ConformalMap, Verdict, VerdictBasis,
};
use mudomain_core::spectral::{cosine_coefficients, FourierCoefficients, GrowthClassification};
use mudomain_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

struct Built {
    coeffs: FourierCoefficients,
    curve: BoundaryCurve,
}

fn build(spec: DistributionSpec) -> Built {
    let phi = lift_phi(QuantileFn::from_spec(&spec).unwrap());
    let coeffs = cosine_coefficients(&phi, 4096).unwrap();
    let curve = boundary(&phi, &coeffs, &BoundaryOptions::default()).unwrap();
    Built { coeffs, curve }
}

fn uniform() -> &'static Built {
    static B: OnceLock<Built> = OnceLock::new();
    B.get_or_init(|| build(DistributionSpec::uniform(-1.0, 1.0).unwrap()))
}

fn power() -> &'static Built {
    static B: OnceLock<Built> = OnceLock::new();
    B.get_or_init(|| build(DistributionSpec::power(1.0).unwrap()))
}

fn catalan() -> f64 {
    let (mut s, mut prev) = (0.0, 0.0);
    for k in 0..100_000 {
        prev = s;
        s += (-1f64).powi(k) / ((2 * k + 1) as f64).powi(2);
    }
    0.5 * (s + prev)
}

/// Winding number of the closed polyline through `pts` around `p`.
fn winding(pts: &[Complex64], p: Complex64) -> i64 {
    let n = pts.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = pts[i] - p;
        let b = pts[(i + 1) % n] - p;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

#[test]
fn map_examples() {
    let map = ConformalMap::new(uniform().coeffs.clone());
    assert_eq!(eval_map(&map, Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
    // odd coefficients only, so Φ(i) = i·Σ aₙ(−1)^{(n−1)/2} = −i(8/π²)G
    let w = eval_map(&map, Complex64::new(0.0, 1.0)).unwrap();
    assert!(w.re.abs() < 1e-10, "{w}");
    assert!((w.im + 8.0 / (PI * PI) * catalan()).abs() < 1e-6, "{w}");
    assert!(matches!(eval_map(&map, Complex64::new(1.1, 0.0)), Err(Error::Domain { .. })));
}

#[test]
fn boundary_agrees_with_map_on_the_circle() {
    let b = uniform();
    let map = ConformalMap::new(b.coeffs.clone());
    // the cosine tail is largest at the kinks θ = 0, ±π: Σ_{n>N, odd} 8/(π²n²) ≈ 4/(π²N)
    let tail: f64 = (4097..2_000_000).step_by(2).map(|n| 8.0 / (PI * PI * (n as f64).powi(2))).sum();
    let d = b.curve.map_defect(&map);
    assert!(d <= 1.5 * tail, "{d} vs {tail}");
}

#[test]
fn membership_examples() {
    let c = &uniform().curve;
    assert!(point_in_domain(c, Complex64::new(0.0, 0.0)).unwrap());
    assert!(!point_in_domain(c, Complex64::new(2.0, 0.0)).unwrap());
    let top = 8.0 / (PI * PI) * catalan();
    assert!(point_in_domain(c, Complex64::new(0.0, 0.99 * top)).unwrap());
    assert!(point_in_domain(c, Complex64::new(0.0, -0.99 * top)).unwrap());
    assert!(!point_in_domain(c, Complex64::new(0.0, 1.01 * top)).unwrap());
}

#[test]
fn bounded_examples_are_symmetric_delta_convex_and_simple() {
    for b in [uniform(), power()] {
        let c = &b.curve;
        assert!(!c.has_unbounded_flags());
        assert!(c.symmetry_defect() < 1e-9, "{}", c.symmetry_defect());
        assert!(c.axis_defect() < 1e-8);
        assert_eq!(c.delta_convexity_failures(100, 10).unwrap(), 0);
        assert!(discrete_univalence_check(c).unwrap());
    }
}

#[test]
fn squared_map_fails_univalence() {
    let map = ConformalMap::new(FourierCoefficients::from_vec(vec![0.0, 1.0]));
    let curve = BoundaryCurve::from_map(&map, 1024).unwrap();
    assert!(!discrete_univalence_check(&curve).unwrap());
    let ident = ConformalMap::new(FourierCoefficients::from_vec(vec![1.0]));
    assert!(discrete_univalence_check(&BoundaryCurve::from_map(&ident, 1024).unwrap()).unwrap());
}

#[test]
fn unbounded_curves_refuse_closed_polygon_queries() {
    let b = build(DistributionSpec::flat_exp());
    assert!(b.curve.has_unbounded_flags());
    assert!(matches!(discrete_univalence_check(&b.curve), Err(Error::NotApplicable(_))));
    assert!(matches!(point_in_domain(&b.curve, Complex64::new(0.0, 0.0)), Err(Error::NotApplicable(_))));
}

#[test]
fn verdict_trichotomy() {
    let r = |s| boundedness_verdict(&s, None, None).unwrap();
    let u = r(DistributionSpec::uniform(-1.0, 1.0).unwrap());
    assert_eq!((u.verdict, u.basis), (Verdict::Bounded, VerdictBasis::DensityBoundedBelow));
    assert!(u.basis.is_theorem());
    let p = r(DistributionSpec::power(1.0).unwrap());
    assert_eq!((p.verdict, p.basis), (Verdict::Bounded, VerdictBasis::ProbesConvergent));
    assert!(!p.basis.is_theorem());
    let f = r(DistributionSpec::flat_exp());
    assert_eq!(f.verdict, Verdict::Unbounded);
    let probe = &f.evidence.probe_results[0];
    assert!((probe.theta - PI / 2.0).abs() < 1e-12);
    assert_eq!(probe.classification, GrowthClassification::Divergent);
    let t = r(DistributionSpec::two_interval_uniform());
    assert_eq!((t.verdict, t.basis), (Verdict::Unbounded, VerdictBasis::Gap));
}

#[test]
fn gap_forces_a_growing_strip() {
    // Φ_N(𝔻) for the two-interval law winds once around points (x, y) with
    // |x| < 1 up to a height that keeps growing with N
    let phi: PhiFunction = lift_phi(QuantileFn::from_spec(&DistributionSpec::two_interval_uniform()).unwrap());
    let full = cosine_coefficients(&phi, 4096).unwrap();
    let mut reach = Vec::new();
    for n in [256usize, 1024, 4096] {
        let map = ConformalMap::new(full.truncated(n));
        let m = 16 * n;
        let pts: Vec<Complex64> =
            (0..m).map(|k| map.boundary_value(-PI + 2.0 * PI * k as f64 / m as f64)).collect();
        let top = pts.iter().filter(|w| w.re.abs() < 0.5).map(|w| w.im).fold(0.0, f64::max);
        for x in [-0.5, 0.0, 0.5] {
            for j in 0..=18 {
                let y = 0.9 * top * j as f64 / 18.0;
                assert_eq!(winding(&pts, Complex64::new(x, y)), 1, "N={n} ({x}, {y})");
                assert_eq!(winding(&pts, Complex64::new(x, -y)), 1, "N={n} ({x}, −{y})");
            }
        }
        assert_eq!(winding(&pts, Complex64::new(2.5, 0.0)), 0);
        reach.push(top);
    }
    assert!(reach[0] < reach[1] && reach[1] < reach[2], "{reach:?}");
    assert!(reach[2] - reach[0] > 0.5, "{reach:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn map_commutes_with_conjugation(r in 0.0f64..1.0, t in -PI..PI) {
        let map = ConformalMap::new(power().coeffs.clone());
        let z = Complex64::from_polar(r, t);
        let a = eval_map(&map, z.conj()).unwrap();
        let b = eval_map(&map, z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12);
    }

    #[test]
    fn interior_of_disc_lands_inside_curve(r in 0.0f64..0.95, t in -PI..PI) {
        let map = ConformalMap::new(uniform().coeffs.clone());
        let w = eval_map(&map, Complex64::from_polar(r, t)).unwrap();
        prop_assert!(point_in_domain(&uniform().curve, w).unwrap());
    }
}
