//! Cosine coefficients of φ and the conjugate (sine) series that gives H{φ}.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::distribution::phi::wrap_angle;
use crate::distribution::PhiFunction;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_edges, panel_edges, GaussLegendre};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 4096;
const RULE_POINTS: usize = 16;
const MIN_PANEL: f64 = 1e-12;

/// a₁..a_N of φ(θ) = Σ aₙ cos(nθ). There is no a₀: the law is centered.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    a: Vec<f64>,
    tail_estimate: f64,
    quadrature_error: f64,
}

impl FourierCoefficients {
    /// Wrap a coefficient vector (index 0 holds a₁).
    pub fn from_vec(a: Vec<f64>) -> Self {
        let tail_estimate = tail_energy(&a);
        Self { a, tail_estimate, quadrature_error: 0.0 }
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// aₙ for n ≥ 1 (0 beyond the truncation).
    pub fn get(&self, n: usize) -> f64 {
        if n == 0 { 0.0 } else { self.a.get(n - 1).copied().unwrap_or(0.0) }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    /// Estimated Σ_{n>N} aₙ²/2, extrapolated from the last two octaves.
    pub fn tail_estimate(&self) -> f64 {
        self.tail_estimate
    }

    /// Largest change of a sampled coefficient under panel refinement.
    pub fn quadrature_error(&self) -> f64 {
        self.quadrature_error
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self::from_vec(self.a[..n.min(self.a.len())].to_vec())
    }

    pub fn conjugate(&self) -> ConjugateSeries<'_> {
        ConjugateSeries { coeffs: self }
    }

    /// Σ aₙ cos(nθ), the truncated reconstruction of φ.
    pub fn cosine_sum(&self, theta: f64) -> f64 {
        let t = wrap_angle(theta);
        reinsch(&self.a, t).0
    }

    /// Σ aₙ sin(nθ) using only the first `n` terms.
    pub fn partial_conjugate(&self, theta: f64, n: usize) -> f64 {
        conjugate_sum(&self.a[..n.min(self.a.len())], theta)
    }
}

fn tail_energy(a: &[f64]) -> f64 {
    let n = a.len();
    if n < 8 {
        return 0.0;
    }
    let energy = |r: core::ops::Range<usize>| -> f64 { a[r].iter().map(|x| 0.5 * x * x).sum() };
    let last = energy(n / 2..n);
    let prev = energy(n / 4..n / 2);
    if prev > 0.0 && last < prev {
        let r = last / prev;
        last * r / (1.0 - r)
    } else {
        last
    }
}

/// The conjugate series θ ↦ Σ aₙ sin(nθ).
#[derive(Debug, Clone, Copy)]
pub struct ConjugateSeries<'a> {
    coeffs: &'a FourierCoefficients,
}

impl ConjugateSeries<'_> {
    pub fn eval(&self, theta: f64) -> f64 {
        conjugate_sum(&self.coeffs.a, theta)
    }

    pub fn coefficients(&self) -> &FourierCoefficients {
        self.coeffs
    }
}

/// Σ aₙ sin(nθ); exactly zero at θ = 0 and θ = ±π.
pub fn conjugate_eval(c: &ConjugateSeries<'_>, theta: f64) -> f64 {
    c.eval(theta)
}

fn conjugate_sum(a: &[f64], theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t == 0.0 || t == PI {
        return 0.0;
    }
    reinsch(a, t).1
}

/// Clenshaw summation with Reinsch's modification, returning
/// (Σ aₙ cos(nθ), Σ aₙ sin(nθ)) for n = 1..=len.
///
/// The plain recurrence b_k = a_k + 2cosθ b_{k+1} − b_{k+2} loses accuracy
/// as cosθ → ±1; carrying the differences b_k ∓ b_{k+1} keeps the error
/// O(N ε) near θ = 0 and θ = π.
fn reinsch(a: &[f64], t: f64) -> (f64, f64) {
    let c = t.cos();
    let s = t.sin();
    let mut b1 = 0.0; // b_{k+1}
    if c >= 0.0 {
        let lambda = -4.0 * (0.5 * t).sin().powi(2);
        let mut d = 0.0; // b_{k+1} - b_{k+2}
        for &ak in a.iter().rev() {
            d += ak + lambda * b1;
            b1 += d;
        }
        // b1 = b_1, d = b_1 − b_2, and cosθ − 1 = λ/2
        (0.5 * lambda * b1 + d, s * b1)
    } else {
        let mu = 4.0 * (0.5 * t).cos().powi(2);
        let mut e = 0.0; // b_{k+1} + b_{k+2}
        for &ak in a.iter().rev() {
            e = ak + mu * b1 - e;
            b1 = e - b1;
        }
        // e = b_1 + b_2, and cosθ + 1 = μ/2
        (0.5 * mu * b1 - e, s * b1)
    }
}

/// (1/2π)∫φ over a period, the constant term a centered law must not have.
pub fn constant_term(phi: &PhiFunction) -> f64 {
    let rule = GaussLegendre::new(RULE_POINTS);
    let edges = panel_edges(&phi.half_range_knots(), PI / 64.0, MIN_PANEL);
    integrate_edges(&rule, &edges, |t| phi.eval(t)) / PI
}

/// aₙ = (2/π)∫₀^π φ(θ)cos(nθ)dθ for n = 1..=order.
///
/// Composite 16-point Gauss–Legendre panels with edges at the breakpoints of
/// φ and geometric grading into singular points; panel widths are capped at
/// 8/order so every cos(nθ) is resolved. φ is sampled once and the cosines
/// are advanced by rotation, reseeded every 64 orders.
pub fn cosine_coefficients(phi: &PhiFunction, order: usize) -> Result<FourierCoefficients> {
    if order == 0 {
        return Err(Error::Config("truncation order must be at least 1"));
    }
    if let Some(s) = phi.support() {
        if !s.is_bounded() {
            return Err(Error::UnboundedSupport);
        }
    }
    let knots = phi.half_range_knots();
    let max_width = (PI / 64.0).min(8.0 / order as f64);
    let rule = GaussLegendre::new(RULE_POINTS);
    let edges = panel_edges(&knots, max_width, MIN_PANEL);
    let a = coefficients_on(phi, &rule, &edges, order);

    // same quadrature with every panel halved, on a sample of orders
    let mut fine_edges = Vec::with_capacity(2 * edges.len());
    for w in edges.windows(2) {
        fine_edges.push(w[0]);
        fine_edges.push(0.5 * (w[0] + w[1]));
    }
    fine_edges.push(PI);
    let mut sample: Vec<usize> = [1, 2, 3, order / 4, order / 2, order - 1, order]
        .into_iter()
        .filter(|&n| n >= 1 && n <= order)
        .collect();
    sample.dedup();
    let quadrature_error = sample
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let fine = integrate_edges(&rule, &fine_edges, |t| phi.eval(t) * (nf * t).cos()) * 2.0 / PI;
            (fine - a[n - 1]).abs()
        })
        .fold(0.0, f64::max);

    let tail_estimate = tail_energy(&a);
    Ok(FourierCoefficients { a, tail_estimate, quadrature_error })
}

fn coefficients_on(phi: &PhiFunction, rule: &GaussLegendre, edges: &[f64], order: usize) -> Vec<f64> {
    let mut a = alloc::vec![0.0; order];
    for w in edges.windows(2) {
        for (t, wt) in rule.mapped(w[0], w[1]) {
            let f = wt * phi.eval(t) * (2.0 / PI);
            if f == 0.0 {
                continue;
            }
            let (s1, c1) = t.sin_cos();
            let (mut c, mut s) = (c1, s1);
            for (i, slot) in a.iter_mut().enumerate() {
                *slot += f * c;
                let n = i + 2;
                if n % 64 == 0 {
                    let (sn, cn) = (n as f64 * t).sin_cos();
                    c = cn;
                    s = sn;
                } else {
                    let cn = c * c1 - s * s1;
                    s = s * c1 + c * s1;
                    c = cn;
                }
            }
        }
    }
    a
}

/// Σ aₙ²/2, to be compared with Var(μ).
pub fn parseval_variance(c: &FourierCoefficients) -> f64 {
    c.a.iter().map(|x| 0.5 * x * x).sum()
}

/// Verdict of a divergence probe on the partial sums S_N(θ₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClassification {
    /// Partial sums settle; `estimate` adds the geometric tail of the increments.
    Convergent { estimate: f64 },
    Divergent,
    Undetermined,
}

impl GrowthClassification {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Convergent { .. } => "convergent",
            Self::Divergent => "divergent",
            Self::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeThresholds {
    /// |S_{2N} − S_N| below this is converged outright.
    pub cauchy_tol: f64,
    /// Minimum growth of |S_N| per doubling that counts as divergent growth.
    pub growth: f64,
    /// Consecutive doublings needed for either pattern.
    pub consecutive: usize,
    /// Increments shrinking at least this fast are summable.
    pub geometric_ratio: f64,
}

impl Default for ProbeThresholds {
    fn default() -> Self {
        Self { cauchy_tol: 1e-6, growth: 0.1, consecutive: 3, geometric_ratio: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub theta: f64,
    pub schedule: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub classification: GrowthClassification,
}

/// Truncation orders 4, 8, ..., up to `max_order`.
pub fn doubling_schedule(max_order: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut n = 4;
    while n <= max_order {
        v.push(n);
        n *= 2;
    }
    v
}

/// Evaluate S_N(θ₀) along `schedule` and classify the growth.
///
/// Convergent: the last increment is below `cauchy_tol`, or the last
/// `consecutive` increments shrink geometrically (ratio ≤ `geometric_ratio`).
/// Divergent: |S_N| grows by at least `growth` across `consecutive`
/// successive doublings somewhere along the schedule. Anything else is
/// Undetermined.
pub fn divergence_probe(c: &FourierCoefficients, theta0: f64, schedule: &[usize]) -> ProbeResult {
    divergence_probe_with(c, theta0, schedule, ProbeThresholds::default())
}

pub fn divergence_probe_with(
    c: &FourierCoefficients,
    theta0: f64,
    schedule: &[usize],
    th: ProbeThresholds,
) -> ProbeResult {
    let mut sched: Vec<usize> = schedule.iter().copied().filter(|&n| n >= 1 && n <= c.order()).collect();
    sched.dedup();
    let increasing = sched.windows(2).all(|w| w[1] > w[0]);
    let t = wrap_angle(theta0);
    // running sum with rotated sines
    let mut sums = Vec::with_capacity(sched.len());
    if increasing && !sched.is_empty() {
        let (s1, c1) = t.sin_cos();
        let (mut s, mut co) = (s1, c1);
        let mut acc = 0.0;
        let mut next = 0;
        for n in 1..=sched[sched.len() - 1] {
            if t != 0.0 && t != PI {
                acc += c.a[n - 1] * s;
            }
            if n == sched[next] {
                sums.push(acc);
                next += 1;
            }
            if (n + 1) % 64 == 0 {
                let (sn, cn) = ((n + 1) as f64 * t).sin_cos();
                s = sn;
                co = cn;
            } else {
                let sn = s * c1 + co * s1;
                co = co * c1 - s * s1;
                s = sn;
            }
        }
    }
    let classification = if !increasing || sums.len() < th.consecutive + 1 {
        GrowthClassification::Undetermined
    } else {
        classify(&sums, th)
    };
    ProbeResult { theta: theta0, schedule: sched, partial_sums: sums, classification }
}

fn classify(sums: &[f64], th: ProbeThresholds) -> GrowthClassification {
    let inc: Vec<f64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    let last = inc[inc.len() - 1];
    if last.abs() <= th.cauchy_tol {
        return GrowthClassification::Convergent { estimate: sums[sums.len() - 1] };
    }
    if inc.len() > th.consecutive {
        let tail = &inc[inc.len() - th.consecutive - 1..];
        let ratios: Vec<f64> = tail.windows(2).map(|w| (w[1] / w[0]).abs()).collect();
        if ratios.iter().all(|&r| r.is_finite() && r <= th.geometric_ratio) {
            let r = ratios.iter().copied().fold(0.0, f64::max);
            let same_sign = tail.windows(2).all(|w| w[0] * w[1] > 0.0);
            let extra = if same_sign { last * r / (1.0 - r) } else { 0.0 };
            return GrowthClassification::Convergent { estimate: sums[sums.len() - 1] + extra };
        }
    }
    let mut run = 0;
    for w in sums.windows(2) {
        if w[1].abs() - w[0].abs() >= th.growth {
            run += 1;
            if run >= th.consecutive {
                return GrowthClassification::Divergent;
            }
        } else {
            run = 0;
        }
    }
    GrowthClassification::Undetermined
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{lift_phi, DistributionSpec, QuantileFn};
    use alloc::sync::Arc;

    fn phi(spec: DistributionSpec) -> PhiFunction {
        lift_phi(QuantileFn::from_spec(&spec).unwrap())
    }

    /// Plain term-by-term sum, the oracle for the Reinsch recurrence.
    fn naive(a: &[f64], t: f64) -> (f64, f64) {
        a.iter().enumerate().fold((0.0, 0.0), |(c, s), (i, &x)| {
            let n = (i + 1) as f64;
            (c + x * (n * t).cos(), s + x * (n * t).sin())
        })
    }

    #[test]
    fn reinsch_matches_naive_sum_on_both_branches() {
        let a: Vec<f64> = (1..=200).map(|n| 1.0 / (n as f64).powf(1.5) * if n % 3 == 0 { -1.0 } else { 1.0 }).collect();
        for t in [1e-9, 0.3, 1.2, PI / 2.0, 2.0, 3.1, PI - 1e-9, -0.7, -2.9] {
            let (c, s) = reinsch(&a, t);
            let (cn, sn) = naive(&a, t);
            assert!((c - cn).abs() < 1e-12, "cos at {t}: {c} vs {cn}");
            assert!((s - sn).abs() < 1e-12, "sin at {t}: {s} vs {sn}");
        }
    }

    #[test]
    fn uniform_coefficients_match_antiderivative() {
        // (2/π)∫₀^π (2θ/π − 1)cos(nθ)dθ = (4/π²)((−1)ⁿ − 1)/n²
        let c = cosine_coefficients(&phi(DistributionSpec::uniform(-1.0, 1.0).unwrap()), 256).unwrap();
        for n in 1..=256 {
            let exact = if n % 2 == 1 { -8.0 / (PI * PI * (n * n) as f64) } else { 0.0 };
            assert!((c.get(n) - exact).abs() < 1e-12, "n = {n}");
        }
        assert!((c.get(1) + 0.810_569_469_138_702).abs() < 1e-12);
        assert!(c.quadrature_error() < 1e-12);
    }

    #[test]
    fn cosine_profile_has_single_coefficient() {
        let c = cosine_coefficients(&PhiFunction::cosine(1), 64).unwrap();
        assert!((c.get(1) - 1.0).abs() < 1e-13);
        for n in 2..=64 {
            assert!(c.get(n).abs() <= 1e-10);
        }
        assert!((parseval_variance(&c) - 0.5).abs() < 1e-12);
        assert!((conjugate_eval(&c.conjugate(), PI / 2.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn centered_builtins_have_no_constant_term() {
        for spec in [
            DistributionSpec::uniform(-1.0, 1.0).unwrap(),
            DistributionSpec::power(1.0).unwrap(),
            DistributionSpec::power(3.0).unwrap(),
            DistributionSpec::flat_exp(),
            DistributionSpec::two_interval_uniform(),
        ] {
            assert!(constant_term(&phi(spec)).abs() < 1e-8);
        }
    }

    #[test]
    fn conjugate_vanishes_at_zero_and_pi() {
        let c = cosine_coefficients(&phi(DistributionSpec::power(1.0).unwrap()), 512).unwrap();
        let s = c.conjugate();
        assert_eq!(s.eval(0.0), 0.0);
        assert_eq!(s.eval(PI), 0.0);
        assert_eq!(s.eval(-PI), 0.0);
    }

    #[test]
    fn uniform_conjugate_at_half_pi_is_catalan_multiple() {
        // partial-sum oracle: −(8/π²) Σ_k (−1)^k/(2k+1)², remainder below the first omitted term;
        // the truncated conjugate series at N = 4096 is off by less than 1/N²
        let mut catalan = 0.0;
        for k in 0..2_000_000u64 {
            let t = 1.0 / ((2 * k + 1) as f64).powi(2);
            catalan += if k % 2 == 0 { t } else { -t };
        }
        let expected = -8.0 / (PI * PI) * catalan;
        let c = cosine_coefficients(&phi(DistributionSpec::uniform(-1.0, 1.0).unwrap()), 4096).unwrap();
        assert!((conjugate_eval(&c.conjugate(), PI / 2.0) - expected).abs() < 1e-6);
        assert!((expected + 0.742_454).abs() < 1e-6);
    }

    #[test]
    fn parseval_uniform_reaches_one_third() {
        let c = cosine_coefficients(&phi(DistributionSpec::uniform(-1.0, 1.0).unwrap()), 1000).unwrap();
        assert!((parseval_variance(&c) - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn linearity_of_coefficients() {
        let f1: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|t: f64| (t.cos()).exp());
        let f2: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|t: f64| (2.0 * t).cos().powi(3));
        let (g1, g2) = (f1.clone(), f2.clone());
        let combo = PhiFunction::synthetic(Arc::new(move |t| 2.0 * g1(t) - 0.5 * g2(t)), None);
        let a1 = cosine_coefficients(&PhiFunction::synthetic(f1, None), 32).unwrap();
        let a2 = cosine_coefficients(&PhiFunction::synthetic(f2, None), 32).unwrap();
        let ac = cosine_coefficients(&combo, 32).unwrap();
        for n in 1..=32 {
            assert!((ac.get(n) - (2.0 * a1.get(n) - 0.5 * a2.get(n))).abs() < 1e-12);
        }
    }

    #[test]
    fn probe_classifies_the_worked_examples() {
        let sched = doubling_schedule(4096);
        for (spec, want) in [
            (DistributionSpec::uniform(-1.0, 1.0).unwrap(), "convergent"),
            (DistributionSpec::power(1.0).unwrap(), "convergent"),
            (DistributionSpec::flat_exp(), "divergent"),
        ] {
            let c = cosine_coefficients(&phi(spec.clone()), 4096).unwrap();
            let p = divergence_probe(&c, PI / 2.0, &sched);
            assert_eq!(p.classification.label(), want, "{spec:?}: {:?}", p.partial_sums);
        }
    }

    #[test]
    fn probe_with_bad_schedule_is_undetermined() {
        let c = FourierCoefficients::from_vec(alloc::vec![1.0; 64]);
        let p = divergence_probe(&c, 1.0, &[32, 16, 8, 4]);
        assert_eq!(p.classification, GrowthClassification::Undetermined);
    }

    #[test]
    fn unbounded_support_is_rejected() {
        let spec = DistributionSpec::from_density(Arc::new(|x: f64| 0.5 * (-x.abs()).exp()), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!(QuantileFn::from_spec(&spec).unwrap_err(), Error::UnboundedSupport);
    }
}
