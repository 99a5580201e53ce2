use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::distribution::{lift_phi, Atom, DistributionSpec, Gap, PhiFunction, QuantileFn, SINGULAR_DENSITY};
use crate::error::{Error, Result};
use crate::spectral::{
    cosine_coefficients, divergence_probe, doubling_schedule, FourierCoefficients, GrowthClassification,
    ProbeResult, DEFAULT_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Bounded => "Bounded",
            Self::Unbounded => "Unbounded",
            Self::Inconclusive => "Inconclusive",
        }
    }
}

/// The rung of the decision ladder that settled the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictBasis {
    /// The support reaches ±∞, so φ and U are horizontally unbounded.
    UnboundedSupport,
    /// A gap in the support puts a vertical strip inside U.
    Gap,
    /// Atoms present; the density criterion does not apply to mixed laws.
    MixedLaw,
    /// inf ρ > 0 on the support: bounded by theorem.
    DensityBoundedBelow,
    /// Every probe at a density zero converged: numerical evidence only.
    ProbesConvergent,
    /// Some probe at a density zero diverged.
    ProbeDivergent,
    /// Probes neither converged nor diverged.
    ProbesUndetermined,
}

impl VerdictBasis {
    pub fn label(&self) -> &'static str {
        match self {
            Self::UnboundedSupport => "unbounded_support",
            Self::Gap => "gap",
            Self::MixedLaw => "mixed_law",
            Self::DensityBoundedBelow => "theorem_inf_density_positive",
            Self::ProbesConvergent => "numerical_evidence_probes_convergent",
            Self::ProbeDivergent => "divergent_probe",
            Self::ProbesUndetermined => "probes_undetermined",
        }
    }

    /// Whether the verdict follows from a theorem rather than numerics.
    pub fn is_theorem(&self) -> bool {
        matches!(self, Self::UnboundedSupport | Self::Gap | Self::DensityBoundedBelow)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub support_bounded: bool,
    pub inf_density: f64,
    pub gaps: Vec<Gap>,
    pub atoms: Vec<Atom>,
    pub probe_results: Vec<ProbeResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport {
    pub verdict: Verdict,
    pub basis: VerdictBasis,
    pub evidence: Evidence,
    /// ((x_min, x_max), (y_min, y_max)) when bounded.
    pub max_extent: Option<((f64, f64), (f64, f64))>,
}

/// Decide whether the μ-domain is bounded.
///
/// Ladder: unbounded support, then gaps (both imply Unbounded), then atoms
/// (Inconclusive), then inf ρ > 0 (Bounded by theorem), then divergence
/// probes of the conjugate series at each density zero. `phi` and `coeffs`
/// are built from `spec` when not supplied.
pub fn boundedness_verdict(
    spec: &DistributionSpec,
    phi: Option<&PhiFunction>,
    coeffs: Option<&FourierCoefficients>,
) -> Result<BoundednessReport> {
    let support = spec.support();
    let mut evidence = Evidence {
        support_bounded: support.is_bounded(),
        inf_density: 0.0,
        gaps: Vec::new(),
        atoms: Vec::new(),
        probe_results: Vec::new(),
    };
    let report = |verdict, basis, evidence| BoundednessReport { verdict, basis, evidence, max_extent: None };
    if !evidence.support_bounded {
        return Ok(report(Verdict::Unbounded, VerdictBasis::UnboundedSupport, evidence));
    }

    let owned_phi;
    let phi = match phi {
        Some(p) => p,
        None => {
            owned_phi = lift_phi(QuantileFn::from_spec(spec)?);
            &owned_phi
        }
    };
    let q = phi.quantile().ok_or(Error::NotApplicable("profile is not lifted from a law"))?;
    evidence.gaps = q.gaps().to_vec();
    evidence.atoms = q.atoms().to_vec();
    evidence.inf_density = q.inf_density();
    if !evidence.gaps.is_empty() {
        return Ok(report(Verdict::Unbounded, VerdictBasis::Gap, evidence));
    }
    if !evidence.atoms.is_empty() {
        return Ok(report(Verdict::Inconclusive, VerdictBasis::MixedLaw, evidence));
    }

    let owned_coeffs;
    let coeffs = match coeffs {
        Some(c) => c,
        None => {
            owned_coeffs = cosine_coefficients(phi, DEFAULT_ORDER)?;
            &owned_coeffs
        }
    };
    let extent = |coeffs: &FourierCoefficients| {
        let s = coeffs.conjugate();
        let mut ymax: f64 = 0.0;
        for k in 0..=1024 {
            ymax = ymax.max(s.eval(PI * k as f64 / 1024.0).abs());
        }
        for &t in phi.singular_positive() {
            ymax = ymax.max(s.eval(t).abs());
        }
        Some(((support.lo, support.hi), (-ymax, ymax)))
    };
    if evidence.inf_density >= SINGULAR_DENSITY {
        let max_extent = extent(coeffs);
        return Ok(BoundednessReport {
            verdict: Verdict::Bounded,
            basis: VerdictBasis::DensityBoundedBelow,
            evidence,
            max_extent,
        });
    }

    let schedule = doubling_schedule(coeffs.order());
    evidence.probe_results = phi.singular_positive().iter().map(|&t| divergence_probe(coeffs, t, &schedule)).collect();
    let any = |f: fn(&GrowthClassification) -> bool| evidence.probe_results.iter().any(|p| f(&p.classification));
    if any(|c| matches!(c, GrowthClassification::Divergent)) {
        return Ok(report(Verdict::Unbounded, VerdictBasis::ProbeDivergent, evidence));
    }
    if any(|c| matches!(c, GrowthClassification::Undetermined)) {
        return Ok(report(Verdict::Inconclusive, VerdictBasis::ProbesUndetermined, evidence));
    }
    let max_extent = extent(coeffs);
    Ok(BoundednessReport { verdict: Verdict::Bounded, basis: VerdictBasis::ProbesConvergent, evidence, max_extent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;
    use alloc::vec;

    fn verdict(spec: DistributionSpec) -> BoundednessReport {
        boundedness_verdict(&spec, None, None).unwrap()
    }

    #[test]
    fn trichotomy_of_examples() {
        let u = verdict(DistributionSpec::uniform(-1.0, 1.0).unwrap());
        assert_eq!((u.verdict, u.basis), (Verdict::Bounded, VerdictBasis::DensityBoundedBelow));
        let ((x0, x1), (y0, y1)) = u.max_extent.unwrap();
        assert_eq!((x0, x1), (-1.0, 1.0));
        assert!(y1 > 0.74 && y0 == -y1);

        let p = verdict(DistributionSpec::power(1.0).unwrap());
        assert_eq!((p.verdict, p.basis), (Verdict::Bounded, VerdictBasis::ProbesConvergent));
        assert_eq!(p.evidence.probe_results.len(), 1);

        let f = verdict(DistributionSpec::flat_exp());
        assert_eq!((f.verdict, f.basis), (Verdict::Unbounded, VerdictBasis::ProbeDivergent));
        assert!(f.max_extent.is_none());

        let t = verdict(DistributionSpec::two_interval_uniform());
        assert_eq!((t.verdict, t.basis), (Verdict::Unbounded, VerdictBasis::Gap));
        assert_eq!(t.evidence.gaps.len(), 1);
        assert_eq!((t.evidence.gaps[0].left_x, t.evidence.gaps[0].right_x), (-1.0, 1.0));
    }

    #[test]
    fn unbounded_support_short_circuits() {
        let spec = DistributionSpec::from_density(Arc::new(|x: f64| 0.5 * (-x.abs()).exp()), f64::NEG_INFINITY, f64::INFINITY)
            .unwrap();
        let r = verdict(spec);
        assert_eq!((r.verdict, r.basis), (Verdict::Unbounded, VerdictBasis::UnboundedSupport));
        assert!(!r.evidence.support_bounded);
    }

    #[test]
    fn atoms_are_inconclusive() {
        let spec = DistributionSpec::from_cdf_points(vec![(-1.0, 0.0), (0.0, 0.35), (0.0, 0.65), (1.0, 1.0)]).unwrap();
        let r = verdict(spec);
        assert_eq!((r.verdict, r.basis), (Verdict::Inconclusive, VerdictBasis::MixedLaw));
        assert_eq!(r.evidence.atoms.len(), 1);
    }
}
