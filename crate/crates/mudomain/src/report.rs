//! The `report.json` document. Every section is optional so the report
//! describes exactly the stages that ran.

use std::collections::BTreeMap;

use mudomain_core::domain::{BoundaryCurve, BoundednessReport, PointMethod};
use mudomain_core::montecarlo::GoodnessOfFit;
use mudomain_core::spectral::{FourierCoefficients, GrowthClassification, ProbeResult};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub spec: Value,
    pub family: String,
    pub support: (f64, f64),
    /// Shift applied to center the law.
    pub shift: f64,
    pub commands: Vec<String>,
    pub parameters: Parameters,
    pub verdict: Option<VerdictSection>,
    pub coefficients: Option<CoefficientSection>,
    pub boundary: Option<BoundarySection>,
    pub simulation: Option<SimulationSection>,
    pub fit: Option<FitSection>,
    /// Wall-clock milliseconds per stage.
    pub timings_ms: BTreeMap<String, f64>,
    pub status: Status,
    pub error: Option<ErrorSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Refused,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Parameters {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub excision: f64,
    pub max_steps: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapEntry {
    pub left_x: f64,
    pub right_x: f64,
    pub level: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomEntry {
    pub x: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeEntry {
    pub theta: f64,
    pub classification: &'static str,
    pub estimate: Option<f64>,
    pub schedule: Vec<usize>,
    pub partial_sums: Vec<f64>,
}

impl From<&ProbeResult> for ProbeEntry {
    fn from(p: &ProbeResult) -> Self {
        let estimate = match p.classification {
            GrowthClassification::Convergent { estimate } => Some(estimate),
            _ => None,
        };
        Self {
            theta: p.theta,
            classification: p.classification.label(),
            estimate,
            schedule: p.schedule.clone(),
            partial_sums: p.partial_sums.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictSection {
    pub verdict: &'static str,
    pub basis: &'static str,
    /// True when the rung is a theorem, false for numerical evidence.
    pub theorem: bool,
    pub support_bounded: bool,
    pub inf_density: f64,
    pub gaps: Vec<GapEntry>,
    pub atoms: Vec<AtomEntry>,
    pub probes: Vec<ProbeEntry>,
    pub max_extent: Option<((f64, f64), (f64, f64))>,
}

impl From<&BoundednessReport> for VerdictSection {
    fn from(r: &BoundednessReport) -> Self {
        let e = &r.evidence;
        Self {
            verdict: r.verdict.label(),
            basis: r.basis.label(),
            theorem: r.basis.is_theorem(),
            support_bounded: e.support_bounded,
            inf_density: e.inf_density,
            gaps: e.gaps.iter().map(|g| GapEntry { left_x: g.left_x, right_x: g.right_x, level: g.u }).collect(),
            atoms: e.atoms.iter().map(|a| AtomEntry { x: a.x, mass: a.mass }).collect(),
            probes: e.probe_results.iter().map(ProbeEntry::from).collect(),
            max_extent: r.max_extent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientSection {
    pub order: usize,
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    pub parseval_variance: f64,
    /// Var(μ) by quadrature of the quantile function.
    pub variance: f64,
}

impl CoefficientSection {
    pub fn new(c: &FourierCoefficients, variance: f64) -> Self {
        Self {
            order: c.order(),
            tail_estimate: c.tail_estimate(),
            quadrature_error: c.quadrature_error(),
            parseval_variance: mudomain_core::spectral::parseval_variance(c),
            variance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySection {
    pub points: usize,
    pub pv_points: usize,
    pub unbounded_flags: usize,
    pub extent: ((f64, f64), (f64, f64)),
    pub symmetry_defect: f64,
    /// Discrete univalence, absent when the curve is not closed.
    pub simple: Option<bool>,
}

impl From<&BoundaryCurve> for BoundarySection {
    fn from(c: &BoundaryCurve) -> Self {
        let flagged = c.points().iter().filter(|p| p.unbounded).count();
        Self {
            points: c.len(),
            pv_points: c.points().iter().filter(|p| p.method == PointMethod::Pv).count(),
            unbounded_flags: flagged,
            extent: c.extent(),
            symmetry_defect: c.symmetry_defect(),
            simple: (flagged == 0).then(|| c.is_simple()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSection {
    pub n_paths: usize,
    pub censored: usize,
    pub mean_steps: f64,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSection {
    pub ks_statistic: f64,
    pub n_effective: usize,
    pub mean_error: f64,
    pub variance_error: f64,
}

impl From<&GoodnessOfFit> for FitSection {
    fn from(g: &GoodnessOfFit) -> Self {
        Self {
            ks_statistic: g.ks_statistic,
            n_effective: g.n_effective,
            mean_error: g.mean_error,
            variance_error: g.variance_error,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorSection {
    /// Module the error came from.
    pub stage: &'static str,
    pub message: String,
    pub exit_code: i32,
}
