//! analyze → boundary → simulate → report.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use mudomain_core::distribution::{lift_phi, DistributionSpec, PhiFunction, QuantileFn};
use mudomain_core::domain::{boundary, boundedness_verdict, BoundaryCurve, BoundaryOptions, BoundednessReport, Verdict};
use mudomain_core::montecarlo::{empirical_cdf, ks_test, ExitSample};
use mudomain_core::spectral::{cosine_coefficients, FourierCoefficients};
use mudomain_core::Error as CoreError;

use crate::config::{Command, RunConfig};
use crate::output;
use crate::parallel::simulate_parallel;
use crate::report::{
    BoundarySection, CoefficientSection, ErrorSection, FitSection, Parameters, Report, SimulationSection, Status,
    VerdictSection,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad distribution spec or configuration.
    Spec,
    /// The numerics decline: unbounded domain, singular integrand, ...
    Refusal,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunError {
    pub stage: &'static str,
    pub kind: ErrorKind,
    pub message: String,
}

impl RunError {
    fn refusal(stage: &'static str, message: impl Into<String>) -> Self {
        Self { stage, kind: ErrorKind::Refusal, message: message.into() }
    }

    fn other(stage: &'static str, message: impl fmt::Display) -> Self {
        Self { stage, kind: ErrorKind::Other, message: message.to_string() }
    }

    fn core(stage: &'static str, e: CoreError) -> Self {
        let kind = match e {
            CoreError::InvalidSpec(_)
            | CoreError::Normalization { .. }
            | CoreError::NegativeDensity { .. }
            | CoreError::Config(_) => ErrorKind::Spec,
            CoreError::UnboundedSupport
            | CoreError::Singularity { .. }
            | CoreError::SingularIntegrand(_)
            | CoreError::NotApplicable(_)
            | CoreError::Construction(_)
            | CoreError::NoData
            | CoreError::NoDensity => ErrorKind::Refusal,
            CoreError::Domain { .. } => ErrorKind::Other,
        };
        Self { stage, kind, message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Spec => EXIT_SPEC,
            ErrorKind::Refusal => EXIT_REFUSED,
            ErrorKind::Other => EXIT_OTHER,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

impl std::error::Error for RunError {}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
    pub error: Option<RunError>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(EXIT_OK, RunError::exit_code)
    }

    /// A few human-readable lines on what ran.
    pub fn summary(&self) -> String {
        let r = &self.report;
        let mut s = format!("family {} on [{}, {}]\n", r.family, r.support.0, r.support.1);
        if let Some(v) = &r.verdict {
            let kind = if v.theorem { "theorem" } else { "numerical evidence" };
            s += &format!("verdict {} ({}, {kind})\n", v.verdict, v.basis);
            for p in &v.probes {
                s += &format!("  probe at theta = {:.6}: {}\n", p.theta, p.classification);
            }
            for g in &v.gaps {
                s += &format!("  gap ({}, {})\n", g.left_x, g.right_x);
            }
        }
        if let Some(c) = &r.coefficients {
            s += &format!(
                "coefficients N = {}: parseval {:.8} vs variance {:.8}\n",
                c.order, c.parseval_variance, c.variance
            );
        }
        if let Some(b) = &r.boundary {
            s += &format!("boundary {} points ({} principal value, {} flagged)\n", b.points, b.pv_points, b.unbounded_flags);
        }
        if let (Some(sim), Some(fit)) = (&r.simulation, &r.fit) {
            s += &format!(
                "simulation {} paths, {} censored: KS {:.5}, mean error {:.2e}\n",
                sim.n_paths, sim.censored, fit.ks_statistic, fit.mean_error
            );
        }
        if let Some(e) = &self.error {
            s += &format!("stopped: {e}\n");
        }
        s
    }
}

struct State<'a> {
    cfg: &'a RunConfig,
    report: Report,
    files: Vec<PathBuf>,
    progress: &'a mut dyn FnMut(&str),
}

impl State<'_> {
    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        (self.progress)(&format!("{stage} ..."));
        let t0 = Instant::now();
        let out = f(self);
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        *self.report.timings_ms.entry(stage.to_string()).or_insert(0.0) += ms;
        out
    }

    fn csv(&mut self, name: &str, write: impl FnOnce(&std::path::Path) -> std::io::Result<()>) -> Result<(), RunError> {
        if !self.cfg.formats.csv {
            return Ok(());
        }
        let path = self.cfg.output_dir.join(name);
        write(&path).map_err(|e| RunError::other("output", format!("{}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }
}

fn empty_report(cfg: &RunConfig, spec: &DistributionSpec) -> Report {
    let support = spec.support();
    Report {
        spec: cfg.source.clone(),
        family: spec.name().to_string(),
        support: (support.lo, support.hi),
        shift: spec.shift(),
        commands: cfg.commands.iter().map(|c| c.name().to_string()).collect(),
        parameters: Parameters {
            n: cfg.n,
            m: cfg.m,
            dt: cfg.sim.step_dt,
            n_paths: cfg.sim.n_paths,
            seed: cfg.sim.seed,
            excision: cfg.excision,
            max_steps: cfg.sim.max_steps,
        },
        verdict: None,
        coefficients: None,
        boundary: None,
        simulation: None,
        fit: None,
        timings_ms: BTreeMap::new(),
        status: Status::Ok,
        error: None,
    }
}

/// Run the requested stages and write their artifacts to `cfg.output_dir`.
///
/// `report.json` is written whenever JSON output is enabled, including after
/// a refusal, so the failing stage and reason are on disk.
pub fn run(cfg: &RunConfig, progress: &mut dyn FnMut(&str)) -> RunOutcome {
    let spec = cfg.spec.clone();
    let mut st = State { cfg, report: empty_report(cfg, &spec), files: Vec::new(), progress };
    let result = fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| RunError::other("output", format!("{}: {e}", cfg.output_dir.display())))
        .and_then(|()| execute(&mut st, spec));
    let error = result.err();
    st.report.status = match error.as_ref().map(|e| e.kind) {
        None => Status::Ok,
        Some(ErrorKind::Refusal) => Status::Refused,
        Some(_) => Status::Failed,
    };
    st.report.error = error.as_ref().map(|e| ErrorSection {
        stage: e.stage,
        message: e.message.clone(),
        exit_code: e.exit_code(),
    });
    let mut error = error;
    if cfg.formats.json && cfg.output_dir.is_dir() {
        let path = cfg.output_dir.join("report.json");
        let written = serde_json::to_string_pretty(&st.report)
            .map_err(|e| RunError::other("output", e))
            .and_then(|text| fs::write(&path, text + "\n").map_err(|e| RunError::other("output", e)));
        match written {
            Ok(()) => st.files.push(path),
            Err(e) => error = error.or(Some(e)),
        }
    }
    RunOutcome { report: st.report, files: st.files, error }
}

fn execute(st: &mut State<'_>, spec: DistributionSpec) -> Result<(), RunError> {
    let cfg = st.cfg;
    let bounded_support = spec.support().is_bounded();
    let spec = if bounded_support {
        st.timed("distribution", |_| spec.centered()).map_err(|e| RunError::core("distribution", e))?
    } else {
        spec
    };
    let support = spec.support();
    st.report.support = (support.lo, support.hi);
    st.report.shift = spec.shift();

    let needs_verdict = cfg.has(Command::Analyze) || cfg.has(Command::Simulate);
    let needs_coeffs = needs_verdict || cfg.has(Command::Boundary);

    let mut lifted: Option<(QuantileFn, PhiFunction, FourierCoefficients)> = None;
    if bounded_support && needs_coeffs {
        let q = st
            .timed("distribution", |_| QuantileFn::from_spec(&spec))
            .map_err(|e| RunError::core("distribution", e))?;
        let phi = lift_phi(q.clone());
        let coeffs =
            st.timed("spectral", |_| cosine_coefficients(&phi, cfg.n)).map_err(|e| RunError::core("spectral", e))?;
        st.csv("coefficients.csv", |p| output::write_coefficients(p, &coeffs))?;
        st.report.coefficients = Some(CoefficientSection::new(&coeffs, q.moments().1));
        lifted = Some((q, phi, coeffs));
    }

    let mut verdict: Option<BoundednessReport> = None;
    if needs_verdict {
        let (phi, coeffs) = match &lifted {
            Some((_, p, c)) => (Some(p), Some(c)),
            None => (None, None),
        };
        let v = st
            .timed("analyze", |_| boundedness_verdict(&spec, phi, coeffs))
            .map_err(|e| RunError::core("domain", e))?;
        st.report.verdict = Some(VerdictSection::from(&v));
        verdict = Some(v);
    }

    let mut curve: Option<BoundaryCurve> = None;
    if cfg.has(Command::Boundary) {
        let Some((_, phi, coeffs)) = &lifted else {
            return Err(RunError::core("domain", CoreError::UnboundedSupport));
        };
        let opts = BoundaryOptions { m: cfg.m, excision: cfg.excision, ..Default::default() };
        let c = st.timed("boundary", |_| boundary(phi, coeffs, &opts)).map_err(|e| RunError::core("domain", e))?;
        st.csv("boundary.csv", |p| output::write_boundary(p, &c))?;
        st.report.boundary = Some(BoundarySection::from(&c));
        curve = Some(c);
    }

    if cfg.has(Command::Simulate) {
        let v = verdict.as_ref().expect("verdict is computed whenever simulate is requested");
        if v.verdict != Verdict::Bounded {
            let why = match v.verdict {
                Verdict::Unbounded => "the domain is unbounded",
                _ => "boundedness of the domain is inconclusive",
            };
            return Err(RunError::refusal(
                "montecarlo",
                format!(
                    "simulate refused: {why} (verdict {}, basis {}); Brownian exit sampling needs a bounded closed boundary",
                    v.verdict.label(),
                    v.basis.label()
                ),
            ));
        }
        let (Some(curve), Some((q, _, _))) = (&curve, &lifted) else {
            return Err(RunError::other("montecarlo", "simulate requires boundary"));
        };
        let samples: Vec<ExitSample> = st
            .timed("simulate", |_| simulate_parallel(curve, &cfg.sim, cfg.workers))
            .map_err(|e| match e.downcast::<CoreError>() {
                Ok(core) => RunError::core("montecarlo", core),
                Err(other) => RunError::other("montecarlo", other),
            })?;
        st.csv("exits.csv", |p| output::write_exits(p, &samples))?;
        let censored = samples.iter().filter(|s| s.censored).count();
        let mean_steps = samples.iter().map(|s| s.steps_taken as f64).sum::<f64>() / samples.len() as f64;
        st.report.simulation =
            Some(SimulationSection { n_paths: samples.len(), censored, mean_steps, workers: cfg.workers });
        let ecdf = empirical_cdf(&samples).map_err(|e| RunError::core("montecarlo", e))?;
        st.report.fit = Some(FitSection::from(&ks_test(&ecdf, q)));
    }
    Ok(())
}
