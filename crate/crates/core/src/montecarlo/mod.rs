//! Brownian exit from the constructed domain and goodness of fit of the exit
//! law against μ.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::distribution::{CdfTable, QuantileFn};
use crate::domain::BoundaryCurve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub step_dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    /// Paths still inside after this many steps are censored.
    pub max_steps: u64,
}

impl SimulationConfig {
    /// `max_steps` defaults to 100/dt, i.e. a time horizon of 100.
    pub fn new(step_dt: f64, n_paths: usize, seed: u64) -> Result<Self> {
        let cfg = Self { step_dt, n_paths, seed, max_steps: (100.0 / step_dt).ceil() as u64 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_dt > 0.0 && self.step_dt.is_finite()) {
            return Err(Error::Config("step_dt must be positive"));
        }
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be at least 1"));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { step_dt: 1e-4, n_paths: 10_000, seed: 0, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitSample {
    pub path_index: u64,
    pub exit_point: Complex64,
    pub steps_taken: u64,
    pub censored: bool,
}

/// The generator for one path: ChaCha8 keyed by `seed`, with the path index
/// as stream number, so every path draws the same numbers wherever it runs.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// Fails unless the curve is closed and bounded with the origin inside.
pub fn check_start(curve: &BoundaryCurve) -> Result<()> {
    if !curve.polygon()?.contains(0.0, 0.0) {
        return Err(Error::NotApplicable("origin is not inside the boundary curve"));
    }
    Ok(())
}

/// Run one Euler path from the origin until it leaves the curve.
///
/// Each step adds √dt·(g₁, g₂). The first position classified outside ends
/// the path; the exit point is where the last step crosses the polyline, or
/// the nearest boundary point when the step only entered the boundary band.
pub fn sample_exit(curve: &BoundaryCurve, cfg: &SimulationConfig, path_index: u64) -> Result<ExitSample> {
    let poly = curve.polygon()?;
    let mut rng = path_rng(cfg.seed, path_index);
    let sd = cfg.step_dt.sqrt();
    let (mut x, mut y) = (0.0, 0.0);
    for step in 1..=cfg.max_steps {
        let gx: f64 = rng.sample(StandardNormal);
        let gy: f64 = rng.sample(StandardNormal);
        let (nx, ny) = (x + sd * gx, y + sd * gy);
        if !poly.contains(nx, ny) {
            let hit = poly.first_crossing((x, y), (nx, ny)).unwrap_or_else(|| poly.nearest_point((nx, ny)));
            return Ok(ExitSample {
                path_index,
                exit_point: Complex64::new(hit.0, hit.1),
                steps_taken: step,
                censored: false,
            });
        }
        x = nx;
        y = ny;
    }
    Ok(ExitSample { path_index, exit_point: Complex64::new(x, y), steps_taken: cfg.max_steps, censored: true })
}

/// All paths in index order.
pub fn simulate(curve: &BoundaryCurve, cfg: &SimulationConfig) -> Result<Vec<ExitSample>> {
    cfg.validate()?;
    check_start(curve)?;
    (0..cfg.n_paths as u64).map(|i| sample_exit(curve, cfg, i)).collect()
}

/// Right-continuous empirical CDF of exit real parts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
    censored: usize,
}

impl EmpiricalCdf {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        values.retain(|v| v.is_finite());
        if values.is_empty() {
            return Err(Error::NoData);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values, censored: 0 })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// F̂(x−).
    pub fn eval_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn censored(&self) -> usize {
        self.censored
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// (mean, variance) of the sample, variance with divisor n.
    pub fn moments(&self) -> (f64, f64) {
        let n = self.sorted.len() as f64;
        let mean = self.sorted.iter().sum::<f64>() / n;
        let var = self.sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        (mean, var)
    }

    /// Law of −X.
    pub fn reflected(&self) -> Self {
        let mut v: Vec<f64> = self.sorted.iter().map(|x| -x).collect();
        v.reverse();
        Self { sorted: v, censored: self.censored }
    }
}

/// Empirical CDF of Re(exit point) over non-censored samples.
pub fn empirical_cdf(samples: &[ExitSample]) -> Result<EmpiricalCdf> {
    let xs: Vec<f64> = samples.iter().filter(|s| !s.censored).map(|s| s.exit_point.re).collect();
    let censored = samples.len() - xs.len();
    let mut e = EmpiricalCdf::from_values(xs)?;
    e.censored = censored;
    Ok(e)
}

/// A target law for goodness-of-fit tests.
pub trait TargetLaw {
    fn cdf(&self, x: f64) -> f64;
    /// F(x−); equal to F(x) for continuous laws.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
    /// (mean, variance).
    fn mean_variance(&self) -> (f64, f64);
}

impl TargetLaw for QuantileFn {
    fn cdf(&self, x: f64) -> f64 {
        QuantileFn::cdf(self, x)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        match self.atoms().iter().find(|a| a.x == x) {
            Some(a) => QuantileFn::cdf(self, x) - a.mass,
            None => QuantileFn::cdf(self, x),
        }
    }

    fn mean_variance(&self) -> (f64, f64) {
        self.moments()
    }
}

impl TargetLaw for CdfTable {
    fn cdf(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        let xs = self.xs();
        let i = xs.partition_point(|&v| v < x);
        if i < xs.len() && xs[i] == x {
            // value reached from the left: first node at x
            if i == 0 { 0.0 } else { self.values()[i] }
        } else {
            self.eval(x)
        }
    }

    fn mean_variance(&self) -> (f64, f64) {
        let (xs, fs) = (self.xs(), self.values());
        let (mut m1, mut m2) = (fs[0] * xs[0], fs[0] * xs[0] * xs[0]);
        for i in 1..xs.len() {
            let mass = fs[i] - fs[i - 1];
            let (a, b) = (xs[i - 1], xs[i]);
            m1 += mass * 0.5 * (a + b);
            m2 += mass * (a * a + a * b + b * b) / 3.0;
        }
        (m1, m2 - m1 * m1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessOfFit {
    pub ks_statistic: f64,
    pub n_effective: usize,
    pub mean_error: f64,
    pub variance_error: f64,
}

/// Kolmogorov–Smirnov distance sup|F̂ − F|, evaluated at every sample value
/// and its left limit, plus the errors in mean and variance.
pub fn ks_test<L: TargetLaw + ?Sized>(ecdf: &EmpiricalCdf, target: &L) -> GoodnessOfFit {
    let v = ecdf.values();
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        d = d.max((j as f64 / n - target.cdf(x)).abs());
        d = d.max((i as f64 / n - target.cdf_left(x)).abs());
        i = j;
    }
    let (m, var) = ecdf.moments();
    let (tm, tvar) = target.mean_variance();
    GoodnessOfFit {
        ks_statistic: d.min(1.0),
        n_effective: v.len(),
        mean_error: m - tm,
        variance_error: var - tvar,
    }
}

/// sup|F̂₁ − F̂₂| over the pooled sample.
pub fn two_sample_ks(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    a.values()
        .iter()
        .chain(b.values())
        .map(|&x| (a.eval(x) - b.eval(x)).abs())
        .fold(0.0, f64::max)
}
