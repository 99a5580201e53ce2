use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::quadrature::{adaptive, GaussLegendre};

use super::spec::{DistributionSpec, Family, CDF_END_TOL};

/// |∫ρ − 1| allowed before `build_cdf` rejects a density.
pub const NORMALIZATION_TOL: f64 = 1e-6;
/// Cells are split until linear interpolation is this accurate at their midpoint.
pub const BUILD_CDF_REFINE_TOL: f64 = 1e-9;
const MAX_CELLS: usize = 1 << 21;

/// Tabulated CDF, linear between nodes. Nodes may repeat an x to encode a
/// jump (atom); F is right-continuous there.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

/// Point mass found in a CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

impl CdfTable {
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let fs: Vec<f64> = points.iter().map(|p| p.1).collect();
        Self::new(xs, fs)
    }

    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() || xs.len() < 2 {
            return Err(Error::InvalidSpec("cdf table needs matching x and F columns of length >= 2"));
        }
        let ok = xs.windows(2).all(|w| w[1] >= w[0]) && fs.windows(2).all(|w| w[1] >= w[0]);
        if !ok {
            return Err(Error::InvalidSpec("cdf table must be nondecreasing in x and F"));
        }
        if fs[0] > CDF_END_TOL || fs[fs.len() - 1] < 1.0 - CDF_END_TOL || fs[0] < 0.0 || fs[fs.len() - 1] > 1.0 {
            return Err(Error::InvalidSpec("cdf table values must run from 0 to 1"));
        }
        Ok(Self { xs, fs })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.fs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self { xs: self.xs.iter().map(|x| x + by).collect(), fs: self.fs.clone() }
    }

    /// F(x), right-continuous.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.xs[0] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        if i + 1 == self.xs.len() {
            return if x > self.xs[i] { 1.0 } else { self.fs[i] };
        }
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (f0, f1) = (self.fs[i], self.fs[i + 1]);
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }

    /// inf{x : F(x) ≥ u}.
    pub fn quantile(&self, u: f64) -> f64 {
        let j = self.fs.partition_point(|&f| f < u);
        self.invert_cell(j, u)
    }

    /// inf{x : F(x) > u}, the right limit of the pseudo-inverse.
    pub fn quantile_right(&self, u: f64) -> f64 {
        let j = self.fs.partition_point(|&f| f <= u);
        self.invert_cell(j, u)
    }

    fn invert_cell(&self, j: usize, u: f64) -> f64 {
        let n = self.xs.len();
        if j == 0 {
            return self.xs[0];
        }
        if j >= n {
            return self.xs[n - 1];
        }
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let (f0, f1) = (self.fs[j - 1], self.fs[j]);
        if x1 == x0 || f1 == f0 || u >= f1 {
            return x1;
        }
        (x0 + (x1 - x0) * (u - f0) / (f1 - f0)).clamp(x0, x1)
    }

    /// Slope of the cell containing x (0 outside the table).
    pub fn density(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > self.xs[self.xs.len() - 1] {
            return 0.0;
        }
        let i = (self.xs.partition_point(|&v| v <= x) - 1).min(self.xs.len() - 2);
        let dx = self.xs[i + 1] - self.xs[i];
        if dx <= 0.0 {
            return f64::INFINITY;
        }
        (self.fs[i + 1] - self.fs[i]) / dx
    }
}

/// Integrate the density of `spec` into a CDF table.
///
/// Starts from a uniform grid of `grid_size` cells (plus known kinks of the
/// builtin densities) and bisects any cell whose midpoint F differs from the
/// linear interpolant by more than [`BUILD_CDF_REFINE_TOL`]. Near density
/// zeros and spikes that is where the curvature of F sits.
pub fn build_cdf(spec: &DistributionSpec, grid_size: usize) -> Result<CdfTable> {
    build_cdf_with_tol(spec, grid_size, BUILD_CDF_REFINE_TOL)
}

pub(crate) fn build_cdf_with_tol(spec: &DistributionSpec, grid_size: usize, refine_tol: f64) -> Result<CdfTable> {
    if grid_size < 16 {
        return Err(Error::Config("grid_size must be at least 16"));
    }
    if !spec.has_density() {
        return Err(Error::NoDensity);
    }
    let support = spec.raw_support();
    if !support.is_bounded() {
        return Err(Error::UnboundedSupport);
    }
    let (lo, hi) = (support.lo, support.hi);
    let mut seeds: Vec<f64> = (0..=grid_size).map(|i| lo + (hi - lo) * i as f64 / grid_size as f64).collect();
    match spec.family() {
        Family::Power { .. } | Family::FlatExp => seeds.push(0.0),
        Family::TwoIntervalUniform => seeds.extend([-1.0, 1.0]),
        _ => {}
    }
    seeds.sort_by(f64::total_cmp);
    seeds.dedup();

    let rule = GaussLegendre::new(10);
    let shift = spec.shift();
    let mut negative: Option<(f64, f64)> = None;
    let mut rho = |x: f64| -> f64 {
        let v = spec.pdf(x + shift).unwrap_or(0.0);
        if !(v >= 0.0) && negative.is_none() {
            negative = Some((x + shift, v));
        }
        v
    };
    let mass = |a: f64, b: f64, rho: &mut dyn FnMut(f64) -> f64| -> f64 {
        let scale = (b - a).max(1e-300);
        adaptive(&rule, a, b, 1e-15 * scale.max(1e-3), rho).0
    };

    // (left edge, mass) of accepted cells, built left to right
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(seeds.len());
    for w in seeds.windows(2) {
        let mut stack: Vec<(f64, f64, f64)> = Vec::new();
        let m = mass(w[0], w[1], &mut rho);
        stack.push((w[0], w[1], m));
        while let Some((a, b, m)) = stack.pop() {
            let mid = 0.5 * (a + b);
            let ml = mass(a, mid, &mut rho);
            let mr = m - ml;
            let interp_err = 0.5 * (ml - mr).abs();
            if interp_err > refine_tol && cells.len() + stack.len() < MAX_CELLS && (b - a) > 1e-12 * (hi - lo) {
                stack.push((mid, b, mr));
                stack.push((a, mid, ml));
            } else {
                cells.push((a, m));
            }
        }
    }
    if let Some((x, value)) = negative {
        return Err(Error::NegativeDensity { x, value });
    }
    let total: f64 = cells.iter().map(|c| c.1).sum();
    if !((total - 1.0).abs() <= NORMALIZATION_TOL) {
        return Err(Error::Normalization { total, tolerance: NORMALIZATION_TOL });
    }
    let mut xs = Vec::with_capacity(cells.len() + 1);
    let mut fs = Vec::with_capacity(cells.len() + 1);
    let mut acc = 0.0;
    for &(x, m) in &cells {
        xs.push(x + shift);
        fs.push((acc / total).min(1.0));
        acc += m;
    }
    xs.push(hi + shift);
    fs.push(1.0);
    CdfTable::new(xs, fs)
}

/// Jumps of F larger than `mass_threshold`, at zero-width (or numerically
/// zero-width) cells and at the first node.
pub fn detect_atoms(cdf: &CdfTable, mass_threshold: f64) -> Vec<Atom> {
    let xs = cdf.xs();
    let fs = cdf.values();
    let scale = (xs[xs.len() - 1] - xs[0]).abs().max(1.0);
    let mut atoms: Vec<Atom> = Vec::new();
    if fs[0] > mass_threshold {
        atoms.push(Atom { x: xs[0], mass: fs[0] });
    }
    for i in 0..xs.len() - 1 {
        let dm = fs[i + 1] - fs[i];
        if dm > mass_threshold && xs[i + 1] - xs[i] <= 1e-12 * scale {
            match atoms.last_mut() {
                Some(a) if (a.x - xs[i + 1]).abs() <= 1e-12 * scale => a.mass += dm,
                _ => atoms.push(Atom { x: xs[i + 1], mass: dm }),
            }
        }
    }
    atoms
}
