use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::geometry::{is_simple, Polygon};
use super::map::ConformalMap;
use crate::distribution::phi::wrap_angle;
use crate::distribution::PhiFunction;
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_pv_direct, DEFAULT_EPS_SCHEDULE};
use crate::spectral::{divergence_probe, doubling_schedule, FourierCoefficients, GrowthClassification};

/// Which evaluation produced a boundary point's y-coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointMethod {
    Spectral,
    Pv,
}

impl PointMethod {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Spectral => "spectral",
            Self::Pv => "pv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub x: f64,
    pub y: f64,
    pub method: PointMethod,
    /// Edge of an excised neighbourhood where H{φ} blows up.
    pub unbounded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOptions {
    /// Uniform base grid size.
    pub m: usize,
    /// Half-width removed around θ where H{φ} diverges.
    pub excision: f64,
    /// Points this close to a singular θ use principal-value quadrature.
    pub pv_window: f64,
    /// Extra points on each side of a singular θ.
    pub cluster_points: usize,
    /// Half-width of the clustered neighbourhood.
    pub cluster_window: f64,
    pub eps_schedule: Vec<f64>,
    /// Boundary band of the containment test, as a fraction of the median edge.
    pub band_fraction: f64,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self {
            m: 1024,
            excision: 1e-3,
            pv_window: 0.1,
            cluster_points: 32,
            cluster_window: 0.1,
            eps_schedule: DEFAULT_EPS_SCHEDULE.to_vec(),
            band_fraction: 0.25,
        }
    }
}

/// Boundary points ordered by θ ∈ (−π, π], traversed counter-clockwise.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    points: Vec<BoundaryPoint>,
    polygon: Option<Polygon>,
}

fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Median edge length of the closed polyline.
fn median_edge(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let mut lens: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt()
        })
        .collect();
    lens.sort_by(f64::total_cmp);
    lens[n / 2]
}

impl BoundaryCurve {
    /// Curve through the given points, sorted by θ. A containment index is
    /// built when no point is flagged.
    pub fn from_points(mut points: Vec<BoundaryPoint>, band_fraction: f64) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::Construction("boundary curve needs at least four points"));
        }
        points.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let polygon = if points.iter().any(|p| p.unbounded) {
            None
        } else {
            let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
            let band = band_fraction * median_edge(&xy);
            Some(Polygon::new(xy, band))
        };
        Ok(Self { points, polygon })
    }

    /// Boundary values Φ(e^{iθₖ}) of the truncated map on a uniform grid.
    pub fn from_map(map: &ConformalMap, m: usize) -> Result<Self> {
        if m < 4 {
            return Err(Error::Config("grid needs at least four points"));
        }
        let points = (0..m)
            .map(|k| {
                let theta = -PI + 2.0 * PI * k as f64 / m as f64;
                let w = map.boundary_value(theta);
                BoundaryPoint { theta, x: w.re, y: w.im, method: PointMethod::Spectral, unbounded: false }
            })
            .collect();
        Self::from_points(points, BoundaryOptions::default().band_fraction)
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xy(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.x, p.y)).collect()
    }

    pub fn has_unbounded_flags(&self) -> bool {
        self.points.iter().any(|p| p.unbounded)
    }

    /// Width of the boundary band treated as outside by containment tests.
    pub fn band(&self) -> Option<f64> {
        self.polygon.as_ref().map(|p| p.band())
    }

    /// Same curve with a different boundary band.
    pub fn with_band(&self, band: f64) -> Result<Self> {
        let poly = self.polygon()?;
        debug_assert_eq!(poly.len(), self.points.len());
        Ok(Self { points: self.points.clone(), polygon: Some(Polygon::new(self.xy(), band)) })
    }

    pub(crate) fn polygon(&self) -> Result<&Polygon> {
        self.polygon.as_ref().ok_or(Error::NotApplicable("boundary curve has unbounded flags"))
    }

    /// Even–odd membership ignoring the boundary band.
    pub fn contains_strict(&self, x: f64, y: f64) -> Result<bool> {
        Ok(self.polygon()?.contains_strict(x, y))
    }

    /// ((x_min, x_max), (y_min, y_max)) over the points.
    pub fn extent(&self) -> ((f64, f64), (f64, f64)) {
        let mut e = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
        for p in &self.points {
            e.0 .0 = e.0 .0.min(p.x);
            e.0 .1 = e.0 .1.max(p.x);
            e.1 .0 = e.1 .0.min(p.y);
            e.1 .1 = e.1 .1.max(p.y);
        }
        e
    }

    /// Largest mismatch between the point at θ and the mirror of the point
    /// at −θ, over all pairs present.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for p in &self.points {
            if p.theta == PI || p.theta == -PI {
                continue;
            }
            let target = -p.theta;
            let i = self.points.partition_point(|q| q.theta < target);
            for q in self.points[i.saturating_sub(1)..(i + 1).min(self.points.len())].iter() {
                if (q.theta - target).abs() <= 1e-12 {
                    worst = worst.max((p.x - q.x).abs()).max((p.y + q.y).abs());
                }
            }
        }
        worst
    }

    /// max |y| at θ = 0 and θ = ±π.
    pub fn axis_defect(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| p.theta == 0.0 || p.theta.abs() == PI)
            .map(|p| p.y.abs())
            .fold(0.0, f64::max)
    }

    /// Number of failed samples in the discrete Δ-convexity check: for up to
    /// `n_points` boundary points with y > 0, `n_samples` points spread
    /// evenly along the open vertical segment down to (x, −y) must lie inside
    /// the polygon. The band is ignored here since the segment ends on the
    /// boundary.
    pub fn delta_convexity_failures(&self, n_points: usize, n_samples: usize) -> Result<usize> {
        let poly = self.polygon()?;
        let upper: Vec<&BoundaryPoint> = self.points.iter().filter(|p| p.y > 0.0).collect();
        if upper.is_empty() || n_points == 0 {
            return Ok(0);
        }
        let stride = (upper.len() as f64 / n_points as f64).max(1.0);
        let mut failures = 0;
        let mut k = 0.0;
        while (k as usize) < upper.len() {
            let p = upper[k as usize];
            for j in 1..=n_samples {
                let y = p.y - 2.0 * p.y * j as f64 / (n_samples + 1) as f64;
                if !poly.contains_strict(p.x, y) {
                    failures += 1;
                }
            }
            k += stride;
        }
        Ok(failures)
    }

    /// Largest |Φ(e^{iθ}) − (x + iy)| over the points.
    pub fn map_defect(&self, map: &ConformalMap) -> f64 {
        self.points
            .iter()
            .filter(|p| !p.unbounded)
            .map(|p| {
                let w = map.boundary_value(p.theta);
                ((w.re - p.x).powi(2) + (w.im - p.y).powi(2)).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// True when the polyline does not cross itself.
    pub fn is_simple(&self) -> bool {
        is_simple(&self.xy())
    }
}

/// Chebyshev-clustered offsets in (0, w], densest near 0.
fn cluster_offsets(k: usize, w: f64) -> impl Iterator<Item = f64> {
    (1..=k).map(move |j| w * (1.0 - (0.5 * PI * j as f64 / k as f64).cos()))
}

/// θ where H{φ} is judged infinite: jumps of φ, and singular points whose
/// conjugate partial sums diverge or whose principal value fails to settle.
fn blow_up_points(phi: &PhiFunction, coeffs: &FourierCoefficients, eps: &[f64]) -> Result<Vec<f64>> {
    let schedule = doubling_schedule(coeffs.order());
    let mut out: Vec<f64> = phi.jump_points().to_vec();
    for &s in phi.singular_positive() {
        if out.iter().any(|&j| (j - s).abs() < 1e-12) {
            continue;
        }
        let probe = divergence_probe(coeffs, s, &schedule);
        let diverges = match probe.classification {
            GrowthClassification::Divergent => true,
            GrowthClassification::Convergent { .. } => false,
            GrowthClassification::Undetermined => hilbert_pv_direct(phi, s, eps)?.diverging,
        };
        if diverges {
            out.push(s);
        }
    }
    Ok(out)
}

/// The boundary (φ(θ), H{φ}(θ)) of the μ-domain.
///
/// A uniform grid of `m` angles starting at −π is refined by clustered
/// points around every singular θ. Points within `pv_window` of a singular
/// θ take H{φ} from principal-value quadrature, the rest from the conjugate
/// series. Around θ where H{φ} blows up, an interval of half-width
/// `excision` is removed and its two ends are flagged unbounded.
pub fn boundary(phi: &PhiFunction, coeffs: &FourierCoefficients, opts: &BoundaryOptions) -> Result<BoundaryCurve> {
    if opts.m < 64 {
        return Err(Error::Config("boundary grid needs M >= 64"));
    }
    if !(opts.excision >= 0.0 && opts.excision < 0.5) {
        return Err(Error::Config("excision must lie in [0, 0.5)"));
    }
    let singular: Vec<f64> = phi.singular_positive().iter().chain(phi.jump_points()).copied().collect();
    let blow_ups = blow_up_points(phi, coeffs, &opts.eps_schedule)?;
    let signed = |v: &[f64]| -> Vec<f64> { v.iter().flat_map(|&s| [s, -s]).collect() };
    let singular_pm = signed(&singular);
    let blow_pm = signed(&blow_ups);

    let mut thetas: Vec<f64> = (0..opts.m).map(|k| -PI + 2.0 * PI * k as f64 / opts.m as f64).collect();
    for &s in &singular_pm {
        thetas.push(s);
        for d in cluster_offsets(opts.cluster_points, opts.cluster_window) {
            thetas.push(wrap_angle(s + d));
            thetas.push(wrap_angle(s - d));
        }
    }
    // π and −π are the same point
    for t in thetas.iter_mut() {
        if *t == PI {
            *t = -PI;
        }
    }
    thetas.retain(|&t| blow_pm.iter().all(|&b| angular_distance(t, b) >= opts.excision));
    let mut flagged: Vec<f64> = Vec::new();
    for &b in &blow_pm {
        for t in [wrap_angle(b - opts.excision), wrap_angle(b + opts.excision)] {
            thetas.push(t);
            flagged.push(t);
        }
    }
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);

    let series = coeffs.conjugate();
    let mut points = Vec::with_capacity(thetas.len());
    for &theta in &thetas {
        let near = singular_pm.iter().any(|&s| angular_distance(theta, s) < opts.pv_window);
        let x = phi.eval(theta);
        let mut unbounded = flagged.iter().any(|&f| (f - theta).abs() <= 1e-14);
        let (y, method) = if near {
            let v = hilbert_pv_direct(phi, theta, &opts.eps_schedule)?;
            unbounded |= v.diverging;
            (v.value, PointMethod::Pv)
        } else {
            (series.eval(theta), PointMethod::Spectral)
        };
        points.push(BoundaryPoint { theta, x, y, method, unbounded });
    }
    if points.iter().filter(|p| !p.unbounded).count() < 4 {
        return Err(Error::Construction("transform diverges at every boundary point"));
    }
    BoundaryCurve::from_points(points, opts.band_fraction)
}
