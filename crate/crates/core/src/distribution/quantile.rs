use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_edges, panel_edges, GaussLegendre, Knot};
use crate::special::flat_exp_integral;

use super::cdf::{build_cdf, detect_atoms, Atom, CdfTable};
use super::phi::SINGULAR_DENSITY;
use super::spec::{DistributionSpec, Family, Support};

/// Size of the uniform u-grid scanned for jumps of q.
pub const GAP_SCAN_POINTS: usize = 10_000;
const DEFAULT_CDF_GRID: usize = 1024;

/// κ = 1 / (2 ∫₀¹ e^{−1/t} dt), the flat-exponential normalizer.
const FLAT_EXP_KAPPA: f64 = 3.367_105_246_857_703;

pub(crate) fn flat_exp_kappa() -> f64 {
    FLAT_EXP_KAPPA
}

/// A jump of q: the support has no mass between `left_x` and `right_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub u: f64,
    pub left_x: f64,
    pub right_x: f64,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.right_x - self.left_x
    }
}

#[derive(Debug, Clone)]
enum Rule {
    Uniform { lo: f64, hi: f64 },
    Power { alpha: f64 },
    FlatExp,
    TwoInterval,
    CdfInverse(CdfTable),
    Points(Vec<(f64, f64)>),
}

/// The pseudo-inverse q(u) = inf{x : F(x) ≥ u} of a law, with its jumps
/// (support gaps), flats (atoms) and the levels where the density vanishes.
#[derive(Clone)]
pub struct QuantileFn {
    rule: Rule,
    shift: f64,
    support: Support,
    density: Option<super::spec::DensityFn>,
    gaps: Vec<Gap>,
    atoms: Vec<Atom>,
    singular_u: Vec<f64>,
    kinks_u: Vec<f64>,
    inf_density: f64,
}

impl core::fmt::Debug for QuantileFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("QuantileFn")
            .field("rule", &self.rule)
            .field("shift", &self.shift)
            .field("support", &self.support)
            .field("gaps", &self.gaps)
            .field("atoms", &self.atoms)
            .finish_non_exhaustive()
    }
}

impl QuantileFn {
    pub fn from_spec(spec: &DistributionSpec) -> Result<Self> {
        let support = spec.support();
        if !support.is_bounded() {
            return Err(Error::UnboundedSupport);
        }
        let shift = spec.shift();
        let mut singular_u = Vec::new();
        let mut kinks_u = Vec::new();
        let mut atoms = Vec::new();
        let mut density = None;
        let (rule, inf_density) = match spec.family() {
            Family::Uniform { lo, hi } => (Rule::Uniform { lo: *lo, hi: *hi }, 1.0 / (hi - lo)),
            Family::Power { alpha } => {
                if *alpha > 0.0 {
                    singular_u.push(0.5);
                    (Rule::Power { alpha: *alpha }, 0.0)
                } else {
                    (Rule::Power { alpha: 0.0 }, 0.5)
                }
            }
            Family::FlatExp => {
                singular_u.push(0.5);
                (Rule::FlatExp, 0.0)
            }
            Family::TwoIntervalUniform => (Rule::TwoInterval, 0.0),
            Family::Density { density: f, .. } => {
                let table = build_cdf(spec, DEFAULT_CDF_GRID)?;
                let mut inf = f64::INFINITY;
                for (&x, &u) in table.xs().iter().zip(table.values()) {
                    let v = f(x - shift);
                    inf = inf.min(v);
                    if v < SINGULAR_DENSITY && u > 0.0 && u < 1.0 {
                        singular_u.push(u);
                    }
                }
                density = Some(f.clone());
                atoms = detect_atoms(&table, 1e-9);
                (Rule::CdfInverse(table), inf)
            }
            Family::CdfPoints(points) => {
                let table = CdfTable::from_points(points)?.shifted(shift);
                let xs = table.xs();
                let fs = table.values();
                let slopes: Vec<f64> = (0..xs.len() - 1)
                    .map(|i| {
                        let dx = xs[i + 1] - xs[i];
                        if dx > 0.0 { (fs[i + 1] - fs[i]) / dx } else { f64::INFINITY }
                    })
                    .collect();
                let inf = slopes.iter().copied().fold(f64::INFINITY, f64::min);
                for i in 1..xs.len() - 1 {
                    let u = fs[i];
                    if slopes[i - 1].min(slopes[i]) < SINGULAR_DENSITY && u > 0.0 && u < 1.0 {
                        singular_u.push(u);
                    }
                    kinks_u.push(u);
                }
                atoms = detect_atoms(&table, 0.0);
                (Rule::CdfInverse(table), inf)
            }
            Family::QuantilePoints(points) => {
                let mut inf = f64::INFINITY;
                for w in points.windows(2) {
                    let (du, dx) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                    if dx > 0.0 {
                        inf = inf.min(du / dx);
                    } else if du > 0.0 {
                        atoms.push(Atom { x: w[0].1 + shift, mass: du });
                    }
                }
                kinks_u.extend(points.iter().map(|p| p.0).filter(|&u| u > 0.0 && u < 1.0));
                if points[0].0 > 0.0 {
                    atoms.insert(0, Atom { x: points[0].1 + shift, mass: points[0].0 });
                }
                (Rule::Points(points.clone()), inf)
            }
        };
        if let Rule::CdfInverse(table) = &rule {
            kinks_u.extend(table.values().iter().copied().filter(|&u| u > 0.0 && u < 1.0));
        }
        kinks_u.sort_by(f64::total_cmp);
        kinks_u.dedup();
        singular_u.sort_by(f64::total_cmp);
        singular_u.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut q = Self {
            rule,
            shift,
            support,
            density,
            gaps: Vec::new(),
            atoms,
            singular_u,
            kinks_u,
            inf_density,
        };
        q.gaps = detect_gaps(&q, 1e-6 * support.width());
        for g in &q.gaps {
            if !q.singular_u.iter().any(|&u| (u - g.u).abs() < 1e-12) {
                q.singular_u.push(g.u);
            }
        }
        q.singular_u.sort_by(f64::total_cmp);
        Ok(q)
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Levels u ∈ (0, 1) where ρ(q(u)) vanishes or q jumps.
    pub fn singular_levels(&self) -> &[f64] {
        &self.singular_u
    }

    /// Levels where q is only piecewise smooth (table nodes).
    pub fn kink_levels(&self) -> &[f64] {
        &self.kinks_u
    }

    /// inf ρ over the support (0 when the support has a gap).
    pub fn inf_density(&self) -> f64 {
        if self.gaps.is_empty() { self.inf_density } else { 0.0 }
    }

    /// q(u) for u ∈ (0, 1).
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain { value: u, domain: "(0, 1)" });
        }
        Ok(self.value(u))
    }

    /// q on the closed interval [0, 1]; the ends map to the support endpoints.
    pub fn value(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.support.lo;
        }
        if u >= 1.0 {
            return self.support.hi;
        }
        self.raw_value(u, false) + self.shift
    }

    /// Right limit q(u+) = inf{x : F(x) > u}; differs from `value` only at jumps.
    pub fn value_right(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return self.support.hi;
        }
        if u < 0.0 {
            return self.support.lo;
        }
        self.raw_value(u, true) + self.shift
    }

    fn raw_value(&self, u: f64, right: bool) -> f64 {
        match &self.rule {
            Rule::Uniform { lo, hi } => lo + (hi - lo) * u,
            Rule::Power { alpha } => {
                let p = 1.0 / (alpha + 1.0);
                if u < 0.5 {
                    -(1.0 - 2.0 * u).powf(p)
                } else {
                    (2.0 * u - 1.0).powf(p)
                }
            }
            Rule::FlatExp => {
                let d = u - 0.5;
                if d == 0.0 {
                    0.0
                } else {
                    d.signum() * flat_exp_inverse(d.abs())
                }
            }
            Rule::TwoInterval => {
                if u < 0.5 || (u == 0.5 && !right) {
                    -2.0 + 2.0 * u
                } else {
                    2.0 * u
                }
            }
            Rule::CdfInverse(t) => {
                let v = if right { t.quantile_right(u) } else { t.quantile(u) };
                v - self.shift
            }
            Rule::Points(p) => points_quantile(p, u, right),
        }
    }

    /// F(x), right-continuous.
    pub fn cdf(&self, x: f64) -> f64 {
        let y = x - self.shift;
        let f = match &self.rule {
            Rule::Uniform { lo, hi } => (y - lo) / (hi - lo),
            Rule::Power { alpha } => {
                let m = 0.5 * y.abs().min(1.0).powf(1.0 + alpha);
                if y < 0.0 { 0.5 - m } else { 0.5 + m }
            }
            Rule::FlatExp => {
                let m = FLAT_EXP_KAPPA * flat_exp_integral(y.abs().min(1.0));
                if y < 0.0 { 0.5 - m } else { 0.5 + m }
            }
            Rule::TwoInterval => {
                if y < -1.0 {
                    (y + 2.0) / 2.0
                } else if y < 1.0 {
                    0.5
                } else {
                    0.5 + (y - 1.0) / 2.0
                }
            }
            Rule::CdfInverse(t) => t.eval(x),
            Rule::Points(p) => points_cdf(p, y),
        };
        f.clamp(0.0, 1.0)
    }

    /// ρ(x), when the law has one (tables use the cell slope).
    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.support.lo || x > self.support.hi {
            return 0.0;
        }
        let y = x - self.shift;
        match &self.rule {
            Rule::Uniform { lo, hi } => 1.0 / (hi - lo),
            Rule::Power { alpha } => 0.5 * (alpha + 1.0) * y.abs().powf(*alpha),
            Rule::FlatExp => {
                if y == 0.0 { 0.0 } else { FLAT_EXP_KAPPA * (-1.0 / y.abs()).exp() }
            }
            Rule::TwoInterval => {
                if y.abs() >= 1.0 { 0.5 } else { 0.0 }
            }
            Rule::CdfInverse(t) => match &self.density {
                Some(f) => f(y),
                None => t.density(x),
            },
            Rule::Points(p) => {
                let i = p.partition_point(|w| w.1 <= y).clamp(1, p.len() - 1);
                let (du, dx) = (p[i].0 - p[i - 1].0, p[i].1 - p[i - 1].1);
                if dx > 0.0 { du / dx } else { f64::INFINITY }
            }
        }
    }

    /// ρ(q(u)): the quantity whose reciprocal is π·|φ'|.
    pub fn density_at_level(&self, u: f64) -> f64 {
        match &self.rule {
            Rule::Points(p) => {
                let i = p.partition_point(|w| w.0 <= u).clamp(1, p.len() - 1);
                let (du, dx) = (p[i].0 - p[i - 1].0, p[i].1 - p[i - 1].1);
                if dx > 0.0 { du / dx } else { 0.0 }
            }
            Rule::CdfInverse(t) if self.density.is_none() => {
                let j = t.values().partition_point(|&f| f < u).clamp(1, t.len() - 1);
                let dx = t.xs()[j] - t.xs()[j - 1];
                if dx > 0.0 { (t.values()[j] - t.values()[j - 1]) / dx } else { f64::INFINITY }
            }
            _ => self.pdf(self.value(u)),
        }
    }

    /// (mean, variance) as ∫₀¹ q and ∫₀¹ (q − mean)².
    pub fn moments(&self) -> (f64, f64) {
        let rule = GaussLegendre::new(16);
        let mut knots = alloc::vec![Knot::graded(0.0), Knot::graded(1.0)];
        knots.extend(self.singular_u.iter().map(|&u| Knot::graded(u)));
        knots.extend(self.kinks_u.iter().map(|&u| Knot::plain(u)));
        let edges = panel_edges(&knots, 1.0 / 256.0, 1e-13);
        let mean = integrate_edges(&rule, &edges, |u| self.value(u));
        let var = integrate_edges(&rule, &edges, |u| {
            let d = self.value(u) - mean;
            d * d
        });
        (mean, var)
    }
}

/// pseudo-inverse of a piecewise-linear (u, x) table
fn points_quantile(p: &[(f64, f64)], u: f64, right: bool) -> f64 {
    let j = if right { p.partition_point(|w| w.0 <= u) } else { p.partition_point(|w| w.0 < u) };
    if j == 0 {
        return p[0].1;
    }
    if j >= p.len() {
        return p[p.len() - 1].1;
    }
    let (u0, x0) = p[j - 1];
    let (u1, x1) = p[j];
    if u1 == u0 {
        return x1;
    }
    x0 + (x1 - x0) * (u - u0) / (u1 - u0)
}

fn points_cdf(p: &[(f64, f64)], x: f64) -> f64 {
    if x < p[0].1 {
        return 0.0;
    }
    let i = p.partition_point(|w| w.1 <= x) - 1;
    if i + 1 >= p.len() {
        return 1.0;
    }
    let (u0, x0) = p[i];
    let (u1, x1) = p[i + 1];
    u0 + (u1 - u0) * (x - x0) / (x1 - x0)
}

/// Solve κ G(y) = δ for y ∈ (0, 1], G(y) = ∫₀^y e^{−1/t} dt.
///
/// Newton on ln G (whose derivative is 1 / (1/s − e^s E₁(s)), s = 1/y),
/// safeguarded by bisection.
fn flat_exp_inverse(delta: f64) -> f64 {
    if delta >= 0.5 {
        return 1.0;
    }
    if delta <= 0.0 {
        return 0.0;
    }
    let target = (delta / FLAT_EXP_KAPPA).ln();
    let log_g = |y: f64| -> (f64, f64) {
        let s = 1.0 / y;
        let r = 1.0 / s - crate::special::scaled_exp_e1(s);
        (-s + r.ln(), 1.0 / r)
    };
    let (mut lo, mut hi) = (1.0 / 740.0, 1.0);
    let mut s = -target;
    for _ in 0..4 {
        s = -target + 2.0 * s.ln();
    }
    let mut y = (1.0 / s).clamp(lo, hi);
    for _ in 0..200 {
        let (g, dg) = log_g(y);
        let f = g - target;
        if f.abs() <= 1e-15 * target.abs() {
            return y;
        }
        if f > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let mut next = y - f / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 4e-16 * y || hi - lo <= 4e-16 * hi {
            return next;
        }
        y = next;
    }
    y
}

/// q(u) for u ∈ (0, 1).
pub fn quantile(q: &QuantileFn, u: f64) -> Result<f64> {
    q.eval(u)
}

/// Jumps of q larger than `jump_threshold`.
///
/// Scans a [`GAP_SCAN_POINTS`] u-grid, bisects each suspicious cell toward the
/// steepest half until the bracket is a few ulps wide, then accepts the jump
/// only if the CDF puts no mass strictly inside it. The last step rejects
/// laws like κe^{−1/|x|} whose quantile merely looks discontinuous in double
/// precision.
pub fn detect_gaps(q: &QuantileFn, jump_threshold: f64) -> Vec<Gap> {
    let n = GAP_SCAN_POINTS;
    let mut gaps: Vec<Gap> = Vec::new();
    let grid: Vec<f64> = (1..n).map(|k| k as f64 / n as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&u| q.value(u)).collect();
    for k in 0..grid.len() - 1 {
        if vals[k + 1] - vals[k] <= jump_threshold {
            continue;
        }
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (mut qa, mut qb) = (vals[k], vals[k + 1]);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b || qb - qa <= jump_threshold {
                break;
            }
            let qm = q.value(m);
            if qm - qa >= qb - qm {
                b = m;
                qb = qm;
            } else {
                a = m;
                qa = qm;
            }
        }
        if qb - qa <= jump_threshold {
            continue;
        }
        let eta = 1e-9 * (qb - qa);
        let inner_mass = q.cdf(qb - eta) - q.cdf(qa + eta);
        if inner_mass > 0.0 {
            continue;
        }
        let u = q.cdf(qa);
        let gap = Gap { u, left_x: q.value(u), right_x: q.value_right(u) };
        if gap.width() > jump_threshold && !gaps.iter().any(|g| (g.u - gap.u).abs() < 1e-12) {
            gaps.push(gap);
        }
    }
    gaps
}
