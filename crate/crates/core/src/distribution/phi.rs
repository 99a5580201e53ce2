use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::Knot;

use super::quantile::QuantileFn;
use super::spec::Support;

/// Density below which φ' is treated as unbounded.
pub const SINGULAR_DENSITY: f64 = 1e-12;

pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Quantile(Arc<QuantileFn>),
    Synthetic { value: ProfileFn, derivative: Option<ProfileFn> },
}

/// The even 2π-periodic function φ(θ) = q(|θ|/π), or a synthetic even
/// profile used to exercise the transforms on known inputs.
#[derive(Clone)]
pub struct PhiFunction {
    source: Source,
    /// θ ∈ (0, π) where φ' blows up or φ jumps; mirrored to −θ.
    singular: Vec<f64>,
    /// θ ∈ (0, π) where φ is only piecewise smooth.
    kinks: Vec<f64>,
    jumps: Vec<f64>,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.source {
            Source::Quantile(_) => "quantile",
            Source::Synthetic { .. } => "synthetic",
        };
        f.debug_struct("PhiFunction")
            .field("source", &kind)
            .field("singular", &self.singular)
            .field("kinks", &self.kinks.len())
            .finish()
    }
}

/// Reduce θ to (−π, π].
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let two_pi = 2.0 * PI;
    let mut t = theta - two_pi * (theta / two_pi).round();
    if t <= -PI {
        t += two_pi;
    } else if t > PI {
        t -= two_pi;
    }
    t
}

impl PhiFunction {
    /// An even, smooth 2π-periodic profile given directly, e.g. cos(nθ).
    pub fn synthetic(value: ProfileFn, derivative: Option<ProfileFn>) -> Self {
        Self {
            source: Source::Synthetic { value, derivative },
            singular: Vec::new(),
            kinks: Vec::new(),
            jumps: Vec::new(),
        }
    }

    /// cos(nθ), the basic test profile.
    pub fn cosine(n: u32) -> Self {
        let nf = n as f64;
        Self::synthetic(
            Arc::new(move |t: f64| (nf * t).cos()),
            Some(Arc::new(move |t: f64| -nf * (nf * t).sin())),
        )
    }

    pub fn quantile(&self) -> Option<&QuantileFn> {
        match &self.source {
            Source::Quantile(q) => Some(q),
            Source::Synthetic { .. } => None,
        }
    }

    pub fn is_synthetic(&self) -> bool {
        matches!(self.source, Source::Synthetic { .. })
    }

    pub fn support(&self) -> Option<Support> {
        self.quantile().map(|q| q.support())
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let t = wrap_angle(theta);
        match &self.source {
            Source::Quantile(q) => q.value(t.abs() / PI),
            Source::Synthetic { value, .. } => value(t),
        }
    }

    /// φ'(θ) = sign(θ) / (π ρ(φ(θ))) for quantile lifts.
    pub fn derivative(&self, theta: f64) -> Result<f64> {
        let t = wrap_angle(theta);
        match &self.source {
            Source::Synthetic { derivative: Some(d), .. } => Ok(d(t)),
            Source::Synthetic { derivative: None, .. } => Err(Error::NoDensity),
            Source::Quantile(q) => {
                let a = t.abs();
                if self.singular.iter().any(|&s| (a - s).abs() <= 1e-12) {
                    return Err(Error::Singularity { theta });
                }
                let rho = q.density_at_level(a / PI);
                if !(rho >= SINGULAR_DENSITY) {
                    return Err(Error::Singularity { theta });
                }
                Ok(t.signum() / (PI * rho))
            }
        }
    }

    /// Singular points in (−π, π), sorted.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.singular.iter().flat_map(|&s| [-s, s]).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Positive singular points in (0, π).
    pub fn singular_positive(&self) -> &[f64] {
        &self.singular
    }

    /// Positive θ where φ jumps.
    pub fn jump_points(&self) -> &[f64] {
        &self.jumps
    }

    pub fn has_jumps(&self) -> bool {
        !self.jumps.is_empty()
    }

    pub fn is_singular_at(&self, theta: f64, tol: f64) -> bool {
        let a = wrap_angle(theta).abs();
        self.singular.iter().any(|&s| (a - s).abs() <= tol)
    }

    /// Breakpoints of φ on [0, π], including both ends. For quantile lifts the
    /// ends are kinks of the periodic extension and are graded.
    pub fn half_range_knots(&self) -> Vec<Knot> {
        let ends_graded = !self.is_synthetic();
        let mut knots = alloc::vec![
            Knot { at: 0.0, graded: ends_graded },
            Knot { at: PI, graded: ends_graded }
        ];
        knots.extend(self.singular.iter().map(|&s| Knot::graded(s)));
        knots.extend(self.kinks.iter().map(|&s| Knot::plain(s)));
        knots
    }

    /// Breakpoints of φ over a full period (−π, π], as (θ, graded).
    pub fn period_knots(&self) -> Vec<Knot> {
        let mut out = Vec::new();
        for k in self.half_range_knots() {
            out.push(k);
            if k.at > 0.0 && k.at < PI {
                out.push(Knot { at: -k.at, graded: k.graded });
            }
        }
        out
    }
}

/// Lift a quantile function to φ(θ) = q(|θ|/π) and record its singular set.
pub fn lift_phi(q: impl Into<Arc<QuantileFn>>) -> PhiFunction {
    let q: Arc<QuantileFn> = q.into();
    let singular: Vec<f64> = q.singular_levels().iter().map(|&u| PI * u).collect();
    let jumps: Vec<f64> = q.gaps().iter().map(|g| PI * g.u).collect();
    let mut kinks: Vec<f64> = q.kink_levels().iter().map(|&u| PI * u).collect();
    kinks.extend(q.atoms().iter().filter_map(|a| {
        let u = q.cdf(a.x);
        (u > 0.0 && u < 1.0).then_some(PI * u)
    }));
    PhiFunction { source: Source::Quantile(q), singular, kinks, jumps }
}

/// φ'(θ); fails at singular points.
pub fn phi_derivative(phi: &PhiFunction, theta: f64) -> Result<f64> {
    phi.derivative(theta)
}
