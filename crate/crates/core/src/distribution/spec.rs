use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

use super::quantile::QuantileFn;

/// Density callback for laws given by ρ(x). Evaluated in unshifted coordinates.
pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Laws whose numerical mean exceeds this are shifted to mean zero.
pub const MEAN_SHIFT_TOL: f64 = 1e-8;
/// Tolerance on F(x₀) ≈ 0 and F(x_M) ≈ 1 for tabulated CDFs.
pub const CDF_END_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecKind {
    Density,
    Cdf,
    Quantile,
    Builtin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn shifted(self, by: f64) -> Self {
        Self { lo: self.lo + by, hi: self.hi + by }
    }
}

#[derive(Clone)]
pub enum Family {
    /// Uniform on (lo, hi).
    Uniform { lo: f64, hi: f64 },
    /// ρ(x) = (α+1)/2 |x|^α on (−1, 1).
    Power { alpha: f64 },
    /// ρ(x) = κ e^{−1/|x|} on (−1, 1), κ the normalizing constant.
    FlatExp,
    /// Uniform on (−2, −1) ∪ (1, 2): a support with a gap.
    TwoIntervalUniform,
    /// User density on (lo, hi); endpoints may be infinite.
    Density { density: DensityFn, lo: f64, hi: f64 },
    /// Monotone (x, F(x)) pairs, linear in between. Repeated x encodes an atom.
    CdfPoints(Vec<(f64, f64)>),
    /// Monotone (u, q(u)) pairs, linear in between. Repeated u encodes a gap.
    QuantilePoints(Vec<(f64, f64)>),
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Uniform { lo, hi } => write!(f, "Uniform({lo}, {hi})"),
            Family::Power { alpha } => write!(f, "Power(alpha = {alpha})"),
            Family::FlatExp => f.write_str("FlatExp"),
            Family::TwoIntervalUniform => f.write_str("TwoIntervalUniform"),
            Family::Density { lo, hi, .. } => write!(f, "Density on ({lo}, {hi})"),
            Family::CdfPoints(p) => write!(f, "CdfPoints({} points)", p.len()),
            Family::QuantilePoints(p) => write!(f, "QuantilePoints({} points)", p.len()),
        }
    }
}

/// How μ is given, plus the shift that centers it.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    family: Family,
    shift: f64,
}

impl DistributionSpec {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidSpec("uniform needs finite lo < hi"));
        }
        Ok(Self::builtin(Family::Uniform { lo, hi }))
    }

    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidSpec("alpha must be a non-negative parameter"));
        }
        Ok(Self::builtin(Family::Power { alpha }))
    }

    pub fn flat_exp() -> Self {
        Self::builtin(Family::FlatExp)
    }

    pub fn two_interval_uniform() -> Self {
        Self::builtin(Family::TwoIntervalUniform)
    }

    pub fn from_density(density: DensityFn, lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidSpec("density support needs lo < hi"));
        }
        Ok(Self::builtin(Family::Density { density, lo, hi }))
    }

    pub fn from_cdf_points(points: Vec<(f64, f64)>) -> Result<Self> {
        check_table(&points, "cdf")?;
        Ok(Self::builtin(Family::CdfPoints(points)))
    }

    pub fn from_quantile_points(points: Vec<(f64, f64)>) -> Result<Self> {
        // stored as (u, x); validate with the roles swapped
        let swapped: Vec<(f64, f64)> = points.iter().map(|&(u, x)| (x, u)).collect();
        check_table(&swapped, "quantile")?;
        Ok(Self::builtin(Family::QuantilePoints(points)))
    }

    fn builtin(family: Family) -> Self {
        Self { family, shift: 0.0 }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> SpecKind {
        match self.family {
            Family::Density { .. } => SpecKind::Density,
            Family::CdfPoints(_) => SpecKind::Cdf,
            Family::QuantilePoints(_) => SpecKind::Quantile,
            _ => SpecKind::Builtin,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Uniform { .. } => "uniform",
            Family::Power { .. } => "power",
            Family::FlatExp => "flatexp",
            Family::TwoIntervalUniform => "two_interval_uniform",
            Family::Density { .. } => "density",
            Family::CdfPoints(_) | Family::QuantilePoints(_) => "user_table",
        }
    }

    /// Shift added to every sample of the family.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    /// Support before the shift.
    pub fn raw_support(&self) -> Support {
        match &self.family {
            Family::Uniform { lo, hi } => Support { lo: *lo, hi: *hi },
            Family::Power { .. } | Family::FlatExp => Support { lo: -1.0, hi: 1.0 },
            Family::TwoIntervalUniform => Support { lo: -2.0, hi: 2.0 },
            Family::Density { lo, hi, .. } => Support { lo: *lo, hi: *hi },
            Family::CdfPoints(p) => Support { lo: p[0].0, hi: p[p.len() - 1].0 },
            Family::QuantilePoints(p) => Support { lo: p[0].1, hi: p[p.len() - 1].1 },
        }
    }

    pub fn support(&self) -> Support {
        self.raw_support().shifted(self.shift)
    }

    /// Whether the family carries a density `build_cdf` can integrate.
    pub fn has_density(&self) -> bool {
        !matches!(self.family, Family::CdfPoints(_) | Family::QuantilePoints(_))
    }

    /// Density in shifted coordinates, for families defined through one.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        let x = x - self.shift;
        let v = match &self.family {
            Family::Uniform { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Family::Power { alpha } => {
                if x.abs() <= 1.0 {
                    0.5 * (alpha + 1.0) * num_traits::Float::powf(x.abs(), *alpha)
                } else {
                    0.0
                }
            }
            Family::FlatExp => {
                if x == 0.0 || x.abs() > 1.0 {
                    0.0
                } else {
                    super::quantile::flat_exp_kappa() * num_traits::Float::exp(-1.0 / x.abs())
                }
            }
            Family::TwoIntervalUniform => {
                let a = x.abs();
                if (1.0..=2.0).contains(&a) {
                    0.5
                } else {
                    0.0
                }
            }
            Family::Density { density, lo, hi } => {
                if x >= *lo && x <= *hi {
                    density(x)
                } else {
                    0.0
                }
            }
            Family::CdfPoints(_) | Family::QuantilePoints(_) => return None,
        };
        Some(v)
    }

    /// Shift the law to mean zero when its numerical mean exceeds
    /// [`MEAN_SHIFT_TOL`]. Returns the (possibly) shifted spec.
    pub fn centered(self) -> Result<Self> {
        let raw = self.clone().with_shift(0.0);
        let q = QuantileFn::from_spec(&raw)?;
        let (mean, _) = q.moments();
        if mean.abs() > MEAN_SHIFT_TOL {
            Ok(raw.with_shift(-mean))
        } else {
            Ok(raw)
        }
    }
}

fn check_table(points: &[(f64, f64)], what: &'static str) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidSpec(match what {
            "cdf" => "cdf table needs at least two points",
            _ => "quantile table needs at least two points",
        }));
    }
    if points.iter().any(|&(x, v)| !x.is_finite() || !v.is_finite()) {
        return Err(Error::InvalidSpec("table entries must be finite"));
    }
    let monotone = points.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
    if !monotone {
        return Err(Error::InvalidSpec(match what {
            "cdf" => "cdf table must be nondecreasing in x and F",
            _ => "quantile table must be nondecreasing in u and x",
        }));
    }
    let first = points[0].1;
    let last = points[points.len() - 1].1;
    if first < 0.0 || last > 1.0 || first > CDF_END_TOL || last < 1.0 - CDF_END_TOL {
        return Err(Error::InvalidSpec(match what {
            "cdf" => "cdf table values must run from 0 to 1",
            _ => "quantile table levels must run from 0 to 1",
        }));
    }
    if points[points.len() - 1].0 <= points[0].0 {
        return Err(Error::InvalidSpec("table support is degenerate"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn power_rejects_negative_alpha() {
        let err = DistributionSpec::power(-0.5).unwrap_err();
        assert_eq!(err, Error::InvalidSpec("alpha must be a non-negative parameter"));
    }

    #[test]
    fn uniform_needs_ordered_support() {
        assert!(DistributionSpec::uniform(1.0, -1.0).is_err());
        assert!(DistributionSpec::uniform(-1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_table_must_be_monotone_and_reach_one() {
        assert!(DistributionSpec::from_cdf_points(vec![(0.0, 0.0), (1.0, 0.9)]).is_err());
        assert!(DistributionSpec::from_cdf_points(vec![(0.0, 0.0), (1.0, 0.6), (0.5, 1.0)]).is_err());
        assert!(DistributionSpec::from_cdf_points(vec![(-1.0, 0.0), (1.0, 1.0)]).is_ok());
    }

    #[test]
    fn uncentered_uniform_gets_shifted() {
        let spec = DistributionSpec::uniform(0.0, 2.0).unwrap().centered().unwrap();
        assert!((spec.shift() + 1.0).abs() < 1e-12);
        let s = spec.support();
        assert!((s.lo + 1.0).abs() < 1e-12 && (s.hi - 1.0).abs() < 1e-12);
        assert!((spec.pdf(0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn centered_law_is_left_alone() {
        let spec = DistributionSpec::power(2.0).unwrap().centered().unwrap();
        assert_eq!(spec.shift(), 0.0);
    }
}
