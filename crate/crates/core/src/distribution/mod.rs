//! The input law μ: how it is described, its CDF table, its pseudo-inverse and the even
//! 2π-periodic lift φ(θ) = q(|θ|/π).

mod cdf;
pub(crate) mod phi;
mod quantile;
mod spec;

pub use cdf::{build_cdf, detect_atoms, Atom, CdfTable, BUILD_CDF_REFINE_TOL, NORMALIZATION_TOL};
pub use phi::{lift_phi, phi_derivative, PhiFunction, ProfileFn, SINGULAR_DENSITY};
pub use quantile::{detect_gaps, quantile, Gap, QuantileFn, GAP_SCAN_POINTS};
pub use spec::{DensityFn, DistributionSpec, Family, SpecKind, Support, CDF_END_TOL, MEAN_SHIFT_TOL};
