//! Numerics for Gross' planar Skorokhod embedding domains.
//!
//! Given a centered probability law μ on the line, the crate builds the even
//! 2π-periodic lift φ(θ) = q(|θ|/π) of its quantile function, expands φ in a
//! cosine series, evaluates the periodic Hilbert transform H{φ} by two
//! independent routes (conjugate series and principal-value quadrature), and
//! assembles the boundary curve θ ↦ (φ(θ), H{φ}(θ)) of the domain
//! U = Φ(𝔻), Φ(z) = Σ aₙ zⁿ. Boundedness of U is decided from the support,
//! gaps, the density infimum, and divergence probes of the conjugate series.
//! A Brownian exit simulator closes the loop by checking that Re(Z_τ) is
//! distributed as μ.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line driver and parallel path execution live in the `mudomain` crate.
//!
//! Float math goes through `num_traits::Float` (backed by `libm`). When std
//! is linked, as in test builds, its inherent methods take precedence and
//! those imports go unused, hence the local `allow`s.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distribution;
pub mod domain;
mod error;
pub mod hilbert;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod spectral;

pub use distribution::{
    build_cdf, detect_atoms, detect_gaps, lift_phi, phi_derivative, quantile, Atom,
    CdfTable, DistributionSpec, Family, Gap, PhiFunction, QuantileFn, SpecKind, Support,
};
pub use domain::{
    boundary, boundedness_verdict, discrete_univalence_check, eval_map, point_in_domain,
    BoundaryCurve, BoundaryOptions, BoundaryPoint, BoundednessReport, ConformalMap, PointMethod,
    Verdict, VerdictBasis,
};
pub use error::{Error, Result};
pub use hilbert::{
    boundary_limit_check, hilbert_log_kernel, hilbert_pv_direct, Extrapolation, PvEvaluation, PvMethod,
};
pub use montecarlo::{
    empirical_cdf, ks_test, sample_exit, simulate, two_sample_ks, EmpiricalCdf, ExitSample, GoodnessOfFit,
    SimulationConfig, TargetLaw,
};
pub use spectral::{
    conjugate_eval, cosine_coefficients, divergence_probe, parseval_variance, ConjugateSeries,
    FourierCoefficients, GrowthClassification, ProbeResult, ProbeThresholds,
};
