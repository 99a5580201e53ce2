//! The μ-domain U = Φ(𝔻): the map, its boundary curve, geometric checks and
//! the boundedness verdict.

mod curve;
mod geometry;
mod map;
mod verdict;

pub use curve::{boundary, BoundaryCurve, BoundaryOptions, BoundaryPoint, PointMethod};
pub use geometry::{discrete_univalence_check, point_in_domain};
pub use map::{eval_map, ConformalMap};
pub use verdict::{boundedness_verdict, BoundednessReport, Evidence, Verdict, VerdictBasis};
