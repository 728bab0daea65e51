//! Exact lattice geometry for counting the nodes of plane projections of
//! generic complete-intersection curves.
//!
//! Every algorithm is generic over an exact integer [`Scalar`]. The aliases
//! below fix the scalar to [`BigInt`], which is what the command-line tool
//! and most callers want.

pub mod collections;
pub mod error;
pub mod fiber;
pub mod lattice;
pub mod nodecount;
pub mod polytope;
pub mod scalar;
pub mod singular;

#[cfg(test)]
pub(crate) mod testing;

pub use num_bigint::BigInt;

pub use error::{AssumptionFailure, Error, Result};
pub use scalar::Scalar;

pub type Int = BigInt;
pub type IntVector = Vec<Int>;
pub type IntMatrix = lattice::IntMatrix<Int>;
pub type ExtendedNat = lattice::ExtendedNat<Int>;
pub type SupportSet = lattice::SupportSet<Int>;
pub type LatticePolytope = polytope::LatticePolytope<Int>;
pub type Facet = polytope::Facet<Int>;
pub type PolytopeTuple = polytope::PolytopeTuple<Int>;
pub type Collection = collections::Collection<Int>;
pub type MultiplicityResult = collections::MultiplicityResult<Int>;
pub type FiberPolygon = fiber::FiberPolygon<Int>;
pub type FacetContribution = fiber::FacetContribution<Int>;
pub type FacetClass = singular::FacetClass<Int>;
pub type IndexSequence = singular::IndexSequence<Int>;
pub type AssumptionReport = nodecount::AssumptionReport;
pub type AnalysisReport = nodecount::AnalysisReport<Int>;
