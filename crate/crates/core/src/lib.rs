//! Decide whether a multiset of weight changes over F_q forces every linear
//! map realizing it to be a coordinate projection (up to monomial
//! equivalence).
//!
//! The building blocks are exact arithmetic in F_q ([`gf`]), the geometry
//! PG(k-1, q) and its point/hyperplane matrix M ([`projgeom`]), linear codes
//! and maps ([`codes`]), and the decision engine ([`forcing`]). [`enumerate`]
//! runs classification surveys and [`oracle`] holds independent reference
//! implementations used for cross-checking.

pub mod codes;
pub mod enumerate;
pub mod error;
pub mod forcing;
pub mod gf;
pub mod matfile;
pub mod oracle;
pub mod projgeom;

pub use codes::{
    hamming_weight, is_projection, multiplicities, projection_matrix, projective_weights, rank, weight_changes,
    FqMatrix, GeneratorMatrix, LinearMapSpec, MultiplicityVector, WeightChangeMultiset,
};
pub use error::{Error, Result};
pub use forcing::{
    construct_map, decide, realizable, split_difference, split_difference_forcing, Budget, DifferenceVector,
    ForcingVerdict, Reason, Status, Witness,
};
pub use gf::{FieldElement, FieldSpec};
pub use matfile::MatrixFile;
pub use projgeom::{Geometry, IncidenceSystem, PointIndex, ProjPoint};
