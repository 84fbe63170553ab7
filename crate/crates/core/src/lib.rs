//! Exact computations with finite-dimensional bound quiver algebras:
//! projective covers and syzygies, stable Hom spaces, and the stabilized
//! Hom-colimit invariants built from them, together with an adjacency-matrix
//! model for radical-square-zero algebras and cross-checks between the two
//! computation pipelines.

pub mod algebra;
pub mod error;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod scalar;

pub use algebra::BoundAlgebra;
pub use error::{AlgebraError, HomError, LinalgError, StabError};
pub use matrix::{eventual_rank, DirectSystem, Echelon, ExactMatrix};
pub use quiver::{Arrow, Path, PathExpr, Quiver, Relation};
pub use rep::{
    hom_space, is_isomorphic, left_ideal_rep, projective_rep, HomBasis, IsoVerdict,
    RepMorphism, Representation,
};
pub use scalar::{ExactScalar, FieldSpec};
