//! Torsion-valued 2-cocycles and projective representations over cyclotomic fields.

pub mod cocycle;
pub mod decompose;
pub mod domain;
pub mod rep;

pub use cocycle::Cocycle2;
pub use decompose::{decompose_projrep, is_irreducible, ProjDecomposition};
pub use domain::Domain;
pub use rep::{intertwiners, isomorphism, ProjRep};
