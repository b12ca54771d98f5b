//! Exact computations in the Hecke bicategory of a commensurated subgroup pair:
//! group backends, twisted projective representations, correspondences and
//! their fusion, subfactor index arithmetic, and a constructive Galois realization
//! of divisor-closed index sets.

pub mod cyclotomic;
pub mod error;
pub mod galois;
pub mod groups;
pub mod hecke;
pub mod index;
pub mod intlin;
pub mod matrix;
pub mod poly;
pub mod projective;
pub mod rational;
pub mod scenario;

pub use error::{Error, Result};
