//! Ambient groups, subgroups with canonical forms, and coset machinery.
//!
//! Two backends are supported: finite permutation groups and full-rank
//! lattices inside `(Q^n, +)`.

pub mod cosets;
pub mod element;
pub mod lattice;
pub mod subgroup;

pub use cosets::{coset_data, double_coset_key, CosetKeyer, double_cosets, left_coset_key, right_coset_key, DoubleCoset, DoubleCosetDecomposition};
pub use element::{fmt_rat, parse_rat, GroupElement, Perm, Rat};
pub use lattice::Lattice;
pub use subgroup::{enumerate_subgroups, AmbientGroup, Backend, Subgroup, DEFAULT_ENUMERATION_BOUND};

/// Group product; errors when the elements come from different backends.
pub fn mul(a: &GroupElement, b: &GroupElement) -> crate::Result<GroupElement> {
    match (a, b) {
        (GroupElement::Perm(x), GroupElement::Perm(y)) if x.degree() == y.degree() => Ok(a.mul(b)),
        (GroupElement::Vector(x), GroupElement::Vector(y)) if x.len() == y.len() => Ok(a.mul(b)),
        _ => Err(crate::Error::AmbientMismatch),
    }
}

/// `γ g γ^-1`.
pub fn conjugate(gamma: &GroupElement, g: &GroupElement) -> crate::Result<GroupElement> {
    mul(gamma, g)?;
    Ok(gamma.conjugate(g))
}
