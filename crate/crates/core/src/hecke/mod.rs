//! Objects, correspondences and 2-cells.
//!
//! A correspondence between `(G1, Ω1)` and `(G2, Ω2)` is stored as one block per
//! double coset `G1 γ G2` of its carrier: a projective representation of
//! `G1 ∩ γ G2 γ^-1` with obstruction `Ω1 · conj(Ω2 ∘ Ad γ^-1)`. The dense view
//! `π(g, x, h)` is reconstructed from the block through a fixed transversal, and
//! satisfies `π(g', gxh, h') π(g, x, h) = Ω1(g', g) Ω2(h, h') π(g'g, x, hh')`.

mod cells;
mod correspondence;
mod fusion;
mod object;
mod tensor;

pub use cells::{decompose, hom, hom_dim, is_irreducible, isomorphic, TwoCell};
pub use correspondence::{make_correspondence, required_obstruction, Block, Correspondence};
pub(crate) use correspondence::refined_domain;
pub use fusion::{fusion_table, ClassRegistry, FusionTable};
pub use object::HeckeObject;
pub use tensor::tensor;
