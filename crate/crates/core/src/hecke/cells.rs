use super::correspondence::{Block, Correspondence};
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::matrix::CMat;
use crate::projective::{decompose_projrep, intertwiners, isomorphism};

/// A 2-cell `C → C'` given by its components on shared double cosets, keyed by the
/// canonical representative. Each component `T` satisfies `T π'_k(g) = π_k(g) T`
/// with both blocks taken at the representative of `C`.
#[derive(Clone, Debug)]
pub struct TwoCell {
    pub components: Vec<(GroupElement, CMat)>,
}

fn check_endpoints(c: &Correspondence, d: &Correspondence) -> Result<()> {
    if c.same_endpoints(d) {
        Ok(())
    } else {
        Err(Error::EndpointMismatch("2-cells need correspondences with equal endpoints".into()))
    }
}

/// Basis of the space of 2-cells, one shared double coset at a time.
pub fn hom(c: &Correspondence, d: &Correspondence) -> Result<Vec<TwoCell>> {
    check_endpoints(c, d)?;
    let mut out = Vec::new();
    for (k, b) in c.blocks().iter().enumerate() {
        if d.block_index(&c.keys()[k]).is_none() {
            continue;
        }
        let aligned = d.rep_at(&b.gamma)?;
        for t in intertwiners(&b.rep, &aligned)? {
            out.push(TwoCell { components: vec![(c.keys()[k].clone(), t)] });
        }
    }
    Ok(out)
}

pub fn hom_dim(c: &Correspondence, d: &Correspondence) -> Result<usize> {
    Ok(hom(c, d)?.len())
}

pub fn is_irreducible(c: &Correspondence) -> Result<bool> {
    Ok(hom_dim(c, c)? == 1)
}

/// An invertible 2-cell between `c` and `d`, if one exists.
pub fn isomorphic(c: &Correspondence, d: &Correspondence, seed: u64) -> Result<Option<TwoCell>> {
    check_endpoints(c, d)?;
    if c.keys() != d.keys() {
        return Ok(None);
    }
    let mut components = Vec::new();
    for (k, b) in c.blocks().iter().enumerate() {
        let aligned = d.rep_at(&b.gamma)?;
        match isomorphism(&b.rep, &aligned, seed)? {
            Some(t) => components.push((c.keys()[k].clone(), t)),
            None => return Ok(None),
        }
    }
    Ok(Some(TwoCell { components }))
}

/// Irreducible summands with multiplicities, each a single block at the canonical
/// representative, in key order.
pub fn decompose(c: &Correspondence, seed: u64) -> Result<Vec<(Correspondence, usize)>> {
    let mut out = Vec::new();
    for key in c.keys() {
        let rep = c.rep_at(key)?;
        let dec = decompose_projrep(&rep, seed)?;
        for (sigma, mult) in dec.summands {
            let single = Correspondence::new(c.source(), c.target(), vec![Block::new(key.clone(), sigma)])?;
            out.push((single, mult));
        }
    }
    Ok(out)
}
