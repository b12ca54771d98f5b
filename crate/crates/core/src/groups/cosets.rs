use std::collections::BTreeMap;

use super::element::GroupElement;
use super::lattice::Lattice;
use super::subgroup::Subgroup;
use crate::error::{Error, Result};

/// Canonical representative of the double coset `g1 · x · g2`.
pub fn double_coset_key(g1: &Subgroup, x: &GroupElement, g2: &Subgroup) -> Result<GroupElement> {
    match (g1.perms(), g2.perms(), x) {
        (Some(a), Some(b), GroupElement::Perm(p)) => {
            let mut best = None::<super::element::Perm>;
            for l in a {
                let lp = l.then(p);
                for r in b {
                    let y = lp.then(r);
                    if best.as_ref().is_none_or(|bst| y < *bst) {
                        best = Some(y);
                    }
                }
            }
            Ok(GroupElement::Perm(best.expect("groups are non-empty")))
        }
        (None, None, GroupElement::Vector(v)) => {
            let sum = g1.join(g2)?;
            Ok(GroupElement::Vector(sum.lattice().expect("lattice").reduce(v)))
        }
        _ => Err(Error::AmbientMismatch),
    }
}

/// Canonical representative of the left coset `x · k`.
pub fn left_coset_key(x: &GroupElement, k: &Subgroup) -> Result<GroupElement> {
    match (k.perms(), x) {
        (Some(b), GroupElement::Perm(p)) => Ok(GroupElement::Perm(b.iter().map(|r| p.then(r)).min().expect("non-empty"))),
        (None, GroupElement::Vector(v)) => Ok(GroupElement::Vector(k.lattice().expect("lattice").reduce(v))),
        _ => Err(Error::AmbientMismatch),
    }
}

/// Canonical representative of the right coset `k · x`.
pub fn right_coset_key(k: &Subgroup, x: &GroupElement) -> Result<GroupElement> {
    match (k.perms(), x) {
        (Some(b), GroupElement::Perm(p)) => Ok(GroupElement::Perm(b.iter().map(|l| l.then(p)).min().expect("non-empty"))),
        (None, GroupElement::Vector(v)) => Ok(GroupElement::Vector(k.lattice().expect("lattice").reduce(v))),
        _ => Err(Error::AmbientMismatch),
    }
}

/// Precomputed canonical double-coset keys for a fixed pair `(G1, G2)`.
#[derive(Clone, Debug)]
pub struct CosetKeyer {
    left: Subgroup,
    right: Subgroup,
    sum: Option<Lattice>,
}

impl CosetKeyer {
    pub fn new(left: &Subgroup, right: &Subgroup) -> Result<Self> {
        let sum = match (left.lattice(), right.lattice()) {
            (Some(a), Some(b)) => Some(a.sum(b)),
            (None, None) => None,
            _ => return Err(Error::AmbientMismatch),
        };
        Ok(CosetKeyer { left: left.clone(), right: right.clone(), sum })
    }

    pub fn key(&self, x: &GroupElement) -> Result<GroupElement> {
        match (&self.sum, x) {
            (Some(l), GroupElement::Vector(v)) if v.len() == l.rank() => Ok(GroupElement::Vector(l.reduce(v))),
            (None, GroupElement::Perm(_)) => double_coset_key(&self.left, x, &self.right),
            _ => Err(Error::AmbientMismatch),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DoubleCoset {
    /// Canonical representative `γ`.
    pub representative: GroupElement,
    /// `G1 ∩ γ G2 γ^-1`.
    pub stabilizer: Subgroup,
    /// Number of cosets `G1 y` inside `G1 γ G2`, i.e. `[G2 : G2 ∩ γ^-1 G1 γ]`.
    pub left_cosets: u64,
    /// Number of cosets `x G2` inside `G1 γ G2`, i.e. `[G1 : G1 ∩ γ G2 γ^-1]`.
    pub right_cosets: u64,
}

#[derive(Clone, Debug)]
pub struct DoubleCosetDecomposition {
    pub left: Subgroup,
    pub right: Subgroup,
    pub cosets: Vec<DoubleCoset>,
}

impl DoubleCosetDecomposition {
    pub fn total_left_cosets(&self) -> u64 {
        self.cosets.iter().map(|c| c.left_cosets).sum()
    }

    pub fn total_right_cosets(&self) -> u64 {
        self.cosets.iter().map(|c| c.right_cosets).sum()
    }

    pub fn representatives(&self) -> Vec<GroupElement> {
        self.cosets.iter().map(|c| c.representative.clone()).collect()
    }
}

pub fn coset_data(g1: &Subgroup, gamma: &GroupElement, g2: &Subgroup) -> Result<DoubleCoset> {
    let stabilizer = g1.intersect(&g2.conjugate_by(gamma)?)?;
    let back = g2.intersect(&g1.conjugate_by(&gamma.inverse())?)?;
    Ok(DoubleCoset {
        representative: gamma.clone(),
        right_cosets: g1.index(&stabilizer)?,
        left_cosets: g2.index(&back)?,
        stabilizer,
    })
}

/// Decompose `I = ∪ G1 s G2` over the seeds into disjoint double cosets, sorted by key.
pub fn double_cosets(g1: &Subgroup, seeds: &[GroupElement], g2: &Subgroup) -> Result<DoubleCosetDecomposition> {
    let keyer = CosetKeyer::new(g1, g2)?;
    let mut keys: BTreeMap<GroupElement, ()> = BTreeMap::new();
    for s in seeds {
        keys.insert(keyer.key(s)?, ());
    }
    let cosets = keys.into_keys().map(|k| coset_data(g1, &k, g2)).collect::<Result<Vec<_>>>()?;
    Ok(DoubleCosetDecomposition { left: g1.clone(), right: g2.clone(), cosets })
}
