//! Index arithmetic for subfactors built from correspondence data, and the index
//! sets attached to a quotient group.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{coset_data, enumerate_subgroups, GroupElement, Subgroup};
use crate::hecke::{Block, Correspondence, HeckeObject};
use crate::projective::{Cocycle2, ProjRep};

/// `Γ`, a commensurate `G` with cocycle `Ω`, and entries `(γ_i, π_i)` where `π_i`
/// represents `Γ ∩ γ_i G γ_i^-1` with obstruction `conj(Ω ∘ Ad γ_i^-1)`.
#[derive(Clone, Debug)]
pub struct SubfactorDatum {
    pub base: Subgroup,
    pub cocycle: Cocycle2,
    pub witness: Option<ProjRep>,
    pub entries: Vec<(GroupElement, ProjRep)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexEntry {
    pub gamma: GroupElement,
    /// `[G : G ∩ γ^-1 Γ γ]`.
    pub left: u64,
    /// `[Γ : Γ ∩ γ G γ^-1]`.
    pub right: u64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub entries: Vec<IndexEntry>,
    pub ell: u64,
    pub r: u64,
    pub index: u64,
}

impl SubfactorDatum {
    pub fn group(&self) -> &Subgroup {
        self.cocycle.group()
    }

    fn objects(&self) -> Result<(HeckeObject, HeckeObject)> {
        if !self.base.is_commensurate(self.group()) {
            return Err(Error::NotCommensurate);
        }
        let base = HeckeObject::trivial(&self.base)?;
        let top = HeckeObject::new(self.cocycle.clone(), self.witness.clone())?;
        Ok((base, top))
    }
}

/// Blockwise correspondence from `(Γ, 1)` to `(G, Ω)`; its dimension pair is `(ℓ, r)`.
/// Entries in a common double coset are merged by direct sum.
pub fn correspondence_of_datum(d: &SubfactorDatum) -> Result<Correspondence> {
    let (base, top) = d.objects()?;
    if d.entries.is_empty() {
        return Err(Error::invalid("a subfactor datum needs at least one entry"));
    }
    let mut acc: Option<Correspondence> = None;
    for (gamma, pi) in &d.entries {
        let c = Correspondence::new(&base, &top, vec![Block::new(gamma.clone(), pi.clone())])?;
        acc = Some(match acc {
            None => c,
            Some(a) => a.direct_sum(&c)?,
        });
    }
    Ok(acc.expect("non-empty"))
}

pub fn subfactor_index(d: &SubfactorDatum) -> Result<IndexReport> {
    let c = correspondence_of_datum(d)?;
    let mut entries = Vec::with_capacity(d.entries.len());
    for (gamma, pi) in &d.entries {
        let cd = coset_data(&d.base, gamma, d.group())?;
        entries.push(IndexEntry { gamma: gamma.clone(), left: cd.left_cosets, right: cd.right_cosets, dim: pi.dim() });
    }
    let ell: u64 = entries.iter().map(|e| e.left * e.dim as u64).sum();
    let r: u64 = entries.iter().map(|e| e.right * e.dim as u64).sum();
    if (c.diml(), c.dimr()) != (ell, r) {
        return Err(Error::invalid(format!(
            "correspondence dimensions ({}, {}) disagree with the index data ({ell}, {r})",
            c.diml(),
            c.dimr()
        )));
    }
    Ok(IndexReport { entries, ell, r, index: ell * r })
}

/// The quotient whose finite subgroups govern the index sets.
#[derive(Clone, Debug)]
pub enum QuotientGroup {
    Finite(Subgroup),
    /// `∏_n Z/p_n Z` for the listed primes (with multiplicity).
    Profinite(Vec<u64>),
}

/// All divisors of `∏ primes`, sorted.
pub fn divisors_of_product(primes: &[u64]) -> Result<Vec<u64>> {
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    for &p in primes {
        *counts.entry(p).or_default() += 1;
    }
    let mut out = vec![1u64];
    for (p, k) in counts {
        let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
        for &d in &out {
            let mut x = d;
            next.push(x);
            for _ in 0..k {
                x = x.checked_mul(p).ok_or_else(|| Error::BoundExceeded("divisor exceeds 64 bits".into()))?;
                next.push(x);
            }
        }
        out = next;
    }
    out.sort_unstable();
    Ok(out)
}

/// Orders of finite subgroups of the quotient, sorted.
pub fn index_set_c(q: &QuotientGroup, bound: usize) -> Result<Vec<u64>> {
    match q {
        QuotientGroup::Finite(g) => {
            let mut orders: Vec<u64> = enumerate_subgroups(g, bound)?.iter().map(|s| s.order().expect("finite") as u64).collect();
            orders.sort_unstable();
            orders.dedup();
            Ok(orders)
        }
        // Every partial product divides the full product, so its divisors cover all.
        QuotientGroup::Profinite(primes) => divisors_of_product(primes),
    }
}

/// `n² m ≤ cutoff` with `m` a subgroup order, each with a witness `(n, m)`
/// using the smallest possible `m`.
pub fn index_set_i(q: &QuotientGroup, cutoff: u64, bound: usize) -> Result<Vec<(u64, u64, u64)>> {
    let c = index_set_c(q, bound)?;
    let mut out: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for &m in &c {
        let mut n = 1u64;
        while let Some(v) = (n * n).checked_mul(m).filter(|&v| v <= cutoff) {
            out.entry(v).or_insert((n, m));
            n += 1;
        }
    }
    Ok(out.into_iter().map(|(v, (n, m))| (v, n, m)).collect())
}
