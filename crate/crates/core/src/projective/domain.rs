//! Finite models of subgroups.
//!
//! A permutation subgroup is its own model. A lattice subgroup `H` is modelled by
//! the finite quotient `H / P` for a full-rank period lattice `P ⊆ H`; every cocycle
//! and representation on `H` used in a computation factors through such a quotient.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{GroupElement, Subgroup};

pub struct Domain {
    group: Subgroup,
    period: Option<Subgroup>,
    lifts: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl std::fmt::Debug for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Domain({}, {} elements)", self.group, self.lifts.len())
    }
}

/// Largest finite model the tabulating routines accept.
pub const MAX_DOMAIN: usize = 4096;

impl Domain {
    /// Model of a finite subgroup.
    pub fn finite(group: &Subgroup) -> Result<Arc<Domain>> {
        let lifts = group
            .elements()
            .ok_or(Error::BackendUnsupported("lattice subgroups need a period lattice"))?;
        Self::build(group.clone(), None, lifts)
    }

    /// Model of a lattice subgroup modulo a full-rank period `period ⊆ group`.
    pub fn periodic(group: &Subgroup, period: &Subgroup) -> Result<Arc<Domain>> {
        if group.is_finite() {
            return Self::finite(group);
        }
        if !period.is_subgroup_of(group) {
            return Err(Error::IncompatibleDomain(format!("period {period} is not inside {group}")));
        }
        let pl = period.lattice().expect("lattice");
        if group.index(period)? as usize > MAX_DOMAIN {
            return Err(Error::BoundExceeded(format!("quotient {group} / {period} is too large")));
        }
        let lifts = group
            .left_transversal(period)?
            .into_iter()
            .map(|t| GroupElement::Vector(pl.reduce(t.as_vector().expect("lattice"))))
            .collect();
        Self::build(group.clone(), Some(period.clone()), lifts)
    }

    /// Model of `group` using the given period for lattices; `None` means the
    /// subgroup is finite.
    pub fn new(group: &Subgroup, period: Option<&Subgroup>) -> Result<Arc<Domain>> {
        match period {
            Some(p) if !group.is_finite() => Self::periodic(group, p),
            _ => Self::finite(group),
        }
    }

    fn build(group: Subgroup, period: Option<Subgroup>, lifts: Vec<GroupElement>) -> Result<Arc<Domain>> {
        let n = lifts.len();
        if n > MAX_DOMAIN {
            return Err(Error::BoundExceeded(format!("finite model of {group} has {n} elements")));
        }
        let index: HashMap<GroupElement, usize> = lifts.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let mut d = Domain { group, period, lifts, index, mul: Vec::with_capacity(n * n), inv: vec![0; n] };
        for i in 0..n {
            for j in 0..n {
                let p = d.lifts[i].mul(&d.lifts[j]);
                let k = d.locate(&p).expect("closed under multiplication");
                d.mul.push(k as u32);
            }
        }
        for i in 0..n {
            d.inv[i] = d.locate(&d.lifts[i].inverse()).expect("closed under inverses") as u32;
        }
        Ok(Arc::new(d))
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn period(&self) -> Option<&Subgroup> {
        self.period.as_ref()
    }

    pub fn len(&self) -> usize {
        self.lifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifts.is_empty()
    }

    pub fn lifts(&self) -> &[GroupElement] {
        &self.lifts
    }

    pub fn lift(&self, i: usize) -> &GroupElement {
        &self.lifts[i]
    }

    /// Index of the class of `g`, or `None` when `g` is outside the group.
    pub fn locate(&self, g: &GroupElement) -> Option<usize> {
        match (&self.period, g) {
            (Some(p), GroupElement::Vector(v)) => {
                if !self.group.contains(g) {
                    return None;
                }
                let r = GroupElement::Vector(p.lattice().expect("lattice").reduce(v));
                self.index.get(&r).copied()
            }
            _ => self.index.get(g).copied(),
        }
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.lifts.len() + j] as usize
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    /// Same group and same period.
    pub fn same_model(&self, o: &Domain) -> bool {
        self.group == o.group && self.period == o.period
    }

    /// Period lattice basis vectors (empty for finite groups).
    pub fn period_generators(&self) -> Vec<GroupElement> {
        self.period.as_ref().map(|p| p.generators().to_vec()).unwrap_or_default()
    }

    /// A model of `sub ⊆ group` whose period is the intersection with ours.
    pub fn restricted(&self, sub: &Subgroup) -> Result<Arc<Domain>> {
        if !sub.is_subgroup_of(&self.group) {
            return Err(Error::IncompatibleDomain(format!("{sub} is not inside {}", self.group)));
        }
        match &self.period {
            Some(p) => Self::periodic(sub, &p.intersect(sub)?),
            None => Self::finite(sub),
        }
    }

    /// Model of the same group whose period lies inside both periods.
    pub fn common(a: &Arc<Domain>, b: &Arc<Domain>) -> Result<Arc<Domain>> {
        if a.group != b.group {
            return Err(Error::IncompatibleDomain(format!("{} differs from {}", a.group, b.group)));
        }
        match (&a.period, &b.period) {
            (Some(p), Some(q)) if p != q => Self::periodic(&a.group, &p.intersect(q)?),
            _ => Ok(a.clone()),
        }
    }

    /// Model of `group` with period contained in every given period.
    pub fn common_refinement(group: &Subgroup, periods: &[Option<&Subgroup>]) -> Result<Arc<Domain>> {
        if group.is_finite() {
            return Self::finite(group);
        }
        let mut p = group.clone();
        for q in periods.iter().flatten() {
            p = p.intersect(q)?;
        }
        Self::periodic(group, &p)
    }

    /// Generators of the finite model (images of the subgroup generators).
    pub fn generator_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.group.generators().iter().filter_map(|g| self.locate(g)).filter(|&i| i != 0).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
