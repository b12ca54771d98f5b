use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::element::{GroupElement, Perm, Rat};
use super::lattice::Lattice;
use crate::error::{Error, Result};

/// Largest permutation group the closure routines will materialize.
pub const MAX_FINITE_ORDER: usize = 50_000;

/// Default bound on the group order for subgroup enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 2000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Backend {
    Permutation { degree: usize },
    Lattice { rank: usize },
}

/// The ambient group: a permutation group given by generators, or `(Q^n, +)`.
#[derive(Clone, Debug)]
pub struct AmbientGroup {
    backend: Backend,
    generators: Vec<GroupElement>,
}

impl AmbientGroup {
    pub fn permutation(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("permutation degree must be positive"));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::invalid(format!("generator {g} has wrong degree")));
            }
        }
        Ok(AmbientGroup {
            backend: Backend::Permutation { degree },
            generators: generators.into_iter().map(GroupElement::Perm).collect(),
        })
    }

    pub fn lattice(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("lattice rank must be positive"));
        }
        Ok(AmbientGroup { backend: Backend::Lattice { rank }, generators: Vec::new() })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn identity(&self) -> GroupElement {
        match self.backend {
            Backend::Permutation { degree } => GroupElement::Perm(Perm::identity(degree)),
            Backend::Lattice { rank } => GroupElement::Vector(vec![Rat::from_integer(0); rank]),
        }
    }

    /// The whole ambient group, when it is finite.
    pub fn whole(&self) -> Result<Subgroup> {
        match self.backend {
            Backend::Permutation { .. } => Subgroup::generated(self, &self.generators),
            Backend::Lattice { .. } => Err(Error::BackendUnsupported("the rational ambient group is not a lattice")),
        }
    }

    pub fn same_backend(&self, g: &GroupElement) -> bool {
        match (self.backend, g) {
            (Backend::Permutation { degree }, GroupElement::Perm(p)) => p.degree() == degree,
            (Backend::Lattice { rank }, GroupElement::Vector(v)) => v.len() == rank,
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if !self.same_backend(g) {
            return Err(Error::AmbientMismatch);
        }
        if let Backend::Permutation { .. } = self.backend {
            if !self.whole()?.contains(g) {
                return Err(Error::invalid(format!("{g} is not in the ambient group")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Canon {
    /// Sorted element list; the identity always comes first.
    Finite(Vec<Perm>),
    Lattice(Lattice),
}

struct Inner {
    backend: Backend,
    generators: Vec<GroupElement>,
    canon: Canon,
}

/// A subgroup with canonical form: element set for permutations, HNF for lattices.
#[derive(Clone)]
pub struct Subgroup(Arc<Inner>);

impl PartialEq for Subgroup {
    fn eq(&self, o: &Subgroup) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.backend == o.0.backend && self.0.canon == o.0.canon)
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.canon.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, o: &Subgroup) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, o: &Subgroup) -> std::cmp::Ordering {
        self.0.canon.cmp(&o.0.canon)
    }
}

pub(crate) fn closure(degree: usize, gens: &[Perm], bound: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    return Err(Error::BoundExceeded(format!("permutation group larger than {bound}")));
                }
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Perm> = seen.into_iter().collect();
    v.sort();
    Ok(v)
}

/// A short generating list for a finite element set.
fn small_generating_set(elements: &[Perm]) -> Vec<Perm> {
    let Some(first) = elements.first() else { return Vec::new() };
    let degree = first.degree();
    let mut gens: Vec<Perm> = Vec::new();
    let mut span: BTreeSet<Perm> = BTreeSet::from([Perm::identity(degree)]);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(degree, &gens, MAX_FINITE_ORDER).expect("subset of a finite group").into_iter().collect();
        }
    }
    gens
}

impl Subgroup {
    pub fn generated(ambient: &AmbientGroup, gens: &[GroupElement]) -> Result<Subgroup> {
        for g in gens {
            if !ambient.same_backend(g) {
                return Err(Error::AmbientMismatch);
            }
        }
        match ambient.backend {
            Backend::Permutation { degree } => {
                let perms: Vec<Perm> = gens.iter().map(|g| g.as_perm().expect("checked").clone()).collect();
                let elements = closure(degree, &perms, MAX_FINITE_ORDER)?;
                Ok(Self::from_elements(degree, elements, gens.to_vec()))
            }
            Backend::Lattice { rank } => {
                let vs: Vec<Vec<Rat>> = gens.iter().map(|g| g.as_vector().expect("checked").to_vec()).collect();
                Ok(Self::from_lattice(Lattice::from_generators(&vs, rank)?))
            }
        }
    }

    fn from_elements(degree: usize, elements: Vec<Perm>, generators: Vec<GroupElement>) -> Subgroup {
        debug_assert!(elements.first().is_some_and(Perm::is_identity));
        Subgroup(Arc::new(Inner { backend: Backend::Permutation { degree }, generators, canon: Canon::Finite(elements) }))
    }

    pub fn from_lattice(l: Lattice) -> Subgroup {
        let generators = l.basis().into_iter().map(GroupElement::Vector).collect();
        Subgroup(Arc::new(Inner { backend: Backend::Lattice { rank: l.rank() }, generators, canon: Canon::Lattice(l) }))
    }

    pub fn trivial(degree: usize) -> Subgroup {
        Self::from_elements(degree, vec![Perm::identity(degree)], Vec::new())
    }

    pub fn backend(&self) -> Backend {
        self.0.backend
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.0.generators
    }

    pub fn identity(&self) -> GroupElement {
        match self.0.backend {
            Backend::Permutation { degree } => GroupElement::Perm(Perm::identity(degree)),
            Backend::Lattice { rank } => GroupElement::Vector(vec![Rat::from_integer(0); rank]),
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        match &self.0.canon {
            Canon::Lattice(l) => Some(l),
            Canon::Finite(_) => None,
        }
    }

    pub fn perms(&self) -> Option<&[Perm]> {
        match &self.0.canon {
            Canon::Finite(v) => Some(v),
            Canon::Lattice(_) => None,
        }
    }

    /// All elements, for finite subgroups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.perms().map(|v| v.iter().cloned().map(GroupElement::Perm).collect())
    }

    pub fn order(&self) -> Option<usize> {
        self.perms().map(<[Perm]>::len)
    }

    pub fn is_finite(&self) -> bool {
        self.perms().is_some()
    }

    fn same_ambient(&self, o: &Subgroup) -> Result<()> {
        if self.0.backend == o.0.backend {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.0.canon, g) {
            (Canon::Finite(v), GroupElement::Perm(p)) => v.binary_search(p).is_ok(),
            (Canon::Lattice(l), GroupElement::Vector(x)) => l.contains(x),
            _ => false,
        }
    }

    pub fn is_subgroup_of(&self, h: &Subgroup) -> bool {
        if self.0.backend != h.0.backend {
            return false;
        }
        match (&self.0.canon, &h.0.canon) {
            (Canon::Finite(a), Canon::Finite(b)) => a.len() <= b.len() && a.iter().all(|x| b.binary_search(x).is_ok()),
            (Canon::Lattice(a), Canon::Lattice(b)) => b.contains_lattice(a),
            _ => false,
        }
    }

    pub fn intersect(&self, o: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(o)?;
        if self == o {
            return Ok(self.clone());
        }
        Ok(match (&self.0.canon, &o.0.canon) {
            (Canon::Finite(a), Canon::Finite(_)) => {
                let Backend::Permutation { degree } = self.0.backend else { unreachable!() };
                let els: Vec<Perm> = a.iter().filter(|p| o.contains(&GroupElement::Perm((*p).clone()))).cloned().collect();
                let gens = small_generating_set(&els).into_iter().map(GroupElement::Perm).collect();
                Self::from_elements(degree, els, gens)
            }
            (Canon::Lattice(a), Canon::Lattice(b)) => Self::from_lattice(a.intersect(b)),
            _ => return Err(Error::AmbientMismatch),
        })
    }

    /// Subgroup generated by `self` and `o`.
    pub fn join(&self, o: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(o)?;
        Ok(match (&self.0.canon, &o.0.canon) {
            (Canon::Finite(_), Canon::Finite(_)) => {
                let Backend::Permutation { degree } = self.0.backend else { unreachable!() };
                let mut gens = self.0.generators.clone();
                gens.extend(o.0.generators.iter().cloned());
                let perms: Vec<Perm> = gens.iter().map(|g| g.as_perm().expect("finite").clone()).collect();
                Self::from_elements(degree, closure(degree, &perms, MAX_FINITE_ORDER)?, gens)
            }
            (Canon::Lattice(a), Canon::Lattice(b)) => Self::from_lattice(a.sum(b)),
            _ => return Err(Error::AmbientMismatch),
        })
    }

    /// `[self : k]`.
    pub fn index(&self, k: &Subgroup) -> Result<u64> {
        if !k.is_subgroup_of(self) {
            return Err(Error::NotASubgroup(format!("{k} is not contained in {self}")));
        }
        Ok(match (&self.0.canon, &k.0.canon) {
            (Canon::Finite(a), Canon::Finite(b)) => (a.len() / b.len()) as u64,
            (Canon::Lattice(a), Canon::Lattice(b)) => a.index_of(b) as u64,
            _ => unreachable!("checked by is_subgroup_of"),
        })
    }

    /// Representatives `t_i` with `self = ⊔ t_i k`, identity first.
    pub fn left_transversal(&self, k: &Subgroup) -> Result<Vec<GroupElement>> {
        if !k.is_subgroup_of(self) {
            return Err(Error::NotASubgroup(format!("{k} is not contained in {self}")));
        }
        Ok(match (&self.0.canon, &k.0.canon) {
            (Canon::Finite(a), Canon::Finite(b)) => {
                let mut covered: HashSet<Perm> = HashSet::new();
                let mut reps = Vec::new();
                for t in a {
                    if covered.contains(t) {
                        continue;
                    }
                    reps.push(GroupElement::Perm(t.clone()));
                    covered.extend(b.iter().map(|x| t.then(x)));
                }
                reps
            }
            (Canon::Lattice(a), Canon::Lattice(b)) => a.transversal(b).into_iter().map(GroupElement::Vector).collect(),
            _ => unreachable!("checked by is_subgroup_of"),
        })
    }

    /// Both indices `[self : self ∩ o]` and `[o : self ∩ o]` are finite.
    pub fn is_commensurate(&self, o: &Subgroup) -> bool {
        match self.intersect(o) {
            Ok(i) => self.index(&i).is_ok() && o.index(&i).is_ok(),
            Err(_) => false,
        }
    }

    /// `γ self γ^-1`.
    pub fn conjugate_by(&self, gamma: &GroupElement) -> Result<Subgroup> {
        match (&self.0.canon, gamma) {
            (Canon::Lattice(_), GroupElement::Vector(_)) => Ok(self.clone()),
            (Canon::Finite(a), GroupElement::Perm(_)) => {
                let Backend::Permutation { degree } = self.0.backend else { unreachable!() };
                let mut els: Vec<Perm> = a
                    .iter()
                    .map(|p| gamma.conjugate(&GroupElement::Perm(p.clone())).as_perm().expect("perm").clone())
                    .collect();
                els.sort();
                let gens = self.0.generators.iter().map(|g| gamma.conjugate(g)).collect();
                Ok(Self::from_elements(degree, els, gens))
            }
            _ => Err(Error::AmbientMismatch),
        }
    }

    /// Full-rank sublattice `n·self`, or the trivial group for permutations.
    pub fn scaled_period(&self, n: i64) -> Subgroup {
        match &self.0.canon {
            Canon::Lattice(l) => Self::from_lattice(l.scaled(n)),
            Canon::Finite(_) => {
                let Backend::Permutation { degree } = self.0.backend else { unreachable!() };
                Self::trivial(degree)
            }
        }
    }

    pub fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.canon {
            Canon::Finite(v) => {
                let gens: Vec<String> = self.0.generators.iter().map(ToString::to_string).collect();
                write!(f, "<{}> (order {})", gens.join(", "), v.len())
            }
            Canon::Lattice(l) => {
                let rows: Vec<String> = l
                    .basis()
                    .iter()
                    .map(|r| GroupElement::Vector(r.clone()).to_string())
                    .collect();
                write!(f, "lattice[{}]", rows.join(", "))
            }
        }
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All subgroups of a finite permutation group, closed under pairwise joins.
pub fn enumerate_subgroups(g: &Subgroup, bound: usize) -> Result<Vec<Subgroup>> {
    let Some(elements) = g.perms() else {
        return Err(Error::BackendUnsupported("subgroup enumeration needs a finite group"));
    };
    if elements.len() > bound {
        return Err(Error::BoundExceeded(format!("group order {} exceeds bound {bound}", elements.len())));
    }
    let Backend::Permutation { degree } = g.backend() else { unreachable!() };
    let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut gens_of: Vec<(Vec<Perm>, Vec<Perm>)> = Vec::new();
    for e in elements {
        let c = closure(degree, std::slice::from_ref(e), bound)?;
        if found.insert(c.clone()) {
            gens_of.push((c, vec![e.clone()]));
        }
    }
    let mut frontier = 0;
    while frontier < gens_of.len() {
        let end = gens_of.len();
        for i in frontier..end {
            for j in 0..end {
                if j >= frontier && j < i {
                    continue;
                }
                let (a, ga) = &gens_of[i];
                let (b, gb) = &gens_of[j];
                if a.iter().all(|x| b.binary_search(x).is_ok()) || b.iter().all(|x| a.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = ga.clone();
                gens.extend(gb.iter().cloned());
                let c = closure(degree, &gens, bound)?;
                if found.insert(c.clone()) {
                    gens_of.push((c, gens));
                }
            }
        }
        frontier = end;
    }
    let mut out: Vec<Subgroup> = gens_of
        .into_iter()
        .map(|(els, gens)| Subgroup::from_elements(degree, els, gens.into_iter().map(GroupElement::Perm).collect()))
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    Ok(out)
}
