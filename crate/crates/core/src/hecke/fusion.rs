use std::collections::BTreeMap;

use super::cells::{decompose, hom_dim};
use super::correspondence::Correspondence;
use super::object::HeckeObject;
use super::tensor::tensor;
use crate::error::{Error, Result};

/// Isomorphism classes of irreducible correspondences, in order of discovery.
#[derive(Clone, Debug, Default)]
pub struct ClassRegistry {
    items: Vec<Correspondence>,
}

impl ClassRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn items(&self) -> &[Correspondence] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Class of an irreducible correspondence, if already known.
    pub fn find(&self, c: &Correspondence) -> Result<Option<usize>> {
        for (i, it) in self.items.iter().enumerate() {
            if it.same_endpoints(c) && it.keys() == c.keys() && it.total_dim() == c.total_dim() && hom_dim(it, c)? > 0 {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Class index, registering `c` when it is new.
    pub fn classify(&mut self, c: &Correspondence) -> Result<usize> {
        if let Some(i) = self.find(c)? {
            return Ok(i);
        }
        self.items.push(c.clone());
        Ok(self.items.len() - 1)
    }

    /// Multiset of classes `(class, multiplicity)` sorted by class.
    pub fn classify_decomposition(&mut self, parts: &[(Correspondence, usize)]) -> Result<Vec<(usize, usize)>> {
        let mut acc: BTreeMap<usize, usize> = BTreeMap::new();
        for (p, m) in parts {
            *acc.entry(self.classify(p)?).or_default() += m;
        }
        Ok(acc.into_iter().collect())
    }
}

#[derive(Clone, Debug)]
pub struct FusionTable {
    pub irreducibles: Vec<Correspondence>,
    /// `(i, j) ↦ [(k, N_ij^k)]` for every composable pair of irreducibles.
    pub products: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

/// Close the identities of `objects` and the irreducible pieces of `generators` under
/// tensor products, failing once more than `bound` classes appear.
pub fn fusion_table(
    objects: &[HeckeObject],
    generators: &[Correspondence],
    bound: usize,
    seed: u64,
) -> Result<FusionTable> {
    let mut reg = ClassRegistry::new();
    let check = |reg: &ClassRegistry| {
        if reg.len() > bound {
            Err(Error::BoundExceeded(format!("fusion closure exceeds {bound} irreducible classes")))
        } else {
            Ok(())
        }
    };
    for o in objects {
        reg.classify(&Correspondence::identity(o)?)?;
    }
    for g in generators {
        for (p, _) in decompose(g, seed)? {
            reg.classify(&p)?;
            check(&reg)?;
        }
    }
    let mut products: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    loop {
        let n = reg.len();
        let mut pending = None;
        'scan: for i in 0..n {
            for j in 0..n {
                if !products.contains_key(&(i, j)) && reg.items[i].target().same_as(reg.items[j].source()) {
                    pending = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = pending else { break };
        let t = tensor(&reg.items[i], &reg.items[j])?;
        let parts = decompose(&t, seed)?;
        let row = reg.classify_decomposition(&parts)?;
        check(&reg)?;
        products.insert((i, j), row);
    }
    Ok(FusionTable { irreducibles: reg.items, products })
}
