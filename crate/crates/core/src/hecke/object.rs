use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::projective::{Cocycle2, Domain, ProjRep};

/// A pair `(G, Ω)` where `Ω` is the obstruction of a finite-dimensional projective
/// representation.
#[derive(Clone)]
pub struct HeckeObject {
    cocycle: Cocycle2,
    witness: Option<ProjRep>,
}

impl fmt::Debug for HeckeObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeObject({}, order {})", self.group(), self.cocycle.order())
    }
}

impl HeckeObject {
    /// Without an explicit witness, the twisted regular representation serves as one:
    /// it has obstruction `Ω` for every normalized 2-cocycle.
    pub fn new(cocycle: Cocycle2, witness: Option<ProjRep>) -> Result<HeckeObject> {
        if !cocycle.verify() {
            return Err(Error::invalid("object cocycle fails the 2-cocycle identity"));
        }
        let witness = match witness {
            Some(w) => {
                if !w.verify() || !w.cocycle().same_as(&cocycle) {
                    return Err(Error::ObstructionMismatch("witness obstruction differs from the object cocycle".into()));
                }
                Some(w)
            }
            None => None,
        };
        Ok(HeckeObject { cocycle, witness })
    }

    /// `(G, 1)`; lattice groups are modelled modulo themselves.
    pub fn trivial(group: &Subgroup) -> Result<HeckeObject> {
        let d = Domain::new(group, Some(group))?;
        Self::new(Cocycle2::trivial(&d, 1), None)
    }

    pub fn group(&self) -> &Subgroup {
        self.cocycle.group()
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    pub fn domain(&self) -> &Arc<Domain> {
        self.cocycle.domain()
    }

    pub fn witness(&self) -> ProjRep {
        self.witness.clone().unwrap_or_else(|| ProjRep::twisted_regular(&self.cocycle))
    }

    pub fn has_explicit_witness(&self) -> bool {
        self.witness.is_some()
    }

    /// Equality on the nose: same subgroup and identical cocycle values.
    pub fn same_as(&self, o: &HeckeObject) -> bool {
        self.group() == o.group() && self.cocycle.same_as(&o.cocycle)
    }
}
