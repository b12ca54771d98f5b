use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use super::object::HeckeObject;
use crate::error::{Error, Result};
use crate::groups::{coset_data, CosetKeyer, DoubleCoset, DoubleCosetDecomposition, GroupElement, Subgroup};
use crate::matrix::CMat;
use crate::projective::{Cocycle2, Domain, ProjRep};

/// One double coset `G1 γ G2` of the carrier with its compressed representation
/// of `G1 ∩ γ G2 γ^-1`.
#[derive(Clone, Debug)]
pub struct Block {
    pub gamma: GroupElement,
    pub rep: ProjRep,
}

impl Block {
    pub fn new(gamma: GroupElement, rep: ProjRep) -> Block {
        Block { gamma, rep }
    }
}

/// A finite-index correspondence `(I, K, π)` stored in compressed block form.
#[derive(Clone)]
pub struct Correspondence {
    source: HeckeObject,
    target: HeckeObject,
    blocks: Vec<Block>,
    cosets: Vec<DoubleCoset>,
    keys: Vec<GroupElement>,
    transversals: Vec<Vec<GroupElement>>,
    keyer: CosetKeyer,
}

impl fmt::Debug for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Correspondence")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("blocks", &self.blocks.iter().map(|b| (b.gamma.to_string(), b.rep.dim())).collect::<Vec<_>>())
            .finish()
    }
}

/// Location of `x ∈ I`: block index, coset index, and `x = t_i γ_k b` with `b ∈ G2`.
#[derive(Clone, Debug)]
pub(crate) struct Located {
    pub block: usize,
    pub coset: usize,
    pub right: GroupElement,
}

/// `Ω1 · conj(Ω2 ∘ Ad γ^-1)` tabulated on `domain`, a model of a subgroup of `G1 ∩ γ G2 γ^-1`.
pub fn required_obstruction(
    source: &HeckeObject,
    target: &HeckeObject,
    gamma: &GroupElement,
    domain: &Arc<Domain>,
) -> Result<Cocycle2> {
    let (o1, o2) = (source.cocycle(), target.cocycle());
    let order = o1.order().lcm(&o2.order());
    let gi = gamma.inverse();
    Cocycle2::from_fn(domain, order, |a, b| {
        Ok(o1.value(a, b)?.mul(&o2.value(&gi.conjugate(a), &gi.conjugate(b))?.inv()))
    })
}

/// A model of `sub` on which every given period is respected.
pub(crate) fn refined_domain(sub: &Subgroup, periods: &[Option<&Subgroup>]) -> Result<Arc<Domain>> {
    Domain::common_refinement(sub, periods)
}

impl Correspondence {
    /// Validate block data: disjoint double cosets, stabilizer groups, and the exact
    /// obstruction identity per block. Blocks are stored sorted by canonical key.
    pub fn new(source: &HeckeObject, target: &HeckeObject, blocks: Vec<Block>) -> Result<Correspondence> {
        let (g1, g2) = (source.group(), target.group());
        let keyer = CosetKeyer::new(g1, g2)?;
        let mut rows: Vec<(GroupElement, Block, DoubleCoset)> = Vec::with_capacity(blocks.len());
        for b in blocks {
            let key = keyer.key(&b.gamma)?;
            if let Some((_, prev, _)) = rows.iter().find(|(k, _, _)| *k == key) {
                return Err(Error::DuplicateDoubleCoset(prev.gamma.to_string(), b.gamma.to_string()));
            }
            let cd = coset_data(g1, &b.gamma, g2)?;
            if *b.rep.group() != cd.stabilizer {
                return Err(Error::TypeMismatch {
                    name: format!("block at {}", b.gamma),
                    message: format!("representation lives on {}, expected {}", b.rep.group(), cd.stabilizer),
                });
            }
            let model = refined_domain(
                &cd.stabilizer,
                &[b.rep.domain().period(), source.domain().period(), target.domain().period()],
            )?;
            let req = required_obstruction(source, target, &b.gamma, &model)?;
            if !b.rep.cocycle().same_as(&req) {
                return Err(Error::ObstructionMismatch(format!(
                    "block at {} does not have obstruction Ω1 · conj(Ω2 ∘ Ad γ^-1)",
                    b.gamma
                )));
            }
            rows.push((key, b, cd));
        }
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let mut keys = Vec::new();
        let mut out = Vec::new();
        let mut cosets = Vec::new();
        let mut transversals = Vec::new();
        for (k, b, cd) in rows {
            transversals.push(g1.left_transversal(&cd.stabilizer)?);
            keys.push(k);
            out.push(b);
            cosets.push(cd);
        }
        Ok(Correspondence { source: source.clone(), target: target.clone(), blocks: out, cosets, keys, transversals, keyer })
    }

    /// The unit `(e, trivial)` on an object.
    pub fn identity(obj: &HeckeObject) -> Result<Correspondence> {
        let e = obj.group().identity();
        let rep = ProjRep::trivial(obj.domain(), 1);
        Self::new(obj, obj, vec![Block::new(e, rep)])
    }

    pub fn source(&self) -> &HeckeObject {
        &self.source
    }

    pub fn target(&self) -> &HeckeObject {
        &self.target
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn cosets(&self) -> &[DoubleCoset] {
        &self.cosets
    }

    /// Canonical double-coset representatives, aligned with `blocks`.
    pub fn keys(&self) -> &[GroupElement] {
        &self.keys
    }

    pub fn decomposition(&self) -> DoubleCosetDecomposition {
        DoubleCosetDecomposition {
            left: self.source.group().clone(),
            right: self.target.group().clone(),
            cosets: self.cosets.clone(),
        }
    }

    /// Left coset representatives `t_i` of `G1 / (G1 ∩ γ_k G2 γ_k^-1)`.
    pub fn transversal(&self, k: usize) -> &[GroupElement] {
        &self.transversals[k]
    }

    pub fn block_index(&self, key: &GroupElement) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    /// Block containing `x`, if `x ∈ I`.
    pub fn block_of(&self, x: &GroupElement) -> Result<Option<usize>> {
        Ok(self.block_index(&self.keyer.key(x)?))
    }

    pub(crate) fn locate(&self, x: &GroupElement) -> Result<Located> {
        let k = self.block_of(x)?.ok_or_else(|| Error::XNotInCarrier(x.to_string()))?;
        let gi = self.blocks[k].gamma.inverse();
        let g2 = self.target.group();
        for (i, t) in self.transversals[k].iter().enumerate() {
            let b = gi.mul(&t.inverse()).mul(x);
            if g2.contains(&b) {
                return Ok(Located { block: k, coset: i, right: b });
            }
        }
        Err(Error::XNotInCarrier(x.to_string()))
    }

    /// Σ_k [G2 : G2 ∩ γ_k^-1 G1 γ_k] · dim π_k.
    pub fn diml(&self) -> u64 {
        self.cosets.iter().zip(&self.blocks).map(|(c, b)| c.left_cosets * b.rep.dim() as u64).sum()
    }

    /// Σ_k [G1 : G1 ∩ γ_k G2 γ_k^-1] · dim π_k.
    pub fn dimr(&self) -> u64 {
        self.cosets.iter().zip(&self.blocks).map(|(c, b)| c.right_cosets * b.rep.dim() as u64).sum()
    }

    /// The dense-view operator `π(g, x, h) : K_x → K_{gxh}`.
    ///
    /// With `x = a_x γ b_x` and `y = gxh = a_y γ b_y`, the stabilizer element is
    /// `s = a_y^-1 g a_x` and
    /// `π(g,x,h) = Ω1(g,a_x) Ω2(b_x,h) conj(Ω1(a_y,s) Ω2(s',b_y)) ω(s^-1,s) π_k(s)`
    /// where `s' = γ^-1 s^-1 γ` and `ω = Ω2 ∘ Ad γ^-1`.
    pub fn eval_pi(&self, g: &GroupElement, x: &GroupElement, h: &GroupElement) -> Result<CMat> {
        if !self.source.group().contains(g) {
            return Err(Error::invalid(format!("{g} is not in the source group")));
        }
        if !self.target.group().contains(h) {
            return Err(Error::invalid(format!("{h} is not in the target group")));
        }
        let lx = self.locate(x)?;
        let y = g.mul(x).mul(h);
        let ly = self.locate(&y)?;
        let k = lx.block;
        let block = &self.blocks[k];
        let gamma = &block.gamma;
        let gi = gamma.inverse();
        let ax = &self.transversals[k][lx.coset];
        let ay = &self.transversals[k][ly.coset];
        let s = ay.inverse().mul(g).mul(ax);
        let si = s.inverse();
        let s2 = gi.conjugate(&si);
        let (o1, o2) = (self.source.cocycle(), self.target.cocycle());
        let scalar = o1
            .value(g, ax)?
            .mul(&o2.value(&lx.right, h)?)
            .mul(&o1.value(ay, &s)?.mul(&o2.value(&s2, &ly.right)?).inv())
            .mul(&o2.value(&s2, &gi.conjugate(&s))?);
        Ok(block.rep.eval(&s)?.scale(&scalar.to_cyclotomic()))
    }

    /// Rebuild the compressed representation of the double coset of `gamma` at that
    /// representative: `π_γ(s) = conj ω(s^-1,s) π(s, γ, γ^-1 s^-1 γ)`.
    pub fn rep_at(&self, gamma: &GroupElement) -> Result<ProjRep> {
        let k = self.block_of(gamma)?.ok_or_else(|| Error::XNotInCarrier(gamma.to_string()))?;
        let stab = coset_data(self.source.group(), gamma, self.target.group())?.stabilizer;
        let model = refined_domain(
            &stab,
            &[self.blocks[k].rep.domain().period(), self.source.domain().period(), self.target.domain().period()],
        )?;
        let req = required_obstruction(&self.source, &self.target, gamma, &model)?;
        let gi = gamma.inverse();
        let o2 = self.target.cocycle();
        ProjRep::tabulate(&req, |s| {
            let si = s.inverse();
            let h = gi.conjugate(&si);
            let w = o2.value(&h, &gi.conjugate(s))?.inv();
            Ok(self.eval_pi(s, gamma, &h)?.scale(&w.to_cyclotomic()))
        })
    }

    /// Blocks recovered from the dense view at the stored representatives.
    pub fn recovered_blocks(&self) -> Result<Vec<ProjRep>> {
        self.blocks.iter().map(|b| self.rep_at(&b.gamma)).collect()
    }

    /// The same correspondence with every block moved to its canonical representative.
    pub fn canonical(&self) -> Result<Correspondence> {
        let blocks = self
            .keys
            .iter()
            .map(|k| Ok(Block::new(k.clone(), self.rep_at(k)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.source, &self.target, blocks)
    }

    /// Correspondence from target to source with representatives `γ_k^-1` and blocks
    /// `conj(π_k ∘ Ad γ_k)`.
    pub fn dual(&self) -> Result<Correspondence> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let gi = b.gamma.inverse();
                Ok(Block::new(gi.clone(), b.rep.pullback(&gi)?.conjugate()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.target, &self.source, blocks)
    }

    pub fn same_endpoints(&self, o: &Correspondence) -> bool {
        self.source.same_as(&o.source) && self.target.same_as(&o.target)
    }

    fn require_same_endpoints(&self, o: &Correspondence) -> Result<()> {
        if self.same_endpoints(o) {
            Ok(())
        } else {
            Err(Error::EndpointMismatch("correspondences have different source or target objects".into()))
        }
    }

    /// Blockwise direct sum: shared double cosets are merged after aligning representatives.
    pub fn direct_sum(&self, o: &Correspondence) -> Result<Correspondence> {
        self.require_same_endpoints(o)?;
        let mut blocks = self.blocks.clone();
        for (l, b) in o.blocks.iter().enumerate() {
            match self.block_index(&o.keys[l]) {
                Some(k) => {
                    let aligned = o.rep_at(&self.blocks[k].gamma)?;
                    blocks[k] = Block::new(blocks[k].gamma.clone(), blocks[k].rep.direct_sum(&aligned)?);
                }
                None => blocks.push(b.clone()),
            }
        }
        Self::new(&self.source, &self.target, blocks)
    }

    /// Total block dimension `Σ_k dim π_k`.
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.rep.dim()).sum()
    }
}

pub fn make_correspondence(source: &HeckeObject, target: &HeckeObject, blocks: Vec<Block>) -> Result<Correspondence> {
    Correspondence::new(source, target, blocks)
}
