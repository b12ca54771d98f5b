//! Composition of correspondences.
//!
//! For `C : (G1,Ω1) → (G2,Ω2)` and `C' : (G2,Ω2) → (G3,Ω3)` the carrier of the
//! composite is `I I'`. The fiber over `r` consists of the `G2`-orbits of pairs
//! `(x, y)` with `xy = r`; taking `x` from a fixed transversal of `I / G2` makes
//! `y = x^-1 r` unique. An element `s` of `G1 ∩ r G3 r^-1` moves the summand of `x`
//! to that of `x̃`, where `s x = x̃ m` with `m ∈ G2`, through
//! `conj Ω2(m^-1, m) · π(s, x, m^-1) ⊗ π'(m, y, h)` with `h = r^-1 s^-1 r`.

use std::collections::{BTreeMap, HashMap};

use super::correspondence::{refined_domain, required_obstruction, Block, Correspondence};
use crate::error::{Error, Result};
use crate::groups::{coset_data, CosetKeyer, GroupElement, Subgroup};
use crate::matrix::CMat;
use crate::projective::ProjRep;

struct FiberPoint {
    x: GroupElement,
    y: GroupElement,
    offset: usize,
    dim_left: usize,
    dim_right: usize,
}

pub fn tensor(c: &Correspondence, d: &Correspondence) -> Result<Correspondence> {
    if !c.target().same_as(d.source()) {
        return Err(Error::EndpointMismatch("target of the first correspondence is not the source of the second".into()));
    }
    let (g1, g3) = (c.source().group(), d.target().group());
    let o3 = d.target().cocycle();
    let o2 = c.target().cocycle();

    // Transversal of I / G2, indexed by (block, coset).
    let mut xs: Vec<(GroupElement, usize, usize)> = Vec::new();
    for (k, b) in c.blocks().iter().enumerate() {
        for (i, t) in c.transversal(k).iter().enumerate() {
            xs.push((t.mul(&b.gamma), k, i));
        }
    }
    let x_index: HashMap<(usize, usize), usize> = xs.iter().enumerate().map(|(n, (_, k, i))| ((*k, *i), n)).collect();

    let keyer = CosetKeyer::new(g1, g3)?;
    let mut reps: BTreeMap<GroupElement, ()> = BTreeMap::new();
    for b in c.blocks() {
        for (l, bd) in d.blocks().iter().enumerate() {
            for t in d.transversal(l) {
                reps.insert(keyer.key(&b.gamma.mul(&t.mul(&bd.gamma)))?, ());
            }
        }
    }

    let mut periods: Vec<Option<&Subgroup>> = vec![
        c.source().domain().period(),
        c.target().domain().period(),
        d.target().domain().period(),
    ];
    periods.extend(c.blocks().iter().map(|b| b.rep.domain().period()));
    periods.extend(d.blocks().iter().map(|b| b.rep.domain().period()));

    let mut blocks = Vec::with_capacity(reps.len());
    for r in reps.into_keys() {
        let stab = coset_data(g1, &r, g3)?.stabilizer;
        let mut fiber: Vec<FiberPoint> = Vec::new();
        let mut slot = vec![None::<usize>; xs.len()];
        let mut offset = 0;
        for (n, (x, k, _)) in xs.iter().enumerate() {
            let y = x.inverse().mul(&r);
            if let Some(l) = d.block_of(&y)? {
                let (dl, dr) = (c.blocks()[*k].rep.dim(), d.blocks()[l].rep.dim());
                slot[n] = Some(fiber.len());
                fiber.push(FiberPoint { x: x.clone(), y, offset, dim_left: dl, dim_right: dr });
                offset += dl * dr;
            }
        }
        let total = offset;
        let model = refined_domain(&stab, &periods)?;
        let req = required_obstruction(c.source(), d.target(), &r, &model)?;
        let ri = r.inverse();
        let rep = ProjRep::tabulate(&req, |s| {
            let si = s.inverse();
            let h = ri.conjugate(&si);
            let mut m = CMat::zeros(total, total);
            for p in &fiber {
                let sx = s.mul(&p.x);
                let loc = c.locate(&sx)?;
                let n = x_index[&(loc.block, loc.coset)];
                let q = &fiber[slot[n].ok_or_else(|| Error::XNotInCarrier(sx.to_string()))?];
                let mid = q.x.inverse().mul(&sx);
                let mi = mid.inverse();
                let a = c.eval_pi(s, &p.x, &mi)?;
                let b = d.eval_pi(&mid, &p.y, &h)?;
                let w = o2.value(&mi, &mid)?.inv();
                debug_assert_eq!(a.cols() * b.cols(), p.dim_left * p.dim_right);
                m.paste(q.offset, p.offset, &a.kron(&b).scale(&w.to_cyclotomic()));
            }
            let w = o3.value(&ri.conjugate(&si), &ri.conjugate(s))?.inv();
            Ok(m.scale(&w.to_cyclotomic()))
        })?;
        blocks.push(Block::new(r, rep));
    }
    Correspondence::new(c.source(), d.target(), blocks)
}
