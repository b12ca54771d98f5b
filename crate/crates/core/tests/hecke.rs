mod common;

use common::*;
use hecke_core::cyclotomic::{Cyclotomic, RootOfUnity};
use hecke_core::groups::{GroupElement, Subgroup};
use hecke_core::hecke::{
    decompose, fusion_table, hom_dim, is_irreducible, isomorphic, make_correspondence, required_obstruction, tensor,
    Block, ClassRegistry, Correspondence, HeckeObject,
};
use hecke_core::matrix::CMat;
use hecke_core::projective::{Cocycle2, Domain, ProjRep};

struct S3Setup {
    s3: Subgroup,
    gamma: Subgroup,
    plain: HeckeObject,
    twisted: HeckeObject,
}

/// `Γ = <(1 2)> ≤ S3` with the trivial cocycle and with `Ω(t, t) = -1` in `μ_4`.
fn s3_setup() -> S3Setup {
    let amb = sym(3);
    let s3 = amb.whole().unwrap();
    let gamma = subgroup(&amb, 3, &["(1 2)"]);
    let dom = Domain::finite(&gamma).unwrap();
    let plain = HeckeObject::new(Cocycle2::trivial(&dom, 1), None).unwrap();
    let omega = Cocycle2::from_table(&dom, 4, vec![0, 0, 0, 2]).unwrap();
    let twisted = HeckeObject::new(omega, None).unwrap();
    S3Setup { s3, gamma, plain, twisted }
}

/// A one-dimensional block at `gamma`; on a stabilizer of order 2 the generator acts by
/// a square root of the required obstruction, negated when `flip` is set.
fn block(a: &HeckeObject, b: &HeckeObject, gamma: &GroupElement, flip: bool) -> Block {
    let stab = a.group().intersect(&b.group().conjugate_by(gamma).unwrap()).unwrap();
    let dom = Domain::finite(&stab).unwrap();
    let req = required_obstruction(a, b, gamma, &dom).unwrap();
    let rep = if dom.len() == 1 {
        ProjRep::trivial(&dom, req.order())
    } else {
        let e = req.exponent(1, 1) as i64;
        let m = req.order() as i64;
        let root = RootOfUnity::new(e, 2 * m as u32).mul(&RootOfUnity::new(flip as i64, 2));
        ProjRep::with_cocycle(vec![CMat::identity(1), CMat::scalar(1, &root.to_cyclotomic())], &req).unwrap()
    };
    Block::new(gamma.clone(), rep)
}

fn corr(a: &HeckeObject, b: &HeckeObject, blocks: &[(&str, bool)]) -> Correspondence {
    let bs = blocks.iter().map(|(g, f)| block(a, b, &p(g, 3), *f)).collect();
    make_correspondence(a, b, bs).unwrap()
}

#[test]
fn identity_correspondence() {
    let st = s3_setup();
    let id = Correspondence::identity(&st.plain).unwrap();
    assert_eq!((id.diml(), id.dimr()), (1, 1));
    assert!(is_irreducible(&id).unwrap());
    let e = p("e", 3);
    assert_eq!(id.eval_pi(&e, &e, &e).unwrap(), CMat::identity(1));
    let t = p("(1 2)", 3);
    assert_eq!(id.eval_pi(&t, &e, &e).unwrap(), CMat::identity(1));
    let dual = id.dual().unwrap();
    assert!(isomorphic(&dual, &id, 0).unwrap().is_some());
}

#[test]
fn block_with_wrong_obstruction_is_rejected() {
    let st = s3_setup();
    let dom = Domain::finite(&st.gamma).unwrap();
    let wrong = ProjRep::trivial(&dom, 4);
    let err = make_correspondence(&st.plain, &st.twisted, vec![Block::new(p("e", 3), wrong)]).unwrap_err();
    assert_eq!(err.kind(), "ObstructionMismatch");
    let b = block(&st.plain, &st.plain, &p("(1 3)", 3), false);
    let b2 = block(&st.plain, &st.plain, &p("(2 3)", 3), false);
    let err = make_correspondence(&st.plain, &st.plain, vec![b, b2]).unwrap_err();
    assert_eq!(err.kind(), "DuplicateDoubleCoset");
}

#[test]
fn composition_law_holds_on_the_dense_view() {
    let st = s3_setup();
    let objs = [&st.plain, &st.twisted];
    for a in objs {
        for b in objs {
            for flip in [false, true] {
                let c = corr(a, b, &[("e", flip), ("(1 3)", false)]);
                let (o1, o2) = (a.cocycle(), b.cocycle());
                let g1 = st.gamma.elements().unwrap();
                for x in st.s3.elements().unwrap() {
                    for g in &g1 {
                        for h in &g1 {
                            let first = c.eval_pi(g, &x, h).unwrap();
                            let y = g.mul(&x).mul(h);
                            for g2 in &g1 {
                                for h2 in &g1 {
                                    let lhs = c.eval_pi(g2, &y, h2).unwrap().mul(&first);
                                    let w = o1.value(g2, g).unwrap().mul(&o2.value(h, h2).unwrap());
                                    let rhs = c.eval_pi(&g2.mul(g), &x, &h.mul(h2)).unwrap().scale(&w.to_cyclotomic());
                                    assert_eq!(lhs, rhs, "x={x} g={g} h={h} g'={g2} h'={h2}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn blocks_are_recovered_from_the_dense_view() {
    let st = s3_setup();
    let c = corr(&st.plain, &st.twisted, &[("e", true), ("(1 3)", false)]);
    for (b, r) in c.blocks().iter().zip(c.recovered_blocks().unwrap()) {
        assert_eq!(b.rep.matrices(), r.matrices());
        assert!(r.cocycle().same_as(b.rep.cocycle()));
    }
    // Any other representative gives an isomorphic block after transport.
    let moved = c.rep_at(&p("(1 3 2)", 3)).unwrap();
    assert_eq!(moved.dim(), 1);
}

#[test]
fn finite_tensor_dimensions() {
    let st = s3_setup();
    let c = corr(&st.plain, &st.plain, &[("(1 3)", false)]);
    assert_eq!((c.diml(), c.dimr()), (2, 2));
    let cc = tensor(&c, &c).unwrap();
    assert_eq!(cc.diml(), 4);
    assert_eq!(cc.dimr(), 4);
    let parts = decompose(&cc, 0).unwrap();
    let total: u64 = parts.iter().map(|(p, m)| p.diml() * *m as u64).sum();
    assert_eq!(total, 4);
}

#[test]
fn dimensions_multiply_under_tensor() {
    let st = s3_setup();
    let objs = [&st.plain, &st.twisted];
    let shapes: [&[(&str, bool)]; 3] = [&[("e", false)], &[("(1 3)", false)], &[("e", true), ("(1 3)", false)]];
    for a in objs {
        for b in objs {
            for c in objs {
                for s1 in shapes {
                    for s2 in shapes {
                        let x = corr(a, b, s1);
                        let y = corr(b, c, s2);
                        let t = tensor(&x, &y).unwrap();
                        assert_eq!(t.diml(), x.diml() * y.diml());
                        assert_eq!(t.dimr(), x.dimr() * y.dimr());
                    }
                }
            }
        }
    }
}

#[test]
fn unit_laws() {
    let st = s3_setup();
    let c = corr(&st.plain, &st.twisted, &[("e", false), ("(1 3)", false)]);
    let left = tensor(&Correspondence::identity(&st.plain).unwrap(), &c).unwrap();
    let right = tensor(&c, &Correspondence::identity(&st.twisted).unwrap()).unwrap();
    assert!(isomorphic(&left, &c, 0).unwrap().is_some());
    assert!(isomorphic(&right, &c, 0).unwrap().is_some());
}

#[test]
fn associativity_as_decomposition_multisets() {
    let st = s3_setup();
    let a = corr(&st.plain, &st.twisted, &[("e", true), ("(1 3)", false)]);
    let b = corr(&st.twisted, &st.twisted, &[("(1 3)", false)]);
    let c = corr(&st.twisted, &st.plain, &[("e", false)]);
    let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
    let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
    let mut reg = ClassRegistry::new();
    let l = reg.classify_decomposition(&decompose(&left, 0).unwrap()).unwrap();
    let r = reg.classify_decomposition(&decompose(&right, 0).unwrap()).unwrap();
    assert_eq!(l, r);
    assert!(isomorphic(&left, &right, 0).unwrap().is_some());
}

#[test]
fn duality() {
    let st = s3_setup();
    let c = corr(&st.plain, &st.twisted, &[("e", true), ("(1 3)", false)]);
    let d = c.dual().unwrap();
    assert_eq!((d.diml(), d.dimr()), (c.dimr(), c.diml()));
    assert!(isomorphic(&d.dual().unwrap(), &c, 0).unwrap().is_some());
    let cd = tensor(&c, &d).unwrap();
    let id = Correspondence::identity(&st.plain).unwrap();
    assert_eq!(hom_dim(&id, &cd).unwrap(), c.blocks().len());
}

#[test]
fn decompose_splits_a_character_sum() {
    let st = s3_setup();
    let dom = Domain::finite(&st.gamma).unwrap();
    let one = ProjRep::trivial(&dom, 2);
    let sign = ProjRep::with_cocycle(vec![CMat::identity(1), CMat::scalar(1, &Cyclotomic::root(1, 2))], one.cocycle()).unwrap();
    let c = make_correspondence(&st.plain, &st.plain, vec![Block::new(p("e", 3), one.direct_sum(&sign).unwrap())]).unwrap();
    assert!(!is_irreducible(&c).unwrap());
    let parts = decompose(&c, 0).unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|(p, m)| *m == 1 && is_irreducible(p).unwrap()));
    let double = make_correspondence(&st.plain, &st.plain, vec![Block::new(p("e", 3), one.direct_sum(&one).unwrap())]).unwrap();
    assert_eq!(hom_dim(&double, &double).unwrap(), 4);
}

#[test]
fn lattice_correspondence() {
    let z2 = lattice(2, &[v(&[1, 0]), v(&[0, 1])]);
    let h = lattice(2, &[v(&[2, 0]), v(&[0, 1])]);
    let a = HeckeObject::trivial(&z2).unwrap();
    let b = HeckeObject::trivial(&h).unwrap();
    let rep = ProjRep::trivial(&Domain::new(&h, Some(&h)).unwrap(), 1);
    let c = make_correspondence(&a, &b, vec![Block::new(v(&[0, 0]), rep)]).unwrap();
    assert_eq!((c.diml(), c.dimr()), (1, 2));
    let d = c.dual().unwrap();
    assert_eq!((d.diml(), d.dimr()), (2, 1));
    let cd = tensor(&c, &d).unwrap();
    assert_eq!((cd.diml(), cd.dimr()), (2, 2));
    let parts = decompose(&cd, 0).unwrap();
    assert_eq!(parts.len(), 2);
    let id = Correspondence::identity(&a).unwrap();
    assert_eq!(hom_dim(&id, &cd).unwrap(), 1);
}

#[test]
fn s3_fusion_closes() {
    let st = s3_setup();
    let c = corr(&st.plain, &st.plain, &[("(1 3)", false)]);
    let table = fusion_table(&[st.plain.clone()], &[c], 16, 0).unwrap();
    let n = table.irreducibles.len();
    assert!(n >= 2);
    for i in 0..n {
        assert_eq!(table.products[&(0, i)], vec![(i, 1)]);
        assert_eq!(table.products[&(i, 0)], vec![(i, 1)]);
        for j in 0..n {
            let (x, y) = (&table.irreducibles[i], &table.irreducibles[j]);
            let total: u64 = table.products[&(i, j)].iter().map(|&(k, m)| table.irreducibles[k].diml() * m as u64).sum();
            assert_eq!(total, x.diml() * y.diml());
        }
    }
    let err = fusion_table(&[st.plain.clone()], &[corr(&st.plain, &st.plain, &[("(1 3)", false)])], 1, 0).unwrap_err();
    assert_eq!(err.kind(), "BoundExceeded");
}
