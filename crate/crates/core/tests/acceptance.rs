//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact
//! (tolerance 0); each criterion is checked against a test-side oracle.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::Instant;

use common::*;
use hecke_core::cyclotomic::RootOfUnity;
use hecke_core::galois::{
    realize, unitriangular_is_unipotent, verify_sigma_eigenstructure, DivisorClosedSet, DEFAULT_Q_SEARCH_BOUND,
};
use hecke_core::groups::{double_cosets, AmbientGroup, GroupElement, Rat, Subgroup, DEFAULT_ENUMERATION_BOUND};
use hecke_core::hecke::{decompose, isomorphic, required_obstruction, tensor, Block, ClassRegistry, Correspondence, HeckeObject};
use hecke_core::index::{correspondence_of_datum, index_set_c, index_set_i, subfactor_index, QuotientGroup, SubfactorDatum};
use hecke_core::matrix::CMat;
use hecke_core::projective::{decompose_projrep, Cocycle2, Domain, ProjRep};
use hecke_core::rational::Q;
use hecke_core::scenario::{cache_key, Cache, Entry, RunOptions, Scenario};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ok<T>(r: hecke_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `a(g) a(h) = w · a(gh)` for every pair, with `w` from `expected`.
fn matrix_obstruction_matches(
    elements: &[GroupElement],
    mat: impl Fn(&GroupElement) -> CMat,
    expected: impl Fn(&GroupElement, &GroupElement) -> RootOfUnity,
) -> bool {
    elements.iter().all(|g| {
        elements.iter().all(|h| mat(g).mul(&mat(h)) == mat(&g.mul(h)).scale(&expected(g, h).to_cyclotomic()))
    })
}

// 1 -------------------------------------------------------------------------

fn cocycle_identity() -> Outcome {
    let mut pairs = 0;
    for n in [2usize, 3, 4] {
        let (_, g) = torus(n);
        let dom = ok(Domain::finite(&g))?;
        let omega = heisenberg(&dom, n);
        ensure(omega.verify(), || format!("library identity check fails for n = {n}"))?;
        // Oracle: the exponent b1 a2 in Z/n satisfies the identity by direct arithmetic.
        let e = |x: &GroupElement, y: &GroupElement| (coords(x, n).1 * coords(y, n).0).rem_euclid(n as i64);
        let els = dom.lifts().to_vec();
        for x in &els {
            for y in &els {
                for z in &els {
                    let lhs = (e(x, y) + e(&x.mul(y), z)) % n as i64;
                    let rhs = (e(y, z) + e(x, &y.mul(z))) % n as i64;
                    ensure(lhs == rhs, || format!("oracle identity fails at n = {n}"))?;
                    let w = |a: &GroupElement, b: &GroupElement| ok(omega.value(a, b)).map(|r| r.exponent_in(n as u32));
                    ensure(w(x, y)? == Some(e(x, y) as u32), || format!("table differs from ζ^(bc) at n = {n}"))?;
                }
            }
        }
        let mats = clock_shift(&dom, n);
        let obs = ok(ProjRep::obstruction_of(&dom, &mats, n as u32))?;
        ensure(obs.same_as(&omega), || format!("clock-and-shift obstruction differs at n = {n}"))?;
        let m = |x: &GroupElement| mats[dom.locate(x).unwrap()].clone();
        ensure(
            matrix_obstruction_matches(&els, m, |x, y| RootOfUnity::new(e(x, y), n as u32)),
            || format!("clock-and-shift matrices violate X^a Z^b relations at n = {n}"),
        )?;
        pairs += els.len() * els.len();
    }
    Ok(format!("n = 2, 3, 4 exhaustive; {pairs} matrix pairs"))
}

// 2 -------------------------------------------------------------------------

fn coboundary_solver() -> Outcome {
    let (_, g) = torus(2);
    let dom = ok(Domain::finite(&g))?;
    let omega = heisenberg(&dom, 2);
    ensure(omega.is_coboundary().is_none(), || "Heisenberg cocycle accepted as a coboundary".into())?;
    let n = dom.len();
    let mut hits = 0;
    for mask in 0u32..(1 << n) {
        let rho: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
        let all = (0..n).all(|a| (0..n).all(|b| (rho[a] + rho[b] - rho[dom.mul(a, b)]).rem_euclid(2) == omega.exponent(a, b) as i64));
        hits += all as u32;
    }
    ensure(hits == 0, || format!("brute force found {hits} trivializations"))?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5EED);
    let s3 = ok(sym(3).whole())?;
    let sd = ok(Domain::finite(&s3))?;
    for trial in 0..100 {
        let m: u32 = rng.gen_range(1..=12);
        let rho: Vec<RootOfUnity> = (0..sd.len()).map(|_| RootOfUnity::new(rng.gen_range(0..m as i64), m)).collect();
        let c = ok(Cocycle2::coboundary(&sd, m, &rho))?;
        let w = c.is_coboundary().ok_or_else(|| format!("trial {trial}: coboundary rejected"))?;
        let good = (0..sd.len()).all(|a| {
            (0..sd.len()).all(|b| w[a].mul(&w[b]).mul(&w[sd.mul(a, b)].inv()) == RootOfUnity::new(c.exponent(a, b) as i64, m))
        });
        ensure(good, || format!("trial {trial}: witness does not trivialize"))?;
    }
    Ok("Heisenberg rejected (16 maps searched); 100/100 random S3 coboundaries solved".into())
}

// 3 -------------------------------------------------------------------------

struct Induction {
    label: String,
    omega: Cocycle2,
    pi: ProjRep,
}

fn induction_corpus() -> Result<Vec<Induction>, String> {
    let mut out = Vec::new();
    let amb3 = sym(3);
    let s3 = ok(amb3.whole())?;
    let sd = ok(Domain::finite(&s3))?;
    let triv = Cocycle2::trivial(&sd, 6);
    let rho: Vec<RootOfUnity> = (0..sd.len()).map(|i| RootOfUnity::new(i as i64, 6)).collect();
    let cob = ok(Cocycle2::coboundary(&sd, 6, &rho))?;
    let subs: Vec<(&str, Subgroup)> = vec![
        ("e", subgroup(&amb3, 3, &[])),
        ("<(1 2)>", subgroup(&amb3, 3, &["(1 2)"])),
        ("<(1 2 3)>", subgroup(&amb3, 3, &["(1 2 3)"])),
    ];
    let parity = |g: &GroupElement| g.as_perm().unwrap().cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2;
    for (name, h) in &subs {
        let r = ok(triv.restrict(h))?;
        out.push(Induction { label: format!("S3 ⊇ {name}, trivial"), omega: triv.clone(), pi: character(&r, |_| RootOfUnity::new(0, 1)) });
        let rc = ok(cob.restrict(h))?;
        let pi = character(&rc, |x| rho[sd.locate(x).unwrap()]);
        out.push(Induction { label: format!("S3 ⊇ {name}, coboundary twist"), omega: cob.clone(), pi });
    }
    let t = ok(triv.restrict(&subs[1].1))?;
    out.push(Induction { label: "S3 ⊇ <(1 2)>, sign".into(), omega: triv.clone(), pi: character(&t, |x| RootOfUnity::new(parity(x) as i64, 2)) });
    let c3 = subgroup(&amb3, 3, &["(1 2 3)"]);
    let r3 = ok(triv.restrict(&c3))?;
    let cyc = p("(1 2 3)", 3);
    out.push(Induction {
        label: "S3 ⊇ A3, ζ_3 character".into(),
        omega: triv.clone(),
        pi: character(&r3, |x| RootOfUnity::new((0..3).find(|&k| pow(&cyc, k) == *x).unwrap() as i64, 3)),
    });
    for n in [2usize, 3, 4] {
        let (amb, g) = torus(n);
        let dom = ok(Domain::finite(&g))?;
        let omega = heisenberg(&dom, n);
        let hx = ok(Subgroup::generated(&amb, &[torus_element(1, 0, n)]))?;
        let rx = ok(omega.restrict(&hx))?;
        for j in 0..n.min(3) {
            let pi = character(&rx, |x| RootOfUnity::new(j as i64 * coords(x, n).0, n as u32));
            out.push(Induction { label: format!("Heisenberg n = {n} ⊇ <x>, χ_{j}"), omega: omega.clone(), pi });
        }
        let hy = ok(Subgroup::generated(&amb, &[torus_element(0, 1, n)]))?;
        let ry = ok(omega.restrict(&hy))?;
        out.push(Induction { label: format!("Heisenberg n = {n} ⊇ <y>"), omega: omega.clone(), pi: character(&ry, |_| RootOfUnity::new(0, 1)) });
    }
    let amb4 = sym(4);
    let s4 = ok(amb4.whole())?;
    let d4 = ok(Domain::finite(&s4))?;
    let t4 = Cocycle2::trivial(&d4, 4);
    let s3in4 = subgroup(&amb4, 4, &["(1 2)", "(1 2 3)"]);
    out.push(Induction { label: "S4 ⊇ S3".into(), omega: t4.clone(), pi: character(&ok(t4.restrict(&s3in4))?, |_| RootOfUnity::new(0, 1)) });
    let c4 = subgroup(&amb4, 4, &["(1 2 3 4)"]);
    let four = p("(1 2 3 4)", 4);
    out.push(Induction {
        label: "S4 ⊇ C4, faithful character".into(),
        omega: t4.clone(),
        pi: character(&ok(t4.restrict(&c4))?, |x| RootOfUnity::new((0..4).find(|&k| pow(&four, k) == *x).unwrap() as i64, 4)),
    });
    Ok(out)
}

fn pow(g: &GroupElement, k: usize) -> GroupElement {
    let mut x = g.mul(&g.inverse());
    for _ in 0..k {
        x = x.mul(g);
    }
    x
}

fn induction_contract() -> Outcome {
    let corpus = induction_corpus()?;
    for inst in &corpus {
        let ind = ok(inst.pi.induce(&inst.omega)).map_err(|e| format!("{}: {e}", inst.label))?;
        ensure(ind.cocycle().same_as(&inst.omega), || format!("{}: obstruction differs", inst.label))?;
        let big = inst.omega.group().elements().unwrap();
        let small = inst.pi.group().order().unwrap();
        ensure(ind.dim() == big.len() / small * inst.pi.dim(), || format!("{}: wrong dimension", inst.label))?;
        let om = &inst.omega;
        ensure(
            matrix_obstruction_matches(&big, |g| ind.eval(g).unwrap(), |g, h| om.value(g, h).unwrap()),
            || format!("{}: induced matrices violate the cocycle relation", inst.label),
        )?;
    }
    Ok(format!("{} instances, exact matrix-level check", corpus.len()))
}

// 4, 5, 6: correspondence corpora --------------------------------------------

struct Setting {
    name: &'static str,
    ambient: Vec<GroupElement>,
    objects: Vec<HeckeObject>,
}

fn s3_setting() -> Result<Setting, String> {
    let amb = sym(3);
    let gamma = subgroup(&amb, 3, &["(1 2)"]);
    let dom = ok(Domain::finite(&gamma))?;
    let plain = ok(HeckeObject::new(Cocycle2::trivial(&dom, 1), None))?;
    let twisted = ok(HeckeObject::new(ok(Cocycle2::from_table(&dom, 4, vec![0, 0, 0, 2]))?, None))?;
    Ok(Setting { name: "S3", ambient: ok(amb.whole())?.elements().unwrap(), objects: vec![plain, twisted] })
}

fn s4_setting() -> Result<Setting, String> {
    let amb = sym(4);
    let s3 = subgroup(&amb, 4, &["(1 2)", "(1 2 3)"]);
    let v4 = subgroup(&amb, 4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
    let objects = vec![ok(HeckeObject::trivial(&s3))?, ok(HeckeObject::trivial(&v4))?];
    Ok(Setting { name: "S4", ambient: ok(amb.whole())?.elements().unwrap(), objects })
}

fn klein_setting() -> Result<Setting, String> {
    let (amb, g) = torus(2);
    let dom = ok(Domain::finite(&g))?;
    let x = ok(Subgroup::generated(&amb, &[torus_element(1, 0, 2)]))?;
    let objects = vec![
        ok(HeckeObject::trivial(&x))?,
        ok(HeckeObject::trivial(&g))?,
        ok(HeckeObject::new(heisenberg(&dom, 2), None))?,
    ];
    Ok(Setting { name: "(Z/2)^2", ambient: g.elements().unwrap(), objects })
}

/// Irreducible blocks available on each double coset, as single-block correspondences.
fn irreducible_blocks(st: &Setting, a: &HeckeObject, b: &HeckeObject) -> Result<Vec<Vec<Block>>, String> {
    let dec = ok(double_cosets(a.group(), &st.ambient, b.group()))?;
    let mut out = Vec::new();
    for cd in &dec.cosets {
        let dom = ok(Domain::finite(&cd.stabilizer))?;
        let req = ok(required_obstruction(a, b, &cd.representative, &dom))?;
        let reg = ProjRep::twisted_regular(&req);
        let summands = ok(decompose_projrep(&reg, 1))?.summands;
        out.push(summands.into_iter().map(|(s, _)| Block::new(cd.representative.clone(), s)).collect());
    }
    Ok(out)
}

/// Every correspondence with each irreducible block used at most once.
fn exhaustive(st: &Setting, a: &HeckeObject, b: &HeckeObject) -> Result<Vec<Correspondence>, String> {
    let per = irreducible_blocks(st, a, b)?;
    let mut choices: Vec<Vec<Block>> = vec![Vec::new()];
    for options in &per {
        let mut next = Vec::new();
        for mask in 0u32..(1 << options.len()) {
            let chosen: Vec<&Block> = options.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, b)| b).collect();
            for prev in &choices {
                let mut c = prev.clone();
                if !chosen.is_empty() {
                    let mut rep = chosen[0].rep.clone();
                    for o in &chosen[1..] {
                        rep = ok(rep.direct_sum(&o.rep))?;
                    }
                    c.push(Block::new(chosen[0].gamma.clone(), rep));
                }
                next.push(c);
            }
        }
        choices = next;
    }
    choices.into_iter().filter(|c| !c.is_empty()).map(|c| ok(Correspondence::new(a, b, c))).collect()
}

fn irreducibles(st: &Setting, a: &HeckeObject, b: &HeckeObject) -> Result<Vec<Correspondence>, String> {
    irreducible_blocks(st, a, b)?.into_iter().flatten().map(|bl| ok(Correspondence::new(a, b, vec![bl]))).collect()
}

/// Corpus for the dimension checks: irreducibles, blockwise sums, and regular blocks.
fn dimension_corpus(st: &Setting) -> Result<Vec<Correspondence>, String> {
    let mut out = Vec::new();
    for a in &st.objects {
        for b in &st.objects {
            let irr = irreducibles(st, a, b)?;
            if irr.len() > 1 {
                out.push(ok(irr[0].direct_sum(&irr[irr.len() - 1]))?);
            }
            let dec = ok(double_cosets(a.group(), &st.ambient, b.group()))?;
            let cd = &dec.cosets[dec.cosets.len() - 1];
            let dom = ok(Domain::finite(&cd.stabilizer))?;
            let req = ok(required_obstruction(a, b, &cd.representative, &dom))?;
            out.push(ok(Correspondence::new(a, b, vec![Block::new(cd.representative.clone(), ProjRep::twisted_regular(&req))]))?);
            out.extend(irr);
        }
    }
    Ok(out)
}

fn brute_dims(c: &Correspondence) -> (u64, u64) {
    let g1 = c.source().group().elements().unwrap();
    let g2 = c.target().group().elements().unwrap();
    let (mut l, mut r) = (0u64, 0u64);
    for b in c.blocks() {
        let carrier: BTreeSet<GroupElement> = g1.iter().flat_map(|a| g2.iter().map(|h| a.mul(&b.gamma).mul(h))).collect();
        let left: HashSet<GroupElement> = carrier.iter().map(|x| g1.iter().map(|a| a.mul(x)).min().unwrap()).collect();
        let right: HashSet<GroupElement> = carrier.iter().map(|x| g2.iter().map(|h| x.mul(h)).min().unwrap()).collect();
        l += left.len() as u64 * b.rep.dim() as u64;
        r += right.len() as u64 * b.rep.dim() as u64;
    }
    (l, r)
}

fn dimension_formulas() -> Outcome {
    let (mut n, mut pairs) = (0, 0);
    for st in [s3_setting()?, s4_setting()?, klein_setting()?] {
        let corpus = dimension_corpus(&st)?;
        for c in &corpus {
            ensure(brute_dims(c) == (c.diml(), c.dimr()), || format!("{}: dims {:?} vs {:?}", st.name, (c.diml(), c.dimr()), brute_dims(c)))?;
            n += 1;
        }
        for c in &corpus {
            for d in &corpus {
                if !c.target().same_as(d.source()) {
                    continue;
                }
                let t = ok(tensor(c, d))?;
                ensure(brute_dims(&t) == (t.diml(), t.dimr()), || format!("{}: composite dims disagree with cosets", st.name))?;
                ensure(
                    (t.diml(), t.dimr()) == (c.diml() * d.diml(), c.dimr() * d.dimr()),
                    || format!("{}: dimensions not multiplicative", st.name),
                )?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{n} correspondences, {pairs} composable pairs, zero failures"))
}

fn multiset(reg: &mut ClassRegistry, c: &Correspondence) -> Result<Vec<(usize, usize)>, String> {
    let parts = ok(decompose(c, 2))?;
    ok(reg.classify_decomposition(&parts))
}

fn category_laws() -> Outcome {
    let st = s3_setting()?;
    let mut units = 0;
    let mut all: BTreeMap<(usize, usize), Vec<Correspondence>> = BTreeMap::new();
    let mut irr: BTreeMap<(usize, usize), Vec<Correspondence>> = BTreeMap::new();
    for (i, a) in st.objects.iter().enumerate() {
        for (j, b) in st.objects.iter().enumerate() {
            all.insert((i, j), exhaustive(&st, a, b)?);
            irr.insert((i, j), irreducibles(&st, a, b)?);
        }
    }
    for ((i, j), cs) in &all {
        let (ia, ib) = (ok(Correspondence::identity(&st.objects[*i]))?, ok(Correspondence::identity(&st.objects[*j]))?);
        for c in cs {
            for t in [ok(tensor(&ia, c))?, ok(tensor(c, &ib))?] {
                ensure(ok(isomorphic(&t, c, 3))?.is_some(), || format!("unit law fails for {c:?}"))?;
            }
            units += 1;
        }
    }
    let mut reg = ClassRegistry::new();
    let mut triples = 0;
    let k = st.objects.len();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    for x in &irr[&(a, b)] {
                        for y in &all[&(b, c)] {
                            let xy = ok(tensor(x, y))?;
                            for z in &irr[&(c, d)] {
                                let left = ok(tensor(&xy, z))?;
                                let right = ok(tensor(x, &ok(tensor(y, z))?))?;
                                ensure(multiset(&mut reg, &left)? == multiset(&mut reg, &right)?, || "associativity fails".into())?;
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let total: usize = all.values().map(Vec::len).sum();
    Ok(format!("{total} correspondences (unit laws on {units}), {triples} triples associative"))
}

fn block_formula() -> Outcome {
    let mut n = 0;
    for st in [s3_setting()?, s4_setting()?, klein_setting()?] {
        let mut corpus = dimension_corpus(&st)?;
        let composites: Vec<Correspondence> = corpus
            .iter()
            .flat_map(|c| corpus.iter().map(move |d| (c, d)))
            .filter(|(c, d)| c.target().same_as(d.source()))
            .take(60)
            .map(|(c, d)| ok(tensor(c, d)))
            .collect::<Result<_, _>>()?;
        corpus.extend(composites);
        for c in &corpus {
            let (o1, o2) = (c.source().cocycle(), c.target().cocycle());
            for b in c.blocks() {
                let gi = b.gamma.inverse();
                let stab = b.rep.group().elements().unwrap();
                // π_k(g) = conj(Ω2(γ^-1 g^-1 γ, γ^-1 g γ)) π(g, γ, γ^-1 g^-1 γ)
                let recovered = |g: &GroupElement| {
                    let h = gi.conjugate(&g.inverse());
                    let w = o2.value(&h, &gi.conjugate(g)).unwrap().inv();
                    c.eval_pi(g, &b.gamma, &h).unwrap().scale(&w.to_cyclotomic())
                };
                let expected = |s: &GroupElement, t: &GroupElement| {
                    o1.value(s, t).unwrap().mul(&o2.value(&gi.conjugate(s), &gi.conjugate(t)).unwrap().inv())
                };
                ensure(matrix_obstruction_matches(&stab, recovered, expected), || format!("{}: recovered block is not projective with the required obstruction", st.name))?;
                ensure(stab.iter().all(|g| recovered(g) == b.rep.eval(g).unwrap()), || format!("{}: recovered block differs", st.name))?;
                n += 1;
            }
            for r in ok(c.recovered_blocks())? {
                ensure(r.verify(), || format!("{}: library recovery is not projective", st.name))?;
            }
        }
    }
    Ok(format!("{n} blocks recovered exactly"))
}

// 7 -------------------------------------------------------------------------

struct IndexCase {
    label: String,
    datum: SubfactorDatum,
    expected: (u64, u64),
}

fn perm_set(g: &Subgroup) -> HashSet<GroupElement> {
    g.elements().unwrap().into_iter().collect()
}

fn perm_case(label: &str, amb: &AmbientGroup, degree: usize, base: &[&str], top: &[&str], entries: &[(&str, bool)]) -> Result<IndexCase, String> {
    let gamma_g = subgroup(amb, degree, base);
    let g = subgroup(amb, degree, top);
    let dom = ok(Domain::finite(&g))?;
    let cocycle = Cocycle2::trivial(&dom, 1);
    let (gs, bs) = (perm_set(&g), perm_set(&gamma_g));
    let (mut ell, mut r) = (0u64, 0u64);
    let mut es = Vec::new();
    for (gam, regular) in entries {
        let gamma = p(gam, degree);
        let gi = gamma.inverse();
        // Oracle by element counting.
        let g_cap = gs.iter().filter(|x| bs.contains(&gamma.conjugate(x))).count() as u64;
        let b_cap = bs.iter().filter(|x| gs.contains(&gi.conjugate(x))).count() as u64;
        let stab = ok(gamma_g.intersect(&ok(g.conjugate_by(&gamma))?))?;
        let sd = ok(Domain::finite(&stab))?;
        let rep = if *regular { ProjRep::twisted_regular(&Cocycle2::trivial(&sd, 1)) } else { ProjRep::trivial(&sd, 1) };
        ell += gs.len() as u64 / g_cap * rep.dim() as u64;
        r += bs.len() as u64 / b_cap * rep.dim() as u64;
        es.push((gamma, rep));
    }
    let datum = SubfactorDatum { base: gamma_g, cocycle, witness: None, entries: es };
    Ok(IndexCase { label: label.into(), datum, expected: (ell, r) })
}

/// `Γ = Z^2` against the diagonal lattice `(a/b) Z ⊕ (c/d) Z`: `(p/q)Z ∩ Z = pZ` gives
/// `ℓ = b d` and `r = a c` for one trivial block of dimension `k`.
fn lattice_case(a: i64, b: i64, c: i64, d: i64, k: usize) -> Result<IndexCase, String> {
    let z2 = lattice(2, &[v(&[1, 0]), v(&[0, 1])]);
    let g = lattice(2, &[vq(&[(a, b), (0, 1)]), vq(&[(0, 1), (c, d)])]);
    let gd = ok(Domain::new(&g, Some(&g)))?;
    let stab = ok(z2.intersect(&g))?;
    let sd = ok(Domain::new(&stab, Some(&stab)))?;
    let mut rep = ProjRep::trivial(&sd, 1);
    for _ in 1..k {
        rep = ok(rep.direct_sum(&ProjRep::trivial(&sd, 1)))?;
    }
    let datum = SubfactorDatum { base: z2, cocycle: Cocycle2::trivial(&gd, 1), witness: None, entries: vec![(v(&[0, 0]), rep)] };
    let k = k as u64;
    Ok(IndexCase { label: format!("Z^2 vs ({a}/{b})Z + ({c}/{d})Z, dim {k}"), datum, expected: ((b * d) as u64 * k, (a * c) as u64 * k) })
}

fn pauli_case() -> Result<IndexCase, String> {
    let z2 = lattice(2, &[v(&[1, 0]), v(&[0, 1])]);
    let g = lattice(2, &[vq(&[(1, 2), (0, 1)]), v(&[0, 1])]);
    let form = vec![vec![Rat::from_integer(0), Rat::from_integer(0)], vec![Rat::from_integer(2), Rat::from_integer(0)]];
    let period = ok(Cocycle2::bilinear_period(&g, 4, &form))?;
    let gd = ok(Domain::new(&g, Some(&period)))?;
    let omega = ok(Cocycle2::bilinear(&gd, 4, &form))?;
    let two = lattice(2, &[v(&[2, 0]), v(&[0, 2])]);
    let sd = ok(Domain::new(&z2, Some(&two)))?;
    let one = hecke_core::cyclotomic::Cyclotomic::one;
    let zero = hecke_core::cyclotomic::Cyclotomic::zero;
    let mats = sd
        .lifts()
        .iter()
        .map(|x| {
            let c = x.as_vector().unwrap();
            let (a, b) = (c[0].to_integer().rem_euclid(2), c[1].to_integer().rem_euclid(2));
            let xm = if a == 1 { CMat::from_rows(vec![vec![zero(), one()], vec![one(), zero()]]).unwrap() } else { CMat::identity(2) };
            let zm = if b == 1 { CMat::from_rows(vec![vec![one(), zero()], vec![zero(), one().neg()]]).unwrap() } else { CMat::identity(2) };
            xm.mul(&zm)
        })
        .collect();
    let pi = ok(ProjRep::from_matrices(&sd, mats, 4))?;
    let datum = SubfactorDatum { base: z2, cocycle: omega, witness: None, entries: vec![(v(&[0, 0]), pi)] };
    Ok(IndexCase { label: "Z^2 vs (1/2)Z + Z, Pauli block".into(), datum, expected: (4, 2) })
}

fn index_formulas() -> Outcome {
    let a3 = sym(3);
    let a4 = sym(4);
    let mut cases = vec![
        perm_case("trivial datum", &a3, 3, &["(1 2)"], &["(1 2)"], &[("e", false)])?,
        perm_case("S3: <(12)> vs <(12)>, two cosets", &a3, 3, &["(1 2)"], &["(1 2)"], &[("e", false), ("(1 3)", false)])?,
        perm_case("S3: <(12)> vs <(13)>", &a3, 3, &["(1 2)"], &["(1 3)"], &[("e", false)])?,
        perm_case("S3: <(12)> vs A3, regular", &a3, 3, &["(1 2)"], &["(1 2 3)"], &[("e", true)])?,
        perm_case("S4: S3 vs S3", &a4, 4, &["(1 2)", "(1 2 3)"], &["(1 2)", "(1 2 3)"], &[("e", false), ("(3 4)", true)])?,
        perm_case("S4: S3 vs V4", &a4, 4, &["(1 2)", "(1 2 3)"], &["(1 2)(3 4)", "(1 3)(2 4)"], &[("e", false)])?,
        perm_case("S4: C4 vs <(12)(34)>", &a4, 4, &["(1 2 3 4)"], &["(1 2)(3 4)"], &[("e", true), ("(1 2)", false)])?,
        lattice_case(1, 2, 1, 1, 1)?,
        lattice_case(1, 2, 1, 3, 1)?,
        lattice_case(2, 1, 1, 1, 1)?,
        lattice_case(2, 3, 1, 1, 2)?,
        lattice_case(3, 2, 5, 2, 1)?,
        pauli_case()?,
    ];
    cases.sort_by_key(|c| c.label.clone());
    for c in &cases {
        let rep = ok(subfactor_index(&c.datum)).map_err(|e| format!("{}: {e}", c.label))?;
        ensure((rep.ell, rep.r) == c.expected, || format!("{}: (ℓ, r) = {:?}, oracle {:?}", c.label, (rep.ell, rep.r), c.expected))?;
        let corr = ok(correspondence_of_datum(&c.datum))?;
        ensure(rep.index == corr.diml() * corr.dimr(), || format!("{}: index differs from diml·dimr", c.label))?;
        if c.label == "trivial datum" {
            ensure(rep.index == 1, || "trivial datum index is not 1".into())?;
        }
    }
    let half = cases.iter().find(|c| c.label.starts_with("Z^2 vs (1/2)Z + (1/1)Z")).unwrap();
    ensure(ok(subfactor_index(&half.datum))?.index == 2, || "half lattice index is not 2".into())?;
    Ok(format!("{} data (lattice and permutation); trivial datum index 1", cases.len()))
}

// 8 -------------------------------------------------------------------------

fn index_sets() -> Outcome {
    let s3 = ok(sym(3).whole())?;
    let els = s3.elements().unwrap();
    let mut orders = BTreeSet::new();
    for mask in 0u32..(1 << els.len()) {
        let sub: Vec<&GroupElement> = (0..els.len()).filter(|i| mask >> i & 1 == 1).map(|i| &els[i]).collect();
        let set: HashSet<&GroupElement> = sub.iter().copied().collect();
        let closed = !sub.is_empty() && sub.iter().all(|a| sub.iter().all(|b| set.contains(&a.mul(b))));
        if closed {
            orders.insert(sub.len() as u64);
        }
    }
    let c = ok(index_set_c(&QuotientGroup::Finite(s3), DEFAULT_ENUMERATION_BOUND))?;
    ensure(c == orders.iter().copied().collect::<Vec<_>>() && c == [1, 2, 3, 6], || format!("C(S3) = {c:?}, oracle {orders:?}"))?;
    let trivial = QuotientGroup::Finite(Subgroup::trivial(1));
    let i: Vec<u64> = ok(index_set_i(&trivial, 20, DEFAULT_ENUMERATION_BOUND))?.into_iter().map(|t| t.0).collect();
    let oracle: Vec<u64> = (1..=20).filter(|k| (1..=5).any(|n| n * n == *k)).collect();
    ensure(i == oracle && i == [1, 4, 9, 16], || format!("I(trivial, 20) = {i:?}"))?;
    let prod = ok(index_set_c(&QuotientGroup::Profinite(vec![2, 2, 3]), DEFAULT_ENUMERATION_BOUND))?;
    let divisors: Vec<u64> = (1..=12).filter(|d| 12 % d == 0).collect();
    ensure(prod == divisors, || format!("C(∏[2,2,3]) = {prod:?}"))?;
    Ok("C(S3) = {1,2,3,6}; I(trivial,20) = {1,4,9,16}; C(∏[2,2,3]) = divisors of 12".into())
}

// 9 -------------------------------------------------------------------------

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn galois_realization() -> Outcome {
    let n = ok(DivisorClosedSet::explicit([1, 2, 3, 4, 6, 12]))?;
    let real = ok(realize(&n, None, DEFAULT_Q_SEARCH_BOUND))?;
    ensure(real.primes() == [2, 2, 3], || format!("p = {:?}", real.primes()))?;
    ensure(real.auxiliary_primes() == [3, 5, 7], || format!("q = {:?}", real.auxiliary_primes()))?;
    let orders: Vec<u64> = ok(real.all_realized_orders())?.into_iter().collect();
    ensure(orders == [1, 2, 3, 4, 6, 12], || format!("realized {orders:?}"))?;
    for f in &real.factors {
        ensure(trial_division(f.q) && f.q % f.p == 1, || format!("q = {} fails re-check", f.q))?;
        let powers: BTreeSet<u64> = (1..f.q).scan(1u64, |x, _| { *x = *x * f.primitive_root % f.q; Some(*x) }).collect();
        ensure(powers.len() as u64 == f.q - 1, || format!("{} is not a primitive root mod {}", f.primitive_root, f.q))?;
        let mut k = 1;
        let mut x = f.subgroup_generator;
        while x != 1 {
            x = x * f.subgroup_generator % f.q;
            k += 1;
        }
        ensure(k == f.subgroup_order && k == (f.q - 1) / f.p, || format!("subgroup order mod {} is {k}", f.q))?;
    }
    Ok("p = [2,2,3], q = [3,5,7], orders {1,2,3,4,6,12}; trial-division and exhaustive order checks".into())
}

// 10 ------------------------------------------------------------------------

type R = Ratio<i64>;

fn mat_vec(a: &[[R; 3]; 3], x: &[R; 3]) -> [R; 3] {
    std::array::from_fn(|i| (0..3).map(|j| a[i][j] * x[j]).sum())
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn sigma_facts() -> Outcome {
    let qs: [(i64, i64); 5] = [(2, 1), (3, 1), (-2, 1), (1, 2), (5, 3)];
    let mut tri = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            for c in -2..=2 {
                tri.push((a, b, c));
            }
        }
    }
    for &(num, den) in &qs {
        let q = ok(Q::parse(&format!("{num}/{den}")))?;
        let report = ok(verify_sigma_eigenstructure(&q, &tri))?;
        ensure(report.passed(), || format!("library check fails at q = {num}/{den}"))?;
        // Oracle in plain rationals.
        let (o, z, qq) = (R::from_integer(1), R::from_integer(0), R::new(num, den));
        let qi = qq.recip();
        let a = [[o, z, z], [o, qq, z], [o, z, qi]];
        let at: [[R; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]));
        let fixed = [o - qq, o, -qq];
        let facts = [
            (mat_vec(&a, &fixed), fixed),
            (mat_vec(&a, &[z, o, z]), [z, qq, z]),
            (mat_vec(&a, &[z, z, o]), [z, z, qi]),
            (mat_vec(&at, &[o, z, z]), [o, z, z]),
            (mat_vec(&at, &[o, qq - o, z]), [qq, qq * (qq - o), z]),
            (mat_vec(&at, &[qq, z, o - qq]), [qi * qq, z, qi * (o - qq)]),
        ];
        ensure(facts.iter().all(|(l, r)| l == r), || format!("oracle eigen relation fails at q = {num}/{den}"))?;
    }
    for &(a, b, c) in &tri {
        let u = [[1, a, b], [0, 1, c], [0, 0, 1]];
        // A cubic is fixed by four values: det(tI - U) = (t - 1)^3 at t = 0..3.
        let ok_oracle = (0..4).all(|t: i64| {
            let m: [[i64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { t } else { 0 } - u[i][j]));
            det3(&m) == (t - 1).pow(3)
        });
        ensure(ok_oracle && unitriangular_is_unipotent(a, b, c), || format!("unitriangular ({a},{b},{c}) not unipotent"))?;
    }
    Ok(format!("q ∈ {{2, 3, -2, 1/2, 5/3}}; {} unitriangular matrices; exact", tri.len()))
}

// 11 ------------------------------------------------------------------------

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = Cache::new(tmp.path());
    for f in &files {
        let text = std::fs::read_to_string(f).map_err(|e| e.to_string())?;
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let mut outs = Vec::new();
        for _ in 0..3 {
            let s = ok(Scenario::parse(&text))?;
            let cmd = s.command().ok_or_else(|| format!("{name}: no command"))?.to_string();
            let r = ok(s.run(&cmd, &RunOptions::default()))?;
            outs.push(Entry { text: r.text(), json: r.json() });
        }
        ensure(outs.windows(2).all(|w| w[0] == w[1]), || format!("{name}: runs differ"))?;
        let s = ok(Scenario::parse(&text))?;
        let key = cache_key(&s.serialize(), s.command().unwrap(), None);
        ensure(ok(cache.lookup(&key))?.is_none(), || format!("{name}: unexpected cache hit"))?;
        ok(cache.store(&key, &outs[0]))?;
        ensure(ok(cache.lookup(&key))?.as_ref() == Some(&outs[0]), || format!("{name}: cache hit differs"))?;
        let golden = std::fs::read_to_string(dir.join("expected").join(name.replace(".toml", ".txt"))).map_err(|e| e.to_string())?;
        ensure(golden == outs[0].text, || format!("{name}: report differs from golden file"))?;
    }
    Ok(format!("{} golden scenarios, 3 runs each plus cache miss/hit", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("cocycle identity suite", cocycle_identity),
        ("coboundary solver", coboundary_solver),
        ("induction contract", induction_contract),
        ("dimension formulas and multiplicativity", dimension_formulas),
        ("category laws", category_laws),
        ("block recovery formula", block_formula),
        ("index formulas", index_formulas),
        ("index sets", index_sets),
        ("galois realization", galois_realization),
        ("eigenstructure matrix facts", sigma_facts),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        let within = secs <= 60.0;
        match out {
            Ok(detail) if within => println!("PASS {:>2} {name}: {detail} [tolerance 0, {secs:.2} s]", i + 1),
            Ok(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} but took {secs:.2} s > 60 s", i + 1);
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
