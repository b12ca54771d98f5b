#![allow(dead_code)]

use std::sync::Arc;

use hecke_core::cyclotomic::{Cyclotomic, RootOfUnity};
use hecke_core::groups::{AmbientGroup, GroupElement, Perm, Rat, Subgroup};
use hecke_core::matrix::CMat;
use hecke_core::projective::{Cocycle2, Domain, ProjRep};

pub fn sym(n: usize) -> AmbientGroup {
    let cycle: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let gens = vec![
        Perm::parse_cycles("(1 2)", n).unwrap(),
        Perm::parse_cycles(&format!("({})", cycle.join(" ")), n).unwrap(),
    ];
    AmbientGroup::permutation(n, gens).unwrap()
}

pub fn p(text: &str, degree: usize) -> GroupElement {
    GroupElement::Perm(Perm::parse_cycles(text, degree).unwrap())
}

pub fn subgroup(amb: &AmbientGroup, degree: usize, gens: &[&str]) -> Subgroup {
    let gens: Vec<GroupElement> = gens.iter().map(|g| p(g, degree)).collect();
    Subgroup::generated(amb, &gens).unwrap()
}

pub fn v(xs: &[i64]) -> GroupElement {
    GroupElement::Vector(xs.iter().map(|&x| Rat::from_integer(x)).collect())
}

pub fn vq(xs: &[(i64, i64)]) -> GroupElement {
    GroupElement::Vector(xs.iter().map(|&(a, b)| Rat::new(a, b)).collect())
}

pub fn lattice(rank: usize, gens: &[GroupElement]) -> Subgroup {
    Subgroup::generated(&AmbientGroup::lattice(rank).unwrap(), gens).unwrap()
}

/// `(Z/n)^2` inside `S_{2n}` as the product of two disjoint `n`-cycles.
pub fn torus(n: usize) -> (AmbientGroup, Subgroup) {
    let a: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let b: Vec<String> = (n + 1..=2 * n).map(|i| i.to_string()).collect();
    let gx = Perm::parse_cycles(&format!("({})", a.join(" ")), 2 * n).unwrap();
    let gy = Perm::parse_cycles(&format!("({})", b.join(" ")), 2 * n).unwrap();
    let amb = AmbientGroup::permutation(2 * n, vec![gx.clone(), gy.clone()]).unwrap();
    let g = amb.whole().unwrap();
    (amb, g)
}

/// Coordinates `(a, b)` of `x^a y^b` in [`torus`].
pub fn coords(g: &GroupElement, n: usize) -> (i64, i64) {
    let q = g.as_perm().unwrap();
    (q.image(0) as i64, (q.image(n) - n) as i64)
}

pub fn torus_element(a: i64, b: i64, n: usize) -> GroupElement {
    let mut images = vec![0u16; 2 * n];
    for j in 0..n {
        images[j] = ((j as i64 + a).rem_euclid(n as i64)) as u16;
        images[n + j] = (n as i64 + (j as i64 + b).rem_euclid(n as i64)) as u16;
    }
    GroupElement::Perm(Perm::from_images(images).unwrap())
}

/// `Ω((a,b),(c,d)) = ζ_n^(bc)`.
pub fn heisenberg(dom: &Arc<Domain>, n: usize) -> Cocycle2 {
    Cocycle2::from_fn(dom, n as u32, |g, h| {
        let ((_, b), (c, _)) = (coords(g, n), coords(h, n));
        Ok(RootOfUnity::new(b * c, n as u32))
    })
    .unwrap()
}

/// `(a, b) ↦ X^a Z^b` with `X e_j = e_{j+1}` and `Z e_j = ζ^j e_j`.
pub fn clock_shift(dom: &Arc<Domain>, n: usize) -> Vec<CMat> {
    dom.lifts()
        .iter()
        .map(|g| {
            let (a, b) = coords(g, n);
            let mut m = CMat::zeros(n, n);
            for j in 0..n {
                m.set((j + a as usize) % n, j, Cyclotomic::root(b * j as i64, n as u32));
            }
            m
        })
        .collect()
}

/// One-dimensional representation from a character table.
pub fn character(cocycle: &Cocycle2, f: impl Fn(&GroupElement) -> RootOfUnity) -> ProjRep {
    ProjRep::tabulate(cocycle, |g| Ok(CMat::scalar(1, &f(g).to_cyclotomic()))).unwrap()
}
