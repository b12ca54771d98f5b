//! Splitting projective representations into irreducibles.
//!
//! An endomorphism `X` of `π` with an eigenvalue `λ` in the coefficient field
//! gives the invariant subspace `ker(X - λ)`; an averaged projection onto it
//! yields an invariant complement. Eigenvalues are located numerically and then
//! confirmed exactly, so every split is exact.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rep::{intertwiners, ProjRep};
use crate::error::{Error, Result};
use crate::matrix::CMat;
use crate::poly;
use crate::rational::Q;

/// Irreducible constituents with multiplicities, plus the exact change of basis.
#[derive(Clone, Debug)]
pub struct ProjDecomposition {
    /// Pairwise non-isomorphic irreducibles with multiplicities, in order of discovery.
    pub summands: Vec<(ProjRep, usize)>,
    /// Irreducible pieces in the order they appear along `basis`.
    pub pieces: Vec<ProjRep>,
    /// Index into `summands` for each piece.
    pub classes: Vec<usize>,
    /// Columns adapted to the pieces: `π(g) basis = basis ⊕_i piece_i(g)`.
    pub basis: CMat,
}

fn exponent_of_model(pi: &ProjRep) -> u32 {
    let d = pi.domain();
    let mut e = 1u32;
    for g in 0..d.len() {
        let (mut x, mut k) = (g, 1u32);
        while x != 0 {
            x = d.mul(x, g);
            k += 1;
        }
        e = e.lcm(&k);
    }
    e
}

fn field_order(pi: &ProjRep) -> u32 {
    let mut m = pi.cocycle().order() * exponent_of_model(pi);
    for mat in pi.matrices() {
        for c in mat.entries() {
            m = m.lcm(&c.field().order());
        }
    }
    m
}

/// Columns completing `b` (full column rank) to a basis, using standard vectors.
fn complete_basis(b: &CMat) -> CMat {
    let d = b.rows();
    let mut cols = vec![b.clone()];
    let mut cur = b.clone();
    for i in 0..d {
        if cur.cols() == d {
            break;
        }
        let e = CMat::unit(d, 1, i, 0);
        let cand = CMat::hstack(&[cur.clone(), e.clone()]);
        if cand.rank() == cand.cols() {
            cur = cand;
            cols.push(e);
        }
    }
    CMat::hstack(&cols)
}

/// An invariant subspace `V` (as columns) with `0 < dim V < dim π`, if one is found.
fn find_invariant_subspace(pi: &ProjRep, end: &[CMat], seed: u64) -> Option<CMat> {
    let d = pi.dim();
    let m = field_order(pi);
    let try_x = |x: &CMat| -> Option<CMat> {
        if x.as_scalar().is_some() {
            return None;
        }
        let p = poly::squarefree_part(&x.char_poly());
        for lam in poly::roots_in_field(&p, m) {
            let k = x.sub(&CMat::scalar(d, &lam)).nullspace();
            if k.cols() > 0 && k.cols() < d {
                return Some(k);
            }
        }
        None
    };
    for x in end {
        if let Some(v) = try_x(x) {
            return Some(v);
        }
    }
    for (i, a) in end.iter().enumerate() {
        for b in &end[i + 1..] {
            if let Some(v) = try_x(&a.add(b)).or_else(|| try_x(&a.mul(b))) {
                return Some(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..48 {
        let mut x = CMat::zeros(d, d);
        for b in end {
            x = x.add(&b.scale_q(&Q::int(rng.gen_range(-5i64..=5))));
        }
        if let Some(v) = try_x(&x) {
            return Some(v);
        }
    }
    None
}

/// Split `π` into irreducible pieces; returns the pieces and adapted basis columns.
fn split(pi: &ProjRep, seed: u64, depth: usize) -> Result<(Vec<ProjRep>, CMat)> {
    let d = pi.dim();
    let end = intertwiners(pi, pi)?;
    if end.len() == 1 {
        return Ok((vec![pi.clone()], CMat::identity(d)));
    }
    let v = find_invariant_subspace(pi, &end, seed.wrapping_add(depth as u64))
        .ok_or_else(|| Error::SplitFailed(format!("no eigenvalue in the coefficient field splits a {d}-dimensional piece")))?;
    let r = v.cols();
    let q = complete_basis(&v);
    let qi = q.inverse().map_err(|_| Error::SplitFailed("basis completion failed".into()))?;
    let l = qi.submatrix(0, 0, r, d);
    let e = v.mul(&l);
    // Averaged projection: invariant, idempotent, image V.
    let n = pi.domain().len();
    let mut avg = CMat::zeros(d, d);
    for g in 0..n {
        avg = avg.add(&pi.mat(g).mul(&e).mul(&pi.inverse_mat(g)));
    }
    let avg = avg.scale_q(&Q::new(1, n as i64));
    if avg.mul(&avg) != avg {
        return Err(Error::SplitFailed("averaged projection is not idempotent".into()));
    }
    let w = avg.nullspace();
    let full = CMat::hstack(&[v.clone(), w.clone()]);
    let fi = full.inverse().map_err(|_| Error::SplitFailed("complement is not transversal".into()))?;
    let lv = fi.submatrix(0, 0, r, d);
    let lw = fi.submatrix(r, 0, d - r, d);
    let (pv, bv) = split(&pi.compress(&lv, &v), seed, depth + 1)?;
    let (pw, bw) = split(&pi.compress(&lw, &w), seed, depth + 1)?;
    let basis = CMat::hstack(&[v.mul(&bv), w.mul(&bw)]);
    let mut pieces = pv;
    pieces.extend(pw);
    Ok((pieces, basis))
}

/// Decompose into pairwise non-isomorphic irreducibles with multiplicities, with the
/// change of basis verified exactly.
pub fn decompose_projrep(pi: &ProjRep, seed: u64) -> Result<ProjDecomposition> {
    let (pieces, basis) = split(pi, seed, 0)?;
    let blocks_of = |g: usize| CMat::block_diag(&pieces.iter().map(|p| p.mat(g).clone()).collect::<Vec<_>>());
    for g in 0..pi.domain().len() {
        if pi.mat(g).mul(&basis) != basis.mul(&blocks_of(g)) {
            return Err(Error::SplitFailed("change of basis does not intertwine".into()));
        }
    }
    if basis.inverse().is_err() {
        return Err(Error::SplitFailed("adapted basis is singular".into()));
    }
    let mut summands: Vec<(ProjRep, usize)> = Vec::new();
    let mut classes = Vec::with_capacity(pieces.len());
    for p in &pieces {
        let mut hit = None;
        for (k, (s, _)) in summands.iter().enumerate() {
            if s.dim() == p.dim() && !intertwiners(s, p)?.is_empty() {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                summands[k].1 += 1;
                classes.push(k);
            }
            None => {
                classes.push(summands.len());
                summands.push((p.clone(), 1));
            }
        }
    }
    Ok(ProjDecomposition { summands, pieces, classes, basis })
}

pub fn is_irreducible(pi: &ProjRep) -> Result<bool> {
    Ok(intertwiners(pi, pi)?.len() == 1)
}
