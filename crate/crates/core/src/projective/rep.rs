use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use super::cocycle::Cocycle2;
use super::domain::Domain;
use crate::cyclotomic::{Cyclotomic, RootOfUnity};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, Subgroup};
use crate::matrix::CMat;

/// A projective representation on a finite model, with its obstruction cocycle.
#[derive(Clone)]
pub struct ProjRep {
    domain: Arc<Domain>,
    dim: usize,
    mats: Arc<Vec<CMat>>,
    cocycle: Cocycle2,
}

impl fmt::Debug for ProjRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjRep(dim {}, {:?})", self.dim, self.domain)
    }
}

/// Check periodicity of a tabulated map on a lattice model.
fn check_periodic(domain: &Domain, mats: &[CMat], f: &dyn Fn(&GroupElement) -> Result<CMat>) -> Result<()> {
    for p in domain.period_generators() {
        for (i, g) in domain.lifts().iter().enumerate() {
            if f(&g.mul(&p))? != mats[i] {
                return Err(Error::IncompatibleDomain(format!(
                    "representation is not periodic under {}",
                    domain.period().expect("lattice")
                )));
            }
        }
    }
    Ok(())
}

impl ProjRep {
    /// Extract the obstruction of `g ↦ mats[g]` with values in `μ_order`.
    pub fn obstruction_of(domain: &Arc<Domain>, mats: &[CMat], order: u32) -> Result<Cocycle2> {
        let n = domain.len();
        if mats.len() != n {
            return Err(Error::invalid(format!("need {n} matrices, got {}", mats.len())));
        }
        let dim = mats[0].rows();
        if mats.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::invalid("matrices must be square of equal size"));
        }
        if mats[0] != CMat::identity(dim) {
            return Err(Error::NotProjective("identity element must map to the identity matrix".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let prod = mats[g].mul(&mats[h]);
                let gh = domain.mul(g, h);
                let c = prod.ratio_to(&mats[gh]).ok_or_else(|| {
                    Error::NotProjective(format!("π({})π({}) is not a scalar multiple of π(gh)", domain.lift(g), domain.lift(h)))
                })?;
                let r = c.as_root_of_unity(order).ok_or_else(|| {
                    Error::NotProjective(format!("scalar {c} is not a root of unity of order dividing {order}"))
                })?;
                table.push(r.exponent_in(order).expect("checked"));
            }
        }
        Cocycle2::from_table(domain, order, table)
    }

    /// Representation with obstruction read off from the matrices.
    pub fn from_matrices(domain: &Arc<Domain>, mats: Vec<CMat>, order: u32) -> Result<ProjRep> {
        let cocycle = Self::obstruction_of(domain, &mats, order)?;
        let dim = mats[0].rows();
        Ok(ProjRep { domain: domain.clone(), dim, mats: Arc::new(mats), cocycle })
    }

    /// Representation that must have obstruction exactly `cocycle`.
    pub fn with_cocycle(mats: Vec<CMat>, cocycle: &Cocycle2) -> Result<ProjRep> {
        let domain = cocycle.domain().clone();
        let found = Self::obstruction_of(&domain, &mats, cocycle.order())?;
        if !found.same_as(cocycle) {
            return Err(Error::ObstructionMismatch("matrices realize a different cocycle".into()));
        }
        let dim = mats[0].rows();
        Ok(ProjRep { domain, dim, mats: Arc::new(mats), cocycle: cocycle.clone() })
    }

    /// Tabulate `f` on the lifts of the cocycle's model and require obstruction `cocycle`.
    pub fn tabulate(cocycle: &Cocycle2, f: impl Fn(&GroupElement) -> Result<CMat>) -> Result<ProjRep> {
        let domain = cocycle.domain().clone();
        let mats = domain.lifts().iter().map(&f).collect::<Result<Vec<_>>>()?;
        check_periodic(&domain, &mats, &f)?;
        Self::with_cocycle(mats, cocycle)
    }

    /// Extend generator images along a spanning tree using `π(g s) = Ω(g,s)^-1 π(g) π(s)`,
    /// then verify the result is a projective representation with obstruction `cocycle`.
    pub fn from_generators(cocycle: &Cocycle2, images: &[(GroupElement, CMat)]) -> Result<ProjRep> {
        let domain = cocycle.domain().clone();
        let n = domain.len();
        let dim = images.first().map_or(1, |(_, m)| m.rows());
        let mut gens = Vec::new();
        for (g, m) in images {
            let i = domain.locate(g).ok_or_else(|| Error::invalid(format!("generator {g} is not in {}", domain.group())))?;
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::invalid("generator images must be square of equal size"));
            }
            gens.push((i, m.clone()));
        }
        let mut mats: Vec<Option<CMat>> = vec![None; n];
        mats[0] = Some(CMat::identity(dim));
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (s, ms) in &gens {
                let gs = domain.mul(g, *s);
                if mats[gs].is_none() {
                    let w = cocycle.at(g, *s).inv().to_cyclotomic();
                    mats[gs] = Some(mats[g].as_ref().expect("visited").mul(ms).scale(&w));
                    queue.push_back(gs);
                }
            }
        }
        let mats = mats
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invalid("generator images do not generate the group"))?;
        Self::with_cocycle(mats, cocycle).map_err(|e| match e {
            Error::NotProjective(msg) => Error::ObstructionMismatch(format!("generator relations fail: {msg}")),
            other => other,
        })
    }

    /// The one-dimensional trivial representation on a model.
    pub fn trivial(domain: &Arc<Domain>, order: u32) -> ProjRep {
        let mats = vec![CMat::identity(1); domain.len()];
        ProjRep { domain: domain.clone(), dim: 1, mats: Arc::new(mats), cocycle: Cocycle2::trivial(domain, order) }
    }

    /// Twisted left regular representation `λ(g) δ_h = Ω(g,h) δ_{gh}`; its obstruction is `Ω`.
    pub fn twisted_regular(cocycle: &Cocycle2) -> ProjRep {
        let domain = cocycle.domain().clone();
        let n = domain.len();
        let mats = (0..n)
            .map(|g| {
                let mut m = CMat::zeros(n, n);
                for h in 0..n {
                    m.set(domain.mul(g, h), h, cocycle.at(g, h).to_cyclotomic());
                }
                m
            })
            .collect();
        ProjRep { domain, dim: n, mats: Arc::new(mats), cocycle: cocycle.clone() }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn group(&self) -> &Subgroup {
        self.domain.group()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.mats
    }

    pub fn mat(&self, i: usize) -> &CMat {
        &self.mats[i]
    }

    pub fn eval(&self, g: &GroupElement) -> Result<CMat> {
        let i = self.domain.locate(g).ok_or_else(|| Error::IncompatibleDomain(format!("{g} is outside {}", self.group())))?;
        Ok(self.mats[i].clone())
    }

    /// `π(g)^-1 = Ω(g, g^-1)^-1 π(g^-1)`.
    pub fn inverse_mat(&self, i: usize) -> CMat {
        let j = self.domain.inv(i);
        self.mats[j].scale(&self.cocycle.at(i, j).inv().to_cyclotomic())
    }

    /// Every matrix has its adjoint as inverse.
    pub fn is_unitary(&self) -> bool {
        let id = CMat::identity(self.dim);
        self.mats.iter().all(|m| m.mul(&m.adjoint()) == id)
    }

    /// Re-tabulate on another model of a subgroup of ours.
    pub fn on_domain(&self, target: &Arc<Domain>) -> Result<ProjRep> {
        if target.same_model(&self.domain) {
            return Ok(self.clone());
        }
        let cocycle = self.cocycle.on_domain(target)?;
        let mats = target.lifts().iter().map(|g| self.eval(g)).collect::<Result<Vec<_>>>()?;
        check_periodic(target, &mats, &|g| self.eval(g))?;
        Ok(ProjRep { domain: target.clone(), dim: self.dim, mats: Arc::new(mats), cocycle })
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<ProjRep> {
        self.on_domain(&self.domain.restricted(sub)?)
    }

    /// Entrywise complex conjugate; obstruction `conj Ω`.
    pub fn conjugate(&self) -> ProjRep {
        ProjRep {
            domain: self.domain.clone(),
            dim: self.dim,
            mats: Arc::new(self.mats.iter().map(CMat::conj).collect()),
            cocycle: self.cocycle.conjugate(),
        }
    }

    /// `g ↦ π(γ^-1 g γ)` on `γ H γ^-1`; obstruction `Ω ∘ Ad γ^-1`.
    pub fn pullback(&self, gamma: &GroupElement) -> Result<ProjRep> {
        let cocycle = self.cocycle.pullback(gamma)?;
        let gi = gamma.inverse();
        let mats = cocycle.domain().lifts().iter().map(|g| self.eval(&gi.conjugate(g))).collect::<Result<Vec<_>>>()?;
        Ok(ProjRep { domain: cocycle.domain().clone(), dim: self.dim, mats: Arc::new(mats), cocycle })
    }

    /// `g ↦ ρ(g) π(g)`; obstruction becomes `Ω · ∂ρ`.
    pub fn scaled(&self, rho: &[RootOfUnity]) -> Result<ProjRep> {
        let n = self.domain.len();
        if rho.len() != n || !rho[0].is_one() {
            return Err(Error::invalid("scaling map must be defined on every element and trivial at the identity"));
        }
        let order = rho.iter().fold(self.cocycle.order(), |acc, r| num_integer::lcm(acc, r.order()));
        let d = Cocycle2::coboundary(&self.domain, order, rho)?;
        let cocycle = self.cocycle.product(&d)?;
        let mats = self.mats.iter().zip(rho).map(|(m, r)| m.scale(&r.to_cyclotomic())).collect();
        Ok(ProjRep { domain: self.domain.clone(), dim: self.dim, mats: Arc::new(mats), cocycle })
    }

    /// `π ⊕ π'` on a common model; obstructions must agree.
    pub fn direct_sum(&self, o: &ProjRep) -> Result<ProjRep> {
        let d = Domain::common(&self.domain, &o.domain)?;
        let (a, b) = (self.on_domain(&d)?, o.on_domain(&d)?);
        if !a.cocycle.same_as(&b.cocycle) {
            return Err(Error::ObstructionMismatch("direct summands have different obstructions".into()));
        }
        let mats = a.mats.iter().zip(b.mats.iter()).map(|(x, y)| CMat::block_diag(&[x.clone(), y.clone()])).collect();
        Ok(ProjRep { domain: d, dim: a.dim + b.dim, mats: Arc::new(mats), cocycle: a.cocycle })
    }

    /// `π ⊗ π'` (Kronecker product); obstruction is the product.
    pub fn tensor(&self, o: &ProjRep) -> Result<ProjRep> {
        let d = Domain::common(&self.domain, &o.domain)?;
        let (a, b) = (self.on_domain(&d)?, o.on_domain(&d)?);
        let cocycle = a.cocycle.product(&b.cocycle)?;
        let mats = a.mats.iter().zip(b.mats.iter()).map(|(x, y)| x.kron(y)).collect();
        Ok(ProjRep { domain: d, dim: a.dim * b.dim, mats: Arc::new(mats), cocycle })
    }

    /// Conjugate by an invertible `q`: `g ↦ q^-1 π(g) q`.
    pub fn change_basis(&self, q: &CMat) -> Result<ProjRep> {
        let qi = q.inverse()?;
        let mats = self.mats.iter().map(|m| qi.mul(m).mul(q)).collect();
        Ok(ProjRep { domain: self.domain.clone(), dim: self.dim, mats: Arc::new(mats), cocycle: self.cocycle.clone() })
    }

    /// Subrepresentation or quotient carried by `g ↦ l π(g) b` for `l b = I`.
    pub fn compress(&self, l: &CMat, b: &CMat) -> ProjRep {
        let mats = self.mats.iter().map(|m| l.mul(m).mul(b)).collect();
        ProjRep { domain: self.domain.clone(), dim: b.cols(), mats: Arc::new(mats), cocycle: self.cocycle.clone() }
    }

    /// Induce to `big ⊇ H` with target cocycle `omega` on `big`.
    ///
    /// With `big = ⊔ t_i H`, block `(i, j)` of `π̃(g)` is `Ω(g,t_j) Ω(t_i,h)^-1 π(h)`
    /// where `h = t_i^-1 g t_j` when this lies in `H`, and zero otherwise.
    pub fn induce(&self, omega: &Cocycle2) -> Result<ProjRep> {
        let big = omega.group().clone();
        let small = self.group().clone();
        let restricted = omega.restrict(&small)?;
        if !restricted.same_as(&self.cocycle) {
            return Err(Error::ObstructionMismatch("restriction of the target cocycle differs from the obstruction of π".into()));
        }
        let reps = big.left_transversal(&small)?;
        let n = reps.len();
        let d = self.dim;
        let model = Domain::common_refinement(&big, &[self.domain.period(), omega.domain().period()])?;
        let target = omega.on_domain(&model)?;
        let f = |g: &GroupElement| -> Result<CMat> {
            let mut m = CMat::zeros(n * d, n * d);
            for (j, tj) in reps.iter().enumerate() {
                let gtj = g.mul(tj);
                for (i, ti) in reps.iter().enumerate() {
                    let h = ti.inverse().mul(&gtj);
                    if small.contains(&h) {
                        let c = omega.value(g, tj)?.mul(&omega.value(ti, &h)?.inv());
                        m.paste(i * d, j * d, &self.eval(&h)?.scale(&c.to_cyclotomic()));
                        break;
                    }
                }
            }
            Ok(m)
        };
        Self::tabulate(&target, f)
    }

    /// Verify that this is a projective representation with its stored obstruction.
    pub fn verify(&self) -> bool {
        match Self::obstruction_of(&self.domain, &self.mats, self.cocycle.order()) {
            Ok(c) => c.same_as(&self.cocycle),
            Err(_) => false,
        }
    }
}

/// Incrementally maintained row-echelon basis of a subspace of `K^n`.
pub struct SpanBuilder {
    len: usize,
    rows: Vec<(usize, Vec<Cyclotomic>)>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        SpanBuilder { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Add `v` to the span; returns whether the span grew.
    pub fn insert(&mut self, mut v: Vec<Cyclotomic>) -> bool {
        assert_eq!(v.len(), self.len);
        for (p, r) in &self.rows {
            let c = v[*p].clone();
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inverse().expect("non-zero");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        // Keep existing rows reduced at the new pivot.
        for (_, r) in self.rows.iter_mut() {
            let c = r[p].clone();
            if !c.is_zero() {
                for (x, y) in r.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn basis(&self) -> Vec<Vec<Cyclotomic>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().map(|(_, v)| v).collect()
    }
}

/// Basis of `{T : T π'(g) = π(g) T for all g}` via the averaging projection
/// `A ↦ Σ_g π(g) A π'(g)^-1` applied to matrix units.
pub fn intertwiners(pi: &ProjRep, pi2: &ProjRep) -> Result<Vec<CMat>> {
    let d = Domain::common(pi.domain(), pi2.domain())?;
    let (a, b) = (pi.on_domain(&d)?, pi2.on_domain(&d)?);
    if !a.cocycle.same_as(&b.cocycle) {
        return Err(Error::ObstructionMismatch("intertwiners need equal obstruction cocycles".into()));
    }
    let (r, c) = (a.dim, b.dim);
    let n = d.len();
    let invs: Vec<CMat> = (0..n).map(|g| b.inverse_mat(g)).collect();
    let mut span = SpanBuilder::new(r * c);
    for i in 0..r {
        for j in 0..c {
            // Σ_g (column i of π(g)) (row j of π'(g)^-1)
            let mut acc = vec![Cyclotomic::zero(); r * c];
            for g in 0..n {
                let pm = a.mat(g);
                let qm = &invs[g];
                for k in 0..r {
                    let x = pm.get(k, i);
                    if x.is_zero() {
                        continue;
                    }
                    for l in 0..c {
                        let y = qm.get(j, l);
                        if !y.is_zero() {
                            acc[k * c + l] = acc[k * c + l].add(&x.mul(y));
                        }
                    }
                }
            }
            span.insert(acc);
            if span.dim() == r * c {
                break;
            }
        }
    }
    Ok(span.basis().into_iter().map(|v| CMat::from_flat(r, c, v)).collect())
}

/// An invertible intertwiner `T` with `T π'(g) = π(g) T`, if the two are isomorphic.
pub fn isomorphism(pi: &ProjRep, pi2: &ProjRep, seed: u64) -> Result<Option<CMat>> {
    if pi.dim() != pi2.dim() {
        return Ok(None);
    }
    let basis = intertwiners(pi, pi2)?;
    if basis.is_empty() {
        return Ok(None);
    }
    for b in &basis {
        if b.inverse().is_ok() {
            return Ok(Some(b.clone()));
        }
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let mut t = CMat::zeros(pi.dim(), pi.dim());
        for b in &basis {
            let c = rng.gen_range(-7i64..=7);
            t = t.add(&b.scale_q(&crate::rational::Q::int(c)));
        }
        if t.inverse().is_ok() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
