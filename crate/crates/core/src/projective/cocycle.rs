use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use super::domain::Domain;
use crate::cyclotomic::RootOfUnity;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, Rat, Subgroup};
use crate::intlin;

/// A `μ_m`-valued function on pairs of a finite model, stored as exponents of `ζ_m`.
#[derive(Clone)]
pub struct Cocycle2 {
    domain: Arc<Domain>,
    order: u32,
    table: Arc<Vec<u32>>,
}

impl fmt::Debug for Cocycle2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cocycle2(order {}, {:?})", self.order, self.domain)
    }
}

impl Cocycle2 {
    pub fn trivial(domain: &Arc<Domain>, order: u32) -> Cocycle2 {
        let n = domain.len();
        Cocycle2 { domain: domain.clone(), order: order.max(1), table: Arc::new(vec![0; n * n]) }
    }

    /// Raw exponent table, row-major over domain indices.
    pub fn from_table(domain: &Arc<Domain>, order: u32, table: Vec<u32>) -> Result<Cocycle2> {
        let n = domain.len();
        if table.len() != n * n {
            return Err(Error::invalid(format!("cocycle table needs {} entries, got {}", n * n, table.len())));
        }
        if order == 0 {
            return Err(Error::invalid("cocycle order must be positive"));
        }
        let table = table.into_iter().map(|e| e % order).collect();
        Ok(Cocycle2 { domain: domain.clone(), order, table: Arc::new(table) })
    }

    /// Tabulate `f` on the lifts of `domain`; for lattice models also checks that `f`
    /// is invariant under the period.
    pub fn from_fn(
        domain: &Arc<Domain>,
        order: u32,
        f: impl Fn(&GroupElement, &GroupElement) -> Result<RootOfUnity>,
    ) -> Result<Cocycle2> {
        let n = domain.len();
        let mut table = Vec::with_capacity(n * n);
        let exp = |r: RootOfUnity| {
            r.exponent_in(order)
                .ok_or_else(|| Error::invalid(format!("value {r} is not a root of unity of order dividing {order}")))
        };
        for g in domain.lifts() {
            for h in domain.lifts() {
                table.push(exp(f(g, h)?)?);
            }
        }
        let periods = domain.period_generators();
        if !periods.is_empty() {
            for (i, g) in domain.lifts().iter().enumerate() {
                for (j, h) in domain.lifts().iter().enumerate() {
                    for p in &periods {
                        let v = table[i * n + j];
                        if exp(f(&g.mul(p), h)?)? != v || exp(f(g, &h.mul(p))?)? != v {
                            return Err(Error::IncompatibleDomain(format!(
                                "cocycle is not periodic under {}",
                                domain.period().expect("lattice")
                            )));
                        }
                    }
                }
            }
        }
        Ok(Cocycle2 { domain: domain.clone(), order, table: Arc::new(table) })
    }

    /// `ζ_m^(xᵀ B y)`; the exponent must be integral on the group.
    pub fn bilinear(domain: &Arc<Domain>, order: u32, form: &[Vec<Rat>]) -> Result<Cocycle2> {
        Self::from_fn(domain, order, |x, y| {
            let (x, y) = (x.as_vector().ok_or(Error::AmbientMismatch)?, y.as_vector().ok_or(Error::AmbientMismatch)?);
            let mut e = Rat::from_integer(0);
            for (i, row) in form.iter().enumerate() {
                for (j, b) in row.iter().enumerate() {
                    e += x[i] * b * y[j];
                }
            }
            if !e.is_integer() {
                return Err(Error::invalid(format!("bilinear exponent {e} is not an integer")));
            }
            Ok(RootOfUnity::new(*e.numer(), order))
        })
    }

    /// Smallest `N` such that `N·group` is a period of the bilinear cocycle `ζ_m^(xᵀBy)`.
    pub fn bilinear_period(group: &Subgroup, order: u32, form: &[Vec<Rat>]) -> Result<Subgroup> {
        let basis = group.generators().to_vec();
        let mut n: i64 = 1;
        for a in &basis {
            for b in &basis {
                let (x, y) = (a.as_vector().ok_or(Error::AmbientMismatch)?, b.as_vector().ok_or(Error::AmbientMismatch)?);
                let mut e = Rat::from_integer(0);
                for (i, row) in form.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        e += x[i] * c * y[j];
                    }
                }
                // Need N·e ∈ mZ, i.e. (m·den / gcd(m·den, num)) | N.
                let num = e.numer().abs();
                let den = *e.denom();
                let need = if num == 0 { 1 } else { (order as i64 * den) / (order as i64 * den).gcd(&num) };
                n = n.lcm(&need);
            }
        }
        Ok(group.scaled_period(n))
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn group(&self) -> &Subgroup {
        self.domain.group()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self, i: usize, j: usize) -> u32 {
        self.table[i * self.domain.len() + j]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn at(&self, i: usize, j: usize) -> RootOfUnity {
        RootOfUnity::new(self.exponent(i, j) as i64, self.order)
    }

    pub fn value(&self, g: &GroupElement, h: &GroupElement) -> Result<RootOfUnity> {
        let i = self.domain.locate(g).ok_or_else(|| Error::IncompatibleDomain(format!("{g} is outside {}", self.group())))?;
        let j = self.domain.locate(h).ok_or_else(|| Error::IncompatibleDomain(format!("{h} is outside {}", self.group())))?;
        Ok(self.at(i, j))
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&e| e == 0)
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.domain.len();
        (0..n).all(|g| self.exponent(0, g) == 0 && self.exponent(g, 0) == 0)
    }

    /// Exhaustive check of `Ω(g,h)Ω(gh,k) = Ω(h,k)Ω(g,hk)` and normalization.
    pub fn verify(&self) -> bool {
        let n = self.domain.len();
        let m = self.order;
        if !self.is_normalized() {
            return false;
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.domain.mul(g, h);
                let a = self.exponent(g, h);
                for k in 0..n {
                    let hk = self.domain.mul(h, k);
                    let lhs = (a + self.exponent(gh, k)) % m;
                    let rhs = (self.exponent(h, k) + self.exponent(g, hk)) % m;
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Re-tabulate on another model of a subgroup of ours.
    pub fn on_domain(&self, target: &Arc<Domain>) -> Result<Cocycle2> {
        if target.same_model(&self.domain) {
            return Ok(self.clone());
        }
        Self::from_fn(target, self.order, |g, h| self.value(g, h))
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<Cocycle2> {
        self.on_domain(&self.domain.restricted(sub)?)
    }

    pub fn conjugate(&self) -> Cocycle2 {
        let m = self.order;
        let table = self.table.iter().map(|&e| (m - e) % m).collect();
        Cocycle2 { domain: self.domain.clone(), order: m, table: Arc::new(table) }
    }

    /// Pointwise product; both cocycles must live on the same subgroup.
    pub fn product(&self, o: &Cocycle2) -> Result<Cocycle2> {
        let d = Domain::common(&self.domain, &o.domain)?;
        let m = self.order.lcm(&o.order);
        if d.same_model(&self.domain) && d.same_model(&o.domain) {
            let (sa, sb) = (m / self.order, m / o.order);
            let table = self.table.iter().zip(o.table.iter()).map(|(&a, &b)| (a * sa + b * sb) % m).collect();
            return Ok(Cocycle2 { domain: d, order: m, table: Arc::new(table) });
        }
        Self::from_fn(&d, m, |g, h| Ok(self.value(g, h)?.mul(&o.value(g, h)?)))
    }

    pub fn scaled_order(&self, m: u32) -> Result<Cocycle2> {
        if m % self.order != 0 {
            return Err(Error::invalid(format!("order {} does not divide {m}", self.order)));
        }
        let s = m / self.order;
        Ok(Cocycle2 { domain: self.domain.clone(), order: m, table: Arc::new(self.table.iter().map(|&e| e * s).collect()) })
    }

    /// `Ω ∘ Ad γ^-1` on `γ G γ^-1`: `(g, h) ↦ Ω(γ^-1 g γ, γ^-1 h γ)`.
    pub fn pullback(&self, gamma: &GroupElement) -> Result<Cocycle2> {
        let target = self.group().conjugate_by(gamma)?;
        let d = Domain::new(&target, self.domain.period())?;
        let gi = gamma.inverse();
        Self::from_fn(&d, self.order, |g, h| self.value(&gi.conjugate(g), &gi.conjugate(h)))
    }

    /// Exact equality of values on a common model of the same subgroup.
    pub fn same_as(&self, o: &Cocycle2) -> bool {
        if self.group() != o.group() {
            return false;
        }
        if self.domain.same_model(&o.domain) && self.order == o.order {
            return self.table == o.table;
        }
        let Ok(d) = Domain::common(&self.domain, &o.domain) else { return false };
        let n = d.len();
        for i in 0..n {
            for j in 0..n {
                let (g, h) = (d.lift(i), d.lift(j));
                match (self.value(g, h), o.value(g, h)) {
                    (Ok(a), Ok(b)) if a == b => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Solve `ρ(g)ρ(h)ρ(gh)^-1 = Ω(g,h)` over `Z/m` on the finite model; returns `ρ`.
    pub fn is_coboundary(&self) -> Option<Vec<RootOfUnity>> {
        let n = self.domain.len();
        let m = self.order as u64;
        let mut rows = Vec::with_capacity(n * n);
        let mut rhs = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let gh = self.domain.mul(g, h);
                let mut row = vec![0u64; n];
                row[g] += 1;
                row[h] += 1;
                row[gh] = (row[gh] + m - 1) % m;
                rows.push(row.into_iter().map(|v| v % m).collect());
                rhs.push(self.exponent(g, h) as u64);
            }
        }
        let sol = intlin::solve_mod(&rows, &rhs, m)?;
        let rho: Vec<RootOfUnity> = sol.into_iter().map(|e| RootOfUnity::new(e as i64, self.order)).collect();
        debug_assert!(self.equals_coboundary(&rho));
        Some(rho)
    }

    /// `Ω = ∂ρ` pointwise.
    pub fn equals_coboundary(&self, rho: &[RootOfUnity]) -> bool {
        let n = self.domain.len();
        rho.len() == n
            && (0..n).all(|g| {
                (0..n).all(|h| {
                    let gh = self.domain.mul(g, h);
                    rho[g].mul(&rho[h]).mul(&rho[gh].inv()) == self.at(g, h)
                })
            })
    }

    /// The coboundary `∂ρ` of a function on the model.
    pub fn coboundary(domain: &Arc<Domain>, order: u32, rho: &[RootOfUnity]) -> Result<Cocycle2> {
        let n = domain.len();
        let mut table = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let v = rho[g].mul(&rho[h]).mul(&rho[domain.mul(g, h)].inv());
                table.push(v.exponent_in(order).ok_or_else(|| Error::invalid("coboundary value outside μ_m"))?);
            }
        }
        Ok(Cocycle2 { domain: domain.clone(), order, table: Arc::new(table) })
    }
}
