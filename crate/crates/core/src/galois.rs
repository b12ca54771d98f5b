//! Realizing divisor-closed sets as subgroup orders of `∏_n Z/p_n Z`, with each factor
//! the Galois group of a degree-`p_n` subfield of a cyclotomic field `Q(ξ_{q_n})`.
//!
//! Only the `F_q^×` side is computed: `Gal(Q(ξ_q)/Q) ≅ F_q^×` is cyclic of order
//! `q - 1`, and the subfield of degree `p` is fixed by the index-`p` subgroup
//! `<g^p>` for a primitive root `g`.

use std::collections::{BTreeMap, BTreeSet};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::index::divisors_of_product;
use crate::intlin::factorize;
use crate::matrix::CMat;
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// A set of positive integers closed under divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorClosedSet {
    Explicit(BTreeSet<u64>),
    /// `{ ∏ p^k : k ≤ f(p) }` restricted to finite products; primes not listed have `f = 0`.
    Exponents(BTreeMap<u64, Exponent>),
}

impl DivisorClosedSet {
    pub fn explicit(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = values.into_iter().collect();
        if !set.contains(&1) {
            return Err(Error::NotDivisorClosed("the set must contain 1".into()));
        }
        for &n in &set {
            if n == 0 {
                return Err(Error::NotDivisorClosed("0 is not a positive integer".into()));
            }
            for (p, _) in factorize(n) {
                if !set.contains(&(n / p)) {
                    return Err(Error::NotDivisorClosed(format!("{} divides {n} but is missing", n / p)));
                }
            }
        }
        Ok(DivisorClosedSet::Explicit(set))
    }

    pub fn exponents(map: BTreeMap<u64, Exponent>) -> Result<Self> {
        for &p in map.keys() {
            if !is_prime(p) {
                return Err(Error::invalid(format!("exponent map key {p} is not prime")));
            }
        }
        Ok(DivisorClosedSet::Exponents(map.into_iter().filter(|(_, e)| *e != Exponent::Finite(0)).collect()))
    }
}

/// `f(p) = sup { k : p^k ∈ N }`.
pub fn exponents_of(n: &DivisorClosedSet) -> BTreeMap<u64, Exponent> {
    match n {
        DivisorClosedSet::Exponents(m) => m.clone(),
        DivisorClosedSet::Explicit(set) => {
            let mut f: BTreeMap<u64, Exponent> = BTreeMap::new();
            for &v in set {
                for (p, k) in factorize(v) {
                    let e = f.entry(p).or_insert(Exponent::Finite(0));
                    if let Exponent::Finite(old) = *e {
                        *e = Exponent::Finite(old.max(k));
                    }
                }
            }
            f
        }
    }
}

/// Every prime `p` repeated `f(p)` times. With finite exponents the primes ascend with
/// repeats adjacent; when some exponent is infinite the primes are taken round-robin so
/// that every prime appears in a long enough prefix. The result has at most `truncation`
/// terms, which is required when some exponent is infinite.
pub fn prime_sequence(f: &BTreeMap<u64, Exponent>, truncation: Option<usize>) -> Result<Vec<u64>> {
    let infinite = f.values().any(|e| *e == Exponent::Infinite);
    let mut out = Vec::new();
    if !infinite {
        for (&p, e) in f {
            if let Exponent::Finite(k) = e {
                out.extend(std::iter::repeat_n(p, *k as usize));
            }
        }
        if let Some(t) = truncation {
            out.truncate(t);
        }
        return Ok(out);
    }
    let t = truncation.ok_or_else(|| Error::invalid("an infinite exponent needs an explicit truncation"))?;
    let mut round = 0u32;
    while out.len() < t {
        for (&p, e) in f {
            let live = match e {
                Exponent::Infinite => true,
                Exponent::Finite(k) => round < *k,
            };
            if live && out.len() < t {
                out.push(p);
            }
        }
        round += 1;
    }
    Ok(out)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin; the first twelve prime bases suffice for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub const DEFAULT_Q_SEARCH_BOUND: u64 = 1_000_000;

/// Smallest prime `q ≡ 1 (mod p)` outside `used`, searching `q ≤ bound`.
pub fn choose_q(p: u64, used: &BTreeSet<u64>, bound: u64) -> Result<u64> {
    let mut q = p.checked_add(1).ok_or_else(|| Error::SearchBoundExceeded("p is too large".into()))?;
    while q <= bound {
        if is_prime(q) && !used.contains(&q) {
            return Ok(q);
        }
        q = q.checked_add(p).ok_or_else(|| Error::SearchBoundExceeded("search overflowed".into()))?;
    }
    Err(Error::SearchBoundExceeded(format!("no unused prime q ≡ 1 mod {p} below {bound}")))
}

/// Smallest generator of `F_q^×`.
pub fn primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let factors = factorize(q - 1);
    (2..q).find(|&g| factors.iter().all(|&(r, _)| pow_mod(g, (q - 1) / r, q) != 1)).expect("F_q^× is cyclic")
}

/// Order of `<g>` in `F_q^×` by repeated multiplication.
pub fn multiplicative_order(g: u64, q: u64) -> u64 {
    let mut x = g % q;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, q);
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisFactor {
    pub p: u64,
    pub q: u64,
    pub primitive_root: u64,
    /// `g^p mod q`, generating the subgroup fixing the degree-`p` subfield.
    pub subgroup_generator: u64,
    pub subgroup_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRealization {
    pub factors: Vec<GaloisFactor>,
}

impl GaloisRealization {
    pub fn primes(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.p).collect()
    }

    pub fn auxiliary_primes(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.q).collect()
    }

    /// Divisors of `p_0 ⋯ p_k`; `{1}` for `k = None` (the empty product).
    pub fn realized_orders(&self, k: Option<usize>) -> Result<BTreeSet<u64>> {
        let upto = k.map_or(0, |k| (k + 1).min(self.factors.len()));
        Ok(divisors_of_product(&self.primes()[..upto])?.into_iter().collect())
    }

    /// Union over all prefixes, which equals the divisors of the full product.
    pub fn all_realized_orders(&self) -> Result<BTreeSet<u64>> {
        self.realized_orders(self.factors.len().checked_sub(1))
    }
}

pub fn realize(n: &DivisorClosedSet, truncation: Option<usize>, q_bound: u64) -> Result<GaloisRealization> {
    let primes = prime_sequence(&exponents_of(n), truncation)?;
    let mut used = BTreeSet::new();
    let mut factors = Vec::with_capacity(primes.len());
    for p in primes {
        let q = choose_q(p, &used, q_bound)?;
        used.insert(q);
        let g = primitive_root(q);
        let h = pow_mod(g, p, q);
        let f = GaloisFactor { p, q, primitive_root: g, subgroup_generator: h, subgroup_order: multiplicative_order(h, q) };
        if !is_prime(q) || q % p != 1 || f.subgroup_order * p != q - 1 || multiplicative_order(g, q) != q - 1 {
            return Err(Error::invalid(format!("factor data for (p, q) = ({p}, {q}) failed verification")));
        }
        factors.push(f);
    }
    let out = GaloisRealization { factors };
    if let (DivisorClosedSet::Explicit(set), None) = (n, truncation) {
        let got = out.all_realized_orders()?;
        if &got != set {
            let extra: Vec<String> = got.difference(set).map(u64::to_string).collect();
            return Err(Error::NotRealizable(format!(
                "prefixes of the prime sequence also realize {}; the set must be closed under lcm",
                extra.join(", ")
            )));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SigmaCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SigmaReport {
    pub q: Q,
    pub checks: Vec<SigmaCheck>,
}

impl SigmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type M3 = [[Q; 3]; 3];

fn apply(a: &M3, v: &[Q; 3]) -> [Q; 3] {
    std::array::from_fn(|i| (0..3).fold(Q::int(0), |acc, j| acc + &a[i][j] * &v[j]))
}

fn transpose(a: &M3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

fn scaled(c: &Q, v: &[Q; 3]) -> [Q; 3] {
    std::array::from_fn(|i| c * &v[i])
}

/// `(x - 1)^3` is the characteristic polynomial of the upper unitriangular matrix.
pub fn unitriangular_is_unipotent(a: i64, b: i64, c: i64) -> bool {
    let one = || Cyclotomic::one();
    let z = || Cyclotomic::zero();
    let int = |k: i64| Cyclotomic::from_q(Q::int(k));
    let u = CMat::from_rows(vec![vec![one(), int(a), int(b)], vec![z(), one(), int(c)], vec![z(), z(), one()]]).expect("3x3");
    let expected: Vec<Cyclotomic> = [-1, 3, -3, 1].iter().map(|&k| int(k)).collect();
    u.char_poly() == expected
}

/// Exact eigenvector checks for `A = (1 0 0; 1 q 0; 1 0 q^-1)` and its transpose.
pub fn verify_sigma_eigenstructure(q: &Q, unitriangular: &[(i64, i64, i64)]) -> Result<SigmaReport> {
    let (zero, one) = (Q::int(0), Q::int(1));
    if *q == zero || *q == one || *q == -&one {
        return Err(Error::DegenerateQ(q.to_string()));
    }
    let qi = q.recip();
    let a: M3 = [
        [one.clone(), zero.clone(), zero.clone()],
        [one.clone(), q.clone(), zero.clone()],
        [one.clone(), zero.clone(), qi.clone()],
    ];
    let at = transpose(&a);
    let e = |i: usize| -> [Q; 3] { std::array::from_fn(|j| if i == j { one.clone() } else { zero.clone() }) };
    let mut checks = Vec::new();
    let mut eig = |name: &str, m: &M3, v: [Q; 3], lam: &Q| {
        checks.push(SigmaCheck { name: name.to_string(), passed: apply(m, &v) == scaled(lam, &v) });
    };
    eig("A (1-q, 1, -q) = (1-q, 1, -q)", &a, [&one - q, one.clone(), -q], &one);
    eig("A e2 = q e2", &a, e(1), q);
    eig("A e3 = q^-1 e3", &a, e(2), &qi);
    eig("A^T e1 = e1", &at, e(0), &one);
    eig("A^T (e1 + (q-1) e2) = q (e1 + (q-1) e2)", &at, [one.clone(), q - &one, zero.clone()], q);
    eig("A^T (q e1 + (1-q) e3) = q^-1 (q e1 + (1-q) e3)", &at, [q.clone(), zero.clone(), &one - q], &qi);
    for &(x, y, z) in unitriangular {
        checks.push(SigmaCheck {
            name: format!("charpoly of unitriangular ({x}, {y}, {z}) is (x-1)^3"),
            passed: unitriangular_is_unipotent(x, y, z),
        });
    }
    Ok(SigmaReport { q: q.clone(), checks })
}
