//! Roots of unity and exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the power basis `1, ζ, .., ζ^(φ(m)-1)`, reduced
//! modulo the m-th cyclotomic polynomial. Values living in different fields
//! are embedded into the field of the lcm of their orders before combining.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// `ζ^(num/den)` as a reduced fraction of a full turn, `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RootOfUnity {
    num: u32,
    den: u32,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    /// `ζ_m^k`.
    pub fn new(k: i64, m: u32) -> RootOfUnity {
        assert!(m > 0, "root of unity of order zero");
        let k = k.rem_euclid(m as i64) as u32;
        let g = k.gcd(&m);
        RootOfUnity { num: k / g, den: m / g }
    }

    pub fn order(&self) -> u32 {
        self.den
    }

    /// Exponent `k` with `self = ζ_m^k`, if the order divides `m`.
    pub fn exponent_in(&self, m: u32) -> Option<u32> {
        (m % self.den == 0).then(|| self.num * (m / self.den))
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, o: &RootOfUnity) -> RootOfUnity {
        let l = self.den.lcm(&o.den);
        let k = self.num as u64 * (l / self.den) as u64 + o.num as u64 * (l / o.den) as u64;
        RootOfUnity::new((k % l as u64) as i64, l)
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(-(self.num as i64), self.den)
    }

    pub fn pow(&self, e: i64) -> RootOfUnity {
        let k = (self.num as i128 * e as i128).rem_euclid(self.den as i128);
        RootOfUnity::new(k as i64, self.den)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root(self.num as i64, self.den)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.den as f64)
    }

    /// Text form `ζ^k (mod m)` against a fixed order `m` (which the order must divide).
    pub fn display_in(&self, m: u32) -> String {
        match self.exponent_in(m) {
            Some(k) => format!("ζ^{k} (mod {m})"),
            None => self.to_string(),
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ^{} (mod {})", self.num, self.den)
    }
}

pub struct CycloField {
    m: u32,
    phi: usize,
    /// Reduced power-basis coordinates of `ζ^k` for `0 <= k < m`.
    powers: Vec<Vec<i64>>,
    /// Residues coprime to `m`, ascending.
    units: Vec<u32>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ_{})", self.m)
    }
}

fn cyclotomic_poly(m: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let q = cyclotomic_poly(d, memo);
            p = poly_div_exact(&p, &q);
        }
    }
    memo.insert(m, p.clone());
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn field_memo() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static MEMO: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CycloField {
    pub fn get(m: u32) -> Arc<CycloField> {
        assert!(m > 0);
        // Odd m and 2m give the same field; keep the even one so -1 is a power of ζ.
        let m = if m % 2 == 1 && m > 1 { 2 * m } else { m };
        let mut memo = field_memo().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = memo.get(&m) {
            return f.clone();
        }
        let mut polys = HashMap::new();
        let phi_poly = cyclotomic_poly(m, &mut polys);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // Multiply by ζ and reduce with the monic Φ_m.
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            for (j, nj) in next.iter_mut().enumerate() {
                *nj -= top * phi_poly[j];
            }
            cur = next;
        }
        let units = (1..=m).filter(|k| k.gcd(&m) == 1).map(|k| k % m).collect::<Vec<_>>();
        let mut units = units;
        units.sort_unstable();
        let f = Arc::new(CycloField { m, phi, powers, units });
        memo.insert(m, f.clone());
        f
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn units(&self) -> &[u32] {
        &self.units
    }
}

#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    pub fn zero_in(field: &Arc<CycloField>) -> Cyclotomic {
        Cyclotomic { field: field.clone(), coeffs: vec![Q::zero(); field.phi] }
    }

    pub fn from_q_in(q: Q, field: &Arc<CycloField>) -> Cyclotomic {
        let mut c = Cyclotomic::zero_in(field);
        c.coeffs[0] = q;
        c
    }

    pub fn zero() -> Cyclotomic {
        Cyclotomic::zero_in(&CycloField::get(1))
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic::from_q(Q::one())
    }

    pub fn from_q(q: Q) -> Cyclotomic {
        Cyclotomic::from_q_in(q, &CycloField::get(1))
    }

    /// `ζ_m^k`.
    pub fn root(k: i64, m: u32) -> Cyclotomic {
        let field = CycloField::get(m);
        let scale = field.m / m;
        let e = (k.rem_euclid(m as i64) as u32 * scale) as usize;
        Cyclotomic { coeffs: field.powers[e].iter().map(|&v| Q::int(v)).collect(), field }
    }

    /// Build from power-basis coefficients of `ζ_m` (any length; reduced here).
    pub fn from_powers(coeffs: &[Q], m: u32) -> Cyclotomic {
        let field = CycloField::get(m);
        let scale = (field.m / m) as usize;
        let mut out = Cyclotomic::zero_in(&field);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (k * scale) % field.m as usize;
            for (o, &p) in out.coeffs.iter_mut().zip(&field.powers[e]) {
                if p != 0 {
                    *o = &*o + &(c * &Q::int(p));
                }
            }
        }
        out
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    /// Embed into `Q(ζ_n)` where the current order divides `n`.
    pub fn lift(&self, n: u32) -> Cyclotomic {
        let target = CycloField::get(n);
        if Arc::ptr_eq(&target, &self.field) {
            return self.clone();
        }
        assert!(target.m % self.field.m == 0, "cannot embed Q(ζ_{}) into Q(ζ_{n})", self.field.m);
        let scale = (target.m / self.field.m) as usize;
        let mut out = Cyclotomic::zero_in(&target);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.coeffs.iter_mut().zip(&target.powers[k * scale]) {
                if p != 0 {
                    *o = &*o + &(c * &Q::int(p));
                }
            }
        }
        out
    }

    fn aligned(&self, o: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let l = self.field.m.lcm(&o.field.m);
        (self.lift(l), o.lift(l))
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        if !Arc::ptr_eq(&self.field, &o.field) {
            let (a, b) = self.aligned(o);
            return a.add(&b);
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &Q) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        if !Arc::ptr_eq(&self.field, &o.field) {
            if let Some(q) = o.as_rational() {
                return self.scale(&q);
            }
            if let Some(q) = self.as_rational() {
                return o.scale(&q);
            }
            let (a, b) = self.aligned(o);
            return a.mul(&b);
        }
        let phi = self.field.phi;
        if phi == 1 {
            return Cyclotomic { field: self.field.clone(), coeffs: vec![&self.coeffs[0] * &o.coeffs[0]] };
        }
        if self.is_zero() || o.is_zero() {
            return Cyclotomic::zero_in(&self.field);
        }
        let mut conv = vec![Q::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] = &conv[i + j] + &(a * b);
                }
            }
        }
        let mut out = conv[..phi].to_vec();
        for (k, c) in conv.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&self.field.powers[k]) {
                if p != 0 {
                    *o = &*o + &(c * &Q::int(p));
                }
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs: out }
    }

    /// Galois automorphism `ζ ↦ ζ^k` for `k` coprime to the field order.
    pub fn galois(&self, k: u32) -> Cyclotomic {
        let m = self.field.m as usize;
        let mut out = Cyclotomic::zero_in(&self.field);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (j * k as usize) % m;
            for (o, &p) in out.coeffs.iter_mut().zip(&self.field.powers[e]) {
                if p != 0 {
                    *o = &*o + &(c * &Q::int(p));
                }
            }
        }
        out
    }

    /// Complex conjugation `ζ ↦ ζ^-1`.
    pub fn conj(&self) -> Cyclotomic {
        if self.field.phi == 1 {
            return self.clone();
        }
        self.galois(self.field.m - 1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Q {
        let mut p = Cyclotomic::from_q_in(Q::one(), &self.field);
        for &k in &self.field.units {
            p = p.mul(&self.galois(k));
        }
        p.as_rational().expect("norm is rational")
    }

    pub fn inverse(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::invalid("division by zero in cyclotomic field"));
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclotomic::from_q_in(q.recip(), &self.field));
        }
        // a^-1 = (product of the other conjugates) / N(a).
        let mut p = Cyclotomic::from_q_in(Q::one(), &self.field);
        for &k in &self.field.units {
            if k != 1 {
                p = p.mul(&self.galois(k));
            }
        }
        let n = self.mul(&p).as_rational().expect("norm is rational");
        Ok(p.scale(&n.recip()))
    }

    /// Image under the complex embedding `ζ ↦ exp(2πik/m)`.
    pub fn embed(&self, k: u32) -> Complex64 {
        let m = self.field.m as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let ang = std::f64::consts::TAU * (j as f64) * (k as f64) / m;
                z += Complex64::from_polar(c.to_f64(), ang);
            }
        }
        z
    }

    /// If the element equals a root of unity whose order divides `m`, return it.
    pub fn as_root_of_unity(&self, m: u32) -> Option<RootOfUnity> {
        let z = self.embed(1);
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let l = self.field.m.lcm(&m);
        let k = (z.arg() / std::f64::consts::TAU * l as f64).round() as i64;
        let r = RootOfUnity::new(k, l);
        (r.exponent_in(m).is_some() && r.to_cyclotomic() == *self).then_some(r)
    }

    /// Parse `a0 + a1 z + a2 z^2 ...` (`z` or `ζ` for the generator) in `Q(ζ_m)`.
    pub fn parse(text: &str, m: u32) -> Result<Cyclotomic> {
        let bad = |why: &str| Error::invalid(format!("bad cyclotomic `{text}`: {why}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('ζ', "z");
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<Q> = Vec::new();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (coef, power) = match body.find('z') {
                None => (Q::parse(body)?, 0usize),
                Some(p) => {
                    let c = body[..p].trim_end_matches('*');
                    let c = if c.is_empty() { Q::one() } else { Q::parse(c)? };
                    let rest = &body[p + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        let r = rest.strip_prefix('^').ok_or_else(|| bad("expected ^"))?;
                        let e: i64 = r.parse().map_err(|_| bad("bad exponent"))?;
                        e.rem_euclid(m as i64) as usize
                    };
                    (c, e)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Q::zero());
            }
            coeffs[power] = &coeffs[power] + &(&coef * &Q::int(sign));
        }
        Ok(Cyclotomic::from_powers(&coeffs, m))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Cyclotomic) -> bool {
        if Arc::ptr_eq(&self.field, &o.field) {
            return self.coeffs == o.coeffs;
        }
        let (a, b) = self.aligned(o);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Q::zero();
            let a = c.abs();
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let z = match k {
                0 => String::new(),
                1 => format!("z{}", self.field.m),
                _ => format!("z{}^{k}", self.field.m),
            };
            let body = if k == 0 {
                a.to_string()
            } else if a.is_one() {
                z
            } else {
                format!("{a}*{z}")
            };
            write!(f, "{sep}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_reduce() {
        let a = RootOfUnity::new(2, 4);
        assert_eq!(a, RootOfUnity::new(1, 2));
        assert_eq!(a.mul(&a), RootOfUnity::ONE);
        assert_eq!(a.display_in(4), "ζ^2 (mod 4)");
        assert_eq!(RootOfUnity::new(1, 3).mul(&RootOfUnity::new(1, 2)), RootOfUnity::new(5, 6));
    }

    #[test]
    fn arithmetic_in_q_zeta3() {
        let z = Cyclotomic::root(1, 3);
        // 1 + ζ + ζ² = 0
        let s = Cyclotomic::one().add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
        assert_eq!(z.mul(&z).mul(&z), Cyclotomic::one());
        assert_eq!(z.conj(), z.mul(&z));
        let w = Cyclotomic::parse("2 - 3/2 z", 3).unwrap();
        assert_eq!(w.mul(&w.inverse().unwrap()), Cyclotomic::one());
    }

    #[test]
    fn mixed_orders_embed() {
        let i = Cyclotomic::root(1, 4);
        let minus_one = Cyclotomic::from_q(Q::int(-1));
        assert_eq!(i.mul(&i), minus_one);
        let w = Cyclotomic::root(1, 3);
        let prod = i.mul(&w);
        assert_eq!(prod, Cyclotomic::root(7, 12));
        assert_eq!(prod.as_root_of_unity(12), Some(RootOfUnity::new(7, 12)));
        assert_eq!(Cyclotomic::root(1, 8).as_root_of_unity(4), None);
    }

    #[test]
    fn norms_are_rational() {
        let z = Cyclotomic::root(1, 5);
        let a = Cyclotomic::one().sub(&z);
        assert_eq!(a.norm(), Q::int(5));
    }
}
