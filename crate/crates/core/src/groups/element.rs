use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

/// A permutation of `{0, .., n-1}` stored as its image array.
///
/// Products compose left to right on points: in `a * b` the permutation `a`
/// is applied first, so `(a * b)(x) = b(a(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u16).collect())
    }

    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::invalid(format!("not a bijection: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u16;
        }
        Perm(inv)
    }

    /// Parse disjoint-cycle notation with 1-based points, e.g. `(1 2)(3 4 5)`.
    /// Commas are accepted as separators; `()` and `e` denote the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let t = text.trim();
        let mut images: Vec<u16> = (0..degree as u16).collect();
        if t == "e" || t == "()" || t.is_empty() {
            return Ok(Perm(images));
        }
        let mut rest = t;
        let mut used = vec![false; degree];
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::invalid(format!("bad cycle notation `{text}`")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| Error::invalid(format!("unclosed cycle in `{text}`")))?;
            let body = &body_start[..close];
            let points: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::invalid(format!("bad point `{s}` in `{text}`")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(Error::invalid(format!("point {p} outside 1..{degree} in `{text}`")));
                }
                if used[p - 1] {
                    return Err(Error::invalid(format!("cycles in `{text}` are not disjoint")));
                }
                used[p - 1] = true;
            }
            for w in 0..points.len() {
                let from = points[w] - 1;
                let to = points[(w + 1) % points.len()] - 1;
                images[from] = to as u16;
            }
            rest = body_start[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of an ambient group: a permutation or a rational vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Perm(Perm),
    Vector(Vec<Rat>),
}

impl GroupElement {
    /// Group product; panics if the two elements come from different backends.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        match (self, other) {
            (GroupElement::Perm(a), GroupElement::Perm(b)) => {
                assert_eq!(a.degree(), b.degree(), "permutation degree mismatch");
                GroupElement::Perm(a.then(b))
            }
            (GroupElement::Vector(a), GroupElement::Vector(b)) => {
                assert_eq!(a.len(), b.len(), "lattice rank mismatch");
                GroupElement::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("mixed group backends"),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Perm(a) => GroupElement::Perm(a.inverse()),
            GroupElement::Vector(v) => GroupElement::Vector(v.iter().map(|x| -x).collect()),
        }
    }

    /// `self * g * self^-1`.
    pub fn conjugate(&self, g: &GroupElement) -> GroupElement {
        self.mul(g).mul(&self.inverse())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Perm(p) => p.is_identity(),
            GroupElement::Vector(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            GroupElement::Perm(p) => Some(p),
            GroupElement::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[Rat]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            GroupElement::Perm(_) => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Perm(p) => write!(f, "{p}"),
            GroupElement::Vector(v) => {
                let parts: Vec<String> = v.iter().map(fmt_rat).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    let t = text.trim();
    let bad = || Error::invalid(format!("bad rational `{text}`"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn rat_floor(r: &Rat) -> i64 {
    *r.floor().numer()
}
