//! Full-rank lattices in `Q^n`, stored canonically as an integer Hermite
//! normal form over the smallest common denominator.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::element::{rat_floor, Rat};
use crate::error::{Error, Result};
use crate::intlin;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Lattice {
    /// Smallest positive integer `d` with `d * L` inside `Z^n`.
    denom: i128,
    /// Row HNF of `d * L`; square, upper triangular, positive diagonal.
    hnf: Vec<Vec<i128>>,
}

fn lcm_denoms<'a>(vals: impl Iterator<Item = &'a Rat>) -> i128 {
    vals.fold(1i128, |acc, r| acc.lcm(&(*r.denom() as i128)))
}

impl Lattice {
    /// The standard lattice `Z^n`.
    pub fn integral(rank: usize) -> Self {
        let hnf = (0..rank)
            .map(|i| (0..rank).map(|j| i128::from(i == j)).collect())
            .collect();
        Lattice { denom: 1, hnf }
    }

    /// Lattice spanned by the given vectors; must have full rank `rank`.
    pub fn from_generators(vectors: &[Vec<Rat>], rank: usize) -> Result<Self> {
        for v in vectors {
            if v.len() != rank {
                return Err(Error::invalid(format!(
                    "vector of length {} in rank-{rank} lattice",
                    v.len()
                )));
            }
        }
        let d = lcm_denoms(vectors.iter().flatten());
        let rows: Vec<Vec<i128>> = vectors
            .iter()
            .map(|v| v.iter().map(|r| scale(r, d)).collect())
            .collect();
        Self::from_scaled(d, &rows, rank)
    }

    fn from_scaled(d: i128, rows: &[Vec<i128>], rank: usize) -> Result<Self> {
        let h = intlin::hnf(rows);
        if h.len() != rank || (0..rank).any(|i| h[i][i] == 0) {
            return Err(Error::invalid("lattice generators are not of full rank"));
        }
        // Reduce the denominator: divide out the content common to d and all entries.
        let mut g = d;
        for v in h.iter().flatten() {
            g = g.gcd(v);
        }
        let h = if g > 1 {
            let rows: Vec<Vec<i128>> = h.iter().map(|r| r.iter().map(|v| v / g).collect()).collect();
            intlin::hnf(&rows)
        } else {
            h
        };
        Ok(Lattice { denom: d / g, hnf: h })
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    pub fn hnf_rows(&self) -> &[Vec<i128>] {
        &self.hnf
    }

    /// Canonical basis vectors (HNF rows divided by the denominator).
    pub fn basis(&self) -> Vec<Vec<Rat>> {
        self.hnf
            .iter()
            .map(|r| r.iter().map(|&v| Rat::new(v as i64, self.denom as i64)).collect())
            .collect()
    }

    /// Covolume `|det(basis)|` as a rational.
    pub fn covolume(&self) -> Rat {
        let mut num = 1i128;
        for i in 0..self.rank() {
            num *= self.hnf[i][i];
        }
        let den = self.denom.pow(self.rank() as u32);
        let g = num.gcd(&den);
        Rat::new((num / g) as i64, (den / g) as i64)
    }

    /// Canonical representative of `v + L`: coordinates reduced against the HNF pivots.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let d = Rat::from_integer(self.denom as i64);
        let mut w: Vec<Rat> = v.iter().map(|x| x * d).collect();
        for (i, row) in self.hnf.iter().enumerate() {
            let q = rat_floor(&(w[i] / Rat::from_integer(row[i] as i64)));
            if q != 0 {
                for (wj, &rj) in w.iter_mut().zip(row) {
                    *wj -= Rat::from_integer(q * rj as i64);
                }
            }
        }
        w.into_iter().map(|x| x / d).collect()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        v.len() == self.rank() && self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    fn rescaled(&self, d: i128) -> Vec<Vec<i128>> {
        let f = d / self.denom;
        self.hnf.iter().map(|r| r.iter().map(|v| v * f).collect()).collect()
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let n = self.rank();
        let d = self.denom.lcm(&other.denom);
        let a = self.rescaled(d);
        let b = other.rescaled(d);
        // Row space of [[A, A], [B, 0]]; rows with vanishing left half span A ∩ B.
        let mut rows = Vec::with_capacity(2 * n);
        for r in &a {
            rows.push(r.iter().chain(r.iter()).copied().collect::<Vec<_>>());
        }
        for r in &b {
            rows.push(r.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        let h = intlin::hnf(&rows);
        let tail: Vec<Vec<i128>> = h.iter().skip(n).map(|r| r[n..].to_vec()).collect();
        Self::from_scaled(d, &tail, n).expect("intersection of full-rank lattices has full rank")
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let d = self.denom.lcm(&other.denom);
        let mut rows = self.rescaled(d);
        rows.extend(other.rescaled(d));
        Self::from_scaled(d, &rows, self.rank()).expect("sum of full-rank lattices has full rank")
    }

    /// Integer coordinates of `v` with respect to the canonical basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<i128>> {
        let d = Rat::from_integer(self.denom as i64);
        let mut w: Vec<Rat> = v.iter().map(|x| x * d).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for (i, row) in self.hnf.iter().enumerate() {
            let c = w[i] / Rat::from_integer(row[i] as i64);
            if !c.is_integer() {
                return None;
            }
            let ci = *c.numer();
            for (wj, &rj) in w.iter_mut().zip(row) {
                *wj -= Rat::from_integer(ci * rj as i64);
            }
            coords.push(ci as i128);
        }
        if w.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    /// Coset representatives of `sub` in `self` (requires `sub ⊆ self`), zero first.
    ///
    /// Representatives are the integer points `Σ a_i b_i` with `0 <= a_i < h_ii`, where
    /// `b_i` is the canonical basis of `self` and `h` the HNF of `sub` in those coordinates.
    pub fn transversal(&self, sub: &Lattice) -> Vec<Vec<Rat>> {
        let coords: Vec<Vec<i128>> = sub
            .basis()
            .iter()
            .map(|b| self.coordinates(b).expect("sublattice"))
            .collect();
        let h = intlin::hnf(&coords);
        let bounds: Vec<i128> = (0..self.rank()).map(|i| h[i][i]).collect();
        let basis = self.basis();
        let mut out = Vec::new();
        let mut a = vec![0i128; self.rank()];
        loop {
            let mut v = vec![Rat::zero(); self.rank()];
            for (ai, bi) in a.iter().zip(&basis) {
                for (vj, bj) in v.iter_mut().zip(bi) {
                    *vj += bj * Rat::from_integer(*ai as i64);
                }
            }
            out.push(v);
            // Odometer, last coordinate fastest.
            let mut k = self.rank();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                a[k] += 1;
                if a[k] < bounds[k] {
                    break;
                }
                a[k] = 0;
            }
        }
    }

    /// Index `[self : sub]` as determinant ratio.
    pub fn index_of(&self, sub: &Lattice) -> i128 {
        let r = sub.covolume() / self.covolume();
        debug_assert!(r.is_integer());
        *r.numer() as i128
    }

    /// Invariant factors of `self / sub` from the Smith normal form.
    pub fn quotient_invariants(&self, sub: &Lattice) -> Vec<i128> {
        let coords: Vec<Vec<i128>> = sub
            .basis()
            .iter()
            .map(|b| self.coordinates(b).expect("sublattice"))
            .collect();
        intlin::smith_diagonal(&coords).into_iter().filter(|d| !d.is_one()).collect()
    }

    /// `m * L`.
    pub fn scaled(&self, m: i64) -> Lattice {
        let vs: Vec<Vec<Rat>> = self
            .basis()
            .iter()
            .map(|b| b.iter().map(|x| x * Rat::from_integer(m)).collect())
            .collect();
        Lattice::from_generators(&vs, self.rank()).expect("non-zero scaling preserves rank")
    }
}

fn scale(r: &Rat, d: i128) -> i128 {
    (*r.numer() as i128) * (d / *r.denom() as i128)
}
