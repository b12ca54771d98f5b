//! Dense matrices over cyclotomic numbers with exact elimination.

use std::fmt;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, PartialEq, Eq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> CMat {
        CMat { rows, cols, data: vec![Cyclotomic::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Cyclotomic::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Cyclotomic) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<CMat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(CMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix with a single unit entry at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> CMat {
        let mut m = CMat::zeros(rows, cols);
        m.data[i * cols + j] = Cyclotomic::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = CMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    let prod = if a.is_one() { b.clone() } else if b.is_one() { a.clone() } else { a.mul(b) };
                    out.data[idx] = out.data[idx].add(&prod);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        self.add(&o.scale(&Cyclotomic::from_q(Q::int(-1))))
    }

    pub fn scale(&self, c: &Cyclotomic) -> CMat {
        if c.is_one() {
            return self.clone();
        }
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| if a.is_zero() { a.clone() } else { a.mul(c) }).collect() }
    }

    pub fn scale_q(&self, q: &Q) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(q)).collect() }
    }

    pub fn conj(&self) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(Cyclotomic::conj).collect() }
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Cyclotomic {
        let mut t = Cyclotomic::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add(self.get(i, i));
        }
        t
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &CMat) -> CMat {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut out = CMat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * o.rows + k) * c + j * o.cols + l] = a.mul(b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[CMat]) -> CMat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = CMat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copy `b` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, b: &CMat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j).clone();
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
        let mut out = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    pub fn hstack(parts: &[CMat]) -> CMat {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = CMat::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.paste(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[CMat]) -> CMat {
        let cols = parts.first().map_or(0, |p| p.cols);
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = CMat::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.paste(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    /// If `self = c·I`, return `c`.
    pub fn as_scalar(&self) -> Option<Cyclotomic> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { *v == c } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Scalar `c` with `self = c·o`, if one exists.
    pub fn ratio_to(&self, o: &CMat) -> Option<Cyclotomic> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return None;
        }
        let pos = o.data.iter().position(|x| !x.is_zero())?;
        let c = self.data[pos].mul(&o.data[pos].inverse().ok()?);
        (o.scale(&c) == *self).then_some(c)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inverse().expect("non-zero pivot");
            for j in c..self.cols {
                let v = self.get(r, j);
                if !v.is_zero() {
                    let nv = v.mul(&inv);
                    self.set(r, j, nv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let nv = self.get(i, j).sub(&f.mul(rv));
                    self.set(i, j, nv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : self·v = 0}` as the columns of the returned matrix.
    pub fn nullspace(&self) -> CMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = CMat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, Cyclotomic::one());
            for (r, &p) in pivots.iter().enumerate() {
                let v = m.get(r, f);
                if !v.is_zero() {
                    out.set(p, k, v.neg());
                }
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<CMat> {
        if !self.is_square() {
            return Err(Error::invalid("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut aug = CMat::hstack(&[self.clone(), CMat::identity(n)]);
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::invalid("singular matrix"));
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    /// Flatten row-major into a single row vector.
    pub fn flatten(&self) -> Vec<Cyclotomic> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Cyclotomic>) -> CMat {
        assert_eq!(data.len(), rows * cols);
        CMat { rows, cols, data }
    }

    /// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier, low degree first.
    pub fn char_poly(&self) -> Vec<Cyclotomic> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Cyclotomic::zero(); n + 1];
        coeffs[n] = Cyclotomic::one();
        let mut m = CMat::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k) / k
            let mut next = self.mul(&m);
            let c_prev = coeffs[n - k + 1].clone();
            for i in 0..n {
                let v = next.get(i, i).add(&c_prev);
                next.set(i, i, v);
            }
            m = next;
            let t = self.mul(&m).trace();
            coeffs[n - k] = t.scale(&Q::new(-1, k as i64));
        }
        coeffs
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
