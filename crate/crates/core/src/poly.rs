//! Univariate polynomials over cyclotomic fields, and root finding inside the field.
//!
//! Coefficient vectors are stored lowest degree first.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::cyclotomic::{CycloField, Cyclotomic};
use crate::rational::Q;

pub type Poly = Vec<Cyclotomic>;

pub fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Cyclotomic::is_zero) {
        p.pop();
    }
}

pub fn degree(p: &Poly) -> usize {
    let mut q = p.clone();
    trim(&mut q);
    q.len().saturating_sub(1)
}

pub fn eval(p: &Poly, x: &Cyclotomic) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn derivative(p: &Poly) -> Poly {
    let mut d: Poly = p.iter().enumerate().skip(1).map(|(k, c)| c.scale(&Q::int(k as i64))).collect();
    if d.is_empty() {
        d.push(Cyclotomic::zero());
    }
    d
}

fn monic(p: &Poly) -> Poly {
    let lead = p.last().expect("non-empty").inverse().expect("non-zero leading coefficient");
    p.iter().map(|c| c.mul(&lead)).collect()
}

/// Quotient and remainder of `a / b`.
pub fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut b = b.clone();
    trim(&mut b);
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inverse().expect("division by zero polynomial");
    if r.len() < b.len() {
        return (vec![Cyclotomic::zero()], r);
    }
    let mut q = vec![Cyclotomic::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].mul(&inv);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = r[i + j].sub(&c.mul(bj));
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(Cyclotomic::is_zero)
}

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !is_zero_poly(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Monic polynomial with the same roots as `p`, each simple.
pub fn squarefree_part(p: &Poly) -> Poly {
    let g = gcd(p, &derivative(p));
    let (q, _) = divrem(p, &g);
    monic(&q)
}

fn embed_poly(p: &Poly, field: u32, k: u32) -> Vec<Complex64> {
    p.iter().map(|c| c.lift(field).embed(k)).collect()
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

/// All complex roots of a polynomial (Durand-Kerner with Newton polishing).
pub fn complex_roots(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let a: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let bound = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (bound / 2.0).max(0.5)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = horner(&a, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let da: Vec<Complex64> = a.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    for zi in &mut z {
        for _ in 0..3 {
            let d = horner(&da, *zi);
            if d.norm() > 0.0 {
                *zi -= horner(&a, *zi) / d;
            }
        }
    }
    z
}

fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm()))?;
        if a[p][c].norm() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in 0..n {
            if i != c {
                let f = a[i][c] / a[c][c];
                for j in c..n {
                    let v = a[c][j];
                    a[i][j] -= f * v;
                }
                let v = b[c];
                b[i] -= f * v;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Roots of `p` lying in the cyclotomic field of order `m`, found numerically and
/// confirmed exactly. `p` should be squarefree for reliable numerics.
pub fn roots_in_field(p: &Poly, m: u32) -> Vec<Cyclotomic> {
    let mut p = p.clone();
    trim(&mut p);
    if p.len() < 2 {
        return Vec::new();
    }
    let order = p.iter().fold(m, |acc, c| acc.lcm(&c.field().order()));
    let field = CycloField::get(order);
    let fm = field.order();
    let units = field.units().to_vec();
    let phi = field.degree();
    // One embedding per complex-conjugate pair.
    let reps: Vec<u32> = units.iter().copied().filter(|&k| k == 0 || 2 * k <= fm).collect();
    let root_sets: Vec<Vec<Complex64>> = reps.iter().map(|&k| complex_roots(&embed_poly(&p, fm, k))).collect();
    let vander: Vec<Vec<Complex64>> = units
        .iter()
        .map(|&k| (0..phi).map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * (j as f64 * k as f64) / fm as f64)).collect())
        .collect();
    let n = root_sets[0].len();
    let combos = (n as u64).saturating_pow(reps.len() as u32);
    let mut found: Vec<Cyclotomic> = Vec::new();
    if combos > 2_000_000 {
        return found;
    }
    let mut idx = vec![0usize; reps.len()];
    loop {
        let rhs: Vec<Complex64> = units
            .iter()
            .map(|&k| {
                let (pos, conj) = match reps.iter().position(|&r| r == k) {
                    Some(p) => (p, false),
                    None => (reps.iter().position(|&r| r == fm - k).expect("conjugate pair"), true),
                };
                let z = root_sets[pos][idx[pos]];
                if conj {
                    z.conj()
                } else {
                    z
                }
            })
            .collect();
        if let Some(c) = solve_complex(vander.clone(), rhs) {
            let coeffs: Option<Vec<Q>> = c
                .iter()
                .map(|z| {
                    if z.im.abs() > 1e-6 {
                        return None;
                    }
                    let q = Q::approximate(z.re, 1_000_000)?;
                    ((q.to_f64() - z.re).abs() < 1e-7).then_some(q)
                })
                .collect();
            if let Some(coeffs) = coeffs {
                let lam = Cyclotomic::from_powers(&coeffs, fm);
                if !found.contains(&lam) && eval(&p, &lam).is_zero() {
                    found.push(lam);
                }
            }
        }
        // Odometer over root choices.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return found;
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
