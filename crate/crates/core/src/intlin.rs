//! Integer linear algebra: Hermite and Smith normal forms, and linear
//! systems over `Z/mZ`.

use num_integer::Integer;

/// Row-style Hermite normal form of an integer matrix.
///
/// Returns only the non-zero rows. Each row's leading entry (pivot) is
/// positive, pivots move strictly right, and entries above a pivot lie in
/// `[0, pivot)`. The result is a canonical basis of the row lattice.
pub fn hnf(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= a.len() {
            break;
        }
        // Euclid on the column below pivot_row until one non-zero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..a.len() {
                if a[r][col] != 0 && best.is_none_or(|b| a[r][col].abs() < a[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..a.len() {
                if a[r][col] != 0 {
                    let q = Integer::div_floor(&a[r][col], &a[pivot_row][col]);
                    let (top, rest) = a.split_at_mut(r);
                    sub_scaled(&mut rest[0], &top[pivot_row], q);
                    if rest[0][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col] == 0 {
            continue;
        }
        if a[pivot_row][col] < 0 {
            for v in a[pivot_row].iter_mut() {
                *v = -*v;
            }
        }
        for r in 0..pivot_row {
            let q = Integer::div_floor(&a[r][col], &a[pivot_row][col]);
            if q != 0 {
                let (top, rest) = a.split_at_mut(pivot_row);
                sub_scaled(&mut top[r], &rest[0], q);
            }
        }
        pivot_row += 1;
    }
    a.truncate(pivot_row);
    a
}

fn sub_scaled(target: &mut [i128], src: &[i128], q: i128) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix (non-zero ones only).
pub fn smith_diagonal(rows: &[Vec<i128>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Pick the smallest non-zero entry of the trailing block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nrows {
                let q = Integer::div_floor(&a[i][t], &p);
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    sub_scaled(&mut rest[0], &top[t], q);
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                let q = Integer::div_floor(&a[t][j], &p);
                if q != 0 {
                    for row in a.iter_mut() {
                        let s = row[t];
                        row[j] -= q * s;
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Enforce divisibility of the remaining block by the pivot.
                let mut bad = None;
                'outer: for i in t + 1..nrows {
                    for j in t + 1..ncols {
                        if a[i][j] % p != 0 {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let (top, rest) = a.split_at_mut(i);
                        for (x, y) in top[t].iter_mut().zip(rest[0].iter()) {
                            *x += *y;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest entry in row/column t to the pivot.
            let mut best = (t, t);
            for i in t..nrows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Determinant of a square integer matrix (fraction-free Bareiss).
pub fn det(rows: &[Vec<i128>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut a = rows.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Factor a positive integer into `(prime, exponent)` pairs by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Solve `A x = b (mod m)`; `a` has one row per equation.
///
/// Returns one solution with entries in `[0, m)` or `None` if the system is
/// inconsistent. Works prime-power by prime-power and recombines by CRT.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], m: u64) -> Option<Vec<u64>> {
    let nvars = a.first().map_or(0, |r| r.len());
    if m == 1 {
        return Some(vec![0; nvars]);
    }
    let mut acc = vec![0u64; nvars];
    let mut modulus = 1u64;
    for (p, e) in factorize(m) {
        let pk = p.pow(e);
        let part = solve_prime_power(a, b, p, pk, nvars)?;
        // CRT: combine acc (mod modulus) with part (mod pk).
        let inv = mod_inverse(modulus % pk, pk).expect("coprime moduli");
        for (x, &y) in acc.iter_mut().zip(&part) {
            let diff = (y + pk - *x % pk) % pk;
            let t = (diff as u128 * inv as u128 % pk as u128) as u64;
            *x += modulus * t;
        }
        modulus *= pk;
    }
    Some(acc)
}

fn valuation(mut x: u64, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Modular inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

fn solve_prime_power(a: &[Vec<u64>], b: &[u64], p: u64, pk: u64, nvars: usize) -> Option<Vec<u64>> {
    let neq = a.len();
    let mut mat: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|v| v % pk).collect()).collect();
    let mut rhs: Vec<u64> = b.iter().map(|v| v % pk).collect();
    // Column operations, in order; x = C y is recovered by replaying them backwards.
    let mut col_ops: Vec<ColOp> = Vec::new();
    let mut rank = 0;
    while rank < neq.min(nvars) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in mat.iter().enumerate().skip(rank) {
            for (j, &v) in row.iter().enumerate().skip(rank) {
                let val = valuation(v, p);
                if val != u32::MAX && best.is_none_or(|(_, _, bv)| val < bv) {
                    best = Some((i, j, val));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        mat.swap(rank, bi);
        rhs.swap(rank, bi);
        for row in mat.iter_mut() {
            row.swap(rank, bj);
        }
        col_ops.push(ColOp::Swap(rank, bj));
        let piv = mat[rank][rank];
        let v = valuation(piv, p);
        let unit = piv / p.pow(v);
        let unit_inv = mod_inverse(unit % pk, pk).expect("unit");
        // Row elimination below the pivot.
        for i in rank + 1..neq {
            let x = mat[i][rank];
            if x == 0 {
                continue;
            }
            let f = mul_mod(x / p.pow(v), unit_inv, pk);
            for j in rank..nvars {
                let s = mul_mod(f, mat[rank][j], pk);
                mat[i][j] = (mat[i][j] + pk - s) % pk;
            }
            rhs[i] = (rhs[i] + pk - mul_mod(f, rhs[rank], pk)) % pk;
        }
        // Column elimination right of the pivot.
        for j in rank + 1..nvars {
            let x = mat[rank][j];
            if x == 0 {
                continue;
            }
            let f = mul_mod(x / p.pow(v), unit_inv, pk);
            for row in mat.iter_mut() {
                let s = mul_mod(f, row[rank], pk);
                row[j] = (row[j] + pk - s) % pk;
            }
            col_ops.push(ColOp::Sub { target: j, source: rank, factor: f });
        }
        rank += 1;
    }
    for &r in rhs.iter().skip(rank) {
        if r != 0 {
            return None;
        }
    }
    let mut y = vec![0u64; nvars];
    for i in 0..rank {
        let piv = mat[i][i];
        let v = valuation(piv, p);
        if valuation(rhs[i], p) < v {
            return None;
        }
        let pv = p.pow(v);
        let unit_inv = mod_inverse((piv / pv) % pk, pk).expect("unit");
        y[i] = mul_mod(rhs[i] / pv, unit_inv, pk);
    }
    for op in col_ops.iter().rev() {
        match *op {
            ColOp::Swap(i, j) => y.swap(i, j),
            ColOp::Sub { target, source, factor } => {
                y[source] = (y[source] + pk - mul_mod(factor, y[target], pk)) % pk;
            }
        }
    }
    Some(y)
}

enum ColOp {
    Swap(usize, usize),
    /// `col[target] -= factor * col[source]`
    Sub { target: usize, source: usize, factor: u64 },
}
