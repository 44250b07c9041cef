//! Exact integer and rational linear algebra on small dense matrices:
//! fraction-free determinants and ranks, companion matrices, matrix
//! powers, Hermite and Smith normal forms, integer kernels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Euclid, One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn zmat_identity(n: usize) -> ZMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn zmat_mul(a: &ZMat, b: &ZMat) -> ZMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut c = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    c[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    c
}

pub fn zmat_pow(a: &ZMat, mut e: u64) -> ZMat {
    let n = a.len();
    let mut acc = zmat_identity(n);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = zmat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = zmat_mul(&base, &base);
        }
    }
    acc
}

/// Bareiss fraction-free determinant (consumes its argument).
pub fn det_bigint(mut m: ZMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Rank over Q of an integer matrix, fraction-free.
pub fn rank_bigint(mut m: ZMat) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let pivot = (row..rows).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &m[i][j] * &m[row][col] - &m[i][col] * &m[row][j];
                m[i][j] = &num / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
    }
    rank
}

/// Rank over Q with an i128 fast path, falling back to BigInt on overflow.
pub fn rank_i128(m: &[Vec<i128>]) -> usize {
    fn try_fast(mut m: Vec<Vec<i128>>) -> Option<usize> {
        let rows = m.len();
        if rows == 0 {
            return Some(0);
        }
        let cols = m[0].len();
        let mut rank = 0;
        let mut prev: i128 = 1;
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(row, p);
            for i in row + 1..rows {
                for j in col + 1..cols {
                    let a = m[i][j].checked_mul(m[row][col])?;
                    let b = m[i][col].checked_mul(m[row][j])?;
                    m[i][j] = a.checked_sub(b)? / prev;
                }
                m[i][col] = 0;
            }
            prev = m[row][col];
            rank += 1;
            row += 1;
        }
        Some(rank)
    }
    if let Some(r) = try_fast(m.to_vec()) {
        return r;
    }
    let big: ZMat = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    rank_bigint(big)
}

/// Companion matrix of a monic polynomial (coefficients ascending,
/// last = 1), with the coefficient column last: C e_i = e_{i+1} for
/// i < n-1 and C e_{n-1} = -(c_0 e_0 + ... + c_{n-1} e_{n-1}).
pub fn companion(coeffs: &[BigInt]) -> ZMat {
    let n = coeffs.len() - 1;
    assert!(coeffs[n].is_one(), "companion needs a monic polynomial");
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        m[i][i - 1] = BigInt::one();
    }
    for i in 0..n {
        m[i][n - 1] = -coeffs[i].clone();
    }
    m
}

pub fn qmat_from_z(m: &ZMat) -> QMat {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect()
}

pub fn qmat_identity(n: usize) -> QMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut c = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    c[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    c
}

/// Gauss-Jordan inverse; panics on singular input (callers pass
/// provably invertible matrices).
pub fn qmat_inverse(a: &QMat) -> QMat {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !m[i][col].is_zero())
            .expect("matrix is singular");
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..2 * n {
                    let t = &f * &m[col][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn qmat_rank(mut m: QMat) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for i in row + 1..rows {
            if !m[i][col].is_zero() {
                let f = &m[i][col] * &inv;
                for j in col..cols {
                    let t = &f * &m[row][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// Row Hermite normal form of an integer matrix. Returns (H, U) with
/// U unimodular, U * M = H, H upper staircase with positive pivots,
/// entries above each pivot reduced.
pub fn hnf_with_transform(m: &ZMat) -> (ZMat, ZMat) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut h = m.clone();
    let mut u = zmat_identity(rows);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclidean reduction within the column.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !h[i][col].is_zero()
                    && best.map_or(true, |b| h[i][col].abs() < h[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut any = false;
            for i in pivot_row + 1..rows {
                if !h[i][col].is_zero() {
                    let q = div_round(&h[i][col], &h[pivot_row][col]);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let t = &q * &h[pivot_row][j];
                            h[i][j] -= t;
                        }
                        for j in 0..rows {
                            let t = &q * &u[pivot_row][j];
                            u[i][j] -= t;
                        }
                    }
                    if !h[i][col].is_zero() {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            for j in 0..cols {
                h[pivot_row][j] = -h[pivot_row][j].clone();
            }
            for j in 0..rows {
                u[pivot_row][j] = -u[pivot_row][j].clone();
            }
        }
        // Reduce entries above the pivot.
        for i in 0..pivot_row {
            let q = Euclid::div_euclid(&h[i][col], &h[pivot_row][col]);
            if !q.is_zero() {
                for j in 0..cols {
                    let t = &q * &h[pivot_row][j];
                    h[i][j] -= t;
                }
                for j in 0..rows {
                    let t = &q * &u[pivot_row][j];
                    u[i][j] -= t;
                }
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest-integer division, ties toward zero; keeps HNF entries small.
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form invariant factors of an integer matrix.
pub fn snf_invariants(m: &ZMat) -> Vec<BigInt> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut top = 0;
    while top < rows.min(cols) {
        // Find a nonzero pivot.
        let mut piv = None;
        'outer: for i in top..rows {
            for j in top..cols {
                if !a[i][j].is_zero() {
                    piv = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            // Clear column.
            let mut done = true;
            for i in top + 1..rows {
                if !a[i][top].is_zero() {
                    let q = div_round(&a[i][top], &a[top][top]);
                    for j in top..cols {
                        let t = &q * &a[top][j];
                        a[i][j] -= t;
                    }
                    if !a[i][top].is_zero() {
                        // Swap to make the smaller entry the pivot.
                        a.swap(top, i);
                        done = false;
                    }
                }
            }
            if !done {
                continue;
            }
            // Clear row.
            for j in top + 1..cols {
                if !a[top][j].is_zero() {
                    let q = div_round(&a[top][j], &a[top][top]);
                    for i in top..rows {
                        let t = &q * &a[i][top];
                        a[i][j] -= t;
                    }
                    if !a[top][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(top, j);
                        }
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        // Ensure divisibility of the remaining block by the pivot.
        let mut redo = false;
        'div: for i in top + 1..rows {
            for j in top + 1..cols {
                if !(&a[i][j] % &a[top][top]).is_zero() {
                    for jj in top..cols {
                        let t = a[i][jj].clone();
                        a[top][jj] += t;
                    }
                    redo = true;
                    break 'div;
                }
            }
        }
        if redo {
            continue;
        }
        out.push(a[top][top].abs());
        top += 1;
    }
    out
}

/// Basis (rows) of the saturated kernel lattice { v in Z^l : v . gamma = 0 }.
pub fn kernel_of_vector(gamma: &[i64]) -> ZMat {
    let l = gamma.len();
    // HNF of the column vector gamma^T: U * gamma = (g, 0, ..., 0)^T, so
    // rows 1.. of U span the kernel, and they are saturated.
    let col: ZMat = gamma.iter().map(|&x| vec![BigInt::from(x)]).collect();
    let (h, u) = hnf_with_transform(&col);
    assert!(!h[0][0].is_zero(), "zero gamma vector");
    let mut rows: ZMat = u[1..].to_vec();
    debug_assert_eq!(rows.len(), l - 1);
    for r in rows.iter_mut() {
        let dot: BigInt = r
            .iter()
            .zip(gamma)
            .map(|(a, &g)| a * BigInt::from(g))
            .sum();
        assert!(dot.is_zero());
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: &[&[i64]]) -> ZMat {
        m.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn det_and_rank() {
        let m = z(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(det_bigint(m.clone()), BigInt::from(5));
        assert_eq!(rank_bigint(m), 3);
        let s = z(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(rank_bigint(s.clone()), 2);
        let s128: Vec<Vec<i128>> = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]];
        assert_eq!(rank_i128(&s128), 2);
    }

    #[test]
    fn companion_char_poly() {
        // Companion of x^2 - 3x + 2 has eigenvalues 1 and 2.
        let c = companion(&[BigInt::from(2), BigInt::from(-3), BigInt::from(1)]);
        assert_eq!(
            det_bigint(c.clone()),
            BigInt::from(2),
            "det = constant term (n even)"
        );
        let tr = &c[0][0] + &c[1][1];
        assert_eq!(tr, BigInt::from(3));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = z(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        let q = qmat_from_z(&m);
        let inv = qmat_inverse(&q);
        assert_eq!(qmat_mul(&q, &inv), qmat_identity(3));
    }

    #[test]
    fn hnf_unimodular_transform() {
        let m = z(&[&[6, 4, 2], &[4, 2, 0], &[0, 0, 3]]);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(zmat_mul(&u, &m), h);
        assert_eq!(det_bigint(u).abs(), BigInt::one());
    }

    #[test]
    fn snf_example() {
        let m = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        assert_eq!(
            snf_invariants(&m),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn kernel_saturated() {
        let gamma = [-5i64, -2, 3, 4];
        let k = kernel_of_vector(&gamma);
        assert_eq!(k.len(), 3);
        assert_eq!(snf_invariants(&k), vec![BigInt::one(); 3]);
    }
}
