//! Dense exact polynomials over Z and Q:
//! cyclotomic polynomials, Psi_m = T^m - 1, products, exact division,
//! resultants and discriminants.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix;

/// Polynomial over Z, coefficients in ascending degree order, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub c: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly {
            c: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// T^m - 1.
    pub fn psi(m: u32) -> Self {
        let mut c = vec![BigInt::zero(); m as usize + 1];
        c[0] = -BigInt::one();
        c[m as usize] = BigInt::one();
        ZPoly { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.c.is_empty() {
            0
        } else {
            self.c.len() - 1
        }
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(c)
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.c.iter().enumerate() {
            c[i] += b;
        }
        ZPoly::from_coeffs(c)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.c.iter().enumerate() {
            c[i] -= b;
        }
        ZPoly::from_coeffs(c)
    }

    /// Exact division; returns None if the division leaves a remainder.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.c.clone();
        let dn = d.c.len();
        let lead = d.lc();
        let qdeg = rem.len() - dn;
        let mut q = vec![BigInt::zero(); qdeg + 1];
        for i in (0..=qdeg).rev() {
            let top = rem[i + dn - 1].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % &lead) != BigInt::zero() {
                return None;
            }
            let f = top / &lead;
            for (j, dc) in d.c.iter().enumerate() {
                rem[i + j] -= &f * dc;
            }
            q[i] = f;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(ZPoly::from_coeffs(q))
    }

    pub fn derivative(&self) -> ZPoly {
        if self.c.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> ZPoly {
        let mut acc = ZPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

static CYCLO_CACHE: OnceLock<Mutex<HashMap<u32, ZPoly>>> = OnceLock::new();

/// The d-th cyclotomic polynomial Phi_d, exact.
pub fn cyclotomic(d: u32) -> ZPoly {
    assert!(d >= 1);
    let cache = CYCLO_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    // Phi_d = (T^d - 1) / prod_{e | d, e < d} Phi_e
    let mut num = ZPoly::psi(d);
    for e in crate::nt::divisors(d) {
        if e == d {
            continue;
        }
        let phi_e = cyclotomic(e);
        num = num.div_exact(&phi_e).expect("cyclotomic division is exact");
    }
    cache.lock().unwrap().insert(d, num.clone());
    num
}

/// Product of Phi_d over a multiset of levels.
pub fn phi_product(levels: &[u32]) -> ZPoly {
    let mut acc = ZPoly::one();
    for &d in levels {
        acc = acc.mul(&cyclotomic(d));
    }
    acc
}

/// Resultant of f and g over Z, via the Sylvester matrix.
pub fn resultant(f: &ZPoly, g: &ZPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let m = f.degree();
    let n = g.degree();
    if m == 0 {
        return num_traits::pow::pow(f.c[0].clone(), n);
    }
    if n == 0 {
        return num_traits::pow::pow(g.c[0].clone(), m);
    }
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.c.iter().enumerate() {
            s[i][i + m - j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.c.iter().enumerate() {
            s[n + i][i + n - j] = c.clone();
        }
    }
    matrix::det_bigint(s)
}

/// Discriminant of f: (-1)^{d(d-1)/2} Res(f, f') / lc(f).
pub fn discriminant(f: &ZPoly) -> BigInt {
    let d = f.degree();
    assert!(d >= 1);
    let r = resultant(f, &f.derivative());
    let q = &r / f.lc();
    debug_assert!((&q * f.lc() - &r).is_zero());
    if (d * (d - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Discriminant of a polynomial with rational coefficients.
pub fn discriminant_rational(coeffs: &[BigRational]) -> BigRational {
    let mut den = BigInt::one();
    for c in coeffs {
        den = num_integer::lcm(den, c.denom().clone());
    }
    let int_coeffs: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let f = ZPoly::from_coeffs(int_coeffs);
    let d = f.degree();
    let disc = discriminant(&f);
    // disc(c f) = c^{2d-2} disc(f)
    let scale = num_traits::pow::pow(den, 2 * d - 2);
    BigRational::new(disc, scale)
}

/// p-adic valuation of a nonzero rational.
pub fn val_p(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), ZPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), ZPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), ZPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ZPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ZPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        for d in 1..200u32 {
            assert_eq!(cyclotomic(d).degree() as u32, crate::nt::totient(d));
        }
    }

    #[test]
    fn psi_factors() {
        for m in 1..60u32 {
            let mut prod = ZPoly::one();
            for d in crate::nt::divisors(m) {
                prod = prod.mul(&cyclotomic(d));
            }
            assert_eq!(prod, ZPoly::psi(m));
        }
    }

    #[test]
    fn resultant_quadratics() {
        // Res(x^2 - 1, x^2 - 4) = (1-4)(1-4) * ... roots +-1, +-2: prod (r_i - s_j) = (1-2)(1+2)(-1-2)(-1+2) = (-1)(3)(-3)(1) = 9
        let f = ZPoly::from_i64(&[-1, 0, 1]);
        let g = ZPoly::from_i64(&[-4, 0, 1]);
        assert_eq!(resultant(&f, &g), BigInt::from(9));
    }

    #[test]
    fn discriminant_quadratic() {
        // disc(ax^2+bx+c) = b^2 - 4ac
        let f = ZPoly::from_i64(&[5, 3, 2]);
        assert_eq!(discriminant(&f), BigInt::from(9 - 40));
    }

    #[test]
    fn discriminant_octic_trinomial() {
        // 5x^8 + 8tx^5 + 3t^3 is singular exactly at t in {0, 1}.
        let at = |t: i64| {
            let f = ZPoly::from_i64(&[3 * t * t * t, 0, 0, 0, 0, 8 * t, 0, 0, 5]);
            discriminant(&f)
        };
        assert!(at(1).is_zero());
        assert!(!at(2).is_zero());
        assert!(!at(-1).is_zero());
    }
}
