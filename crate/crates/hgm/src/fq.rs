//! Table-based arithmetic in F_q, q = p^e.
//!
//! Elements are encoded as integers in [0, q): the base-p digits of a
//! code are the coefficients of the residue polynomial modulo a fixed
//! monic irreducible of degree e (the lexicographically first one, so
//! constructions are reproducible). Multiplication goes through
//! discrete-log tables; q is capped to keep the tables small.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::nt;

const MAX_Q: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct Fq {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    /// Monic irreducible modulus, coefficients ascending, length e+1.
    pub modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

// Dense polynomial helpers over F_p (ascending coefficients).
fn pm_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pm_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    pm_trim(&mut r);
    let df = f.len() - 1;
    let inv_lead = nt::inv_mod(f[df], p);
    while r.len() > df {
        let k = r.len() - 1 - df;
        let c = nt::mul_mod(r[r.len() - 1], inv_lead, p);
        if c != 0 {
            for i in 0..=df {
                let t = nt::mul_mod(c, f[i], p);
                r[k + i] = (r[k + i] + p - t) % p;
            }
        }
        r.pop();
        pm_trim(&mut r);
    }
    r
}

fn pm_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + nt::mul_mod(x, y, p)) % p;
        }
    }
    pm_rem(&c, f, p)
}

fn pm_powmod(a: &[u64], mut n: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = pm_rem(a, f, p);
    while n > 0 {
        if n & 1 == 1 {
            acc = pm_mulmod(&acc, &base, f, p);
        }
        n >>= 1;
        if n > 0 {
            base = pm_mulmod(&base, &base, f, p);
        }
    }
    acc
}

fn pm_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    pm_trim(&mut a);
    pm_trim(&mut b);
    while !b.is_empty() {
        let r = pm_rem(&a, &pm_monic(&b, p), p);
        a = b;
        b = r;
    }
    a
}

fn pm_monic(a: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    pm_trim(&mut a);
    let inv = nt::inv_mod(*a.last().unwrap(), p);
    for x in a.iter_mut() {
        *x = nt::mul_mod(*x, inv, p);
    }
    a
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = (f.len() - 1) as u32;
    if e == 1 {
        return true;
    }
    // x^{p^e} == x mod f, and gcd(x^{p^{e/l}} - x, f) = 1 for primes l | e.
    let x = vec![0u64, 1];
    let mut t = x.clone();
    let mut frob_at = vec![x.clone()];
    for _ in 0..e {
        t = pm_powmod(&t, p, f, p);
        frob_at.push(t.clone());
    }
    if frob_at[e as usize] != pm_rem(&x, f, p) {
        return false;
    }
    for (l, _) in nt::factor(e as u64) {
        let k = (e as u64 / l) as usize;
        // t_k - x
        let mut diff = frob_at[k].clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        pm_trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        let g = pm_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: u64, e: u32) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1];
    }
    // Iterate constant-first over monic degree-e polynomials.
    let mut coeffs = vec![0u64; e as usize + 1];
    coeffs[e as usize] = 1;
    loop {
        if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // Increment the low digits.
        for c in coeffs.iter_mut().take(e as usize) {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
        assert!(
            coeffs[..e as usize].iter().any(|&c| c != 0),
            "no irreducible polynomial found"
        );
    }
}

impl Fq {
    pub fn new(p: u64, e: u32) -> Result<Fq> {
        if !nt::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::Domain(format!("q = {p}^{e} exceeds the table budget")))?;
        let modulus = first_irreducible(p, e);
        // Find a generator of F_q^* using polynomial arithmetic.
        let qm1 = q - 1;
        let prime_factors: Vec<u64> = nt::factor(qm1).into_iter().map(|(l, _)| l).collect();
        let decode = |code: u64| -> Vec<u64> {
            let mut c = code;
            let mut v = Vec::new();
            while c > 0 {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let encode = |poly: &[u64]| -> u64 {
            let mut acc = 0u64;
            for &c in poly.iter().rev() {
                acc = acc * p + c;
            }
            acc
        };
        let mut gen_code = 0u64;
        if qm1 == 1 {
            gen_code = 1;
        }
        for cand in 2..q {
            let cp = decode(cand);
            let ok = prime_factors
                .iter()
                .all(|&l| encode(&pm_powmod(&cp, qm1 / l, &modulus, p)) != 1);
            if ok {
                gen_code = cand;
                break;
            }
        }
        assert!(gen_code != 0, "no generator found");
        // Build exp/log tables.
        let mut exp = vec![0u32; qm1 as usize];
        let mut log = vec![u32::MAX; q as usize];
        let g = decode(gen_code);
        let mut cur = vec![1u64];
        for i in 0..qm1 {
            let code = encode(&cur);
            exp[i as usize] = code as u32;
            log[code as usize] = i as u32;
            cur = pm_mulmod(&cur, &g, &modulus, p);
        }
        debug_assert_eq!(encode(&cur), 1, "generator order must be q-1");
        // Traces of basis monomials (Tr(y) = y + y^p + ... + y^{p^{e-1}}),
        // then per code by F_p-linearity.
        let mut tr_basis = vec![0u64; e as usize];
        for (j, tb) in tr_basis.iter_mut().enumerate() {
            let mut xj = vec![0u64; j + 1];
            xj[j] = 1;
            let mut sum: Vec<u64> = Vec::new();
            let mut t = xj.clone();
            for _ in 0..e {
                let n = sum.len().max(t.len());
                sum.resize(n, 0);
                for (i, &c) in t.iter().enumerate() {
                    sum[i] = (sum[i] + c) % p;
                }
                pm_trim(&mut sum);
                t = pm_powmod(&t, p, &modulus, p);
            }
            assert!(sum.len() <= 1, "trace must be a constant");
            *tb = sum.first().copied().unwrap_or(0);
        }
        let mut trace = vec![0u32; q as usize];
        for (code, tr) in trace.iter_mut().enumerate() {
            let mut c = code as u64;
            let mut acc = 0u64;
            let mut j = 0;
            while c > 0 {
                acc = (acc + nt::mul_mod(c % p, tr_basis[j], p)) % p;
                c /= p;
                j += 1;
            }
            *tr = acc as u32;
        }
        Ok(Fq {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            trace,
        })
    }

    #[inline]
    pub fn zero(&self) -> u64 {
        0
    }

    #[inline]
    pub fn one(&self) -> u64 {
        1
    }

    pub fn generator(&self) -> u64 {
        self.exp[1] as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut mult = 1u64;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * mult;
            a /= p;
            b /= p;
            mult *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let p = self.p;
        let mut a = a;
        let mut out = 0u64;
        let mut mult = 1u64;
        while a > 0 {
            out += ((p - a % p) % p) * mult;
            a /= p;
            mult *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        self.exp[((la + lb) % (self.q - 1)) as usize] as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let la = self.log[a as usize] as u64;
        self.exp[((self.q - 1 - la) % (self.q - 1)) as usize] as u64
    }

    pub fn pow(&self, a: u64, n: i64) -> u64 {
        if a == 0 {
            assert!(n > 0, "0^n for n <= 0");
            return 0;
        }
        let qm1 = (self.q - 1) as i64;
        let la = self.log[a as usize] as i64;
        let k = (la * (n % qm1)).rem_euclid(qm1);
        self.exp[k as usize] as u64
    }

    /// Discrete log with respect to the fixed generator.
    #[inline]
    pub fn dlog(&self, a: u64) -> u64 {
        assert!(a != 0, "dlog of zero");
        self.log[a as usize] as u64
    }

    /// g^k for the fixed generator.
    #[inline]
    pub fn from_dlog(&self, k: u64) -> u64 {
        self.exp[(k % (self.q - 1)) as usize] as u64
    }

    /// Trace to F_p, as an integer in [0, p).
    #[inline]
    pub fn trace_to_fp(&self, a: u64) -> u64 {
        self.trace[a as usize] as u64
    }

    /// Image of an integer under Z -> F_p c F_q.
    pub fn embed_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        let digits = r.to_u64_digits().1;
        digits.first().copied().unwrap_or(0)
    }

    /// Image of a rational with p-unit denominator.
    pub fn embed_rational(&self, x: &BigRational) -> Result<u64> {
        let den = self.embed_int(x.denom());
        if den == 0 {
            return Err(Error::BadPrime {
                p: self.p,
                kind: "dividing a denominator",
                expected: "a p-unit",
            });
        }
        Ok(self.mul(self.embed_int(x.numer()), self.inv(den)))
    }

    /// All nonzero elements, in generator-power order.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        self.exp.iter().map(|&c| c as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = Fq::new(7, 1).unwrap();
        assert_eq!(f.q, 7);
        for a in 0..7u64 {
            for b in 0..7u64 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
            }
        }
        assert_eq!(f.trace_to_fp(3), 3);
    }

    #[test]
    fn f8_structure() {
        let f = Fq::new(2, 3).unwrap();
        assert_eq!(f.q, 8);
        // x + x = 0 in characteristic 2.
        for a in 0..8u64 {
            assert_eq!(f.add(a, a), 0);
        }
        // Fermat: a^8 = a.
        for a in 1..8u64 {
            assert_eq!(f.pow(a, 8), a);
        }
        // Trace is F_2-linear and not identically zero.
        assert!((0..8).any(|a| f.trace_to_fp(a) == 1));
        let t0 = (0..8u64).filter(|&a| f.trace_to_fp(a) == 0).count();
        assert_eq!(t0, 4);
    }

    #[test]
    fn f25_generator_order() {
        let f = Fq::new(5, 2).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut cur = f.one();
        for _ in 0..24 {
            cur = f.mul(cur, g);
            seen.insert(cur);
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn field_axioms_f27() {
        let f = Fq::new(3, 3).unwrap();
        for a in 0..27u64 {
            for b in 0..27u64 {
                // Commutativity spot checks and distributivity.
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                let c = 7u64;
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
        for a in 1..27u64 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn trace_surjective_and_balanced() {
        for (p, e) in [(3u64, 2u32), (5, 2), (7, 2), (2, 4)] {
            let f = Fq::new(p, e).unwrap();
            let mut counts = vec![0u64; p as usize];
            for a in 0..f.q {
                counts[f.trace_to_fp(a) as usize] += 1;
            }
            // Each trace value is hit q/p times.
            assert!(counts.iter().all(|&c| c == f.q / p));
        }
    }

    #[test]
    fn embed_rational_works() {
        let f = Fq::new(7, 2).unwrap();
        let x = BigRational::new(BigInt::from(3), BigInt::from(2));
        let v = f.embed_rational(&x).unwrap();
        assert_eq!(f.mul(v, f.embed_int(&BigInt::from(2))), 3);
    }
}
