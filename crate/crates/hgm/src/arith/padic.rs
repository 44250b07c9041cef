//! The p-adic route: Gauss sums through the Gross-Koblitz
//! factorization -g(omega^{-k}, psi) = pi^{S(k)} prod_i Gamma_p({k p^i / N}),
//! pi^{p-1} = -p, S(k) the base-p digit sum.
//!
//! In the gamma-vector form of the trace formula every character term
//! combines digit sums into a multiple of p-1, so pi-powers become
//! (-p)-powers and the whole sum lives in Z_p. Values of Gamma_p at
//! the needed arguments j/N are produced in one Wilson-product sweep:
//! Gamma_p(m) = (-1)^m prod_{0<j<m, p not| j} j for the integer
//! truncation m of each argument.
//!
//! The trace is an integer below the Deligne bound; computing modulo
//! p^prec with p^prec > 2*bound determines it (centered lift). The
//! root-of--p and Teichmueller orientation conventions are fixed by
//! agreement with the split character-sum path and the point-count
//! oracles, which the test suite enforces.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nt;
use crate::poly;

use super::EngineSpec;

const MAX_MODULUS: u64 = 1 << 62;

fn inv_mod_wide(a: u64, m: u64) -> u64 {
    // Extended gcd in i128; m can approach 2^62.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse of a non-unit");
    old_s.rem_euclid(m as i128) as u64
}

/// Tables of the p-adic gamma function at arguments j/n to a fixed
/// number of digits. Increasing the precision never changes digits
/// already determined.
#[derive(Debug, Clone)]
pub struct PadicContext {
    pub p: u64,
    pub precision: u32,
    pub modulus: u64,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !nt::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let modulus = checked_pow(p, precision)?;
        Ok(PadicContext {
            p,
            precision,
            modulus,
        })
    }

    /// Gamma_p(j/n) mod p^precision for all j in [0, n), gcd(n, p) = 1.
    pub fn gamma_table(&self, n: u64) -> Vec<u64> {
        gamma_table(self.p, self.modulus, n)
    }

    /// Teichmueller representative of a p-unit residue.
    pub fn teichmuller(&self, x: u64) -> u64 {
        let mut y = x % self.modulus;
        for _ in 0..self.precision {
            y = nt::pow_mod(y, self.p, self.modulus);
        }
        y
    }
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc
            .checked_mul(p)
            .filter(|&x| x <= MAX_MODULUS)
            .ok_or(Error::PrecisionExhausted(e))?;
    }
    Ok(acc)
}

fn gamma_table(p: u64, modulus: u64, n: u64) -> Vec<u64> {
    let inv_n = inv_mod_wide(n % modulus, modulus);
    let mut targets: Vec<(u64, u32)> = (0..n)
        .map(|j| (nt::mul_mod(j % modulus, inv_n, modulus), j as u32))
        .collect();
    targets.sort_unstable();
    let mut out = vec![0u64; n as usize];
    let mut prod = 1u64;
    let mut it = targets.iter().peekable();
    // Capture entries with m = 0 (Gamma_p(0) = 1) before sweeping.
    while let Some(&&(m, j)) = it.peek() {
        if m == 0 {
            out[j as usize] = 1;
            it.next();
        } else {
            break;
        }
    }
    let max_m = targets.last().map_or(0, |&(m, _)| m);
    for i in 1..=max_m {
        while let Some(&&(m, j)) = it.peek() {
            if m == i {
                // Gamma_p(m) = (-1)^m prod_{0<j<m, p not| j} j.
                let v = if m % 2 == 1 {
                    (modulus - prod) % modulus
                } else {
                    prod
                };
                out[j as usize] = v;
                it.next();
            } else {
                break;
            }
        }
        if i % p != 0 {
            prod = nt::mul_mod(prod, i % modulus, modulus);
        }
    }
    debug_assert!(it.next().is_none());
    out
}

/// Frobenius trace over F_{p^e} through the Gross-Koblitz route.
///
/// Individual character terms are pi-power weighted units; with the
/// reduced (Moebius) block exponents the pi-power can be negative, so
/// a first integer-only pass finds the exact minimum and the working
/// precision is padded by it before the modular pass.
pub(crate) fn trace_gross_koblitz(spec: &EngineSpec, p: u64, e: u32) -> Result<BigInt> {
    let q = checked_pow(p, e)?;
    let n = q - 1;
    if poly::val_p(&spec.lambda, p) != 0 {
        return Err(Error::BadPrime {
            p,
            kind: "dividing Lambda",
            expected: "a p-unit",
        });
    }
    let bound2 = spec.bound_squared(q);
    let bound = bound2.sqrt() + 1;
    let mut prec = 1u32;
    {
        let mut pw = BigInt::from(p);
        let target = &bound * 2 + 1;
        while pw < target {
            pw *= p;
            prec += 1;
        }
    }
    let pm1 = (p - 1) as i64;
    let mut digit_sum = vec![0u32; n as usize];
    for k in 1..n {
        digit_sum[k as usize] = nt::digit_sum(k, p) as u32;
    }
    // Net pi-exponent of the term at s, in units of p - 1.
    let term_p_exponent = |s: u64| -> Result<i64> {
        let mut pi_exp = 0i64;
        for &(v, c) in &spec.c_inf {
            let idx = (v as u128 * s as u128 % n as u128) as usize;
            pi_exp += c * digit_sum[idx] as i64;
        }
        for &(v, c) in &spec.c_zero {
            let idx = ((n as u128 - v as u128 * s as u128 % n as u128) % n as u128) as usize;
            pi_exp += c * digit_sum[idx] as i64;
        }
        if pi_exp % pm1 != 0 {
            return Err(Error::Invariant(format!(
                "pi-exponent {pi_exp} at s = {s} is not a multiple of p - 1"
            )));
        }
        Ok(pi_exp / pm1)
    };
    // First pass: exact minimum term valuation.
    let mut k_min = 0i64;
    for s in 0..n {
        k_min = k_min.min(term_p_exponent(s)?);
    }
    let e_pref = spec.prefactor_exponent();
    // Total p-exponent applied after summation.
    let shift = e_pref * e as i64 + k_min;
    let slack = if p == 2 { 2 } else { 1 };
    let extra = u32::try_from((-shift).max(0)).unwrap();
    let work_prec = prec + slack + extra;
    let ctx = PadicContext::new(p, work_prec)?;
    let modulus = ctx.modulus;

    let tab = ctx.gamma_table(n);
    // Gauss-sum unit parts U[k] = prod_i Gamma_p({k p^i / n}).
    let mut units = vec![1u64; n as usize];
    for (k, slot) in units.iter_mut().enumerate() {
        let mut idx = k as u64;
        let mut u = 1u64;
        for _ in 0..e {
            u = nt::mul_mod(u, tab[idx as usize], modulus);
            idx = (idx as u128 * p as u128 % n as u128) as u64;
        }
        *slot = u;
    }
    let needs_inverse = spec.c_inf.iter().chain(&spec.c_zero).any(|&(_, c)| c < 0);
    let unit_inv: Vec<u64> = if needs_inverse {
        units.iter().map(|&u| inv_mod_wide(u, modulus)).collect()
    } else {
        Vec::new()
    };

    // Teichmueller lift of Lambda; chi^s contributes Teich(Lambda)^{-s}.
    let lam_unit = rational_unit_mod(&spec.lambda, p, modulus)?;
    let teich = ctx.teichmuller(lam_unit);
    let mut tpow = vec![1u64; pm1 as usize];
    for r in 1..pm1 as usize {
        tpow[r] = nt::mul_mod(tpow[r - 1], teich, modulus);
    }
    let p_power = |k: u64| -> u64 {
        if k >= work_prec as u64 {
            0
        } else {
            nt::pow_mod(p, k, modulus)
        }
    };

    let mut sum = 0u64;
    for s in 0..n {
        let k = term_p_exponent(s)?;
        let mut unit = 1u64;
        for &(v, c) in &spec.c_inf {
            let idx = (v as u128 * s as u128 % n as u128) as usize;
            let u = if c >= 0 { units[idx] } else { unit_inv[idx] };
            for _ in 0..c.unsigned_abs() {
                unit = nt::mul_mod(unit, u, modulus);
            }
        }
        for &(v, c) in &spec.c_zero {
            let idx = ((n as u128 - v as u128 * s as u128 % n as u128) % n as u128) as usize;
            let u = if c >= 0 { units[idx] } else { unit_inv[idx] };
            for _ in 0..c.unsigned_abs() {
                unit = nt::mul_mod(unit, u, modulus);
            }
        }
        // Term = (-p)^k * unit * Teich(Lambda)^{-s}, shifted by k_min
        // so every monomial stays p-integral.
        let mut term = nt::mul_mod(unit, p_power((k - k_min) as u64), modulus);
        let r = ((pm1 - (s as i64 % pm1)) % pm1) as usize;
        term = nt::mul_mod(term, tpow[r], modulus);
        if k.rem_euclid(2) == 1 {
            term = (modulus - term) % modulus;
        }
        sum = (sum + term) % modulus;
    }

    // Divide by (1 - q) (a p-unit) and apply q^E p^{k_min}.
    let one_minus_q = (modulus + 1 - q % modulus) % modulus;
    let mut x = nt::mul_mod(sum, inv_mod_wide(one_minus_q, modulus), modulus);
    let mut final_modulus = modulus;
    if shift >= 0 {
        x = nt::mul_mod(x, p_power(shift as u64), modulus);
    } else {
        let d = checked_pow(p, extra)?;
        if x % d != 0 {
            return Err(Error::Invariant(
                "trace sum not divisible by the Tate-twist power".into(),
            ));
        }
        x /= d;
        final_modulus = modulus / d;
    }

    // Snap: centered lift below the Deligne bound.
    let centered = if BigInt::from(x) * 2 > BigInt::from(final_modulus) {
        BigInt::from(x) - BigInt::from(final_modulus)
    } else {
        BigInt::from(x)
    };
    if &centered * &centered > bound2 {
        return Err(Error::PrecisionExhausted(work_prec));
    }
    Ok(centered)
}

fn rational_unit_mod(x: &num_rational::BigRational, p: u64, modulus: u64) -> Result<u64> {
    let m = BigInt::from(modulus);
    let red = |v: &BigInt| -> u64 {
        let r = ((v % &m) + &m) % &m;
        r.try_into().unwrap()
    };
    let num = red(x.numer());
    let den = red(x.denom());
    if num % p == 0 || den % p == 0 {
        return Err(Error::BadPrime {
            p,
            kind: "dividing Lambda",
            expected: "a p-unit",
        });
    }
    Ok(nt::mul_mod(num, inv_mod_wide(den, modulus), modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_table_values_p5() {
        // Gamma_5(k) for small integers: Gamma_p(1) = -1, Gamma_p(2) = 1,
        // Gamma_p(3) = -2, Gamma_p(4) = 6, Gamma_p(5) = -24.
        let ctx = PadicContext::new(5, 6).unwrap();
        let m = ctx.modulus;
        let tab = ctx.gamma_table(4); // arguments j/4
        // j = 0 -> Gamma_5(0) = 1.
        assert_eq!(tab[0], 1);
        // 1/4 mod 5^6 = (1 + 5^6 * 3)/4 ... check via the defining product instead:
        // Gamma_5(1/4) = Gamma_5(m) for m = (1/4 mod 5^6).
        let inv4 = inv_mod_wide(4, m);
        let mut prod = 1u64;
        for j in 1..inv4 {
            if j % 5 != 0 {
                prod = nt::mul_mod(prod, j, m);
            }
        }
        let expect = if inv4 % 2 == 1 { (m - prod) % m } else { prod };
        assert_eq!(tab[1], expect);
    }

    #[test]
    fn gamma_integer_points() {
        let ctx = PadicContext::new(7, 5).unwrap();
        let tab = ctx.gamma_table(1); // only j = 0
        assert_eq!(tab[0], 1);
    }

    #[test]
    fn precision_monotone() {
        // Digits already determined do not change when precision grows.
        for p in [3u64, 5, 7] {
            let lo = PadicContext::new(p, 4).unwrap();
            let hi = PadicContext::new(p, 7).unwrap();
            let n = 8u64 % p == 0;
            let nn = if n { 9 } else { 8 };
            let tl = lo.gamma_table(nn);
            let th = hi.gamma_table(nn);
            for (a, b) in tl.iter().zip(&th) {
                assert_eq!(*a, b % lo.modulus);
            }
        }
    }

    #[test]
    fn teichmuller_fixed_points() {
        let ctx = PadicContext::new(7, 8).unwrap();
        for x in 1..7u64 {
            let t = ctx.teichmuller(x);
            assert_eq!(nt::pow_mod(t, 6, ctx.modulus), 1);
            assert_eq!(t % 7, x);
        }
    }
}
