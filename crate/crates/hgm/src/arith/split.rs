//! Split-prime trace evaluation through homomorphic images.
//!
//! The character sums live in Z[mu_{(q-1)p}]; reducing modulo an
//! auxiliary prime ell = 1 mod (q-1)p sends zeta_{q-1} and zeta_p to
//! explicit roots of unity in F_ell, where the whole formula is a sum
//! of u64 products. The trace is a rational integer below the Deligne
//! bound, so images modulo enough auxiliary primes determine it
//! exactly by CRT and centered lifting.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::nt;
use crate::poly;

use super::{CharacterTable, EngineSpec};

/// Auxiliary primes ell = 1 mod modulus, smallest first.
struct AuxPrimes {
    modulus: u64,
    k: u64,
}

impl Iterator for AuxPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            self.k += 1;
            let cand = self.k.checked_mul(self.modulus)?.checked_add(1)?;
            if nt::is_prime(cand) {
                return Some(cand);
            }
        }
    }
}

fn aux_primes(modulus: u64) -> AuxPrimes {
    AuxPrimes { modulus, k: 0 }
}

/// Roots of unity in F_ell for the embedding Z[mu_{(q-1)p}] -> F_ell.
struct ModL {
    ell: u64,
    /// Powers of zeta_{q-1}, length q-1.
    zeta_n_pow: Vec<u64>,
    /// Powers of zeta_p, length p.
    zeta_p_pow: Vec<u64>,
}

fn modl_embedding(ell: u64, n: u64, p: u64) -> ModL {
    let factors: Vec<u64> = nt::factor(ell - 1).into_iter().map(|(f, _)| f).collect();
    let mut g = 0;
    for cand in 2..ell {
        if factors
            .iter()
            .all(|&f| nt::pow_mod(cand, (ell - 1) / f, ell) != 1)
        {
            g = cand;
            break;
        }
    }
    assert!(g != 0);
    let zeta_n = nt::pow_mod(g, (ell - 1) / n, ell);
    let zeta_p = nt::pow_mod(g, (ell - 1) / p, ell);
    let mut zeta_n_pow = Vec::with_capacity(n as usize);
    let mut acc = 1u64;
    for _ in 0..n {
        zeta_n_pow.push(acc);
        acc = nt::mul_mod(acc, zeta_n, ell);
    }
    debug_assert_eq!(acc, 1);
    let mut zeta_p_pow = Vec::with_capacity(p as usize);
    let mut acc = 1u64;
    for _ in 0..p {
        zeta_p_pow.push(acc);
        acc = nt::mul_mod(acc, zeta_p, ell);
    }
    debug_assert_eq!(acc, 1);
    ModL {
        ell,
        zeta_n_pow,
        zeta_p_pow,
    }
}

/// Gauss-sum table modulo ell: ghat[j] = -g(base^j, psi) for the fixed
/// base character base(g^i) = zeta_{q-1}^i.
fn gauss_table(table: &CharacterTable, ml: &ModL) -> Vec<u64> {
    let q = table.fq.q;
    let n = q - 1;
    let ell = ml.ell;
    // Additive character values indexed by dlog.
    let tr_by_dlog: Vec<u64> = (0..n)
        .map(|i| {
            let x = table.fq.from_dlog(i);
            table.fq.trace_to_fp(table.fq.mul(table.psi_scale, x))
        })
        .collect();
    let mut ghat = vec![0u64; n as usize];
    for (j, slot) in ghat.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (i, &tr) in tr_by_dlog.iter().enumerate() {
            let e = (j as u128 * i as u128 % n as u128) as usize;
            acc = (acc + nt::mul_mod(ml.zeta_n_pow[e], ml.zeta_p_pow[tr as usize], ell)) % ell;
        }
        *slot = (ell - acc) % ell;
    }
    ghat
}

/// CRT assembly of residues into the unique centered integer.
fn crt_lift(residues: &[(u64, u64)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for &(r, ell) in residues {
        let ell_b = BigInt::from(ell);
        // delta = (r - x) * modulus^{-1} mod ell
        let xr = ((&x % &ell_b) + &ell_b) % &ell_b;
        let xr_u: u64 = xr.try_into().unwrap();
        let minv = nt::inv_mod(
            {
                let m = ((&modulus % &ell_b) + &ell_b) % &ell_b;
                let mu: u64 = m.try_into().unwrap();
                mu
            },
            ell,
        );
        let delta = nt::mul_mod((r + ell - xr_u) % ell, minv, ell);
        x += &modulus * BigInt::from(delta);
        modulus *= ell_b;
    }
    // Centered representative.
    if &x * 2 > modulus {
        x -= &modulus;
    }
    x
}

fn pow_signed(base: u64, e: i64, ell: u64) -> u64 {
    if e >= 0 {
        nt::pow_mod(base, e as u64, ell)
    } else {
        nt::inv_mod(nt::pow_mod(base, (-e) as u64, ell), ell)
    }
}

/// One ell-image of the gamma-form sum.
fn gamma_form_mod_ell(spec: &EngineSpec, table: &CharacterTable, ell: u64) -> Result<u64> {
    let q = table.fq.q;
    let p = table.fq.p;
    let n = q - 1;
    let ml = modl_embedding(ell, n, p);
    let ghat = gauss_table(table, &ml);
    let ghat_inv: Vec<u64> = ghat.iter().map(|&x| nt::inv_mod(x, ell)).collect();
    let j0 = table.omega_power;

    let lam = table.fq.embed_rational(&spec.lambda)?;
    if lam == 0 {
        return Err(Error::BadPrime {
            p,
            kind: "dividing Lambda",
            expected: "a p-unit",
        });
    }
    // omega^s(Lambda) steps by zeta_{q-1}^{j0 dlog Lambda} per s.
    let zl = ml.zeta_n_pow[(j0 as u128 * table.fq.dlog(lam) as u128 % n as u128) as usize];

    let mut sum = 0u64;
    let mut chi_factor = 1u64;
    for s in 0..n {
        let mut term = chi_factor;
        for &(v, c) in &spec.c_inf {
            let idx = (j0 as u128 * v as u128 * s as u128 % n as u128) as usize;
            let g = if c >= 0 { ghat[idx] } else { ghat_inv[idx] };
            for _ in 0..c.unsigned_abs() {
                term = nt::mul_mod(term, g, ell);
            }
        }
        for &(v, c) in &spec.c_zero {
            let neg = (n as u128 - j0 as u128 * v as u128 * s as u128 % n as u128) % n as u128;
            let idx = neg as usize;
            let g = if c >= 0 { ghat[idx] } else { ghat_inv[idx] };
            for _ in 0..c.unsigned_abs() {
                term = nt::mul_mod(term, g, ell);
            }
        }
        sum = (sum + term) % ell;
        chi_factor = nt::mul_mod(chi_factor, zl, ell);
    }
    // q^E / (1 - q) prefactor.
    let pre = pow_signed(q % ell, spec.prefactor_exponent(), ell);
    let denom = nt::inv_mod((ell + 1 - q % ell) % ell, ell);
    Ok(nt::mul_mod(nt::mul_mod(sum, pre, ell), denom, ell))
}

/// One ell-image of the literal J-form sum over the reduced lists.
fn j_form_mod_ell(
    spec: &EngineSpec,
    alphas: &[u64],
    betas: &[u64],
    t: &num_rational::BigRational,
    table: &CharacterTable,
    ell: u64,
) -> Result<u64> {
    let q = table.fq.q;
    let p = table.fq.p;
    let n = q - 1;
    let ml = modl_embedding(ell, n, p);
    let ghat = gauss_table(table, &ml);
    let j0 = table.omega_power;
    let idx_of = |k: i64| -> usize { (j0 as i128 * k as i128).rem_euclid(n as i128) as usize };

    // chi-argument t * (-1)^n.
    let mut tbar = table.fq.embed_rational(t)?;
    if alphas.len() % 2 == 1 {
        tbar = table.fq.neg(tbar);
    }
    if tbar == 0 {
        return Err(Error::BadPrime {
            p,
            kind: "dividing t",
            expected: "a p-unit",
        });
    }
    let zl = ml.zeta_n_pow[(j0 as u128 * table.fq.dlog(tbar) as u128 % n as u128) as usize];

    let mut d = 1u64;
    for &a in alphas {
        d = nt::mul_mod(d, ghat[idx_of(a as i64)], ell);
    }
    for &b in betas {
        d = nt::mul_mod(d, ghat[idx_of(-(b as i64))], ell);
    }
    if d == 0 {
        return Err(Error::Invariant("J(gamma, 1) vanished mod ell".into()));
    }
    let d_inv = nt::inv_mod(d, ell);

    let mut sum = 0u64;
    let mut chi_factor = 1u64;
    for s in 0..n {
        let mut term = chi_factor;
        for &a in alphas {
            term = nt::mul_mod(term, ghat[idx_of(a as i64 + s as i64)], ell);
        }
        for &b in betas {
            term = nt::mul_mod(term, ghat[idx_of(-(b as i64) - s as i64)], ell);
        }
        sum = (sum + nt::mul_mod(term, d_inv, ell)) % ell;
        chi_factor = nt::mul_mod(chi_factor, zl, ell);
    }
    let pre = pow_signed(q % ell, spec.prefactor_exponent(), ell);
    let denom = nt::inv_mod((ell + 1 - q % ell) % ell, ell);
    Ok(nt::mul_mod(nt::mul_mod(sum, pre, ell), denom, ell))
}

fn lift_under_bound(
    spec: &EngineSpec,
    q: u64,
    mut one_image: impl FnMut(u64) -> Result<u64>,
) -> Result<BigInt> {
    let bound2 = spec.bound_squared(q);
    let bound = bound2.sqrt() + 1;
    let mut residues = Vec::new();
    let mut modulus = BigInt::one();
    let target = &bound * 2 + 1;
    for ell in aux_primes((q - 1) * spec_p(spec, q)) {
        residues.push((one_image(ell)?, ell));
        modulus *= BigInt::from(ell);
        if modulus > target {
            break;
        }
    }
    let v = crt_lift(&residues);
    if &v * &v > bound2 {
        return Err(Error::Invariant(format!(
            "lifted trace {v} exceeds the Deligne bound over F_{q}"
        )));
    }
    Ok(v)
}

fn spec_p(_spec: &EngineSpec, q: u64) -> u64 {
    nt::factor(q)[0].0
}

pub(crate) fn trace_gamma_form(spec: &EngineSpec, table: &CharacterTable) -> Result<BigInt> {
    let q = table.fq.q;
    if poly::val_p(&spec.lambda, table.fq.p) != 0 {
        return Err(Error::BadPrime {
            p: table.fq.p,
            kind: "dividing Lambda",
            expected: "a p-unit",
        });
    }
    lift_under_bound(spec, q, |ell| gamma_form_mod_ell(spec, table, ell))
}

pub(crate) fn trace_j_form(
    spec: &EngineSpec,
    alphas: &[u64],
    betas: &[u64],
    t: &num_rational::BigRational,
    table: &CharacterTable,
) -> Result<BigInt> {
    let q = table.fq.q;
    lift_under_bound(spec, q, |ell| {
        j_form_mod_ell(spec, alphas, betas, t, table, ell)
    })
}
