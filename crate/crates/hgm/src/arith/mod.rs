//! Finite-field character-sum engine: Gauss sums, the split-prime
//! trace formula, the p-adic gamma route for arbitrary good prime
//! powers, and the erasing principle at wild primes.
//!
//! Two independent evaluation paths compute the Frobenius trace
//! q^{(w+1-z)/2}/(1-q) sum_chi J(gamma,chi)/J(gamma,1) chi(t):
//!
//! - [`trace_split`] works at split q (q = 1 mod m) with exact
//!   character sums, evaluated through ring homomorphisms into prime
//!   fields F_ell with ell = 1 mod (q-1)p and CRT-lifted below the
//!   Deligne bound;
//! - [`trace`] works at every power of every good prime via the
//!   Gross-Koblitz factorization of Gauss sums into p-adic gamma
//!   values.
//!
//! Both reduce the Jacobi-sum products to the gamma-vector form
//! (Hasse-Davenport blocks), so only integer character indices v*s
//! appear and the split condition can be dropped on the p-adic path.
//! [`trace_erased`] reuses the same engine on the parameter lists
//! left after erasing all alpha, beta with p-divisible denominator.

mod gauss;
mod padic;
mod split;

pub use gauss::{gauss_sum, CyclotomicElement};
pub use padic::PadicContext;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::{psi_exponents, FamilyParameter};
use crate::fq::Fq;
use crate::hodge;
use crate::nt;
use crate::poly;

/// How a prime sits relative to (gamma, t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PrimeKind {
    Good,
    Tame,
    Wild,
}

/// Wild: p divides a gamma entry. Tame: not wild, but t is p-adically
/// close to 0, infinity, or 1. Good: neither. At t = 1 no primes are
/// tame.
pub fn prime_kind(param: &FamilyParameter, t: &BigRational, p: u64) -> PrimeKind {
    if param
        .gamma
        .entries()
        .iter()
        .any(|&g| g.unsigned_abs() % p == 0)
    {
        return PrimeKind::Wild;
    }
    if poly::val_p(t, p) != 0 {
        return PrimeKind::Tame;
    }
    let tm1 = t - BigRational::one();
    if !tm1.is_zero() && poly::val_p(&tm1, p) > 0 {
        return PrimeKind::Tame;
    }
    PrimeKind::Good
}

/// Character-table data over F_q: the field tables, the chosen
/// generator of the character group (as a power of the base
/// character), and the additive-character scale. Trace values are
/// independent of these choices.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub fq: Fq,
    /// omega = base^omega_power, gcd(omega_power, q-1) = 1.
    pub omega_power: u64,
    /// psi(x) = zeta_p^{Tr(psi_scale * x)}, psi_scale != 0.
    pub psi_scale: u64,
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_choices(q, 1, 1)
    }

    pub fn with_choices(q: u64, omega_power: u64, psi_scale: u64) -> Result<Self> {
        let f = nt::factor(q);
        if f.len() != 1 {
            return Err(Error::Domain(format!("{q} is not a prime power")));
        }
        let (p, e) = f[0];
        let fq = Fq::new(p, e)?;
        if nt::gcd_u64(omega_power, q - 1) != 1 {
            return Err(Error::Domain(format!(
                "omega power {omega_power} shares a factor with q - 1"
            )));
        }
        if psi_scale == 0 || psi_scale >= q {
            return Err(Error::Domain("psi scale must be a nonzero element".into()));
        }
        Ok(CharacterTable {
            fq,
            omega_power,
            psi_scale,
        })
    }
}

/// The data driving one trace evaluation: Psi-block exponents of the
/// two sides, the character argument Lambda, and normalization data.
#[derive(Debug, Clone)]
pub(crate) struct EngineSpec {
    /// (v, exponent) blocks of the alpha side (numerator).
    pub c_inf: Vec<(u64, i64)>,
    /// (v, exponent) blocks of the beta side (denominator).
    pub c_zero: Vec<(u64, i64)>,
    /// Multiplicity of Phi_1 across both sides.
    pub z: u32,
    /// Ambient motive weight.
    pub weight: u32,
    /// chi-argument Lambda = t * (-1)^{sum v c0_v} * prod v^{v(c0_v - cinf_v)}.
    pub lambda: BigRational,
    /// Degree of the factor the traces describe (n, or max(n_inf, n_0)).
    pub degree: u32,
    /// lcm of the levels in play.
    pub m: u64,
    pub n_inf: u32,
    pub n_zero: u32,
}

impl EngineSpec {
    pub(crate) fn from_levels(
        alpha_levels: &[u32],
        beta_levels: &[u32],
        weight: u32,
        degree: u32,
        t_arg: &BigRational,
    ) -> Result<Self> {
        let conv = |m: BTreeMap<u32, i64>| -> Vec<(u64, i64)> {
            m.into_iter().map(|(v, c)| (v as u64, c)).collect()
        };
        let c_inf = conv(psi_exponents(alpha_levels));
        let c_zero = conv(psi_exponents(beta_levels));
        let z = alpha_levels
            .iter()
            .chain(beta_levels)
            .filter(|&&d| d == 1)
            .count() as u32;
        if (weight as i64 + 1 - z as i64) % 2 != 0 {
            return Err(Error::Invariant(format!(
                "weight {weight} and Phi_1 multiplicity {z} have incompatible parity"
            )));
        }
        // Lambda bookkeeping from the Hasse-Davenport block reduction.
        let mut sign_exp = 0i64;
        for &(v, c) in &c_zero {
            sign_exp += v as i64 * c;
        }
        let mut pw: BTreeMap<u64, i64> = BTreeMap::new();
        for &(v, c) in &c_inf {
            *pw.entry(v).or_insert(0) -= v as i64 * c;
        }
        for &(v, c) in &c_zero {
            *pw.entry(v).or_insert(0) += v as i64 * c;
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (v, e) in pw {
            let base = BigInt::from(v);
            if e >= 0 {
                num *= num_traits::pow::pow(base, e as usize);
            } else {
                den *= num_traits::pow::pow(base, (-e) as usize);
            }
        }
        let mut lambda = t_arg * BigRational::new(num, den);
        if sign_exp % 2 != 0 {
            lambda = -lambda;
        }
        let m = alpha_levels
            .iter()
            .chain(beta_levels)
            .fold(1u64, |acc, &d| nt::lcm_u64(acc, d as u64));
        let n_inf: u32 = alpha_levels.iter().map(|&d| nt::totient(d)).sum();
        let n_zero: u32 = beta_levels.iter().map(|&d| nt::totient(d)).sum();
        Ok(EngineSpec {
            c_inf,
            c_zero,
            z,
            weight,
            lambda,
            degree,
            m,
            n_inf,
            n_zero,
        })
    }

    pub(crate) fn from_param(param: &FamilyParameter, t: &BigRational) -> Result<Self> {
        let w = hodge::hodge_vector(param).w;
        Self::from_levels(
            param.cyc.alpha_side(),
            param.cyc.beta_side(),
            w,
            param.n,
            t,
        )
    }

    /// Normalization exponent of the q^E prefactor: E = (w + 1 - z)/2.
    pub(crate) fn prefactor_exponent(&self) -> i64 {
        (self.weight as i64 + 1 - self.z as i64) / 2
    }

    /// Squared Deligne bound degree^2 q^w for snapping and checks.
    pub(crate) fn bound_squared(&self, q: u64) -> BigInt {
        BigInt::from(self.degree) * BigInt::from(self.degree)
            * num_traits::pow::pow(BigInt::from(q), self.weight as usize)
    }
}

fn check_good(param: &FamilyParameter, t: &BigRational, p: u64) -> Result<()> {
    match prime_kind(param, t, p) {
        PrimeKind::Good => Ok(()),
        PrimeKind::Tame => Err(Error::BadPrime {
            p,
            kind: "tame",
            expected: "good",
        }),
        PrimeKind::Wild => Err(Error::BadPrime {
            p,
            kind: "wild",
            expected: "good",
        }),
    }
}

fn deligne_check(spec: &EngineSpec, q: u64, value: &BigInt) -> Result<()> {
    if value * value > spec.bound_squared(q) {
        return Err(Error::Invariant(format!(
            "trace {value} violates the Deligne bound over F_{q}"
        )));
    }
    Ok(())
}

/// Exact Frobenius trace at a split prime power (q = 1 mod m), by
/// character sums in the gamma-vector form.
pub fn trace_split(param: &FamilyParameter, t: &BigRational, q: u64) -> Result<BigInt> {
    let table = CharacterTable::new(q)?;
    trace_split_with_table(param, t, &table)
}

/// [`trace_split`] with explicit omega/psi choices (the output must
/// not depend on them).
pub fn trace_split_with_table(
    param: &FamilyParameter,
    t: &BigRational,
    table: &CharacterTable,
) -> Result<BigInt> {
    let q = table.fq.q;
    check_good(param, t, table.fq.p)?;
    let spec = EngineSpec::from_param(param, t)?;
    if (q - 1) % spec.m != 0 {
        return Err(Error::NonSplit { q, m: spec.m });
    }
    let v = split::trace_gamma_form(&spec, table)?;
    deligne_check(&spec, q, &v)?;
    Ok(v)
}

/// Direct J-form evaluation of the split trace formula (one Gauss sum
/// per alpha_j and beta_j, no block reduction); an independent
/// algebraic route used to cross-check [`trace_split`].
pub fn trace_split_direct(
    param: &FamilyParameter,
    t: &BigRational,
    table: &CharacterTable,
) -> Result<BigInt> {
    let q = table.fq.q;
    check_good(param, t, table.fq.p)?;
    let spec = EngineSpec::from_param(param, t)?;
    if (q - 1) % spec.m != 0 {
        return Err(Error::NonSplit { q, m: spec.m });
    }
    let alphas: Vec<u64> = param
        .alpha
        .iter()
        .map(|a| (q - 1) * *a.numer() as u64 / *a.denom() as u64)
        .collect();
    let betas: Vec<u64> = param
        .beta
        .iter()
        .map(|b| (q - 1) * *b.numer() as u64 / *b.denom() as u64)
        .collect();
    let v = split::trace_j_form(&spec, &alphas, &betas, t, table)?;
    deligne_check(&spec, q, &v)?;
    Ok(v)
}

/// Exact Frobenius trace at any power of a good prime, via the
/// Gross-Koblitz route: p-adically approximated, then snapped to the
/// unique integer below the Deligne bound.
pub fn trace(param: &FamilyParameter, t: &BigRational, q: u64) -> Result<BigInt> {
    let f = nt::factor(q);
    if f.len() != 1 {
        return Err(Error::Domain(format!("{q} is not a prime power")));
    }
    let (p, e) = f[0];
    check_good(param, t, p)?;
    let spec = EngineSpec::from_param(param, t)?;
    let v = padic::trace_gross_koblitz(&spec, p, e)?;
    deligne_check(&spec, q, &v)?;
    Ok(v)
}

/// Trace evaluation at a tame prime with t = 1 mod p, for the
/// degeneration route to tame Euler factors. The snapping bound is
/// doubled: the degenerate fiber mixes weights, and the downstream
/// divisibility and root-modulus checks catch any residual ambiguity.
#[doc(hidden)]
pub fn trace_degenerate_probe(param: &FamilyParameter, t: &BigRational, q: u64) -> Result<BigInt> {
    trace_degenerate(param, t, q)
}

pub(crate) fn trace_degenerate(
    param: &FamilyParameter,
    t: &BigRational,
    q: u64,
) -> Result<BigInt> {
    let f = nt::factor(q);
    if f.len() != 1 {
        return Err(Error::Domain(format!("{q} is not a prime power")));
    }
    let (p, e) = f[0];
    let mut spec = EngineSpec::from_param(param, t)?;
    spec.degree *= 2;
    padic::trace_gross_koblitz(&spec, p, e)
}

/// Data of an erased parameter at a wild prime.
#[derive(Debug, Clone)]
pub struct ErasedParameter {
    pub alpha_levels: Vec<u32>,
    pub beta_levels: Vec<u32>,
    pub n_inf: u32,
    pub n_zero: u32,
    /// t = unit * p^{k_crit}.
    pub t_unit: BigRational,
    pub k_crit: i64,
    pub p: u64,
}

/// Critical exponent k_crit = -sum_j gamma_j ord_p(gamma_j).
pub fn k_crit(param: &FamilyParameter, p: u64) -> i64 {
    -param
        .gamma
        .entries()
        .iter()
        .map(|&g| g * nt::val_p_u64(g.unsigned_abs(), p) as i64)
        .sum::<i64>()
}

/// Build the erased lists at a wild prime: drop every Phi_d with p | d.
/// Requires ord_p(t) = k_crit (the bottom of the ramp).
pub fn erase(param: &FamilyParameter, t: &BigRational, p: u64) -> Result<ErasedParameter> {
    if prime_kind(param, t, p) != PrimeKind::Wild {
        return Err(Error::BadPrime {
            p,
            kind: "not wild",
            expected: "wild",
        });
    }
    let keep = |levels: &[u32]| -> Vec<u32> {
        levels
            .iter()
            .copied()
            .filter(|&d| d as u64 % p != 0)
            .collect()
    };
    let alpha_levels = keep(param.cyc.alpha_side());
    let beta_levels = keep(param.cyc.beta_side());
    if alpha_levels.is_empty() && beta_levels.is_empty() {
        return Err(Error::Domain(
            "erasing removed every parameter; no factor to compute".into(),
        ));
    }
    let n_inf: u32 = alpha_levels.iter().map(|&d| nt::totient(d)).sum();
    let n_zero: u32 = beta_levels.iter().map(|&d| nt::totient(d)).sum();
    if p > 2 && (n_inf as i64 - n_zero as i64).rem_euclid(p as i64 - 1) != 0 {
        return Err(Error::Invariant(format!(
            "erased side counts {n_inf}, {n_zero} differ by a non-multiple of p - 1"
        )));
    }
    let kc = k_crit(param, p);
    let kt = if t.is_zero() { 0 } else { poly::val_p(t, p) };
    if kt != kc {
        return Err(Error::Domain(format!(
            "ord_{p}(t) = {kt} is off the ramp bottom k_crit = {kc}"
        )));
    }
    let scale = if kc >= 0 {
        BigRational::new(
            BigInt::one(),
            num_traits::pow::pow(BigInt::from(p), kc as usize),
        )
    } else {
        BigRational::from(num_traits::pow::pow(BigInt::from(p), (-kc) as usize))
    };
    Ok(ErasedParameter {
        alpha_levels,
        beta_levels,
        n_inf,
        n_zero,
        t_unit: t * scale,
        k_crit: kc,
        p,
    })
}

fn erased_spec(param: &FamilyParameter, erased: &ErasedParameter) -> Result<EngineSpec> {
    let w = hodge::hodge_vector(param).w;
    EngineSpec::from_levels(
        &erased.alpha_levels,
        &erased.beta_levels,
        w,
        erased.n_inf.max(erased.n_zero),
        &erased.t_unit,
    )
}

/// Trace of the degree-max(n_inf, n_zero) wild factor f_p over
/// F_{p^e}, by the erasing principle at the bottom of the ramp.
pub fn trace_erased(param: &FamilyParameter, t: &BigRational, p: u64, e: u32) -> Result<BigInt> {
    let erased = erase(param, t, p)?;
    let spec = erased_spec(param, &erased)?;
    let v = padic::trace_gross_koblitz(&spec, p, e)?;
    deligne_check(&spec, p.pow(e), &v)?;
    Ok(v)
}

/// Erased trace through the split character-sum backend, available
/// when p^e = 1 mod the lcm of the erased levels; cross-checks the
/// p-adic route at wild primes.
pub fn trace_erased_split(
    param: &FamilyParameter,
    t: &BigRational,
    p: u64,
    e: u32,
) -> Result<BigInt> {
    let erased = erase(param, t, p)?;
    let spec = erased_spec(param, &erased)?;
    let q = p.pow(e);
    if (q - 1) % spec.m != 0 {
        return Err(Error::NonSplit { q, m: spec.m });
    }
    let table = CharacterTable::new(q)?;
    let v = split::trace_gamma_form(&spec, &table)?;
    deligne_check(&spec, q, &v)?;
    Ok(v)
}

#[cfg(test)]
mod tests;
