//! Local invariants at bad primes: tame conductor exponents from
//! invariant-drop ranks, the wild sigma-function ramp, the erasing
//! principle factor at the ramp bottom, fixtures for everything the
//! theory leaves open, and the conductor product.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

fn bigint_as_string<S: Serializer>(v: &BigInt, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&v.to_string())
}

use crate::arith::{self, PrimeKind};
use crate::error::{Error, Result};
use crate::family::FamilyParameter;
use crate::hodge;
use crate::monodromy::{self, Classification, Cusp};
use crate::nt;
use crate::poly;

use super::euler::{coeffs_from_traces, EulerFactor, Provenance};
use super::fixtures::FixtureTable;

/// s(d) = 1 for p-unit d, else 1 + ord_p(d) + 1/(p-1).
pub fn wild_s(d: u32, p: u64) -> Rational64 {
    if d as u64 % p != 0 {
        return Rational64::one();
    }
    let v = nt::val_p_u64(d as u64, p) as i64;
    Rational64::from_integer(1 + v) + Rational64::new(1, p as i64 - 1)
}

/// The piecewise-linear wild conductor profile at a wild prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaProfile {
    pub p: u64,
    pub sigma_inf: i64,
    pub sigma_zero: i64,
    pub k_crit: i64,
    pub k_inf: i64,
    pub k_zero: i64,
    /// k = ord_p(t) for the specialization under discussion.
    pub k: i64,
    /// sigma(k).
    pub sigma_at_k: i64,
}

pub fn sigma_profile(param: &FamilyParameter, p: u64, k: i64) -> SigmaProfile {
    let sum_side = |side: &[Rational64]| -> i64 {
        let s: Rational64 = side.iter().map(|x| wild_s(*x.denom() as u32, p)).sum();
        debug_assert!(s.is_integer(), "sigma sums over full blocks are integral");
        s.to_integer()
    };
    let sigma_inf = sum_side(&param.alpha);
    let sigma_zero = sum_side(&param.beta);
    let k_crit = sigma_inf - sigma_zero;
    debug_assert_eq!(k_crit, arith::k_crit(param, p));
    let k_inf = k_crit.min(0);
    let k_zero = k_crit.max(0);
    let sigma_at_k = if k <= k_inf {
        sigma_inf
    } else if k >= k_zero {
        sigma_zero
    } else {
        sigma_inf.max(sigma_zero) - k.abs()
    };
    SigmaProfile {
        p,
        sigma_inf,
        sigma_zero,
        k_crit,
        k_inf,
        k_zero,
        k,
        sigma_at_k,
    }
}

/// Local data at one prime.
#[derive(Debug, Clone, Serialize)]
pub struct LocalData {
    pub p: u64,
    pub kind: PrimeKind,
    pub c_p: u32,
    pub c_p_exact: bool,
    /// Known coefficients (full factor, or the partial wild factor f_p).
    pub factor: Option<EulerFactor>,
    /// Degree of the full local factor when known.
    pub factor_degree: Option<u32>,
    pub sigma_profile: Option<SigmaProfile>,
}

/// Tame local data. For ord_p(t-1) >= 1 the conductor exponent is 1
/// except in the orthogonal case with even valuation (0), and the
/// factor is computed by the degeneration evaluation. Otherwise
/// c_p = rank(h_tau^{|k|} - I) with k = ord_p(t), and only the factor
/// degree n - c_p is emitted.
pub fn tame_local(param: &FamilyParameter, t: &BigRational, p: u64) -> Result<LocalData> {
    if arith::prime_kind(param, t, p) != PrimeKind::Tame {
        return Err(Error::BadPrime {
            p,
            kind: "not tame",
            expected: "tame",
        });
    }
    let n = param.n;
    let tm1 = t - BigRational::one();
    let ord_tm1 = if tm1.is_zero() {
        i64::MAX
    } else {
        poly::val_p(&tm1, p)
    };
    if ord_tm1 >= 1 {
        let cls = monodromy::classify(param)?;
        let c_p = if cls == Classification::Orthogonal && ord_tm1 % 2 == 0 {
            0
        } else {
            1
        };
        let factor = degeneration_factor(param, t, p, c_p, cls).ok();
        return Ok(LocalData {
            p,
            kind: PrimeKind::Tame,
            c_p,
            c_p_exact: true,
            factor_degree: Some(n - c_p),
            factor,
            sigma_profile: None,
        });
    }
    let k = poly::val_p(t, p);
    debug_assert!(k != 0);
    let cusp = if k < 0 { Cusp::Infinity } else { Cusp::Zero };
    let c_p = monodromy::drop_rank(param, cusp, k)?;
    Ok(LocalData {
        p,
        kind: PrimeKind::Tame,
        c_p,
        c_p_exact: true,
        factor: None,
        factor_degree: Some(n - c_p),
        sigma_profile: None,
    })
}

/// The degeneration evaluation: run the good-prime engine at the
/// reduction of t (which is 1 mod p here), assemble the degree-n
/// series, and strip the eigenvalue the local monodromy fixes:
/// +-p^{(w-1)/2} in the symplectic case, +-p^{w/2} in the orthogonal
/// case with c_p = 1. Validated by degree and root-modulus checks
/// only; the paper gives no closed example.
fn degeneration_factor(
    param: &FamilyParameter,
    t: &BigRational,
    p: u64,
    c_p: u32,
    _cls: Classification,
) -> Result<EulerFactor> {
    let n = param.n as usize;
    let w = hodge::hodge_vector(param).w;
    // Budget: the gamma-table sweep at e = n runs in p^prec steps.
    let mut digits = 3u32;
    {
        let bound2 = BigInt::from(16) * BigInt::from(n * n)
            * num_traits::pow::pow(BigInt::from(p), n * w as usize);
        let mut pw2 = num_traits::pow::pow(BigInt::from(p), 6);
        while pw2 < bound2 {
            pw2 *= p * p;
            digits += 1;
        }
    }
    if num_traits::pow::pow(BigInt::from(p), digits as usize + 3) > BigInt::from(1u64 << 31) {
        return Err(Error::BudgetExceeded(digits as u128));
    }
    let mut traces = Vec::with_capacity(n);
    for e in 1..=n as u32 {
        traces.push(arith::trace_degenerate(param, t, p.pow(e))?);
    }
    let mut coeffs = coeffs_from_traces(&traces)?;
    while coeffs.last().map_or(false, |x| x.is_zero()) {
        coeffs.pop();
    }
    // The degenerate series computes the inertia-invariant factor;
    // when its degree disagrees with n - c_p (the orthogonal case with
    // even valuation loses an eigenvalue) the factor stays unknown.
    if coeffs.len() as u32 - 1 != n as u32 - c_p {
        return Err(Error::Invariant(format!(
            "degeneration degree {} != n - c_p = {} at p = {p}",
            coeffs.len() - 1,
            n as u32 - c_p
        )));
    }
    super::euler::root_weil_range_check(&coeffs, p, w)?;
    Ok(EulerFactor {
        p,
        coeffs,
        provenance: Provenance::Degeneration,
    })
}

/// Wild local data. On the generic path (0 < |ord_p(t-1)| allowed
/// only through fixtures) the sigma profile decides everything that
/// can be decided: the erased factor f_p at the ramp bottom, the
/// shifted tame degree off the bottom, c_p = sigma(k) - deg f_p when
/// gcd(k, p) = 1, and explicit bounds otherwise. Fixtures supply the
/// excluded cases; a computed value contradicting a fixture is an
/// error, never silently overridden.
pub fn wild_local(
    param: &FamilyParameter,
    t: &BigRational,
    p: u64,
    fixtures: &FixtureTable,
) -> Result<LocalData> {
    if arith::prime_kind(param, t, p) != PrimeKind::Wild {
        return Err(Error::BadPrime {
            p,
            kind: "not wild",
            expected: "wild",
        });
    }
    let n = param.n;
    let k = if t.is_zero() { 0 } else { poly::val_p(t, p) };
    let profile = sigma_profile(param, p, k);
    let fixture = fixtures.get(param, t, p);

    // Erased factor at the bottom of the ramp.
    let erased_factor = if k == profile.k_crit {
        erased_factor(param, t, p).ok()
    } else {
        None
    };
    if let (Some(fix), Some(f)) = (&fixture, &erased_factor) {
        // The fixture's full factor must be a multiple of f_p.
        if !divides(&f.coeffs, &fix.coeffs) {
            return Err(Error::FixtureMismatch {
                p,
                detail: format!(
                    "erased factor {:?} does not divide the fixture factor {:?}",
                    f.coeffs, fix.coeffs
                ),
            });
        }
    }
    if let Some(fix) = fixture {
        return Ok(LocalData {
            p,
            kind: PrimeKind::Wild,
            c_p: fix.c_p,
            c_p_exact: true,
            factor_degree: Some(fix.coeffs.len() as u32 - 1),
            factor: Some(EulerFactor {
                p,
                coeffs: fix.coeffs.clone(),
                provenance: Provenance::Fixture,
            }),
            sigma_profile: Some(profile),
        });
    }

    let tm1 = t - BigRational::one();
    let excluded = tm1.is_zero() || poly::val_p(&tm1, p) >= 1;
    if excluded {
        // ord_p(t-1) >= 1 at a wild prime: no general recipe; report
        // the bound and whatever erased partial factor applies.
        return Ok(LocalData {
            p,
            kind: PrimeKind::Wild,
            c_p: profile.sigma_at_k.max(0) as u32,
            c_p_exact: false,
            factor_degree: None,
            factor: erased_factor,
            sigma_profile: Some(profile),
        });
    }

    let (deg_f, factor) = if k == profile.k_crit {
        match &erased_factor {
            Some(f) => (f.coeffs.len() as u32 - 1, erased_factor.clone()),
            None => {
                return Err(Error::Domain(format!(
                    "erasing failed at the ramp bottom for p = {p}"
                )))
            }
        }
    } else {
        let shifted = k - profile.k_crit;
        let cusp = if shifted < 0 { Cusp::Infinity } else { Cusp::Zero };
        let drop = monodromy::drop_rank(param, cusp, shifted)?;
        (n - drop, None)
    };

    let bound = profile.sigma_at_k - deg_f as i64;
    if bound < 0 {
        return Err(Error::Invariant(format!(
            "ramp bound {bound} negative at p = {p}"
        )));
    }
    let coprime = nt::gcd_i64(k, p as i64) == 1;
    if coprime || bound == 0 {
        // Equality holds (proved for the trinomial families, conjectured
        // in general when gcd(k, p) = 1; forced by c_p >= 0 when the
        // bound vanishes).
        let c_p = bound as u32;
        let factor_degree = if bound == 0 { Some(n) } else { Some(deg_f) };
        return Ok(LocalData {
            p,
            kind: PrimeKind::Wild,
            c_p,
            c_p_exact: true,
            factor_degree,
            factor,
            sigma_profile: Some(profile),
        });
    }
    Ok(LocalData {
        p,
        kind: PrimeKind::Wild,
        c_p: bound as u32,
        c_p_exact: false,
        factor_degree: None,
        factor,
        sigma_profile: Some(profile),
    })
}

/// Assemble the erased wild factor f_p from erased traces.
pub fn erased_factor(param: &FamilyParameter, t: &BigRational, p: u64) -> Result<EulerFactor> {
    let erased = arith::erase(param, t, p)?;
    let deg = erased.n_inf.max(erased.n_zero) as usize;
    let mut traces = Vec::with_capacity(deg);
    for e in 1..=deg as u32 {
        traces.push(arith::trace_erased(param, t, p, e)?);
    }
    let coeffs = coeffs_from_traces(&traces)?;
    Ok(EulerFactor {
        p,
        coeffs,
        provenance: Provenance::ErasedPartial,
    })
}

/// Does a divide b in Z[x] (both with constant term 1)?
fn divides(a: &[BigInt], b: &[BigInt]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    // Power-series division b/a, then check the remainder.
    let n = b.len();
    let mut q = vec![BigInt::zero(); n - a.len() + 1];
    let mut rem: Vec<BigInt> = b.to_vec();
    for i in 0..q.len() {
        let c = rem[i].clone();
        q[i] = c.clone();
        for (j, aj) in a.iter().enumerate() {
            if i + j < n {
                let t = &c * aj;
                rem[i + j] -= t;
            }
        }
    }
    rem.iter().all(|x| x.is_zero())
}

/// The conductor N = prod p^{c_p} over bad primes, with exactness flags.
#[derive(Debug, Clone, Serialize)]
pub struct Conductor {
    #[serde(serialize_with = "bigint_as_string")]
    pub value: BigInt,
    pub exact: bool,
    pub locals: Vec<LocalData>,
}

pub fn conductor(
    param: &FamilyParameter,
    t: &BigRational,
    fixtures: &FixtureTable,
) -> Result<Conductor> {
    let mut bad: Vec<u64> = Vec::new();
    for &g in param.gamma.entries() {
        for (p, _) in nt::factor(g.unsigned_abs()) {
            if !bad.contains(&p) {
                bad.push(p);
            }
        }
    }
    let mut push_from = |x: &BigInt| {
        let v: u64 = x.abs().try_into().unwrap_or(u64::MAX);
        if v > 1 && v != u64::MAX {
            for (p, _) in nt::factor(v) {
                if !bad.contains(&p) {
                    bad.push(p);
                }
            }
        }
    };
    push_from(t.numer());
    push_from(t.denom());
    let tm1 = t - BigRational::one();
    if !tm1.is_zero() {
        push_from(tm1.numer());
    }
    bad.sort_unstable();

    let mut value = BigInt::one();
    let mut exact = true;
    let mut locals = Vec::new();
    for p in bad {
        let ld = match arith::prime_kind(param, t, p) {
            PrimeKind::Wild => wild_local(param, t, p, fixtures)?,
            PrimeKind::Tame => tame_local(param, t, p)?,
            PrimeKind::Good => continue,
        };
        value *= num_traits::pow::pow(BigInt::from(p), ld.c_p as usize);
        exact &= ld.c_p_exact;
        locals.push(ld);
    }
    Ok(Conductor {
        value,
        exact,
        locals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn s_function_values() {
        assert_eq!(wild_s(8, 2), Rational64::from_integer(5));
        assert_eq!(wild_s(4, 2), Rational64::from_integer(4));
        assert_eq!(wild_s(3, 3), Rational64::new(5, 2));
        assert_eq!(wild_s(7, 2), Rational64::one());
    }

    #[test]
    fn sigma_profile_octic() {
        // [-8,3,5] at p = 2: sigma_inf = 31, sigma_zero = 7, k_crit = 24.
        let p = parse_family("[-8,3,5]").unwrap();
        let prof = sigma_profile(&p, 2, 0);
        assert_eq!(prof.sigma_inf, 31);
        assert_eq!(prof.sigma_zero, 7);
        assert_eq!(prof.k_crit, 24);
        assert_eq!((prof.k_inf, prof.k_zero), (0, 24));
        assert_eq!(prof.sigma_at_k, 31);
        let prof = sigma_profile(&p, 2, 30);
        assert_eq!(prof.sigma_at_k, 7);
        let prof = sigma_profile(&p, 2, 20);
        assert_eq!(prof.sigma_at_k, 11);
    }

    #[test]
    fn wild_pipeline_fully_automatic() {
        // H(Phi_2^5/Phi_1^5, 2^10): c_2 = 0 forced by the ramp bound,
        // factor = (1-4x)(1+5x+10x^2+80x^3+256x^4).
        let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
        let t = BigRational::from(BigInt::from(1024));
        let fixtures = FixtureTable::empty();
        let ld = wild_local(&p, &t, 2, &fixtures).unwrap();
        assert_eq!(ld.c_p, 0);
        assert!(ld.c_p_exact);
        let f = ld.factor.unwrap();
        let expect: Vec<BigInt> = [1i64, 1, -10, 40, -64, -1024]
            .iter()
            .map(|&x| x.into())
            .collect();
        assert_eq!(f.coeffs, expect);
    }

    #[test]
    fn conductor_1023() {
        let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
        let t = BigRational::from(BigInt::from(1024));
        let fixtures = FixtureTable::empty();
        let c = conductor(&p, &t, &fixtures).unwrap();
        assert_eq!(c.value, BigInt::from(1023));
        assert!(c.exact);
        // Tame exponents at 3, 11, 31 are all 1.
        for ld in &c.locals {
            if ld.p != 2 {
                assert_eq!((ld.c_p, ld.kind), (1, PrimeKind::Tame), "p = {}", ld.p);
            }
        }
    }

    #[test]
    fn tame_drop_rank_route() {
        // [-8,3,5] at t = 7^2 * 2 / ... pick t = 49/1 with ord_7 = 2.
        let p = parse_family("[-8,3,5]").unwrap();
        let t = rat(49, 1);
        let ld = tame_local(&p, &t, 7).unwrap();
        // c_p = rank(h_0^2 - I): levels {1,3,5}, only d = 1 divides 2.
        assert_eq!(ld.c_p, 6);
        assert_eq!(ld.factor_degree, Some(1));
    }

    #[test]
    fn tame_unipotent_route() {
        // Legendre at p | t - 1: symplectic, c_p = 1 regardless of parity;
        // orthogonal examples get 0 at even valuation.
        let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
        let ld = tame_local(&p, &rat(6, 1), 5).unwrap();
        assert_eq!(ld.c_p, 1);
        let ld = tame_local(&p, &rat(26, 1), 5).unwrap();
        assert_eq!(ld.c_p, 1, "symplectic stays 1 at even valuation");
        // Orthogonal rank-5 family Phi_2^5/Phi_1^5 at ord_3(t-1) = 2:
        let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
        let ld = tame_local(&p, &rat(4, 1), 3).unwrap();
        assert_eq!(ld.c_p, 1, "ord_3(3) = 1 is odd");
        let ld = tame_local(&p, &rat(10, 1), 3).unwrap();
        assert_eq!(ld.c_p, 0, "ord_3(9) = 2 is even and orthogonal");
    }

    #[test]
    fn degeneration_orthogonal_even_valuation_yields_no_factor() {
        // The invariant factor has degree 4 but n - c_p = 5; the factor
        // must stay unknown rather than be guessed.
        let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
        let ld = tame_local(&p, &rat(19, 1), 3).unwrap();
        assert_eq!(ld.c_p, 0);
        assert!(ld.factor.is_none());
        // Odd valuation: degree 4 = n - 1 matches and is emitted.
        let t = BigRational::from(BigInt::from(1024));
        let ld = tame_local(&p, &t, 3).unwrap();
        assert_eq!(ld.c_p, 1);
        let f = ld.factor.expect("invariant factor");
        let expect: Vec<BigInt> = [1i64, 0, 30, 0, 6561].iter().map(|&x| x.into()).collect();
        assert_eq!(f.coeffs, expect);
    }

    #[test]
    fn degeneration_matches_multiplicative_reduction() {
        // Legendre at p | t - 1 has multiplicative reduction: the local
        // factor is 1 -+ x. Check degree and unit coefficient.
        let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
        for (tv, pr) in [(6i64, 5u64), (8, 7), (12, 11)] {
            let ld = tame_local(&p, &rat(tv, 1), pr).unwrap();
            assert_eq!(ld.c_p, 1);
            let f = ld.factor.expect("degeneration factor");
            assert_eq!(f.coeffs.len(), 2, "degree 1 at p = {pr}");
            assert_eq!(f.coeffs[1].clone().abs(), BigInt::one());
        }
    }
}
