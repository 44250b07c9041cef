//! Family-parameter algebra.
//!
//! A rank-n hypergeometric family is indexed by a degree-n rational
//! function q(T) with cyclotomic numerator and denominator sharing no
//! factor. Two equivalent presentations are supported:
//!
//! - the gamma vector `[g_1, ..., g_l]`, encoding the unreduced form
//!   prod_{g_j < 0} Psi_{|g_j|} / prod_{g_j > 0} Psi_{g_j} with
//!   Psi_m = T^m - 1 (negative entries feed the numerator);
//! - the cyclotomic pair (alpha_side; beta_side) of Phi_d subscripts
//!   of the reduced numerator and denominator.
//!
//! Provides [`GammaVector`], [`CyclotomicPair`], [`FamilyParameter`],
//! [`SpecializationPoint`], parsing, the gamma <-> cyclotomic
//! conversions, derived scalar invariants, and exact hypergeometric
//! series coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nt;

/// A validated gamma vector: nonzero entries, sum zero, gcd one,
/// stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaVector {
    entries: Vec<i64>,
}

impl GammaVector {
    pub fn new(mut entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySide);
        }
        if entries.iter().any(|&g| g == 0) {
            return Err(Error::ZeroEntry);
        }
        let sum: i64 = entries.iter().sum();
        if sum != 0 {
            return Err(Error::SumNonzero(sum));
        }
        let g = entries.iter().fold(0u64, |acc, &x| nt::gcd_u64(acc, x.unsigned_abs()));
        if g != 1 {
            return Err(Error::GcdNotOne(g));
        }
        entries.sort_unstable();
        Ok(GammaVector { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Negation gamma -> -gamma (a distinct parameter).
    pub fn negate(&self) -> GammaVector {
        let mut e: Vec<i64> = self.entries.iter().map(|&g| -g).collect();
        e.sort_unstable();
        GammaVector { entries: e }
    }

    /// vol(gamma) = (1/2) sum |gamma_j|.
    pub fn vol(&self) -> u64 {
        self.entries.iter().map(|&g| g.unsigned_abs()).sum::<u64>() / 2
    }
}

impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// Reduced cyclotomic data: disjoint multisets of Phi_d subscripts for
/// the numerator (alpha side, cusp infinity) and denominator (beta
/// side, cusp zero). Stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicPair {
    alpha_side: Vec<u32>,
    beta_side: Vec<u32>,
}

impl CyclotomicPair {
    pub fn new(mut alpha_side: Vec<u32>, mut beta_side: Vec<u32>) -> Result<Self> {
        if alpha_side.is_empty() || beta_side.is_empty() {
            return Err(Error::EmptySide);
        }
        if alpha_side.contains(&0) || beta_side.contains(&0) {
            return Err(Error::ZeroEntry);
        }
        alpha_side.sort_unstable();
        beta_side.sort_unstable();
        for d in &alpha_side {
            if beta_side.binary_search(d).is_ok() {
                return Err(Error::NonDisjoint(*d));
            }
        }
        Ok(CyclotomicPair {
            alpha_side,
            beta_side,
        })
    }

    pub fn alpha_side(&self) -> &[u32] {
        &self.alpha_side
    }

    pub fn beta_side(&self) -> &[u32] {
        &self.beta_side
    }

    /// Totient sum of one side (the rank when the pair is balanced).
    pub fn rank_of(levels: &[u32]) -> u32 {
        levels.iter().map(|&d| nt::totient(d)).sum()
    }
}

impl fmt::Display for CyclotomicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        // Denominator (beta) first, matching the input grammar.
        write!(f, "[{}];[{}]", join(&self.beta_side), join(&self.alpha_side))
    }
}

/// Expand the gamma vector into the reduced cyclotomic pair.
///
/// Each |g_j| expands into the Phi_d multiset over its divisors;
/// negative entries feed the alpha (numerator) side. Common factors
/// cancel; complete cancellation is a degenerate-parameter error.
pub fn to_cyclotomic(gamma: &GammaVector) -> Result<CyclotomicPair> {
    let mut mult: BTreeMap<u32, i64> = BTreeMap::new();
    for &g in gamma.entries() {
        let a = g.unsigned_abs() as u32;
        let sign = if g < 0 { 1 } else { -1 };
        for d in nt::divisors(a) {
            *mult.entry(d).or_insert(0) += sign;
        }
    }
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for (d, c) in mult {
        for _ in 0..c.abs() {
            if c > 0 {
                alpha.push(d);
            } else {
                beta.push(d);
            }
        }
    }
    if alpha.is_empty() && beta.is_empty() {
        return Err(Error::Degenerate);
    }
    if alpha.is_empty() || beta.is_empty() {
        // Unbalanced sides cannot happen for a zero-sum gamma vector.
        return Err(Error::Invariant(format!(
            "one-sided cyclotomic expansion for {gamma}"
        )));
    }
    CyclotomicPair::new(alpha, beta)
}

/// Net Psi_v exponents of a Phi-multiset via Phi_d = prod_{v|d} Psi_v^{mu(d/v)}.
pub(crate) fn psi_exponents(levels: &[u32]) -> BTreeMap<u32, i64> {
    let mut out: BTreeMap<u32, i64> = BTreeMap::new();
    for &d in levels {
        for v in nt::divisors(d) {
            let mu = nt::moebius(d / v) as i64;
            if mu != 0 {
                *out.entry(v).or_insert(0) += mu;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// The unique unreduction of a cyclotomic pair to a gamma vector in
/// which no Psi_m appears in both numerator and denominator.
pub fn to_gamma(cyc: &CyclotomicPair) -> Result<GammaVector> {
    let mut net = psi_exponents(cyc.alpha_side());
    for (v, c) in psi_exponents(cyc.beta_side()) {
        *net.entry(v).or_insert(0) -= c;
    }
    net.retain(|_, c| *c != 0);
    let mut entries = Vec::new();
    for (v, c) in net {
        let e = if c > 0 { -(v as i64) } else { v as i64 };
        for _ in 0..c.abs() {
            entries.push(e);
        }
    }
    GammaVector::new(entries)
}

/// A full family parameter: both presentations plus derived scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParameter {
    pub gamma: GammaVector,
    pub cyc: CyclotomicPair,
    /// Roots of the numerator as rationals in (0, 1], sorted, with multiplicity.
    pub alpha: Vec<Rational64>,
    /// Roots of the denominator, same convention (beta = 1 for Phi_1).
    pub beta: Vec<Rational64>,
    /// Rank: degree of the reduced rational function.
    pub n: u32,
    /// Length of the gamma vector.
    pub l: u32,
    /// Canonical source-variety dimension, l - 3.
    pub kappa: i64,
    /// vol(gamma) = (1/2) sum |gamma_j|.
    pub vol: u64,
    /// lcm of the cyclotomic levels (equivalently of the |gamma_j|).
    pub m: u64,
    /// Number of negative gamma entries.
    pub r: u32,
    /// q(0) = det(h_1), +1 or -1.
    pub q_at_zero: i8,
}

/// Roots of Phi_d as rationals j/d in (0, 1].
pub fn phi_roots(d: u32) -> Vec<Rational64> {
    if d == 1 {
        return vec![Rational64::one()];
    }
    (1..d)
        .filter(|&j| nt::gcd_u64(j as u64, d as u64) == 1)
        .map(|j| Rational64::new(j as i64, d as i64))
        .collect()
}

fn side_roots(levels: &[u32]) -> Vec<Rational64> {
    let mut v: Vec<Rational64> = levels.iter().flat_map(|&d| phi_roots(d)).collect();
    v.sort_unstable();
    v
}

impl FamilyParameter {
    pub fn from_gamma(gamma: GammaVector) -> Result<Self> {
        let cyc = to_cyclotomic(&gamma)?;
        Self::build(gamma, cyc)
    }

    pub fn from_cyclotomic(cyc: CyclotomicPair) -> Result<Self> {
        let gamma = to_gamma(&cyc)?;
        Self::build(gamma, cyc)
    }

    fn build(gamma: GammaVector, cyc: CyclotomicPair) -> Result<Self> {
        let n_alpha = CyclotomicPair::rank_of(cyc.alpha_side());
        let n_beta = CyclotomicPair::rank_of(cyc.beta_side());
        debug_assert_eq!(n_alpha, n_beta, "degree balance");
        if n_alpha == 0 {
            return Err(Error::Degenerate);
        }
        let alpha = side_roots(cyc.alpha_side());
        let beta = side_roots(cyc.beta_side());
        let l = gamma.len() as u32;
        let m = cyc
            .alpha_side()
            .iter()
            .chain(cyc.beta_side())
            .fold(1u64, |acc, &d| nt::lcm_u64(acc, d as u64));
        let r = gamma.entries().iter().filter(|&&g| g < 0).count() as u32;
        let phi1_mult = cyc
            .alpha_side()
            .iter()
            .chain(cyc.beta_side())
            .filter(|&&d| d == 1)
            .count();
        let q_at_zero = if phi1_mult % 2 == 0 { 1 } else { -1 };
        Ok(FamilyParameter {
            vol: gamma.vol(),
            kappa: l as i64 - 3,
            gamma,
            cyc,
            alpha,
            beta,
            n: n_alpha,
            l,
            m,
            r,
            q_at_zero,
        })
    }

    /// Maximal unipotent monodromy: denominator (T-1)^n.
    pub fn is_mum(&self) -> bool {
        self.cyc.beta_side().iter().all(|&d| d == 1)
    }

    /// Complete intertwining of alpha and beta on the circle.
    pub fn is_intertwined(&self) -> bool {
        let merged = self.merged_sorted();
        merged.windows(2).all(|w| w[0].1 != w[1].1)
    }

    /// Reflexivity: q(-T) = q(T)^{-1}, via the level substitution
    /// induced by T -> -T on Phi_d.
    pub fn is_reflexive(&self) -> bool {
        let mut mapped: Vec<u32> = self
            .cyc
            .alpha_side()
            .iter()
            .map(|&d| quadratic_twist_level(d))
            .collect();
        mapped.sort_unstable();
        mapped == self.cyc.beta_side()
    }

    /// The quadratic twist q(T) -> q(-T) as a new parameter.
    pub fn quadratic_twist(&self) -> Result<FamilyParameter> {
        let a: Vec<u32> = self
            .cyc
            .alpha_side()
            .iter()
            .map(|&d| quadratic_twist_level(d))
            .collect();
        let b: Vec<u32> = self
            .cyc
            .beta_side()
            .iter()
            .map(|&d| quadratic_twist_level(d))
            .collect();
        FamilyParameter::from_cyclotomic(CyclotomicPair::new(a, b)?)
    }

    /// All 2n parameters merged and sorted; `true` marks alpha points.
    pub fn merged_sorted(&self) -> Vec<(Rational64, bool)> {
        let mut all: Vec<(Rational64, bool)> = self
            .alpha
            .iter()
            .map(|&x| (x, true))
            .chain(self.beta.iter().map(|&x| (x, false)))
            .collect();
        // Equal values share a color (the sides are disjoint), so order
        // within a tie is the color order and does not matter.
        all.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        all
    }

    /// u = t prod_j gamma_j^{gamma_j}, as the exact rational coefficient of t.
    pub fn u_coefficient(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &g in self.gamma.entries() {
            let base = BigInt::from(g);
            if g > 0 {
                num *= num_traits::pow::pow(base, g as usize);
            } else {
                den *= num_traits::pow::pow(base, (-g) as usize);
            }
        }
        BigRational::new(num, den)
    }
}

impl fmt::Display for FamilyParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gamma)
    }
}

/// Level substitution induced by T -> -T on cyclotomic polynomials.
pub fn quadratic_twist_level(d: u32) -> u32 {
    if d == 1 {
        2
    } else if d == 2 {
        1
    } else if d % 4 == 2 {
        d / 2
    } else if d % 2 == 1 {
        2 * d
    } else {
        d
    }
}

/// Scalar summary of a parameter.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Stats {
    pub n: u32,
    pub l: u32,
    pub kappa: i64,
    pub vol: u64,
    pub m: u64,
    pub r: u32,
    pub q_at_zero: i8,
    pub is_reflexive: bool,
    pub is_mum: bool,
    pub is_intertwined: bool,
}

pub fn stats(param: &FamilyParameter) -> Stats {
    Stats {
        n: param.n,
        l: param.l,
        kappa: param.kappa,
        vol: param.vol,
        m: param.m,
        r: param.r,
        q_at_zero: param.q_at_zero,
        is_reflexive: param.is_reflexive(),
        is_mum: param.is_mum(),
        is_intertwined: param.is_intertwined(),
    }
}

/// Exact coefficients A_0..A_K of the hypergeometric series
/// sum_k A_k t^k with A_k = prod_i (alpha_i)_k / prod_i (beta_i)_k.
pub fn series_coefficients(param: &FamilyParameter, k_max: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(k_max as usize + 1);
    let mut acc = BigRational::one();
    out.push(acc.clone());
    for k in 0..k_max {
        let kq = BigRational::from(BigInt::from(k));
        for a in &param.alpha {
            let ar = BigRational::new(BigInt::from(*a.numer()), BigInt::from(*a.denom()));
            acc *= ar + &kq;
        }
        for b in &param.beta {
            let br = BigRational::new(BigInt::from(*b.numer()), BigInt::from(*b.denom()));
            acc /= br + &kq;
        }
        out.push(acc.clone());
    }
    out
}

/// A specialization point t != 0 in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationPoint {
    t: BigRational,
}

impl SpecializationPoint {
    pub fn new(t: BigRational) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::BadSpecialization("0".into()));
        }
        Ok(SpecializationPoint { t })
    }

    /// Most operations exclude the singular point t = 1; callers that
    /// are t=1-aware say so explicitly.
    pub fn require_not_one(&self) -> Result<()> {
        if self.t.is_one() {
            return Err(Error::BadSpecialization("1".into()));
        }
        Ok(())
    }

    pub fn value(&self) -> &BigRational {
        &self.t
    }

    pub fn is_one(&self) -> bool {
        self.t.is_one()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = parse_rational(text)?;
        SpecializationPoint::new(t)
    }
}

impl fmt::Display for SpecializationPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.t)
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid integer `{s}`")))
    };
    if let Some((num, den)) = text.split_once('/') {
        let d = parse_int(den)?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(parse_int(num)?, d))
    } else {
        Ok(BigRational::from(parse_int(text)?))
    }
}

fn parse_bracketed(text: &str) -> Result<Vec<i64>> {
    let t = text.trim();
    let inner = t
        .strip_prefix("[*")
        .and_then(|s| s.strip_suffix("*]"))
        .or_else(|| t.strip_prefix('[').and_then(|s| s.strip_suffix(']')))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got `{t}`")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Err(Error::EmptySide);
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("invalid entry `{}`", s.trim())))
        })
        .collect()
}

/// Parse a family parameter from either surface form:
/// `[g1,g2,...]` (gamma) or `[d1,...];[e1,...]` (denominator Phi
/// subscripts, then numerator).
pub fn parse_family(text: &str) -> Result<FamilyParameter> {
    let text = text.trim();
    if let Some((den, num)) = text.split_once(';') {
        let beta = parse_bracketed(den)?;
        let alpha = parse_bracketed(num)?;
        let to_u32 = |v: Vec<i64>| -> Result<Vec<u32>> {
            v.into_iter()
                .map(|x| {
                    if x <= 0 {
                        Err(Error::Parse(format!("cyclotomic level {x} must be positive")))
                    } else {
                        Ok(x as u32)
                    }
                })
                .collect()
        };
        let cyc = CyclotomicPair::new(to_u32(alpha)?, to_u32(beta)?)?;
        FamilyParameter::from_cyclotomic(cyc)
    } else {
        let gamma = GammaVector::new(parse_bracketed(text)?)?;
        FamilyParameter::from_gamma(gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{phi_product, ZPoly};

    fn gv(e: &[i64]) -> GammaVector {
        GammaVector::new(e.to_vec()).unwrap()
    }

    /// Polynomial oracle: the reduced pair must satisfy the identity
    /// prod_{g<0} Psi_{|g|} * prod_{beta} Phi_d = prod_{g>0} Psi_g * prod_{alpha} Phi_d.
    fn check_against_poly_oracle(gamma: &GammaVector, cyc: &CyclotomicPair) {
        let mut lhs = ZPoly::one();
        let mut rhs = ZPoly::one();
        for &g in gamma.entries() {
            if g < 0 {
                lhs = lhs.mul(&ZPoly::psi((-g) as u32));
            } else {
                rhs = rhs.mul(&ZPoly::psi(g as u32));
            }
        }
        lhs = lhs.mul(&phi_product(cyc.beta_side()));
        rhs = rhs.mul(&phi_product(cyc.alpha_side()));
        assert_eq!(lhs, rhs, "polynomial identity for {gamma} vs {cyc}");
    }

    #[test]
    fn introductory_example() {
        let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
        assert_eq!(p.cyc.alpha_side(), &[2, 2]);
        assert_eq!(p.cyc.beta_side(), &[1, 1]);
        assert_eq!(p.n, 2);
        check_against_poly_oracle(&p.gamma, &p.cyc);
    }

    #[test]
    fn cyclotomic_surface_form() {
        let p = parse_family("[1,1];[2,2]").unwrap();
        assert_eq!(p.gamma.entries(), &[-2, -2, 1, 1, 1, 1]);
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(parse_family("[-1,1]").unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert!(matches!(parse_family("[1,2]"), Err(Error::SumNonzero(3))));
        assert!(matches!(parse_family("[-2,0,2]"), Err(Error::ZeroEntry)));
        assert!(matches!(parse_family("[-4,-4,4,4]"), Err(Error::GcdNotOne(4))));
        assert!(matches!(parse_family("[]"), Err(Error::EmptySide)));
        assert!(matches!(
            parse_family("[2];[2]"),
            Err(Error::NonDisjoint(2))
        ));
        assert!(matches!(parse_family("[x,1]"), Err(Error::Parse(_))));
    }

    #[test]
    fn to_cyclotomic_derived_examples() {
        // Verified against the polynomial oracle, then frozen.
        let g = gv(&[-5, -2, 3, 4]);
        let c = to_cyclotomic(&g).unwrap();
        check_against_poly_oracle(&g, &c);
        assert_eq!(c.alpha_side(), &[5]);
        assert_eq!(c.beta_side(), &[3, 4]);

        let g = gv(&[-8, 3, 5]);
        let c = to_cyclotomic(&g).unwrap();
        check_against_poly_oracle(&g, &c);
        assert_eq!(c.alpha_side(), &[2, 4, 8]);
        assert_eq!(c.beta_side(), &[1, 3, 5]);
    }

    #[test]
    fn to_gamma_examples() {
        let c = CyclotomicPair::new(vec![2, 2], vec![1, 1]).unwrap();
        assert_eq!(to_gamma(&c).unwrap().entries(), &[-2, -2, 1, 1, 1, 1]);
        let c = CyclotomicPair::new(vec![5], vec![3, 4]).unwrap();
        assert_eq!(to_gamma(&c).unwrap().entries(), &[-5, -2, 3, 4]);
        let c = CyclotomicPair::new(vec![2], vec![1]).unwrap();
        assert_eq!(to_gamma(&c).unwrap().entries(), &[-2, 1, 1]);
    }

    #[test]
    fn round_trips() {
        for gamma in [
            gv(&[-2, -2, 1, 1, 1, 1]),
            gv(&[-5, -2, 3, 4]),
            gv(&[-8, 3, 5]),
            gv(&[-21, 1, 2, 3, 4, 5, 6]),
            gv(&[1, -2, 4, -8, 16, -33, 22]),
        ] {
            let cyc = to_cyclotomic(&gamma).unwrap();
            assert_eq!(to_gamma(&cyc).unwrap(), gamma);
            check_against_poly_oracle(&gamma, &cyc);
        }
    }

    #[test]
    fn stats_examples() {
        let p = parse_family("[-5,-2,3,4]").unwrap();
        let s = stats(&p);
        assert_eq!((s.vol, s.kappa, s.n), (7, 1, 4));

        // Phi_2^2 / Phi_1^2
        let p = parse_family("[1,1];[2,2]").unwrap();
        let s = stats(&p);
        assert_eq!(s.q_at_zero, 1);
        assert!(s.is_reflexive);

        // Phi_2^5 / Phi_1^5
        let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
        let s = stats(&p);
        assert_eq!(s.q_at_zero, -1);
    }

    #[test]
    fn q_at_zero_matches_polynomial_evaluation() {
        // Oracle: evaluate the reduced rational function at T = 0 exactly.
        for text in ["[-2,-2,1,1,1,1]", "[-5,-2,3,4]", "[-8,3,5]", "[1,1,1,1,1];[2,2,2,2,2]"] {
            let p = parse_family(text).unwrap();
            let num = phi_product(p.cyc.alpha_side());
            let den = phi_product(p.cyc.beta_side());
            let q0 = num.coeff(0) / den.coeff(0);
            assert_eq!(BigInt::from(p.q_at_zero), q0, "{text}");
        }
    }

    #[test]
    fn twist_is_involution() {
        for text in ["[-2,-2,1,1,1,1]", "[-5,-2,3,4]", "[-8,3,5]", "[-21,1,2,3,4,5,6]"] {
            let p = parse_family(text).unwrap();
            let tw = p.quadratic_twist().unwrap();
            assert_eq!(tw.quadratic_twist().unwrap(), p, "{text}");
        }
    }

    #[test]
    fn series_legendre() {
        let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
        let a = series_coefficients(&p, 4);
        // A_k = binom(2k,k)^2 / 16^k
        assert_eq!(a[0], BigRational::one());
        assert_eq!(a[1], BigRational::new(1.into(), 4.into()));
        assert_eq!(a[2], BigRational::new(9.into(), 64.into()));
        assert_eq!(a[3], BigRational::new(25.into(), 256.into()));
    }

    #[test]
    fn series_generic_pochhammer_oracle() {
        // ({5};{3,4}): direct Pochhammer product at k = 1.
        let p = parse_family("[3,4];[5]").unwrap();
        let a = series_coefficients(&p, 1);
        let mut expect = BigRational::one();
        for ai in [(1, 5), (2, 5), (3, 5), (4, 5)] {
            expect *= BigRational::new(ai.0.into(), ai.1.into());
        }
        for bi in [(1, 3), (2, 3), (1, 4), (3, 4)] {
            expect /= BigRational::new(bi.0.into(), bi.1.into());
        }
        assert_eq!(a[1], expect);
    }

    #[test]
    fn u_coefficient_table_value() {
        // u = -2^6 3^3 t / 5^5 for gamma = [-5,-2,3,4]
        let p = parse_family("[-5,-2,3,4]").unwrap();
        assert_eq!(
            p.u_coefficient(),
            BigRational::new(BigInt::from(-(64 * 27)), BigInt::from(3125))
        );
    }

    #[test]
    fn m_is_lcm_both_ways() {
        for text in ["[-2,-2,1,1,1,1]", "[-5,-2,3,4]", "[-8,3,5]", "[-21,1,2,3,4,5,6]"] {
            let p = parse_family(text).unwrap();
            let from_gamma = p
                .gamma
                .entries()
                .iter()
                .fold(1u64, |acc, &g| nt::lcm_u64(acc, g.unsigned_abs()));
            assert_eq!(p.m, from_gamma, "{text}");
        }
    }
}
