//! Exact Gauss sums in the cyclotomic ring of level (q-1)p.
//!
//! Elements are stored as integer vectors in the group ring
//! Z[x]/(x^N - 1), N = (q-1)p, with zeta_{q-1} = x^p and zeta_p =
//! x^{q-1}; equality of algebraic numbers is tested after reduction
//! modulo Phi_N. This representation is only used at small q (runtime
//! assertions and ground-truth tests); the production trace paths
//! work through homomorphic images instead.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::poly::{cyclotomic, ZPoly};

use super::CharacterTable;

/// An element of Z[mu_N] presented in the group ring Z[x]/(x^N - 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    pub level: u64,
    pub coeffs: Vec<BigInt>,
}

impl CyclotomicElement {
    pub fn zero(level: u64) -> Self {
        CyclotomicElement {
            level,
            coeffs: vec![BigInt::zero(); level as usize],
        }
    }

    pub fn scalar(level: u64, c: BigInt) -> Self {
        let mut e = Self::zero(level);
        e.coeffs[0] = c;
        e
    }

    pub fn monomial(level: u64, k: u64) -> Self {
        let mut e = Self::zero(level);
        e.coeffs[(k % level) as usize] = BigInt::one();
        e
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.level, other.level);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level);
        let n = self.level as usize;
        let mut out = Self::zero(self.level);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let k = (i + j) % n;
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }

    /// Complex conjugation: x -> x^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.level as usize;
        let mut out = Self::zero(self.level);
        for (i, a) in self.coeffs.iter().enumerate() {
            out.coeffs[(n - i) % n] = a.clone();
        }
        out
    }

    /// Canonical form: remainder modulo Phi_N, as a polynomial of
    /// degree < phi(N). Two group-ring vectors represent the same
    /// algebraic number iff their canonical forms agree.
    pub fn reduced(&self) -> Vec<BigInt> {
        let phi_n = cyclotomic(self.level as u32);
        let mut rem = self.coeffs.clone();
        let dn = phi_n.c.len();
        if rem.len() >= dn {
            for i in (0..=rem.len() - dn).rev() {
                let top = rem[i + dn - 1].clone();
                if top.is_zero() {
                    continue;
                }
                // Phi_N is monic.
                for (j, c) in phi_n.c.iter().enumerate() {
                    rem[i + j] -= &top * c;
                }
                debug_assert!(rem[i + dn - 1].is_zero());
            }
        }
        rem.truncate(dn - 1);
        rem
    }

    pub fn equals(&self, other: &Self) -> bool {
        assert_eq!(self.level, other.level);
        self.reduced() == other.reduced()
    }

    pub fn equals_integer(&self, n: &BigInt) -> bool {
        self.equals(&Self::scalar(self.level, n.clone()))
    }
}

/// The exact Gauss sum g(omega^a, psi) as an element of Z[mu_{(q-1)p}].
///
/// The trivial character gives -1; otherwise |g|^2 = q, which is
/// asserted here (it doubles as a self-test of the table).
pub fn gauss_sum(ctx: &CharacterTable, a: u64) -> Result<CyclotomicElement> {
    let q = ctx.fq.q;
    let p = ctx.fq.p;
    let n = (q - 1) * p;
    let mut g = CyclotomicElement::zero(n);
    for x in ctx.fq.units() {
        let chi_exp = (ctx.omega_power * a % (q - 1)) * ctx.fq.dlog(x) % (q - 1);
        let psi_exp = ctx.fq.trace_to_fp(ctx.fq.mul(ctx.psi_scale, x));
        // zeta_{q-1} = x^p, zeta_p = x^{q-1}
        let k = (chi_exp * p + psi_exp * (q - 1)) % n;
        g.coeffs[k as usize] += BigInt::one();
    }
    if a % (q - 1) == 0 {
        debug_assert!(g.equals_integer(&BigInt::from(-1)));
    } else {
        let norm = g.mul(&g.conj());
        // g(rho) conj(g(rho)) = q for nontrivial rho.
        assert!(
            norm.equals_integer(&BigInt::from(q)),
            "|g|^2 != q for character exponent {a} over F_{q}"
        );
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_character() {
        for q in [5u64, 7, 9] {
            let ctx = CharacterTable::new(q).unwrap();
            let g = gauss_sum(&ctx, 0).unwrap();
            assert!(g.equals_integer(&BigInt::from(-1)));
        }
    }

    #[test]
    fn quadratic_character_squares_to_p_star() {
        // g(rho_2)^2 = (-1)^{(p-1)/2} p; for q = 5 this is 5.
        let ctx = CharacterTable::new(5).unwrap();
        let g = gauss_sum(&ctx, 2).unwrap();
        let sq = g.mul(&g);
        assert!(sq.equals_integer(&BigInt::from(5)));
        // q = 7: (-1)^3 * 7 = -7.
        let ctx = CharacterTable::new(7).unwrap();
        let g = gauss_sum(&ctx, 3).unwrap();
        let sq = g.mul(&g);
        assert!(sq.equals_integer(&BigInt::from(-7)));
    }

    #[test]
    fn absolute_value_assertion_runs() {
        for q in [5u64, 7, 9, 11, 13] {
            let ctx = CharacterTable::new(q).unwrap();
            for a in 1..q - 1 {
                gauss_sum(&ctx, a).unwrap();
            }
        }
    }

    #[test]
    fn choice_of_psi_changes_element_not_norm() {
        let c1 = CharacterTable::with_choices(7, 1, 1).unwrap();
        let c2 = CharacterTable::with_choices(7, 1, 3).unwrap();
        let g1 = gauss_sum(&c1, 2).unwrap();
        let g2 = gauss_sum(&c2, 2).unwrap();
        assert!(!g1.equals(&g2));
    }

    #[test]
    fn reduction_respects_relations() {
        // Sum of all N-th roots of unity is zero.
        let n = 12u64;
        let mut s = CyclotomicElement::zero(n);
        for k in 0..n {
            s.add_assign(&CyclotomicElement::monomial(n, k));
        }
        assert!(s.equals_integer(&BigInt::zero()));
    }

    #[test]
    fn hasse_davenport_product_relation() {
        // prod_{i=0}^{v-1} g(chi rho_v^i) = chi(v)^{-v} g(chi^v) prod_{i>=1} g(rho_v^i)
        // checked exactly for q = 13, v = 3, chi = omega^2.
        let q = 13u64;
        let ctx = CharacterTable::new(q).unwrap();
        let v = 3u64;
        let step = (q - 1) / v;
        let chi = 2u64;
        let mut lhs = CyclotomicElement::scalar((q - 1) * ctx.fq.p, BigInt::one());
        for i in 0..v {
            lhs = lhs.mul(&gauss_sum(&ctx, (chi + i * step) % (q - 1)).unwrap());
        }
        let mut rhs = gauss_sum(&ctx, chi * v % (q - 1)).unwrap();
        for i in 1..v {
            rhs = rhs.mul(&gauss_sum(&ctx, i * step).unwrap());
        }
        // chi(v)^{-v} = zeta_{q-1}^{-omega_power * chi * v * dlog(v)},
        // and zeta_{q-1} = x^p in the group ring.
        let dl = ctx.fq.dlog(v % q) as i64;
        let e = (-(ctx.omega_power as i64) * chi as i64 * v as i64 * dl).rem_euclid((q - 1) as i64);
        let n = (q - 1) * ctx.fq.p;
        let factor = CyclotomicElement::monomial(n, e as u64 * ctx.fq.p % n);
        let rhs = rhs.mul(&factor);
        assert!(lhs.equals(&rhs));
    }
}
