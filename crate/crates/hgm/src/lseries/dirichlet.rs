//! Dirichlet coefficients of L(M, s) = prod_p 1/F_p(p^{-s}),
//! expanded multiplicatively from the local factors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::FamilyParameter;
use crate::nt;

use super::euler::{frobenius_poly, EulerFactor};

/// Coefficients a_1..a_{n_max}. Bad primes must be covered by
/// `bad_factors` (computed local data or fixtures); factors for good
/// primes are computed here, in parallel over primes.
pub fn dirichlet_coefficients(
    param: &FamilyParameter,
    t: &BigRational,
    n_max: usize,
    bad_factors: &BTreeMap<u64, EulerFactor>,
) -> Result<Vec<BigInt>> {
    let primes = nt::primes_up_to(n_max as u64);
    let factors: Vec<EulerFactor> = primes
        .par_iter()
        .map(|&p| -> Result<EulerFactor> {
            if let Some(f) = bad_factors.get(&p) {
                return Ok(f.clone());
            }
            match crate::arith::prime_kind(param, t, p) {
                crate::arith::PrimeKind::Good => frobenius_poly(param, t, p),
                _ => Err(Error::MissingFactor(p)),
            }
        })
        .collect::<Result<_>>()?;
    let mut a = vec![BigInt::zero(); n_max + 1];
    a[1] = BigInt::one();
    for f in &factors {
        let p = f.p;
        // 1/F_p(x) = sum b_k x^k.
        let depth = {
            let mut d = 0usize;
            let mut pk = 1u64;
            while pk <= n_max as u64 / p {
                pk *= p;
                d += 1;
            }
            d
        };
        let mut b = vec![BigInt::one()];
        for k in 1..=depth {
            let mut acc = BigInt::zero();
            for i in 1..=k.min(f.coeffs.len() - 1) {
                acc -= &f.coeffs[i] * &b[k - i];
            }
            b.push(acc);
        }
        // Fold into a along p-power strides (multiplicativity).
        let mut new_a = a.clone();
        for m in 1..=n_max {
            if m as u64 % p == 0 || a[m].is_zero() {
                continue;
            }
            let mut pk = 1usize;
            for bk in b.iter().skip(1) {
                pk *= p as usize;
                let idx = match m.checked_mul(pk) {
                    Some(i) if i <= n_max => i,
                    _ => break,
                };
                new_a[idx] = &a[m] * bk;
            }
        }
        a = new_a;
    }
    a.remove(0);
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;
    use crate::geometry;

    #[test]
    fn legendre_dirichlet_series() {
        let param = parse_family("[-2,-2,1,1,1,1]").unwrap();
        let t = BigRational::new(2.into(), 1.into());
        // Bad primes of (gamma, 2): 2 is wild. Use the trivial factor 1
        // as a stand-in (exact bad data is not the point of this test).
        let mut bad = BTreeMap::new();
        bad.insert(
            2,
            EulerFactor {
                p: 2,
                coeffs: vec![BigInt::one()],
                provenance: super::super::euler::Provenance::Fixture,
            },
        );
        let a = dirichlet_coefficients(&param, &t, 30, &bad).unwrap();
        assert_eq!(a[0], BigInt::one());
        // a_p = elliptic a_p at good primes.
        for p in [3u64, 5, 7, 11, 13] {
            let ap = geometry::elliptic_ap(&t, p).unwrap();
            assert_eq!(a[p as usize - 1], BigInt::from(ap), "p = {p}");
        }
        // Multiplicativity: a_15 = a_3 a_5, a_21 = a_3 a_7.
        let v = |i: usize| a[i - 1].clone();
        assert_eq!(v(15), v(3) * v(5));
        assert_eq!(v(21), v(3) * v(7));
        // Prime powers obey the local recursion: a_9 = a_3^2 - 3 a_1...
        // for degree-2 factors a_{p^2} = a_p^2 - p.
        assert_eq!(v(9), v(3) * v(3) - BigInt::from(3));
        assert_eq!(v(25), v(5) * v(5) - BigInt::from(5));
    }

    #[test]
    fn missing_bad_factor_is_an_error() {
        let param = parse_family("[-2,-2,1,1,1,1]").unwrap();
        let t = BigRational::new(2.into(), 1.into());
        let bad = BTreeMap::new();
        assert!(matches!(
            dirichlet_coefficients(&param, &t, 10, &bad),
            Err(Error::MissingFactor(2))
        ));
    }
}
