//! Levelt matrices, the orthogonal/symplectic dichotomy, and the
//! invariant-drop ranks feeding tame conductor exponents.
//!
//! h_inf and h_0 are companion matrices of the numerator and
//! denominator of the family parameter; h_1 is forced by
//! h_inf h_1 h_0 = I and differs from the identity by a rank-one
//! matrix. Only conjugation-invariant quantities are exposed, so the
//! companion orientation (coefficient column last) is unobservable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyParameter;
use crate::hodge;
use crate::matrix::{self, QMat, ZMat};
use crate::nt;
use crate::poly::phi_product;

/// Exact rational monodromy generators with h_inf * h_1 * h_0 = I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveltTriple {
    pub h_inf: QMat,
    pub h_1: QMat,
    pub h_0: QMat,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Orthogonal,
    Symplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cusp {
    Zero,
    Infinity,
}

/// Integer companion matrices of the two sides; h_1 computed from them.
fn companion_pair(param: &FamilyParameter) -> (ZMat, ZMat) {
    let q_inf = phi_product(param.cyc.alpha_side());
    let q_0 = phi_product(param.cyc.beta_side());
    (matrix::companion(&q_inf.c), matrix::companion(&q_0.c))
}

/// Construct the Levelt triple of a parameter.
///
/// h_inf is the companion matrix of the numerator; h_0 is the inverse
/// of the companion matrix of the denominator (so char(h_0^{-1}) is
/// the denominator polynomial). Then h_1 = h_inf^{-1} h_0^{-1} differs
/// from I by h_inf^{-1} (B_0 - h_inf), and two companion matrices
/// differ only in their coefficient column, giving rank(h_1 - I) = 1.
pub fn levelt(param: &FamilyParameter) -> LeveltTriple {
    let (h_inf_z, b_0_z) = companion_pair(param);
    let h_inf = matrix::qmat_from_z(&h_inf_z);
    let b_0 = matrix::qmat_from_z(&b_0_z);
    let h_0 = matrix::qmat_inverse(&b_0);
    // h_1 = h_inf^{-1} h_0^{-1} = h_inf^{-1} B_0
    let h_1 = matrix::qmat_mul(&matrix::qmat_inverse(&h_inf), &b_0);
    LeveltTriple {
        h_inf,
        h_1,
        h_0,
        n: param.n as usize,
    }
}

impl LeveltTriple {
    pub fn det_h1(&self) -> BigRational {
        qmat_det(&self.h_1)
    }

    pub fn rank_h1_minus_identity(&self) -> usize {
        let n = self.n;
        let mut m = self.h_1.clone();
        for (i, row) in m.iter_mut().enumerate().take(n) {
            row[i] -= BigRational::one();
        }
        matrix::qmat_rank(m)
    }
}

fn qmat_det(m: &QMat) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= a[col][col].clone();
        let inv = a[col][col].recip();
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let f = &a[i][col] * &inv;
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Orthogonal or symplectic, from det(h_1) = q(0), with the weight
/// parity of the Hodge vector cross-checked.
pub fn classify(param: &FamilyParameter) -> Result<Classification> {
    let cls = if param.q_at_zero == 1 {
        Classification::Symplectic
    } else {
        Classification::Orthogonal
    };
    let w = hodge::hodge_vector(param).w;
    let consistent = match cls {
        Classification::Symplectic => w % 2 == 1,
        Classification::Orthogonal => w % 2 == 0,
    };
    if !consistent {
        return Err(Error::Invariant(format!(
            "classification {cls:?} inconsistent with weight {w} for {param}"
        )));
    }
    Ok(cls)
}

/// rank(h_tau^{|k|} - I): the conductor-exponent drop at a tame cusp.
///
/// Two independent routes are available: exact matrix rank, and the
/// eigenvalue-order count n - sum of phi(d) over distinct levels d of
/// the cusp side dividing |k|. [`drop_rank`] returns the eigenvalue
/// route; [`drop_rank_matrix`] runs the matrix route.
pub fn drop_rank(param: &FamilyParameter, cusp: Cusp, k: i64) -> Result<u32> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    let levels = match cusp {
        Cusp::Infinity => param.cyc.alpha_side(),
        Cusp::Zero => param.cyc.beta_side(),
    };
    let k = k.unsigned_abs();
    let mut fixed = 0u32;
    let mut seen = Vec::new();
    for &d in levels {
        if seen.contains(&d) {
            continue;
        }
        seen.push(d);
        if k % d as u64 == 0 {
            fixed += nt::totient(d);
        }
    }
    Ok(param.n - fixed)
}

/// Matrix route for [`drop_rank`]: exact rank of h_tau^{|k|} - I over Q.
pub fn drop_rank_matrix(param: &FamilyParameter, cusp: Cusp, k: i64) -> Result<u32> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    let (h_inf_z, h_0_z) = companion_pair(param);
    let h = match cusp {
        Cusp::Infinity => h_inf_z,
        Cusp::Zero => h_0_z,
    };
    // rank(h^k - I) depends on k only through which levels divide k,
    // so the exponent can be reduced to [1, m]. (h^m = I itself fails
    // for non-squarefree sides: the companion matrix is not semisimple.)
    let mut e = k.unsigned_abs() % param.m;
    if e == 0 {
        e = param.m;
    }
    let mut pk = matrix::zmat_pow(&h, e);
    for (i, row) in pk.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    Ok(matrix::rank_bigint(pk) as u32)
}

/// Fast Levelt invariant check used by the exhaustive suites:
/// verifies rank(h_1 - I) = 1 and det(h_1) = q(0) in integer
/// arithmetic, using rank(h_1 - I) = rank(B_0 - h_inf) and
/// det(h_1) = det(B_0)/det(h_inf).
pub fn levelt_invariants_hold(param: &FamilyParameter) -> bool {
    let (h_inf_z, b_0_z) = companion_pair(param);
    let n = param.n as usize;
    let to_i128 = |m: &ZMat| -> Option<Vec<Vec<i128>>> {
        m.iter()
            .map(|r| r.iter().map(|x| i128::try_from(x).ok()).collect())
            .collect()
    };
    let mut diff = b_0_z.clone();
    for i in 0..n {
        for j in 0..n {
            diff[i][j] -= &h_inf_z[i][j];
        }
    }
    let rank_one = match to_i128(&diff) {
        Some(m) => matrix::rank_i128(&m) == 1,
        None => matrix::rank_bigint(diff) == 1,
    };
    if !rank_one {
        return false;
    }
    // det(companion) = (-1)^n * constant term; the constant terms of
    // Phi-products are +-1, so these are exact small integers.
    let det_inf = matrix::det_bigint(h_inf_z);
    let det_b0 = matrix::det_bigint(b_0_z);
    if det_inf.abs() != BigInt::one() || det_b0.abs() != BigInt::one() {
        return false;
    }
    det_b0 * det_inf == BigInt::from(param.q_at_zero)
}
