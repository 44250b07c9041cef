//! Source-variety models for a gamma vector: the two-equation BCM
//! presentation, one-equation toric models from saturated integer
//! kernels, lattice-polytope statistics, splice detection, and the
//! brute-force point-counting oracles used to validate the
//! character-sum engine.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::GammaVector;
use crate::fq::Fq;
use crate::matrix::{self, ZMat};
use crate::nt;
use crate::poly;

/// Total torus evaluations allowed in one brute-force count.
const COUNT_BUDGET: u128 = 1 << 26;

/// A toric model: d = l - 2 rows orthogonal to gamma forming, together
/// with the all-ones vector, a basis of the saturated kernel lattice;
/// a covector k with gamma . k = 1; and u = u_coeff * t.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricModel {
    pub gamma: Vec<i64>,
    /// d x l exponent matrix; column j is the lattice point of term j.
    pub m: Vec<Vec<i64>>,
    /// u-exponent vector with gamma . k = 1.
    pub k: Vec<i64>,
    pub d: usize,
    /// u = u_coeff * t, exact.
    #[serde(skip)]
    pub u_coeff: BigRational,
}

fn bigint_rows_to_i64(rows: &ZMat) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Domain("kernel entry overflow".into())))
                .collect()
        })
        .collect()
}

/// Build the canonical toric model of a gamma vector.
pub fn toric_model(gamma: &GammaVector) -> Result<ToricModel> {
    let l = gamma.len();
    if l < 3 {
        return Err(Error::TooShort(l));
    }
    let entries = gamma.entries();
    // Saturated kernel basis, rank l-1; the all-ones vector lies in it.
    let kernel = matrix::kernel_of_vector(entries);
    // Coordinates of (1,...,1) in that basis: solve c * kernel = ones.
    let ones = vec![BigInt::one(); l];
    let c = solve_left(&kernel, &ones)?;
    // Unimodular U with first row c: transpose of the inverse of the
    // HNF transform that sends the column c to e_1.
    let c_col: ZMat = c.iter().map(|x| vec![x.clone()]).collect();
    let (h, u) = matrix::hnf_with_transform(&c_col);
    if h[0][0] != BigInt::one() {
        return Err(Error::Invariant(format!(
            "all-ones vector is imprimitive in the kernel of {gamma}"
        )));
    }
    let u_inv_t = transpose(&integer_inverse(&u));
    let new_basis = matrix::zmat_mul(&u_inv_t, &kernel);
    debug_assert_eq!(new_basis[0], ones);
    let m_rows: ZMat = new_basis[1..].to_vec();
    // Canonical form of the row span.
    let (m_hnf, _) = matrix::hnf_with_transform(&m_rows);
    let m = bigint_rows_to_i64(&m_hnf)?;

    // k from the extended gcd over gamma, reduced modulo the kernel.
    let k = covector(entries, &kernel)?;

    let fam_u = {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &g in entries {
            let base = BigInt::from(g);
            if g > 0 {
                num *= num_traits::pow::pow(base, g as usize);
            } else {
                den *= num_traits::pow::pow(base, (-g) as usize);
            }
        }
        BigRational::new(num, den)
    };
    let model = ToricModel {
        gamma: entries.to_vec(),
        m,
        k,
        d: l - 2,
        u_coeff: fam_u,
    };
    validate_model(&model)?;
    Ok(model)
}

/// Solve x * rows = target over the integers (rows linearly independent).
fn solve_left(rows: &ZMat, target: &[BigInt]) -> Result<Vec<BigInt>> {
    // Transpose to a column system: rows^T * x^T = target^T, solved by
    // rational elimination; the result must be integral.
    let r = rows.len();
    let cols = rows[0].len();
    let mut aug: Vec<Vec<BigRational>> = (0..cols)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..r)
                .map(|i| BigRational::from(rows[i][j].clone()))
                .collect();
            row.push(BigRational::from(target[j].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..cols).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = aug[row][col].recip();
        for j in 0..=r {
            aug[row][j] = &aug[row][j] * &inv;
        }
        for i in 0..cols {
            if i != row && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=r {
                    let t = &f * &aug[row][j];
                    aug[i][j] -= t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let mut x = vec![BigRational::zero(); r];
    for (rw, col) in pivots {
        x[col] = aug[rw][r].clone();
    }
    // Consistency and integrality.
    for j in 0..cols {
        let mut acc = BigRational::zero();
        for i in 0..r {
            acc += &x[i] * BigRational::from(rows[i][j].clone());
        }
        if acc != BigRational::from(target[j].clone()) {
            return Err(Error::Invariant("inconsistent kernel system".into()));
        }
    }
    x.into_iter()
        .map(|v| {
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(Error::Invariant("non-integral kernel coordinates".into()))
            }
        })
        .collect()
}

fn integer_inverse(m: &ZMat) -> ZMat {
    let q = matrix::qmat_inverse(&matrix::qmat_from_z(m));
    q.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    assert!(x.is_integer(), "unimodular inverse must be integral");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

fn transpose(m: &ZMat) -> ZMat {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// k with gamma . k = 1, reduced modulo the kernel lattice.
fn covector(gamma: &[i64], kernel: &ZMat) -> Result<Vec<i64>> {
    let l = gamma.len();
    let mut g = gamma[0];
    let mut coeffs = vec![0i64; l];
    coeffs[0] = 1;
    for (j, &gj) in gamma.iter().enumerate().skip(1) {
        let (ng, x, y) = nt::ext_gcd(g, gj);
        for c in coeffs.iter_mut() {
            *c *= x;
        }
        coeffs[j] = y;
        g = ng;
    }
    debug_assert_eq!(g, 1);
    // Reduce against the HNF of the kernel for a canonical representative.
    let (h, _) = matrix::hnf_with_transform(kernel);
    let mut k: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
    for row in h.iter() {
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = num_integer::Integer::div_floor(&k[pivot], &row[pivot]);
        if !q.is_zero() {
            for (kk, r) in k.iter_mut().zip(row) {
                *kk -= &q * r;
            }
        }
    }
    let k: Vec<i64> = k
        .iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Domain("covector overflow".into())))
        .collect::<Result<_>>()?;
    let dot: i64 = k.iter().zip(gamma).map(|(a, b)| a * b).sum();
    debug_assert_eq!(dot, 1);
    Ok(k)
}

/// Check the full toric-model contract.
pub fn validate_model(model: &ToricModel) -> Result<()> {
    let l = model.gamma.len();
    let d = model.d;
    if model.m.len() != d || model.m.iter().any(|r| r.len() != l) || model.k.len() != l {
        return Err(Error::Invariant("toric model shape mismatch".into()));
    }
    for row in &model.m {
        let dot: i64 = row.iter().zip(&model.gamma).map(|(a, b)| a * b).sum();
        if dot != 0 {
            return Err(Error::Invariant("m row not orthogonal to gamma".into()));
        }
    }
    let dot: i64 = model.k.iter().zip(&model.gamma).map(|(a, b)| a * b).sum();
    if dot != 1 {
        return Err(Error::Invariant("gamma . k != 1".into()));
    }
    let rows: ZMat = model
        .m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let inv = matrix::snf_invariants(&rows);
    if inv.len() != d || inv.iter().any(|x| !x.is_one()) {
        return Err(Error::Invariant(
            "exponent matrix does not span a saturated sublattice".into(),
        ));
    }
    Ok(())
}

/// Lattice-polytope statistics of a toric model. Volumes are
/// normalized so the standard d-simplex has volume 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeStats {
    /// vol(Delta_j) for each omitted vertex j; equals |gamma_j|.
    pub vols: Vec<u64>,
    pub total: u64,
    pub chi: i64,
    /// Interior lattice points (genus), d = 2 only.
    pub genus: Option<u64>,
    /// Boundary lattice points (punctures), d = 2 only.
    pub punctures: Option<u64>,
}

pub fn polytope_stats(model: &ToricModel) -> Result<PolytopeStats> {
    let d = model.d;
    let l = model.gamma.len();
    let points: Vec<Vec<i64>> = (0..l)
        .map(|j| (0..d).map(|i| model.m[i][j]).collect())
        .collect();
    let mut vols = Vec::with_capacity(l);
    for j in 0..l {
        let rest: Vec<&Vec<i64>> = points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, p)| p)
            .collect();
        // l - 1 = d + 1 points: a simplex.
        let base = rest[0];
        let mat: ZMat = rest[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(base)
                    .map(|(a, b)| BigInt::from(a - b))
                    .collect()
            })
            .collect();
        let det = matrix::det_bigint(mat);
        vols.push(u64::try_from(det.abs()).map_err(|_| Error::Domain("volume overflow".into()))?);
    }
    let pos_total: u64 = (0..l)
        .filter(|&j| model.gamma[j] > 0)
        .map(|j| vols[j])
        .sum();
    let neg_total: u64 = (0..l)
        .filter(|&j| model.gamma[j] < 0)
        .map(|j| vols[j])
        .sum();
    if pos_total != neg_total {
        return Err(Error::Invariant(
            "the two triangulations disagree on the total volume".into(),
        ));
    }
    let total = pos_total;
    let chi = if d % 2 == 1 { total as i64 } else { -(total as i64) };
    let (genus, punctures) = if d == 2 {
        let hull = convex_hull_2d(&points);
        let mut boundary = 0u64;
        for w in 0..hull.len() {
            let a = &hull[w];
            let b = &hull[(w + 1) % hull.len()];
            boundary += nt::gcd_i64(b[0] - a[0], b[1] - a[1]);
        }
        // Pick: normalized area = 2 * euclidean area = I*2 + B - 2.
        let interior = (total as i64 - boundary as i64 + 2) / 2;
        if interior < 0 || (total as i64 - boundary as i64) % 2 != 0 {
            return Err(Error::Invariant("Pick's theorem bookkeeping failed".into()));
        }
        (Some(interior as u64), Some(boundary))
    } else {
        (None, None)
    };
    Ok(PolytopeStats {
        vols,
        total,
        chi,
        genus,
        punctures,
    })
}

fn convex_hull_2d(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().map(|(x, y)| vec![x, y]).collect();
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(x, y)| vec![x, y]).collect()
}

/// All unordered partitions of the gamma multiset into two nonempty
/// zero-sum parts.
pub fn splicings(gamma: &GammaVector) -> Vec<(Vec<i64>, Vec<i64>)> {
    let e = gamma.entries();
    let l = e.len();
    let mut seen = BTreeSet::new();
    // Keep index 0 in the first part to quotient by the part swap.
    for mask in 0..(1u32 << (l - 1)) {
        let mask = (mask << 1) | 1;
        let mut part_a = Vec::new();
        let mut part_b = Vec::new();
        for (i, &g) in e.iter().enumerate() {
            if mask >> i & 1 == 1 {
                part_a.push(g);
            } else {
                part_b.push(g);
            }
        }
        if part_b.is_empty() {
            continue;
        }
        if part_a.iter().sum::<i64>() != 0 || part_b.iter().sum::<i64>() != 0 {
            continue;
        }
        let pair = if part_a <= part_b {
            (part_a, part_b)
        } else {
            (part_b, part_a)
        };
        seen.insert(pair);
    }
    seen.into_iter().collect()
}

fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = nt::factor(q);
    if f.len() != 1 {
        return Err(Error::Domain(format!("{q} is not a prime power")));
    }
    Ok(f[0])
}

/// Goodness of p for (gamma, t): p divides no gamma entry, and
/// ord_p(t) = ord_p(t - 1) = 0.
pub fn is_good_prime(gamma: &[i64], t: &BigRational, p: u64) -> bool {
    if gamma.iter().any(|&g| g.unsigned_abs() % p == 0) {
        return false;
    }
    if t.is_zero() {
        return false;
    }
    if poly::val_p(t, p) != 0 {
        return false;
    }
    let tm1 = t - BigRational::one();
    if tm1.is_zero() {
        return false;
    }
    poly::val_p(&tm1, p) == 0
}

/// Brute-force point count of X_{gamma,t} over F_q on the toric torus.
/// Complexity (q-1)^d evaluations.
pub fn count_points(gamma: &GammaVector, t: &BigRational, q: u64) -> Result<u64> {
    let model = toric_model(gamma)?;
    count_points_model(&model, t, q)
}

/// Same count on a caller-supplied (validated) model.
pub fn count_points_model(model: &ToricModel, t: &BigRational, q: u64) -> Result<u64> {
    validate_model(model)?;
    let (p, e) = prime_power(q)?;
    if !is_good_prime(&model.gamma, t, p) {
        return Err(Error::BadPrime {
            p,
            kind: "bad",
            expected: "good for (gamma, t)",
        });
    }
    let d = model.d as u32;
    let evals = (q as u128 - 1).pow(d);
    if evals > COUNT_BUDGET {
        return Err(Error::BudgetExceeded(evals));
    }
    let f = Fq::new(p, e)?;
    let u = &model.u_coeff * t;
    let u_img = f.embed_rational(&u)?;
    if u_img == 0 {
        return Err(Error::BadPrime {
            p,
            kind: "dividing u",
            expected: "a p-unit",
        });
    }
    let l = model.gamma.len();
    let qm1 = q - 1;
    // Term j evaluated at x = (g^{a_1}, ..., g^{a_d}) is
    // u^{k_j} g^{sum_i a_i m_{ij}}.
    let coeff: Vec<u64> = (0..l)
        .map(|j| f.pow(u_img, model.k[j]))
        .collect();
    let mut count = 0u64;
    let mut idx = vec![0u64; model.d];
    loop {
        let mut sum = 0u64;
        for j in 0..l {
            let mut ex = 0i64;
            for i in 0..model.d {
                ex += idx[i] as i64 * model.m[i][j];
            }
            let term = f.mul(coeff[j], f.from_dlog(ex.rem_euclid(qm1 as i64) as u64));
            sum = f.add(sum, term);
        }
        if sum == 0 {
            count += 1;
        }
        // Advance the multi-index.
        let mut i = 0;
        loop {
            if i == model.d {
                return Ok(count);
            }
            idx[i] += 1;
            if idx[i] < qm1 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Brute-force a_p of the Legendre curve y^2 = x(1-x)(x-t) over F_p.
pub fn elliptic_ap(t: &BigRational, p: u64) -> Result<i64> {
    if p == 2 || !nt::is_prime(p) {
        return Err(Error::BadPrime {
            p,
            kind: "even or composite",
            expected: "an odd prime",
        });
    }
    let f = Fq::new(p, 1)?;
    let tm1 = t - BigRational::one();
    if poly::val_p(t, p) != 0 || tm1.is_zero() || poly::val_p(&tm1, p) != 0 {
        return Err(Error::BadPrime {
            p,
            kind: "dividing t(t-1) or a denominator",
            expected: "good for t",
        });
    }
    let tbar = f.embed_rational(t)?;
    // Quadratic character values.
    let mut chi = vec![-1i64; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[f.mul(x, x) as usize] = 1;
    }
    let mut sum = 0i64;
    for x in 0..p {
        let v = f.mul(f.mul(x, f.sub(1, x)), f.sub(x, tbar));
        sum += chi[v as usize];
    }
    // |E(F_p)| = p + 1 + sum, and a_p = p + 1 - |E|.
    Ok(-sum)
}

/// The two presentations of the weight-zero family [-(a+b), a, b]:
/// BCM form y^a (1-y)^b - a^a b^b / (a+b)^{a+b} t, and a trinomial
/// toric form in one variable.
#[derive(Debug, Clone)]
pub struct TrinomialModel {
    pub a: u32,
    pub b: u32,
    pub t: BigRational,
    /// Coefficients of the BCM polynomial in y, ascending degree.
    pub bcm: Vec<BigRational>,
    /// Coefficients of the trinomial toric form in x, ascending degree.
    pub toric: Vec<BigRational>,
}

pub fn trinomial_model(a: u32, b: u32, t: &BigRational) -> Result<TrinomialModel> {
    if a == 0 || b == 0 || nt::gcd_u64(a as u64, b as u64) != 1 {
        return Err(Error::Domain("need coprime positive a, b".into()));
    }
    let n = (a + b) as usize;
    // y^a (1-y)^b - a^a b^b/(a+b)^{a+b} t.
    let mut bcm = vec![BigRational::zero(); n + 1];
    let mut binom = BigInt::one();
    for i in 0..=b as usize {
        // coefficient of y^{a+i} in y^a (1-y)^b
        let sign = if i % 2 == 0 { 1 } else { -1 };
        bcm[a as usize + i] = BigRational::from(&binom * BigInt::from(sign));
        binom = &binom * BigInt::from((b as usize - i) as i64) / BigInt::from((i + 1) as i64);
    }
    let m_const = BigRational::new(
        num_traits::pow::pow(BigInt::from(a), a as usize)
            * num_traits::pow::pow(BigInt::from(b), b as usize),
        num_traits::pow::pow(BigInt::from(a + b), n),
    );
    bcm[0] -= m_const * t;

    // Toric trinomial x^{a+b} + u x^b + u^{r-s} with ar + bs = 1,
    // 0 <= r < b, and u = t prod gamma_j^{gamma_j} for [-(a+b), a, b].
    let gamma = GammaVector::new(vec![-((a + b) as i64), a as i64, b as i64])?;
    let u = {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &g in gamma.entries() {
            if g > 0 {
                num *= num_traits::pow::pow(BigInt::from(g), g as usize);
            } else {
                den *= num_traits::pow::pow(BigInt::from(g), (-g) as usize);
            }
        }
        BigRational::new(num, den) * t
    };
    let (_, mut r, _) = nt::ext_gcd(a as i64, b as i64);
    r = r.rem_euclid(b as i64);
    let s = (1 - a as i64 * r) / b as i64;
    let delta = (r - s) as usize;
    let mut toric = vec![BigRational::zero(); n + 1];
    toric[n] = BigRational::one();
    toric[b as usize] = u.clone();
    toric[0] = rational_pow(&u, delta as i64);
    // Prefer the integral normal form b x^{a+b} + (a+b) t x^b + ...,
    // reachable when u b / ((a+b) t) has a rational a-th root.
    let mu_a = &u * BigRational::from(BigInt::from(b)) / (BigRational::from(BigInt::from(a + b)) * t);
    if let Some(mu) = rational_nth_root(&mu_a, a) {
        let lambda = BigRational::from(BigInt::from(b)) / rational_pow(&mu, n as i64);
        let mut scaled = vec![BigRational::zero(); n + 1];
        for (i, c) in toric.iter().enumerate() {
            scaled[i] = &lambda * c * rational_pow(&mu, i as i64);
        }
        toric = scaled;
    }
    Ok(TrinomialModel {
        a,
        b,
        t: t.clone(),
        bcm,
        toric,
    })
}

fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow::pow(x.clone(), e as usize)
    } else {
        num_traits::pow::pow(x.clone(), (-e) as usize).recip()
    }
}

fn rational_nth_root(x: &BigRational, n: u32) -> Option<BigRational> {
    let rn = exact_nth_root(x.numer(), n)?;
    let rd = exact_nth_root(x.denom(), n)?;
    Some(BigRational::new(rn, rd))
}

fn exact_nth_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_nth_root(&-x, n).map(|r| -r);
    }
    let r = num_integer::Roots::nth_root(x, n);
    if num_traits::pow::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

impl TrinomialModel {
    /// Roots of the BCM polynomial in F_q (all lie in the torus when
    /// u != 0; cross-checked against the toric form).
    pub fn root_count(&self, q: u64) -> Result<u64> {
        let (p, e) = prime_power(q)?;
        let f = Fq::new(p, e)?;
        let count = |coeffs: &[BigRational]| -> Result<u64> {
            let imgs: Vec<u64> = coeffs
                .iter()
                .map(|c| f.embed_rational(c))
                .collect::<Result<_>>()?;
            let mut cnt = 0;
            for x in 0..q {
                let mut acc = 0u64;
                for c in imgs.iter().rev() {
                    acc = f.add(f.mul(acc, x), *c);
                }
                if acc == 0 {
                    cnt += 1;
                }
            }
            Ok(cnt)
        };
        let bcm = count(&self.bcm)?;
        let toric = count(&self.toric)?;
        if bcm != toric {
            return Err(Error::Invariant(format!(
                "BCM and toric root counts disagree over F_{q}: {bcm} vs {toric}"
            )));
        }
        Ok(bcm)
    }

    /// Exact discriminant of the toric trinomial.
    pub fn toric_discriminant(&self) -> BigRational {
        poly::discriminant_rational(&self.toric)
    }
}
