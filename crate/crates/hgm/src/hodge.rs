//! The zigzag procedure and everything read off from it: Hodge
//! vectors, weight, the normalization offset phi_0, the t = 1
//! adjustment, and the projective-hypersurface families with their
//! Betti-number cross-checks.
//!
//! The walk: sort all 2n parameters in (0, 1], plot each at the
//! current height starting from 0, then step up after an alpha point
//! and down after a beta point. Alpha-level counts form the Hodge
//! vector; the minimum plotted height is phi_0. This absolute height
//! convention is the one consumed by the trace formula's q^{phi_0}
//! prefactor.

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{FamilyParameter, GammaVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Color {
    Alpha,
    Beta,
}

/// A plotted zigzag point: parameter value, color, height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagPoint {
    pub value: Rational64,
    pub color: Color,
    pub height: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagDiagram {
    pub points: Vec<ZigzagPoint>,
}

impl ZigzagDiagram {
    pub fn heights(&self, color: Color) -> Vec<i32> {
        self.points
            .iter()
            .filter(|p| p.color == color)
            .map(|p| p.height)
            .collect()
    }

    pub fn min_height(&self) -> i32 {
        self.points.iter().map(|p| p.height).min().unwrap_or(0)
    }
}

/// Hodge data of a parameter: the vector (h^{w,0}, ..., h^{0,w}),
/// the weight, and the zigzag offset phi_0. The signature sigma of
/// even-weight motives is caller-supplied where needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeData {
    pub h: Vec<u32>,
    pub w: u32,
    pub phi0: i32,
    pub sigma: Option<i64>,
}

impl HodgeData {
    pub fn rank(&self) -> u32 {
        self.h.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let mut rev = self.h.clone();
        rev.reverse();
        rev == self.h
    }
}

/// Run the zigzag walk over a parameter.
pub fn zigzag(param: &FamilyParameter) -> ZigzagDiagram {
    let mut points = Vec::with_capacity(2 * param.n as usize);
    let mut height = 0i32;
    for (value, is_alpha) in param.merged_sorted() {
        let color = if is_alpha { Color::Alpha } else { Color::Beta };
        points.push(ZigzagPoint {
            value,
            color,
            height,
        });
        height += if is_alpha { 1 } else { -1 };
    }
    debug_assert_eq!(height, 0, "zigzag must return to height 0");
    ZigzagDiagram { points }
}

/// Alpha-level counts from a sorted color sequence (`true` = alpha),
/// listed from the top level down, plus (weight, phi_0).
///
/// This is the census fast path: heights depend only on the color
/// order, not the parameter values.
pub fn hodge_counts_from_colors(colors: &[bool]) -> (Vec<u32>, u32, i32) {
    let mut height = 0i32;
    let mut min_all = 0i32;
    let mut alpha_heights: Vec<i32> = Vec::with_capacity(colors.len() / 2);
    for &is_alpha in colors {
        if height < min_all {
            min_all = height;
        }
        if is_alpha {
            alpha_heights.push(height);
            height += 1;
        } else {
            height -= 1;
        }
    }
    let lo = *alpha_heights.iter().min().expect("nonempty alpha side");
    let hi = *alpha_heights.iter().max().unwrap();
    let w = (hi - lo) as u32;
    let mut counts = vec![0u32; w as usize + 1];
    for h in alpha_heights {
        counts[(hi - h) as usize] += 1;
    }
    (counts, w, min_all)
}

/// Hodge vector, weight, and phi_0 of a parameter.
pub fn hodge_vector(param: &FamilyParameter) -> HodgeData {
    let colors: Vec<bool> = param.merged_sorted().iter().map(|&(_, a)| a).collect();
    let (h, w, phi0) = hodge_counts_from_colors(&colors);
    HodgeData {
        h,
        w,
        phi0,
        sigma: None,
    }
}

/// Hodge vector of the special motive at t = 1: the central entry
/// drops by one in the orthogonal case, the two central entries drop
/// by one each in the symplectic case.
pub fn hodge_vector_at_one(param: &FamilyParameter) -> Result<HodgeData> {
    let mut hd = hodge_vector(param);
    let len = hd.h.len();
    if hd.w % 2 == 0 {
        // Orthogonal: odd-length vector, single central entry.
        let c = len / 2;
        if hd.h[c] == 0 {
            return Err(Error::HodgeUnderflow);
        }
        hd.h[c] -= 1;
    } else {
        let c = len / 2;
        if hd.h[c - 1] == 0 || hd.h[c] == 0 {
            return Err(Error::HodgeUnderflow);
        }
        hd.h[c - 1] -= 1;
        hd.h[c] -= 1;
    }
    Ok(hd)
}

/// The gamma vector realizing the primitive middle cohomology of a
/// smooth degree-delta hypersurface in P^{kappa+1}:
/// [1, -e, e^2, ..., (-e)^kappa, (-e)^{kappa+1} - 1, ((-e)^{kappa+2} + e)/(e+1)]
/// with e = delta - 1.
pub fn hypersurface_gamma(delta: u32, kappa: u32) -> Result<GammaVector> {
    if delta < 3 {
        return Err(Error::Domain(format!("delta = {delta} < 3")));
    }
    if kappa < 1 {
        return Err(Error::Domain("kappa must be >= 1".into()));
    }
    let e = -(delta as i128 - 1);
    let mut entries: Vec<i128> = Vec::new();
    let mut pow = 1i128;
    for _ in 0..=kappa {
        entries.push(pow);
        pow = pow.checked_mul(e).ok_or(Error::Domain("overflow".into()))?;
    }
    entries.push(pow - 1);
    let next = pow
        .checked_mul(e)
        .ok_or(Error::Domain("overflow".into()))?;
    entries.push((next - e) / (1 - e));
    let small: Vec<i64> = entries
        .iter()
        .map(|&x| i64::try_from(x).map_err(|_| Error::Domain("overflow".into())))
        .collect::<Result<_>>()?;
    GammaVector::new(small)
}

/// Primitive middle Betti number and top Hodge number of a smooth
/// degree-delta hypersurface of dimension kappa:
/// b = ((delta-1)^{kappa+2} + (-1)^kappa (delta-1)) / delta,
/// h_top = C(delta-1, kappa+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BettiData {
    pub b: u64,
    pub h_top: u64,
}

pub fn betti_primitive(delta: u32, kappa: u32) -> BettiData {
    let e = (delta - 1) as i128;
    let sign = if kappa % 2 == 0 { 1i128 } else { -1 };
    let b = (e.pow(kappa + 2) + sign * e) / delta as i128;
    let h_top = binomial(delta as u64 - 1, kappa as u64 + 1);
    BettiData {
        b: b as u64,
        h_top,
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
