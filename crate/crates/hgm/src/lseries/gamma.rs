//! Archimedean gamma factors of the completed L-function:
//! Gamma_R(s - w/2)^{h+} Gamma_R(s - w/2 + 1)^{h-} prod_{p<q} Gamma_C(s - p)^{h^{p,q}},
//! with h+- = (h^{w/2,w/2} +- (-1)^{w/2} sigma)/2 in even weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodge::HodgeData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaKind {
    R,
    C,
}

/// One Gamma_R(s + shift) or Gamma_C(s + shift) factor with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaFactor {
    pub kind: GammaKind,
    pub shift: i64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaFactorSet {
    pub w: u32,
    pub factors: Vec<GammaFactor>,
}

impl GammaFactorSet {
    /// R counts 1 real dimension, C counts 2; the total is the rank.
    pub fn real_dimension(&self) -> u32 {
        self.factors
            .iter()
            .map(|f| match f.kind {
                GammaKind::R => f.multiplicity,
                GammaKind::C => 2 * f.multiplicity,
            })
            .sum()
    }
}

/// Build the factor multiset from Hodge data. Even-weight motives
/// with an odd central Hodge number need the signature; sigma = 0 is
/// the default otherwise (the duplication-formula collapse turns the
/// central pair into Gamma_C(s - w/2)^{h/2}).
pub fn gamma_factors(hodge: &HodgeData) -> Result<GammaFactorSet> {
    let w = hodge.w;
    let mut factors = Vec::new();
    // h[j] = h^{w-j, j}: each pair {j, w-j} with j < w/2 contributes
    // Gamma_C(s - j)^{h[j]} (h is palindromic).
    for (j, &h) in hodge.h.iter().enumerate() {
        if 2 * j < w as usize && h > 0 {
            factors.push(GammaFactor {
                kind: GammaKind::C,
                shift: -(j as i64),
                multiplicity: h,
            });
        }
    }
    if w % 2 == 0 {
        let central = hodge.h[(w / 2) as usize];
        if central > 0 {
            let sigma = hodge.sigma.unwrap_or(0);
            if hodge.sigma.is_none() && central % 2 != 0 {
                return Err(Error::SignatureRequired);
            }
            let sign = if (w / 2) % 2 == 0 { 1 } else { -1 };
            let hp = central as i64 + sign * sigma;
            let hm = central as i64 - sign * sigma;
            if hp < 0 || hm < 0 || hp % 2 != 0 {
                return Err(Error::Domain(format!(
                    "signature {sigma} incompatible with central Hodge number {central}"
                )));
            }
            let (hp, hm) = (hp as u32 / 2, hm as u32 / 2);
            if hp > 0 {
                factors.push(GammaFactor {
                    kind: GammaKind::R,
                    shift: -(w as i64) / 2,
                    multiplicity: hp,
                });
            }
            if hm > 0 {
                factors.push(GammaFactor {
                    kind: GammaKind::R,
                    shift: -(w as i64) / 2 + 1,
                    multiplicity: hm,
                });
            }
        }
    }
    let set = GammaFactorSet { w, factors };
    if set.real_dimension() != hodge.rank() {
        return Err(Error::Invariant(format!(
            "gamma factors span dimension {} != rank {}",
            set.real_dimension(),
            hodge.rank()
        )));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hd(h: &[u32], w: u32, sigma: Option<i64>) -> HodgeData {
        HodgeData {
            h: h.to_vec(),
            w,
            phi0: 0,
            sigma,
        }
    }

    #[test]
    fn weight_one_pair() {
        let set = gamma_factors(&hd(&[1, 1], 1, None)).unwrap();
        assert_eq!(
            set.factors,
            vec![GammaFactor {
                kind: GammaKind::C,
                shift: 0,
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn weight_five_separated() {
        let set = gamma_factors(&hd(&[1, 1, 1, 1, 1, 1], 5, None)).unwrap();
        let shifts: Vec<i64> = set.factors.iter().map(|f| f.shift).collect();
        assert_eq!(shifts, vec![0, -1, -2]);
        assert!(set.factors.iter().all(|f| f.kind == GammaKind::C));
        assert_eq!(set.real_dimension(), 6);
    }

    #[test]
    fn weight_zero_with_signature() {
        // w = 0, h = (n): h+ = (n+sigma)/2 copies of Gamma_R(s),
        // h- = (n-sigma)/2 copies of Gamma_R(s+1).
        let set = gamma_factors(&hd(&[6], 0, Some(2))).unwrap();
        assert_eq!(
            set.factors,
            vec![
                GammaFactor {
                    kind: GammaKind::R,
                    shift: 0,
                    multiplicity: 4
                },
                GammaFactor {
                    kind: GammaKind::R,
                    shift: 1,
                    multiplicity: 2
                }
            ]
        );
    }

    #[test]
    fn signature_required_when_central_odd() {
        assert!(matches!(
            gamma_factors(&hd(&[1, 3, 1], 2, None)),
            Err(Error::SignatureRequired)
        ));
        // Even central number collapses with sigma = 0 by duplication.
        let set = gamma_factors(&hd(&[1, 4, 1], 2, None)).unwrap();
        assert_eq!(set.real_dimension(), 6);
    }
}
