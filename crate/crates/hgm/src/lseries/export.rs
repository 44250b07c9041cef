//! JSON export of a motive's local data: the hand-off point for
//! external analytic engines. Integers are decimal strings so
//! arbitrary conductors and coefficients survive JSON number limits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::family::FamilyParameter;
use crate::hodge;

use super::dirichlet::dirichlet_coefficients;
use super::euler::{EulerFactor, Provenance};
use super::fixtures::FixtureTable;
use super::gamma::{gamma_factors, GammaFactorSet};
use super::local::{conductor, Conductor};

pub const EXPORT_SCHEMA: &str = "hgm/1";

#[derive(Debug, Serialize)]
pub struct ExportFactor {
    pub p: u64,
    pub coeffs: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Debug, Serialize)]
pub struct ExportConductor {
    pub value: String,
    pub exact: bool,
}

#[derive(Debug, Serialize)]
pub struct MotiveExport {
    pub schema: &'static str,
    pub param: String,
    pub t: String,
    pub weight: u32,
    pub hodge: Vec<u32>,
    pub gamma_factors: GammaFactorSet,
    pub conductor: ExportConductor,
    pub euler_factors: Vec<ExportFactor>,
    pub dirichlet: Vec<String>,
}

/// Assemble the full export: Hodge data, gamma factors, conductor with
/// local data, Euler factors for p <= p_max, and Dirichlet
/// coefficients a_1..n_max.
pub fn export_motive(
    param: &FamilyParameter,
    t: &BigRational,
    sigma: Option<i64>,
    n_max: usize,
    fixtures: &FixtureTable,
) -> Result<MotiveExport> {
    let mut hd = hodge::hodge_vector(param);
    hd.sigma = sigma;
    let gf = gamma_factors(&hd)?;
    let cond: Conductor = conductor(param, t, fixtures)?;
    let mut bad: BTreeMap<u64, EulerFactor> = BTreeMap::new();
    for ld in &cond.locals {
        if let Some(f) = &ld.factor {
            // Only full factors feed the Dirichlet expansion; a partial
            // wild factor would silently corrupt coefficients.
            let full = ld.factor_degree == Some(f.coeffs.len() as u32 - 1);
            if full {
                bad.insert(ld.p, f.clone());
            }
        }
    }
    let dirichlet: Vec<BigInt> = dirichlet_coefficients(param, t, n_max, &bad)?;
    let mut euler_factors = Vec::new();
    for ld in &cond.locals {
        if let Some(f) = &ld.factor {
            euler_factors.push(ExportFactor {
                p: ld.p,
                coeffs: f.coeffs.iter().map(|c| c.to_string()).collect(),
                provenance: f.provenance,
            });
        }
    }
    for p in crate::nt::primes_up_to(n_max as u64) {
        if crate::arith::prime_kind(param, t, p) == crate::arith::PrimeKind::Good {
            let f = super::euler::frobenius_poly(param, t, p)?;
            euler_factors.push(ExportFactor {
                p,
                coeffs: f.coeffs.iter().map(|c| c.to_string()).collect(),
                provenance: f.provenance,
            });
        }
    }
    euler_factors.sort_by_key(|f| f.p);
    Ok(MotiveExport {
        schema: EXPORT_SCHEMA,
        param: param.gamma.to_string(),
        t: t.to_string(),
        weight: hd.w,
        hodge: hd.h,
        gamma_factors: gf,
        conductor: ExportConductor {
            value: cond.value.to_string(),
            exact: cond.exact,
        },
        euler_factors,
        dirichlet: dirichlet.iter().map(|a| a.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;

    #[test]
    fn export_wild_example() {
        let param = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
        let t = BigRational::from(BigInt::from(1024));
        let fixtures = FixtureTable::builtin();
        let export = export_motive(&param, &t, Some(1), 10, &fixtures).unwrap();
        assert_eq!(export.schema, "hgm/1");
        assert_eq!(export.conductor.value, "1023");
        assert!(export.conductor.exact);
        assert_eq!(export.weight, 4);
        let js = serde_json::to_string_pretty(&export).unwrap();
        assert!(js.contains("\"schema\": \"hgm/1\""));
        // a_1 = 1.
        assert_eq!(export.dirichlet[0], "1");
    }
}
