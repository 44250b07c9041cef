//! On-disk memo of traces and local factors.
//!
//! Two append-only line formats, integers in decimal:
//!
//! ```text
//! traces.cache:  param|t|p|e|trace
//! factors.cache: param|t|p|coeff,coeff,...|c_p|provenance
//! ```
//!
//! Later lines win on duplicate keys; `compact` rewrites each file
//! with one line per key. Single writer, any number of readers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

use super::euler::{EulerFactor, Provenance};

const TRACES_FILE: &str = "traces.cache";
const FACTORS_FILE: &str = "factors.cache";

#[derive(Debug)]
pub struct CacheStore {
    dir: PathBuf,
    traces: HashMap<(String, String, u64, u32), BigInt>,
    factors: HashMap<(String, String, u64), (Vec<BigInt>, u32, Provenance)>,
}

fn provenance_str(p: Provenance) -> &'static str {
    match p {
        Provenance::Computed => "computed",
        Provenance::Degeneration => "degeneration",
        Provenance::ErasedPartial => "erased-partial",
        Provenance::Fixture => "fixture",
    }
}

fn provenance_parse(s: &str) -> Result<Provenance> {
    Ok(match s {
        "computed" => Provenance::Computed,
        "degeneration" => Provenance::Degeneration,
        "erased-partial" => Provenance::ErasedPartial,
        "fixture" => Provenance::Fixture,
        _ => return Err(Error::Parse(format!("unknown provenance `{s}`"))),
    })
}

impl CacheStore {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut store = CacheStore {
            dir: dir.to_path_buf(),
            traces: HashMap::new(),
            factors: HashMap::new(),
        };
        store.read_traces()?;
        store.read_factors()?;
        Ok(store)
    }

    fn read_traces(&mut self) -> Result<()> {
        let path = self.dir.join(TRACES_FILE);
        let Ok(text) = std::fs::read_to_string(&path) else {
            return Ok(());
        };
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 5 {
                return Err(Error::Parse(format!("bad trace cache line `{line}`")));
            }
            let key = (
                parts[0].to_string(),
                parts[1].to_string(),
                parts[2]
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad prime in `{line}`")))?,
                parts[3]
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{line}`")))?,
            );
            let v = parts[4]
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad trace in `{line}`")))?;
            self.traces.insert(key, v);
        }
        Ok(())
    }

    fn read_factors(&mut self) -> Result<()> {
        let path = self.dir.join(FACTORS_FILE);
        let Ok(text) = std::fs::read_to_string(&path) else {
            return Ok(());
        };
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 6 {
                return Err(Error::Parse(format!("bad factor cache line `{line}`")));
            }
            let key = (
                parts[0].to_string(),
                parts[1].to_string(),
                parts[2]
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad prime in `{line}`")))?,
            );
            let coeffs: Vec<BigInt> = parts[3]
                .split(',')
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient in `{line}`")))
                })
                .collect::<Result<_>>()?;
            let c_p = parts[4]
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad exponent in `{line}`")))?;
            let prov = provenance_parse(parts[5])?;
            self.factors.insert(key, (coeffs, c_p, prov));
        }
        Ok(())
    }

    fn append(&self, file: &str, line: &str) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join(file))?;
        writeln!(f, "{line}")?;
        Ok(())
    }

    pub fn get_trace(&self, param: &str, t: &BigRational, p: u64, e: u32) -> Option<&BigInt> {
        self.traces
            .get(&(param.to_string(), t.to_string(), p, e))
    }

    pub fn put_trace(
        &mut self,
        param: &str,
        t: &BigRational,
        p: u64,
        e: u32,
        value: &BigInt,
    ) -> Result<()> {
        let line = format!("{param}|{t}|{p}|{e}|{value}");
        self.append(TRACES_FILE, &line)?;
        self.traces
            .insert((param.to_string(), t.to_string(), p, e), value.clone());
        Ok(())
    }

    pub fn get_factor(&self, param: &str, t: &BigRational, p: u64) -> Option<EulerFactor> {
        self.factors
            .get(&(param.to_string(), t.to_string(), p))
            .map(|(coeffs, _, prov)| EulerFactor {
                p,
                coeffs: coeffs.clone(),
                provenance: *prov,
            })
    }

    pub fn put_factor(
        &mut self,
        param: &str,
        t: &BigRational,
        factor: &EulerFactor,
        c_p: u32,
    ) -> Result<()> {
        let coeffs = factor
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let line = format!(
            "{param}|{t}|{}|{coeffs}|{c_p}|{}",
            factor.p,
            provenance_str(factor.provenance)
        );
        self.append(FACTORS_FILE, &line)?;
        self.factors.insert(
            (param.to_string(), t.to_string(), factor.p),
            (factor.coeffs.clone(), c_p, factor.provenance),
        );
        Ok(())
    }

    /// Rewrite both files with one line per key.
    pub fn compact(&self) -> Result<(usize, usize)> {
        let mut tlines: Vec<String> = self
            .traces
            .iter()
            .map(|((param, t, p, e), v)| format!("{param}|{t}|{p}|{e}|{v}"))
            .collect();
        tlines.sort();
        let mut flines: Vec<String> = self
            .factors
            .iter()
            .map(|((param, t, p), (coeffs, c_p, prov))| {
                let mut s = String::new();
                let cs = coeffs
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = write!(s, "{param}|{t}|{p}|{cs}|{c_p}|{}", provenance_str(*prov));
                s
            })
            .collect();
        flines.sort();
        std::fs::write(self.dir.join(TRACES_FILE), tlines.join("\n") + "\n")?;
        std::fs::write(self.dir.join(FACTORS_FILE), flines.join("\n") + "\n")?;
        Ok((tlines.len(), flines.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_compaction() {
        let dir = std::env::temp_dir().join(format!("hgm-cache-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        {
            let mut store = CacheStore::open(&dir).unwrap();
            let t = BigRational::new(3.into(), 2.into());
            store
                .put_trace("[-2,-2,1,1,1,1]", &t, 5, 1, &BigInt::from(-2))
                .unwrap();
            store
                .put_trace("[-2,-2,1,1,1,1]", &t, 5, 1, &BigInt::from(-2))
                .unwrap();
            let f = EulerFactor {
                p: 5,
                coeffs: vec![BigInt::from(1), BigInt::from(2), BigInt::from(5)],
                provenance: Provenance::Computed,
            };
            store.put_factor("[-2,-2,1,1,1,1]", &t, &f, 0).unwrap();
            let (nt, nf) = store.compact().unwrap();
            assert_eq!((nt, nf), (1, 1));
        }
        // Reopen and read back.
        let store = CacheStore::open(&dir).unwrap();
        let t = BigRational::new(3.into(), 2.into());
        assert_eq!(
            store.get_trace("[-2,-2,1,1,1,1]", &t, 5, 1),
            Some(&BigInt::from(-2))
        );
        let f = store.get_factor("[-2,-2,1,1,1,1]", &t, 5).unwrap();
        assert_eq!(f.coeffs.len(), 3);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
