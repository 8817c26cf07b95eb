//! On-disk coefficient cache: `kp.json` and `gd-n{N}.json` under one
//! directory. A file is used only if its version matches, every record passes
//! the table's weight invariants, and the low-weight entries agree with a
//! fresh derivation; otherwise it is ignored and rebuilt.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gd::{GdContext, GdParts};
use crate::jet::JetPolynomial;
use crate::kp::KpTable;

pub const FORMAT_VERSION: u32 = 1;

/// Weight up to which a loaded table is re-derived and compared.
const SPOT_CHECK_WEIGHT: u32 = 7;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    table: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    built_weight: u32,
    records: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    poly: JetPolynomial,
}

/// Why a cache file was not used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejected {
    Missing,
    Unreadable(String),
    Version(u32),
    Invalid(String),
}

pub struct Cache {
    dir: PathBuf,
}

fn pair_key(prefix: &str, a: u32, b: u32) -> String {
    format!("{prefix}:{a},{b}")
}

fn parse_key(key: &str) -> Option<(&str, Vec<u32>)> {
    let (kind, rest) = key.split_once(':')?;
    let nums: Option<Vec<u32>> = rest.split(',').map(|x| x.parse().ok()).collect();
    Some((kind, nums?))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn kp_path(&self) -> PathBuf {
        self.dir.join("kp.json")
    }

    fn gd_path(&self, n: u32) -> PathBuf {
        self.dir.join(format!("gd-n{n}.json"))
    }

    fn read(&self, path: &Path) -> std::result::Result<CacheFile, Rejected> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(Rejected::Missing),
            Err(e) => return Err(Rejected::Unreadable(e.to_string())),
        };
        // Peek at the version first so a format change is reported as such.
        let header: serde_json::Value = serde_json::from_str(&text).map_err(|e| Rejected::Unreadable(e.to_string()))?;
        let version = header.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if version != FORMAT_VERSION {
            return Err(Rejected::Version(version));
        }
        serde_json::from_value(header).map_err(|e| Rejected::Unreadable(e.to_string()))
    }

    fn write(&self, path: &Path, file: &CacheFile) -> Result<()> {
        let io = |e: std::io::Error| Error::Domain(format!("cache write {}: {e}", path.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let tmp = path.with_extension("json.tmp");
        let mut f = fs::File::create(&tmp).map_err(io)?;
        let body = serde_json::to_string(file).expect("cache records serialize");
        f.write_all(body.as_bytes()).map_err(io)?;
        f.write_all(b"\n").map_err(io)?;
        drop(f);
        fs::rename(&tmp, path).map_err(io)
    }

    pub fn load_kp(&self) -> std::result::Result<KpTable, Rejected> {
        let file = self.read(&self.kp_path())?;
        if file.table != "kp" {
            return Err(Rejected::Invalid(format!("table kind {:?}", file.table)));
        }
        let mut equations = BTreeMap::new();
        let mut eta = BTreeMap::new();
        for r in file.records {
            match parse_key(&r.key) {
                Some(("eq", v)) if v.len() == 2 => {
                    equations.insert((v[0], v[1]), r.poly);
                }
                Some(("eta", v)) if v.len() == 1 => {
                    eta.insert(v[0], r.poly);
                }
                _ => return Err(Rejected::Invalid(format!("record key {:?}", r.key))),
            }
        }
        let table =
            KpTable::from_parts(equations, eta, file.built_weight).map_err(|e| Rejected::Invalid(e.to_string()))?;
        let fresh = KpTable::built(file.built_weight.min(SPOT_CHECK_WEIGHT));
        for (key, p) in fresh.equations() {
            if table.equations().get(key) != Some(p) {
                return Err(Rejected::Invalid(format!("spot check failed at kp {key:?}")));
            }
        }
        for (r, p) in fresh.eta_forms() {
            if table.eta_forms().get(r) != Some(p) {
                return Err(Rejected::Invalid(format!("spot check failed at eta {r}")));
            }
        }
        Ok(table)
    }

    pub fn store_kp(&self, table: &KpTable) -> Result<()> {
        let mut records = Vec::new();
        for (&(i, j), p) in table.equations() {
            records.push(Record { key: pair_key("eq", i, j), poly: p.clone() });
        }
        for (&r, p) in table.eta_forms() {
            records.push(Record { key: format!("eta:{r}"), poly: p.clone() });
        }
        let file = CacheFile {
            version: FORMAT_VERSION,
            table: "kp".into(),
            n: None,
            built_weight: table.built_weight(),
            records,
        };
        self.write(&self.kp_path(), &file)
    }

    pub fn load_gd(&self, n: u32) -> std::result::Result<GdContext, Rejected> {
        let file = self.read(&self.gd_path(n))?;
        if file.table != "gd" || file.n != Some(n) {
            return Err(Rejected::Invalid(format!("table {:?} for n={:?}", file.table, file.n)));
        }
        let mut parts = GdParts {
            n,
            built_weight: file.built_weight,
            elim: BTreeMap::new(),
            pairs: BTreeMap::new(),
            rest: BTreeMap::new(),
        };
        for r in file.records {
            match parse_key(&r.key) {
                Some(("elim", v)) if v.len() == 1 => {
                    parts.elim.insert(v[0], r.poly);
                }
                Some(("pair", v)) if v.len() == 2 => {
                    parts.pairs.insert((v[0], v[1]), r.poly);
                }
                Some(("rest", v)) if v.len() == 1 => {
                    parts.rest.insert(v[0], r.poly);
                }
                _ => return Err(Rejected::Invalid(format!("record key {:?}", r.key))),
            }
        }
        let ctx = GdContext::from_parts(parts).map_err(|e| Rejected::Invalid(e.to_string()))?;
        let mut fresh = GdContext::new(n).map_err(|e| Rejected::Invalid(e.to_string()))?;
        fresh.build_to(ctx.built_weight().min(SPOT_CHECK_WEIGHT + n)).map_err(|e| Rejected::Invalid(e.to_string()))?;
        let (a, b) = (fresh.to_parts(), ctx.to_parts());
        let agree = a.elim.iter().all(|(k, p)| b.elim.get(k) == Some(p))
            && a.pairs.iter().all(|(k, p)| b.pairs.get(k) == Some(p))
            && a.rest.iter().all(|(k, p)| b.rest.get(k) == Some(p));
        if !agree {
            return Err(Rejected::Invalid(format!("spot check failed for n={n}")));
        }
        Ok(ctx)
    }

    pub fn store_gd(&self, ctx: &GdContext) -> Result<()> {
        let parts = ctx.to_parts();
        let mut records = Vec::new();
        for (&r, p) in &parts.elim {
            records.push(Record { key: format!("elim:{r}"), poly: p.clone() });
        }
        for (&(a, b), p) in &parts.pairs {
            records.push(Record { key: pair_key("pair", a, b), poly: p.clone() });
        }
        for (&r, p) in &parts.rest {
            records.push(Record { key: format!("rest:{r}"), poly: p.clone() });
        }
        let file = CacheFile {
            version: FORMAT_VERSION,
            table: "gd".into(),
            n: Some(parts.n),
            built_weight: parts.built_weight,
            records,
        };
        self.write(&self.gd_path(parts.n), &file)
    }

    /// A KP table built to at least `weight`, from the cache when usable.
    /// The second value says why the cache was not used, if it was not.
    pub fn kp(&self, weight: u32) -> Result<(KpTable, Option<Rejected>)> {
        let (mut table, rejected) = match self.load_kp() {
            Ok(t) => (t, None),
            Err(r) => (KpTable::new(), Some(r)),
        };
        if table.built_weight() < weight {
            table.build_to(weight);
            self.store_kp(&table)?;
        }
        Ok((table, rejected))
    }

    pub fn gd(&self, n: u32, weight: u32) -> Result<(GdContext, Option<Rejected>)> {
        let (mut ctx, rejected) = match self.load_gd(n) {
            Ok(c) => (c, None),
            Err(r) => (GdContext::new(n)?, Some(r)),
        };
        if ctx.built_weight() < weight {
            ctx.build_to(weight)?;
            self.store_gd(&ctx)?;
        }
        Ok((ctx, rejected))
    }
}
