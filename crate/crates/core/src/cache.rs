//! Text cache for extracted Hodge tables.
//!
//! ```text
//! HFORGE 1
//! # comment
//! PLAN 2 1 1;2;3
//! HOLDOUT 2 1 4 5824
//! TAU 2 4 1/1152
//! HODGE 2 1 3 1/480
//! ```
//!
//! `PLAN g n probes` lists the probe profiles (`;`-separated) a block was
//! solved from, `HOLDOUT g n profile h` a held-out profile and its agreed
//! Hurwitz number. `TAU g m value` stores pure ψ entries, `HODGE g i m value`
//! entries with a `λ_i` insertion. Exponent lists are sorted ascending and
//! values are reduced; records are written in canonical order so a
//! read/write cycle is byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::extract::BuiltTables;
use crate::intersection::{CorrelatorKey, CorrelatorTable, Provenance};
use crate::numeric::{Profile, Rational};

pub const FORMAT_TAG: &str = "HFORGE";
pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_FILE_NAME: &str = "hodge.hforge";
pub const CACHE_ENV: &str = "HFORGE_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanRecord {
    pub genus: u32,
    pub points: usize,
    pub probes: Vec<Profile>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HoldoutRecord {
    pub genus: u32,
    pub points: usize,
    pub probe: Profile,
    pub value: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheFile {
    pub plans: Vec<PlanRecord>,
    pub holdouts: Vec<HoldoutRecord>,
    pub table: CorrelatorTable,
}

impl From<&BuiltTables> for CacheFile {
    fn from(built: &BuiltTables) -> Self {
        let plans = built
            .plans
            .iter()
            .map(|p| PlanRecord {
                genus: p.genus,
                points: p.points,
                probes: p.probes.clone(),
            })
            .collect();
        let holdouts = built
            .holdouts
            .iter()
            .flat_map(|r| {
                r.cases.iter().map(|c| HoldoutRecord {
                    genus: r.genus,
                    points: r.points,
                    probe: c.profile.clone(),
                    value: c.oracle.clone(),
                })
            })
            .collect();
        Self {
            plans,
            holdouts,
            table: built.table.clone(),
        }
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// The cache line for one table entry.
pub fn record_line(key: &CorrelatorKey, value: &Rational) -> String {
    let m = join(key.exponents(), ",");
    if key.lambda() == 0 {
        format!("TAU {} {m} {value}", key.genus())
    } else {
        format!("HODGE {} {} {m} {value}", key.genus(), key.lambda())
    }
}

impl CacheFile {
    pub fn render(&self) -> String {
        let mut out = format!("{FORMAT_TAG} {FORMAT_VERSION}\n");
        out.push_str("# exact Hodge integrals recovered by ELSV inversion\n");
        let mut plans = self.plans.clone();
        plans.sort();
        for p in &plans {
            out.push_str(&format!("PLAN {} {} {}\n", p.genus, p.points, join(&p.probes, ";")));
        }
        let mut holdouts = self.holdouts.clone();
        holdouts.sort();
        for h in &holdouts {
            out.push_str(&format!("HOLDOUT {} {} {} {}\n", h.genus, h.points, h.probe, h.value));
        }
        let (tau, hodge): (Vec<_>, Vec<_>) = self.table.iter().partition(|(k, _)| k.lambda() == 0);
        for (k, e) in tau.into_iter().chain(hodge) {
            out.push_str(&record_line(k, &e.value));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let bad = |line: usize, record: &str, message: &str| Error::Cache {
            line: line + 1,
            message: message.to_string(),
            record: record.to_string(),
        };
        match lines.next() {
            Some((_, header)) if header == format!("{FORMAT_TAG} {FORMAT_VERSION}") => {}
            Some((i, header)) => return Err(bad(i, header, "unsupported header")),
            None => return Err(bad(0, "", "empty cache file")),
        }
        let mut cache = CacheFile::default();
        for (i, line) in lines {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(' ').collect();
            let err = |m: &str| bad(i, line, m);
            match fields.as_slice() {
                ["PLAN", g, n, probes] => cache.plans.push(PlanRecord {
                    genus: parse_num(g).map_err(|_| err("bad genus"))?,
                    points: parse_num(n).map_err(|_| err("bad point count"))?,
                    probes: probes
                        .split(';')
                        .map(|p| p.parse::<Profile>())
                        .collect::<Result<_>>()
                        .map_err(|_| err("bad probe list"))?,
                }),
                ["HOLDOUT", g, n, probe, value] => cache.holdouts.push(HoldoutRecord {
                    genus: parse_num(g).map_err(|_| err("bad genus"))?,
                    points: parse_num(n).map_err(|_| err("bad point count"))?,
                    probe: probe.parse().map_err(|_| err("bad holdout profile"))?,
                    value: parse_rational(value).ok_or_else(|| err("bad value"))?,
                }),
                ["TAU", g, m, value] => {
                    let key = parse_key(g, "0", m).map_err(|e| err(&e))?;
                    insert(&mut cache.table, key, value).map_err(|e| err(&e))?;
                }
                ["HODGE", g, lambda, m, value] => {
                    if *lambda == "0" {
                        return Err(err("λ-index 0 belongs in a TAU record"));
                    }
                    let key = parse_key(g, lambda, m).map_err(|e| err(&e))?;
                    insert(&mut cache.table, key, value).map_err(|e| err(&e))?;
                }
                _ => return Err(err("unrecognised record")),
            }
        }
        Ok(cache)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes through a temporary file in the same directory and renames it
    /// into place.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.tmp{}",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("cache"),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.render().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, ()> {
    // reject signs and leading zeros so the token re-renders identically
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return Err(());
    }
    s.parse().map_err(|_| ())
}

fn parse_rational(s: &str) -> Option<Rational> {
    let r: Rational = s.parse().ok()?;
    (r.to_string() == s).then_some(r)
}

fn parse_key(g: &str, lambda: &str, m: &str) -> std::result::Result<CorrelatorKey, String> {
    let genus: u32 = parse_num(g).map_err(|_| "bad genus".to_string())?;
    let lambda: u32 = parse_num(lambda).map_err(|_| "bad λ-index".to_string())?;
    let exps: Vec<u32> = m
        .split(',')
        .map(parse_num)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| "bad exponent list".to_string())?;
    if exps.windows(2).any(|w| w[0] > w[1]) {
        return Err("exponents must be sorted ascending".into());
    }
    let key = CorrelatorKey::new(genus, exps, lambda).map_err(|e| e.to_string())?;
    if !key.satisfies_dimension_gate() {
        return Err(format!("{key} fails the dimension gate"));
    }
    Ok(key)
}

fn insert(table: &mut CorrelatorTable, key: CorrelatorKey, value: &str) -> std::result::Result<(), String> {
    let value = parse_rational(value).ok_or("bad value")?;
    if table.contains(&key) {
        return Err(format!("duplicate record for {key}"));
    }
    table.insert(key, value, Provenance::Extracted).map_err(|e| e.to_string())
}

/// `--cache-dir`, else `$HFORGE_CACHE`, else `.hforge` in the working
/// directory; the file itself is [`CACHE_FILE_NAME`] inside it.
pub fn resolve_cache_path(cache_dir: Option<&Path>) -> PathBuf {
    let dir = cache_dir
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".hforge"));
    dir.join(CACHE_FILE_NAME)
}
