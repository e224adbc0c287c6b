//! Content-addressed on-disk store for reduced Gröbner bases.
//!
//! An entry is keyed by the SHA-256 of the canonical text of (variables,
//! presentation generators, ideal generators, order) and holds the reduced
//! basis in the polynomial text syntax, one polynomial per line:
//!
//! ```text
//! # blowup gb cache v1
//! order grevlex
//! vars x y z
//! x^2-y^2
//! ...
//! ```
//!
//! Entries live at `<dir>/<first two hex digits>/<remaining digits>.gb`.
//! Unreadable or malformed entries count as misses.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use crate::groebner::ReducedGb;
use crate::poly::{parse_polynomial, MonomialOrder, Polynomial};

const HEADER: &str = "# blowup gb cache v1";

#[derive(Debug)]
pub struct GbCache {
    dir: PathBuf,
    hits: AtomicU64,
    misses: AtomicU64,
    writes: AtomicU64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub writes: u64,
}

impl GbCache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(GbCache { dir, hits: AtomicU64::new(0), misses: AtomicU64::new(0), writes: AtomicU64::new(0) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            writes: self.writes.load(Ordering::Relaxed),
        }
    }

    pub fn key(names: &[String], presentation: &[Polynomial], gens: &[Polynomial], order: MonomialOrder) -> String {
        let render = |ps: &[Polynomial]| -> String {
            let mut lines: Vec<String> = ps.iter().map(|p| p.display(names).to_string()).collect();
            lines.sort();
            lines.join(";")
        };
        let text = format!("v1\nvars:{}\norder:{}\nK:{}\nI:{}\n", names.join(","), order.name(), render(presentation), render(gens));
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{}.gb", &key[2..]))
    }

    pub fn load(&self, key: &str, names: &[String], order: MonomialOrder) -> Option<ReducedGb> {
        let found = fs::read_to_string(self.path_for(key)).ok().and_then(|text| parse_entry(&text, names, order));
        match found {
            Some(gb) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(gb)
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn store(&self, key: &str, names: &[String], gb: &ReducedGb) {
        let path = self.path_for(key);
        let text = render_entry(gb, names);
        // write-then-rename keeps concurrent readers from seeing partial files
        let result = (|| -> std::io::Result<()> {
            let parent = path.parent().unwrap();
            fs::create_dir_all(parent)?;
            let mut tmp = tempfile_in(parent)?;
            tmp.1.write_all(text.as_bytes())?;
            tmp.1.sync_all()?;
            drop(tmp.1);
            fs::rename(&tmp.0, &path)
        })();
        if result.is_ok() {
            self.writes.fetch_add(1, Ordering::Relaxed);
        }
    }
}

fn tempfile_in(dir: &Path) -> std::io::Result<(PathBuf, fs::File)> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    let path = dir.join(format!(".tmp-{}-{}", std::process::id(), n));
    let file = fs::File::create(&path)?;
    Ok((path, file))
}

pub(crate) fn render_entry(gb: &ReducedGb, names: &[String]) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("order {}\n", gb.order().name()));
    out.push_str(&format!("vars {}\n", names.join(" ")));
    for p in gb.basis() {
        out.push_str(&p.display(names).to_string());
        out.push('\n');
    }
    out
}

fn parse_entry(text: &str, names: &[String], order: MonomialOrder) -> Option<ReducedGb> {
    let mut lines = text.lines();
    if lines.next()? != HEADER {
        return None;
    }
    if lines.next()? != format!("order {}", order.name()) {
        return None;
    }
    if lines.next()? != format!("vars {}", names.join(" ")) {
        return None;
    }
    let mut basis = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        basis.push(parse_polynomial(line, names, order).ok()?);
    }
    Some(ReducedGb::from_reduced_basis(names.len(), order, basis))
}
