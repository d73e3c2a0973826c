//! Append-only JSON-lines store of decisions and certificates.
//!
//! Records are keyed by `(r, k, targets, n)`. Anything read back is
//! re-verified before use; unreadable lines are skipped with a warning.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::detect::detect_any;
use crate::error::Result;
use crate::pattern::PatternSpec;
use crate::search::{Certificate, Decision, Status};

pub const CACHE_ENV: &str = "RAMSEY_CACHE";
pub const DEFAULT_CACHE: &str = "ramsey-cache.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum CacheRecord {
    Decision(Decision),
    Certificate(Certificate),
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    writer: Mutex<()>,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Cache {
        Cache {
            path: path.into(),
            writer: Mutex::new(()),
        }
    }

    /// `$RAMSEY_CACHE` if set, else `ramsey-cache.jsonl` in the working directory.
    pub fn default_path() -> PathBuf {
        std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE), PathBuf::from)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn load(&self) -> Result<Vec<CacheRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    eprintln!(
                        "warning: {}:{}: unreadable cache line ({e})",
                        self.path.display(),
                        i + 1
                    );
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(&line) {
                Ok(rec) => out.push(rec),
                Err(e) => eprintln!(
                    "warning: {}:{}: skipping corrupt cache line ({e})",
                    self.path.display(),
                    i + 1
                ),
            }
        }
        Ok(out)
    }

    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        let line = serde_json::to_string(record)?;
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{line}")?;
        Ok(())
    }

    /// Latest conclusive decision for the key whose counterexample, if any, still checks out.
    pub fn find_decision(
        &self,
        n: usize,
        r: usize,
        targets: &[Option<PatternSpec>],
    ) -> Result<Option<Decision>> {
        let hit = self.load()?.into_iter().rev().find_map(|rec| match rec {
            CacheRecord::Decision(d)
                if d.n == n
                    && d.r == r
                    && d.targets == targets
                    && d.status != Status::Indeterminate =>
            {
                let sound = match &d.counterexample {
                    Some(c) => {
                        c.n() == n && c.r() == r && matches!(detect_any(c, targets), Ok(None))
                    }
                    None => d.status == Status::Arrows,
                };
                sound.then_some(d)
            }
            _ => None,
        });
        Ok(hit)
    }

    /// A stored certificate whose value lies in `[lo, hi]` and whose lower witness verifies.
    pub fn find_certificate(
        &self,
        r: usize,
        targets: &[Option<PatternSpec>],
        lo: usize,
        hi: usize,
    ) -> Result<Option<Certificate>> {
        let hit = self.load()?.into_iter().rev().find_map(|rec| match rec {
            CacheRecord::Certificate(c)
                if c.r == r
                    && c.targets == targets
                    && (lo..=hi).contains(&c.value)
                    && c.verify_lower().is_ok() =>
            {
                Some(c)
            }
            _ => None,
        });
        Ok(hit)
    }
}
