//! On-disk cache of Bernoulli tables, one JSON record per prime:
//!
//! ```json
//! {"schema": 1, "p": 7, "m_max": 4, "values": [1, 4, 6, 0, 3]}
//! ```
//!
//! `values[m]` is `B_m mod p` as a canonical integer in `[0, p)`. The cache
//! only saves work: unreadable, mismatched or short records are recomputed
//! and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bernoulli::{bernoulli_table, BernoulliTable};
use crate::error::{Error, Result};
use crate::modarith::Prime;

pub const CACHE_SCHEMA: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "FMZV_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliRecord {
    pub schema: u32,
    pub p: u32,
    pub m_max: u32,
    pub values: Vec<u32>,
}

impl BernoulliRecord {
    pub fn from_table(t: &BernoulliTable) -> Self {
        BernoulliRecord {
            schema: CACHE_SCHEMA,
            p: t.prime().get(),
            m_max: t.m_max(),
            values: t.values().iter().map(|r| r.value()).collect(),
        }
    }

    pub fn into_table(self, p: Prime) -> Option<BernoulliTable> {
        if self.schema != CACHE_SCHEMA
            || self.p != p.get()
            || self.values.len() != self.m_max as usize + 1
        {
            return None;
        }
        BernoulliTable::from_values(p, &self.values)
    }
}

#[derive(Clone, Debug)]
pub struct BernoulliCache {
    dir: PathBuf,
}

impl BernoulliCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        BernoulliCache {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    pub fn path_for(&self, p: Prime) -> PathBuf {
        self.dir.join(format!("bernoulli-{p}.json"))
    }

    pub fn load(&self, p: Prime) -> Option<BernoulliTable> {
        let text = fs::read_to_string(self.path_for(p)).ok()?;
        serde_json::from_str::<BernoulliRecord>(&text)
            .ok()?
            .into_table(p)
    }

    /// `B_0..=B_m_max mod p`, from the cache when a long enough record exists.
    pub fn load_or_compute(&self, p: Prime, m_max: u32) -> Result<BernoulliTable> {
        if let Some(t) = self.load(p) {
            if t.m_max() >= m_max {
                return Ok(t.truncated(m_max));
            }
        }
        let t = bernoulli_table(p, m_max)?;
        self.store(&t)?;
        Ok(t)
    }

    /// Writes through a temporary file so concurrent readers never see a
    /// partial record.
    pub fn store(&self, t: &BernoulliTable) -> Result<()> {
        let wrap = |path: &Path| {
            let path = path.to_path_buf();
            move |source| Error::Cache { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(wrap(&self.dir))?;
        let path = self.path_for(t.prime());
        let tmp = self
            .dir
            .join(format!(".bernoulli-{}.{}.tmp", t.prime(), std::process::id()));
        let body = serde_json::to_string(&BernoulliRecord::from_table(t))?;
        fs::write(&tmp, body).map_err(wrap(&tmp))?;
        fs::rename(&tmp, &path).map_err(wrap(&path))?;
        Ok(())
    }
}
