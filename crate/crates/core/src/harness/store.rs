use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::record::TOOL_VERSION;
use super::spec::GraphSpec;
use crate::error::Result;
use crate::graph::AccordionParams;
use crate::hamiltonicity::{CellStore, Verdict};

#[derive(Serialize, Deserialize)]
struct Entry {
    graph: String,
    check: String,
    version: String,
    verdict: Verdict,
}

/// One JSON file per result, named by the SHA-256 of
/// `(graph spec, check, tool version)`.
pub struct ResultStore {
    dir: PathBuf,
    writes: Mutex<()>,
}

impl ResultStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        std::fs::create_dir_all(dir.as_ref())?;
        Ok(ResultStore {
            dir: dir.as_ref().to_path_buf(),
            writes: Mutex::new(()),
        })
    }

    pub fn key(graph: &str, check: &str) -> String {
        let mut h = Sha256::new();
        for part in [graph, check, TOOL_VERSION] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }

    pub fn path_for(&self, graph: &str, check: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(graph, check)))
    }

    /// A stored verdict, or `None` if absent, unreadable, or keyed to
    /// something else.
    pub fn get(&self, graph: &str, check: &str) -> Option<Verdict> {
        let text = std::fs::read_to_string(self.path_for(graph, check)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.graph == graph && e.check == check && e.version == TOOL_VERSION).then_some(e.verdict)
    }

    /// Writes through a temporary file and renames, so a killed run never
    /// leaves a truncated entry behind.
    pub fn put(&self, graph: &str, check: &str, verdict: &Verdict) -> Result<()> {
        let entry = Entry {
            graph: graph.to_string(),
            check: check.to_string(),
            version: TOOL_VERSION.to_string(),
            verdict: verdict.clone(),
        };
        let path = self.path_for(graph, check);
        let tmp = path.with_extension("json.tmp");
        let _guard = self.writes.lock().unwrap_or_else(|p| p.into_inner());
        std::fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}

impl CellStore for ResultStore {
    fn load(&self, params: AccordionParams) -> Option<Verdict> {
        self.get(&GraphSpec::Accordion(params).to_string(), "pmh")
    }

    fn save(&self, params: AccordionParams, verdict: &Verdict) -> Result<()> {
        self.put(&GraphSpec::Accordion(params).to_string(), "pmh", verdict)
    }
}
