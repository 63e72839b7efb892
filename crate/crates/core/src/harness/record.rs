use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamiltonicity::{Stats, Status, Verdict};
use crate::matching::Matching;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A [`Verdict`] with vertices written by name, as stored in witness files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<[String; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Vec<[String; 2]>>,
    pub stats: Stats,
}

impl NamedVerdict {
    pub fn new(g: &Graph, v: &Verdict) -> Self {
        NamedVerdict {
            status: v.status,
            witness: v.witness.as_ref().map(|m| m.to_names(g)),
            certificate: v.certificate.as_ref().map(|m| m.to_names(g)),
            stats: v.stats.clone(),
        }
    }

    pub fn resolve(&self, g: &Graph) -> Result<Verdict> {
        let conv = |o: &Option<Vec<[String; 2]>>| {
            o.as_ref().map(|p| Matching::from_names(g, p)).transpose()
        };
        Ok(Verdict {
            status: self.status,
            witness: conv(&self.witness)?,
            certificate: conv(&self.certificate)?,
            stats: self.stats.clone(),
        })
    }
}

/// One CLI invocation and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: Vec<String>,
    pub graph: String,
    pub check: String,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<Stats>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunRecord {
    pub fn new(
        command: Vec<String>,
        graph: String,
        check: &str,
        result: serde_json::Value,
        stats: Option<Stats>,
    ) -> Self {
        RunRecord {
            command,
            graph,
            check: check.to_string(),
            result,
            stats,
            version: TOOL_VERSION.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Reads a pairing from any of: a JSON array of name pairs, a witness or
/// run-record JSON (its witness is taken), or a text line `u1-v5 u2-v2 ...`.
pub fn parse_pairing(g: &Graph, text: &str) -> Result<Matching> {
    let text = text.trim();
    if !(text.starts_with('[') || text.starts_with('{')) {
        return Matching::from_line(g, text);
    }
    let value: serde_json::Value = serde_json::from_str(text)?;
    let pairs = match &value {
        serde_json::Value::Array(_) => value.clone(),
        serde_json::Value::Object(map) => {
            let inner = map.get("result").unwrap_or(&value);
            inner
                .get("witness")
                .or_else(|| inner.get("pairing"))
                .cloned()
                .ok_or_else(|| {
                    Error::Parse("JSON object has no `witness` or `pairing` field".into())
                })?
        }
        _ => {
            return Err(Error::Parse(
                "pairing JSON must be an array or object".into(),
            ))
        }
    };
    let names: Vec<[String; 2]> = serde_json::from_value(pairs)?;
    Matching::from_names(g, &names)
}
