//! graph6 and DIMACS edge-list import/export, and JSON label sidecars.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Graph, Label, MAX_VERTICES};
use crate::error::{Error, Result};

/// Encodes `g` as a graph6 line (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 0x3f) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn from_graph6(line: &str) -> Result<Graph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("graph6: byte outside 63..=126".into()));
    }
    let (n, body) = match bytes {
        [] => return Err(Error::Parse("graph6: empty input".into())),
        [126, 126, ..] => return Err(Error::Parse("graph6: order too large".into())),
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::Parse("graph6: truncated order".into()));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[3..])
        }
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if body.len() != needed {
        return Err(Error::Parse(format!(
            "graph6: expected {needed} data bytes for {n} vertices, found {}",
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut pos = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[pos / 6] - 63;
            if byte & (0x20 >> (pos % 6)) != 0 {
                edges.push((i, j));
            }
            pos += 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// DIMACS edge format: `p edge N M` followed by `e a b` with 1-based ends.
pub fn to_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.vertex_count(), edges.len());
    for (a, b) in edges {
        let _ = writeln!(out, "e {} {}", a + 1, b + 1);
    }
    out
}

pub fn from_dimacs(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut declared = 0;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let bad = |msg: &str| Error::Parse(format!("DIMACS line {}: {msg}", lineno + 1));
        let mut tok = line.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                let _format = tok.next().ok_or_else(|| bad("missing format"))?;
                let parse = |t: Option<&str>| t.and_then(|s| s.parse::<usize>().ok());
                n = Some(parse(tok.next()).ok_or_else(|| bad("bad vertex count"))?);
                declared = parse(tok.next()).ok_or_else(|| bad("bad edge count"))?;
            }
            Some("e") => {
                let n = n.ok_or_else(|| bad("edge before problem line"))?;
                let mut end = || -> Result<usize> {
                    let v: usize = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("bad endpoint"))?;
                    if v == 0 || v > n {
                        return Err(bad("endpoint out of range"));
                    }
                    Ok(v - 1)
                };
                let (a, b) = (end()?, end()?);
                edges.push((a.min(b), a.max(b)));
            }
            Some(other) => return Err(bad(&format!("unknown record {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("DIMACS: missing problem line".into()))?;
    if edges.len() != declared {
        return Err(Error::Parse(format!(
            "DIMACS: header declares {declared} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, edges)
}

/// Sidecar `{"1":"u1", ...}`; `None` for unlabelled graphs.
pub fn labels_to_json(g: &Graph) -> Option<String> {
    let map = g.label_map()?;
    let mut entries: Vec<_> = map.into_iter().collect();
    entries.sort_by_key(|(k, _)| k.parse::<usize>().unwrap_or(usize::MAX));
    let obj: serde_json::Map<String, serde_json::Value> = entries
        .into_iter()
        .map(|(k, v)| (k, serde_json::Value::String(v)))
        .collect();
    Some(serde_json::to_string_pretty(&obj).expect("string map serializes"))
}

pub fn apply_label_json(g: Graph, json: &str) -> Result<Graph> {
    let map: HashMap<String, String> = serde_json::from_str(json)?;
    let n = g.vertex_count();
    let mut labels = vec![None; n];
    for (k, v) in map {
        let i: usize = k
            .parse()
            .ok()
            .filter(|&i| i >= 1 && i <= n)
            .ok_or_else(|| Error::Parse(format!("label key {k:?} is not a vertex")))?;
        labels[i - 1] = Some(v.parse::<Label>()?);
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::Parse(format!("vertex {} has no label", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    g.with_labels(labels)
}

/// Reads graph6 or DIMACS, whichever the text looks like.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let looks_dimacs = text
        .lines()
        .map(str::trim_start)
        .any(|l| l.starts_with("p ") || l.starts_with("c ") || l == "c");
    if looks_dimacs {
        from_dimacs(text)
    } else {
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        from_graph6(line)
    }
}
