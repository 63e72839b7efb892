//! Simple undirected graphs on at most 64 vertices with one `u64` adjacency
//! row per vertex, plus the constructors for every family the toolkit uses.

mod families;
pub mod io;

pub use families::*;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Iterates over the set bits of a word, lowest first.
pub(crate) fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Structured vertex label. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    U(usize),
    V(usize),
    X(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::U(i) => write!(f, "u{i}"),
            Label::V(i) => write!(f, "v{i}"),
            Label::X(i) => write!(f, "x{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownLabel(s.to_string());
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        match head {
            'u' => Ok(Label::U(index)),
            'v' => Ok(Label::V(index)),
            'x' => Ok(Label::X(index)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Immutable simple graph. Vertex indices are 0-based internally.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    labels: Option<Vec<Label>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, out-of-range
    /// endpoints and repeated edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut adj = vec![0u64; n];
        for (a, b) in edges {
            if a >= n || b >= n || a == b || adj[a] & bit(b) != 0 {
                return Err(Error::InvalidEdge(a, b));
            }
            adj[a] |= bit(b);
            adj[b] |= bit(a);
        }
        Ok(Graph {
            n,
            adj,
            labels: None,
        })
    }

    pub(crate) fn from_rows(adj: Vec<u64>) -> Self {
        Graph {
            n: adj.len(),
            adj,
            labels: None,
        }
    }

    /// Attaches a label per vertex; labels must be distinct.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Precondition(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(*l) {
                return Err(Error::Precondition(format!("duplicate label {l}")));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] & bit(b) != 0
    }

    /// Neighbourhood of `v` as a bitset.
    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub(crate) fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| bits(self.adj[a] & !full_mask(a + 1)).map(move |b| (a, b)))
            .collect()
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self
            .adj
            .first()
            .map(|r| r.count_ones() as usize)
            .unwrap_or(0);
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Symmetric adjacency with empty diagonal.
    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|a| {
            self.adj[a] & bit(a) == 0
                && self.adj[a] & !full_mask(self.n) == 0
                && bits(self.adj[a]).all(|b| self.adj[b] & bit(a) != 0)
        })
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// Display name of a vertex: its structured label, or its 1-based index.
    pub fn vertex_name(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].to_string(),
            None => (v + 1).to_string(),
        }
    }

    /// Inverse of [`Graph::vertex_name`].
    pub fn vertex_by_name(&self, name: &str) -> Result<usize> {
        let name = name.trim();
        match &self.labels {
            Some(labels) => {
                let label: Label = name.parse()?;
                labels
                    .iter()
                    .position(|l| *l == label)
                    .ok_or_else(|| Error::UnknownLabel(name.to_string()))
            }
            None => match name.parse::<usize>() {
                Ok(i) if i >= 1 && i <= self.n => Ok(i - 1),
                _ => Err(Error::UnknownLabel(name.to_string())),
            },
        }
    }

    /// Label map keyed by 1-based index, as written to JSON sidecars.
    pub fn label_map(&self) -> Option<HashMap<String, String>> {
        self.labels.as_ref().map(|l| {
            l.iter()
                .enumerate()
                .map(|(i, lab)| ((i + 1).to_string(), lab.to_string()))
                .collect()
        })
    }

    /// Copy of the graph with the given edges removed. Every edge must exist.
    pub fn remove_edges(&self, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = self.clone();
        for &(a, b) in edges {
            if !g.has_edge(a, b) {
                return Err(Error::InvalidEdge(a, b));
            }
            g.adj[a] &= !bit(b);
            g.adj[b] &= !bit(a);
        }
        Ok(g)
    }

    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && (0..self.n).all(|v| self.adj[v] & !other.adj[v] == 0)
    }

    /// BFS two-colouring. `Some(colors)` with `colors[v]` in {0, 1} when
    /// bipartite; each component's lowest vertex gets colour 0.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for y in bits(self.adj[x]) {
                    if color[y] == u8::MAX {
                        color[y] = 1 - color[x];
                        queue.push_back(y);
                    } else if color[y] == color[x] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Colour classes of a bipartition, the class of vertex 0 first.
    pub fn bipartite_classes(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let colors = self.bipartition()?;
        let (a, b): (Vec<usize>, Vec<usize>) = (0..self.n).partition(|&v| colors[v] == 0);
        Some((a, b))
    }

    /// Vertex sets of the connected components, ordered by lowest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen & bit(s) != 0 {
                continue;
            }
            let mut comp = bit(s);
            let mut frontier = bit(s);
            while frontier != 0 {
                let next = bits(frontier).fold(0, |acc, v| acc | self.adj[v]) & !comp;
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            out.push(bits(comp).collect());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let rows = vertices
            .iter()
            .map(|&a| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| self.has_edge(a, b))
                    .fold(0u64, |acc, (j, _)| acc | bit(j))
            })
            .collect();
        Graph::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip() {
        for l in [Label::U(1), Label::V(12), Label::X(40)] {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        assert!("u0".parse::<Label>().is_err());
        assert!("w3".parse::<Label>().is_err());
        assert!("".parse::<Label>().is_err());
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(matches!(
            Graph::from_edges(65, []),
            Err(Error::TooManyVertices(65))
        ));
    }

    #[test]
    fn sixty_four_vertices_fit() {
        let g = Graph::from_edges(64, (0..64).map(|i| (i, (i + 1) % 64))).unwrap();
        assert_eq!(g.edge_count(), 64);
        assert_eq!(g.regular_degree(), Some(2));
        assert!(g.is_simple());
        assert_eq!(g.connected_components().len(), 1);
    }

    #[test]
    fn names_without_labels_are_one_based() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.vertex_name(0), "1");
        assert_eq!(g.vertex_by_name("4").unwrap(), 3);
        assert!(g.vertex_by_name("0").is_err());
        assert!(g.vertex_by_name("u1").is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(g.with_labels(vec![Label::U(1), Label::U(1)]).is_err());
    }
}
