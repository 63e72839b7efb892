//! Perfect matchings and pairings: canonical value type, resumable
//! enumeration streams, and an independent counter.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, full_mask, Graph, MAX_VERTICES};

/// Vertex-disjoint pairs `(lo, hi)`, `lo < hi`, sorted by `lo`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Canonicalises `pairs`; fails on loops or shared endpoints.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::InvalidMatching(format!("loop at vertex {a}")));
            }
            for v in [a, b] {
                if !seen.insert(v) {
                    return Err(Error::InvalidMatching(format!(
                        "vertex {v} appears in two pairs"
                    )));
                }
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        Ok(Matching { pairs: out })
    }

    pub fn empty() -> Self {
        Matching::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains_pair(&self, a: usize, b: usize) -> bool {
        self.pairs.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn contains_all(&self, other: &Matching) -> bool {
        other.pairs.iter().all(|&(a, b)| self.contains_pair(a, b))
    }

    pub fn vertex_mask(&self) -> u64 {
        self.pairs.iter().fold(0, |m, &(a, b)| m | bit(a) | bit(b))
    }

    /// `partner[v]` for a pairing of `0..n`, or an error if some vertex is
    /// uncovered or out of range.
    pub fn partners(&self, n: usize) -> Result<Vec<usize>> {
        let mut partner = vec![usize::MAX; n];
        for &(a, b) in &self.pairs {
            if b >= n {
                return Err(Error::InvalidMatching(format!("vertex {b} outside 0..{n}")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if let Some(v) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidMatching(format!("vertex {v} is unpaired")));
        }
        Ok(partner)
    }

    /// True when the pairs partition `0..n` (a perfect matching of `K_n`).
    pub fn is_pairing_of(&self, n: usize) -> bool {
        2 * self.pairs.len() == n && self.partners(n).is_ok()
    }

    /// `[["u1","v1"], ...]` using the graph's vertex names.
    pub fn to_names(&self, g: &Graph) -> Vec<[String; 2]> {
        self.pairs
            .iter()
            .map(|&(a, b)| [g.vertex_name(a), g.vertex_name(b)])
            .collect()
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[[S; 2]]) -> Result<Self> {
        Matching::new(
            names
                .iter()
                .map(|[a, b]| Ok((g.vertex_by_name(a.as_ref())?, g.vertex_by_name(b.as_ref())?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Compact line form `u1-v1 u2-v2 ...`.
    pub fn to_line(&self, g: &Graph) -> String {
        self.to_names(g)
            .iter()
            .map(|[a, b]| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn from_line(g: &Graph, line: &str) -> Result<Self> {
        let names = line
            .split_whitespace()
            .map(|tok| {
                let (a, b) = tok
                    .split_once('-')
                    .ok_or_else(|| Error::Parse(format!("pair {tok:?} lacks '-'")))?;
                Ok([a.to_string(), b.to_string()])
            })
            .collect::<Result<Vec<_>>>()?;
        Matching::from_names(g, &names)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Matching, &'a Graph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.to_line(self.1))
            }
        }
        D(self, g)
    }
}

/// True iff every pair is an edge of `g` and the pairs cover `V(g)`.
pub fn is_perfect_matching(g: &Graph, m: &Matching) -> bool {
    m.is_pairing_of(g.vertex_count()) && m.pairs().iter().all(|&(a, b)| g.has_edge(a, b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Frame {
    vertex: usize,
    remaining: u64,
    chosen: Option<usize>,
}

/// Resumable depth-first enumeration of the perfect matchings of a graph
/// that contain a fixed prefix. Branches on the lowest unmatched vertex and
/// tries partners in increasing order, so output is in lexicographic order
/// of [`Matching`]'s canonical form.
///
/// The stream is plain data: clone or serialize it to checkpoint the cursor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingStream {
    adj: Vec<u64>,
    forced: Matching,
    matched: u64,
    stack: Vec<Frame>,
    started: bool,
    done: bool,
}

impl MatchingStream {
    fn with_rows(adj: Vec<u64>, forced: Matching) -> Self {
        let matched = forced.vertex_mask();
        MatchingStream {
            adj,
            forced,
            matched,
            stack: Vec::new(),
            started: false,
            done: false,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn forced(&self) -> &Matching {
        &self.forced
    }

    fn full(&self) -> u64 {
        full_mask(self.adj.len())
    }

    /// Every unmatched vertex still has an unmatched neighbour.
    fn viable(&self) -> bool {
        let free = self.full() & !self.matched;
        bits(free).all(|v| self.adj[v] & free != 0)
    }

    fn current(&self) -> Matching {
        let mut pairs = self.forced.pairs.clone();
        pairs.extend(
            self.stack
                .iter()
                .filter_map(|f| f.chosen.map(|c| (f.vertex.min(c), f.vertex.max(c)))),
        );
        pairs.sort_unstable();
        Matching { pairs }
    }

    fn push_lowest_free(&mut self) {
        let free = self.full() & !self.matched;
        let v = free.trailing_zeros() as usize;
        self.stack.push(Frame {
            vertex: v,
            remaining: self.adj[v] & free,
            chosen: None,
        });
    }

    pub fn is_finished(&self) -> bool {
        self.done
    }

    /// Splits the remaining enumeration of a fresh stream into sub-streams,
    /// one per choice of partner for the first branching vertex, in order.
    /// Concatenating their outputs reproduces this stream's output.
    pub fn split_first_level(&self) -> Vec<MatchingStream> {
        assert!(!self.started, "split a stream before consuming it");
        let free = self.full() & !self.matched;
        if free == 0 || self.done {
            return vec![self.clone()];
        }
        let v = free.trailing_zeros() as usize;
        bits(self.adj[v] & free)
            .map(|c| {
                let mut pairs = self.forced.pairs.clone();
                pairs.push((v, c));
                pairs.sort_unstable();
                MatchingStream::with_rows(self.adj.clone(), Matching { pairs })
            })
            .collect()
    }

    /// Repeatedly splits until at least `min_parts` sub-streams exist or no
    /// further split is possible. Order is preserved.
    pub fn split_into(&self, min_parts: usize) -> Vec<MatchingStream> {
        let mut parts = vec![self.clone()];
        while parts.len() < min_parts {
            let next: Vec<_> = parts.iter().flat_map(|p| p.split_first_level()).collect();
            if next.len() == parts.len() {
                break;
            }
            parts = next;
        }
        parts
    }
}

impl Iterator for MatchingStream {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.matched == self.full() {
                self.done = true;
                return Some(self.forced.clone());
            }
            if !self.viable() {
                self.done = true;
                return None;
            }
            self.push_lowest_free();
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            if let Some(c) = top.chosen.take() {
                self.matched &= !(bit(top.vertex) | bit(c));
            }
            if top.remaining == 0 {
                self.stack.pop();
                continue;
            }
            let c = top.remaining.trailing_zeros() as usize;
            top.remaining &= top.remaining - 1;
            top.chosen = Some(c);
            self.matched |= bit(top.vertex) | bit(c);
            if self.matched == self.full() {
                return Some(self.current());
            }
            if self.viable() {
                self.push_lowest_free();
            }
        }
    }
}

fn check_forced(g: &Graph, forced: &Matching) -> Result<()> {
    for &(a, b) in forced.pairs() {
        if !g.has_edge(a, b) {
            return Err(Error::InvalidMatching(format!(
                "forced pair ({}, {}) is not an edge",
                a + 1,
                b + 1
            )));
        }
    }
    Ok(())
}

/// Perfect matchings of `g` containing `forced` (disjointness is
/// guaranteed by [`Matching`]'s constructor).
pub fn enumerate_perfect_matchings(g: &Graph, forced: Option<&Matching>) -> Result<MatchingStream> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let forced = forced.cloned().unwrap_or_default();
    check_forced(g, &forced)?;
    Ok(MatchingStream::with_rows(g.rows().to_vec(), forced))
}

/// All `(n-1)!!` pairings of `0..n`.
pub fn enumerate_pairings(vertex_count: usize) -> Result<MatchingStream> {
    if vertex_count % 2 == 1 {
        return Err(Error::OddVertexCount(vertex_count));
    }
    if vertex_count > MAX_VERTICES {
        return Err(Error::TooManyVertices(vertex_count));
    }
    let full = full_mask(vertex_count);
    let rows = (0..vertex_count).map(|v| full & !bit(v)).collect();
    Ok(MatchingStream::with_rows(rows, Matching::empty()))
}

/// Counts perfect matchings by memoised recursion on the set of unmatched
/// vertices, always matching the lowest one.
pub fn count_perfect_matchings(g: &Graph) -> Result<u128> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    fn go(g: &Graph, free: u64, memo: &mut HashMap<u64, u128>) -> u128 {
        if free == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&free) {
            return c;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !bit(v);
        let total = bits(g.neighbor_mask(v) & rest)
            .map(|w| go(g, rest & !bit(w), memo))
            .sum();
        memo.insert(free, total);
        total
    }
    Ok(go(g, full_mask(n), &mut HashMap::new()))
}

/// `(2m-1)!!`, the number of pairings of `2m` points.
pub fn double_factorial_odd(m: u32) -> u128 {
    (1..=m as u128).map(|i| 2 * i - 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{accordion, antiprism, complete, cycle, AccordionParams};

    #[test]
    fn matching_canonical_form() {
        let m = Matching::new([(3, 2), (0, 1)]).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(m, Matching::new([(1, 0), (2, 3)]).unwrap());
        assert!(Matching::new([(0, 1), (1, 2)]).is_err());
        assert!(Matching::new([(4, 4)]).is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            enumerate_perfect_matchings(&complete(4).unwrap(), None)
                .unwrap()
                .count(),
            3
        );
        let c6: Vec<_> = enumerate_perfect_matchings(&cycle(6).unwrap(), None)
            .unwrap()
            .collect();
        assert_eq!(c6.len(), 2);
        assert_eq!(count_perfect_matchings(&complete(6).unwrap()).unwrap(), 15);
        assert_eq!(count_perfect_matchings(&cycle(8).unwrap()).unwrap(), 2);
    }

    #[test]
    fn odd_order_rejected() {
        assert!(matches!(
            enumerate_perfect_matchings(&cycle(5).unwrap(), None),
            Err(Error::OddVertexCount(5))
        ));
        assert!(enumerate_pairings(7).is_err());
        assert!(count_perfect_matchings(&cycle(3).unwrap()).is_err());
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(enumerate_pairings(6).unwrap().count(), 15);
        assert_eq!(enumerate_pairings(8).unwrap().count(), 105);
        assert_eq!(enumerate_pairings(14).unwrap().count(), 135135);
        assert_eq!(enumerate_pairings(0).unwrap().count(), 1);
    }

    #[test]
    fn output_is_sorted_and_distinct() {
        let g = accordion(AccordionParams::new(6, 2).unwrap()).unwrap();
        let all: Vec<_> = enumerate_perfect_matchings(&g, None).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|m| is_perfect_matching(&g, m)));
        assert_eq!(all.len() as u128, count_perfect_matchings(&g).unwrap());
    }

    #[test]
    fn forced_prefix() {
        let g = antiprism(5).unwrap();
        let forced = Matching::new([(0, 5)]).unwrap();
        let with: Vec<_> = enumerate_perfect_matchings(&g, Some(&forced))
            .unwrap()
            .collect();
        let all: Vec<_> = enumerate_perfect_matchings(&g, None)
            .unwrap()
            .filter(|m| m.contains_pair(0, 5))
            .collect();
        assert_eq!(with, all);
        let not_edge = Matching::new([(0, 2)]).unwrap();
        assert!(enumerate_perfect_matchings(&g, Some(&not_edge)).is_err());
    }

    #[test]
    fn full_forced_prefix_yields_itself() {
        let g = cycle(4).unwrap();
        let m = Matching::new([(0, 1), (2, 3)]).unwrap();
        let out: Vec<_> = enumerate_perfect_matchings(&g, Some(&m)).unwrap().collect();
        assert_eq!(out, vec![m]);
    }

    #[test]
    fn perfect_matching_predicate() {
        let g = antiprism(3).unwrap();
        let m = Matching::from_line(&g, "u1-v1 u2-v2 u3-v3").unwrap();
        assert!(is_perfect_matching(&g, &m));
        let a7 = antiprism(7).unwrap();
        let fig = Matching::from_line(&a7, "u1-v5 u2-v2 u3-v3 u4-v4 u5-v6 u6-v7 u7-v1").unwrap();
        assert!(!is_perfect_matching(&a7, &fig));
        assert!(fig.is_pairing_of(14));
        let empty = Graph::from_edges(0, []).unwrap();
        assert!(is_perfect_matching(&empty, &Matching::empty()));
    }

    #[test]
    fn split_concatenates_to_whole() {
        let g = accordion(AccordionParams::new(7, 3).unwrap()).unwrap();
        let whole: Vec<_> = enumerate_perfect_matchings(&g, None).unwrap().collect();
        let stream = enumerate_perfect_matchings(&g, None).unwrap();
        for parts in [stream.split_first_level(), stream.split_into(20)] {
            let joined: Vec<_> = parts.into_iter().flatten().collect();
            assert_eq!(joined, whole);
        }
        let pairings: Vec<_> = enumerate_pairings(8).unwrap().collect();
        let joined: Vec<_> = enumerate_pairings(8)
            .unwrap()
            .split_into(30)
            .into_iter()
            .flatten()
            .collect();
        assert_eq!(joined, pairings);
    }

    #[test]
    fn resume_from_serialized_cursor() {
        let g = antiprism(6).unwrap();
        let mut s = enumerate_perfect_matchings(&g, None).unwrap();
        let head: Vec<_> = s.by_ref().take(5).collect();
        let saved = serde_json::to_string(&s).unwrap();
        let resumed: MatchingStream = serde_json::from_str(&saved).unwrap();
        let all: Vec<_> = head.into_iter().chain(resumed).collect();
        let fresh: Vec<_> = enumerate_perfect_matchings(&g, None).unwrap().collect();
        assert_eq!(all, fresh);
    }

    #[test]
    fn line_and_names() {
        let g = antiprism(3).unwrap();
        let m = Matching::from_line(&g, "u1-v3 u2-v1 u3-v2").unwrap();
        assert_eq!(m.to_line(&g), "u1-v3 u2-v1 u3-v2");
        let names = m.to_names(&g);
        assert_eq!(Matching::from_names(&g, &names).unwrap(), m);
        assert!(Matching::from_line(&g, "u1v3").is_err());
    }
}
