use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{bit, bits, full_mask, Graph};
use crate::matching::Matching;

/// Limits applied to a single extension search.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchLimits<'a> {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// A perfect matching `N` of the graph with `M ∪ N` a Hamiltonian cycle.
    Found(Matching),
    /// The search was exhaustive and no such `N` exists.
    NotExtendable,
    /// A limit was hit before the search finished.
    Aborted,
}

/// Search state. The pairs of `M` together with the `N`-edges chosen so far
/// form vertex-disjoint paths; `end[x]` is the far endpoint of the path
/// ending at `x`, which is all the union-find we need for paths.
struct Search<'a> {
    adj: &'a [u64],
    partner: Vec<usize>,
    end: Vec<usize>,
    mate: Vec<usize>,
    free: u64,
    nodes: u64,
    limits: SearchLimits<'a>,
    aborted: bool,
}

impl Search<'_> {
    fn candidates(&self, x: usize, closing: bool) -> u64 {
        let mut c = self.adj[x] & self.free & !bit(self.partner[x]);
        if !closing {
            c &= !bit(self.end[x]);
        }
        c
    }

    fn over_limit(&mut self) -> bool {
        if let Some(max) = self.limits.max_nodes {
            if self.nodes > max {
                return true;
            }
        }
        if self.nodes & 0x3ff == 0 {
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    return true;
                }
            }
            if let Some(c) = self.limits.cancel {
                if c.load(Ordering::Relaxed) {
                    return true;
                }
            }
        }
        false
    }

    fn run(&mut self) -> bool {
        if self.free == 0 {
            return true;
        }
        self.nodes += 1;
        if self.over_limit() {
            self.aborted = true;
            return false;
        }
        // Two free vertices left means a single path remains; only now may
        // an N-edge join the two ends of a path.
        let closing = self.free.count_ones() == 2;
        let mut best = usize::MAX;
        let mut best_cands = 0;
        let mut best_count = u32::MAX;
        for x in bits(self.free) {
            let c = self.candidates(x, closing);
            let cnt = c.count_ones();
            if cnt == 0 {
                return false;
            }
            if cnt < best_count {
                best = x;
                best_cands = c;
                best_count = cnt;
                if cnt == 1 {
                    break;
                }
            }
        }
        let x = best;
        for y in bits(best_cands) {
            let (ex, ey) = (self.end[x], self.end[y]);
            self.mate[x] = y;
            self.mate[y] = x;
            self.free &= !(bit(x) | bit(y));
            self.end[ex] = ey;
            self.end[ey] = ex;
            if self.run() {
                return true;
            }
            self.end[ex] = x;
            self.end[ey] = y;
            self.free |= bit(x) | bit(y);
            if self.aborted {
                return false;
            }
        }
        false
    }
}

/// Searches for `N` under `limits`. Returns the outcome with the number of
/// search nodes visited.
pub fn extend_with_limits(
    g: &Graph,
    m: &Matching,
    limits: SearchLimits<'_>,
) -> Result<(Extension, u64)> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if !m.is_pairing_of(n) {
        return Err(Error::InvalidMatching(format!(
            "{} pairs do not form a pairing of {n} vertices",
            m.len()
        )));
    }
    if n == 0 {
        return Ok((Extension::NotExtendable, 0));
    }
    let partner = m.partners(n)?;
    let mut s = Search {
        adj: g.rows(),
        end: partner.clone(),
        partner,
        mate: vec![usize::MAX; n],
        free: full_mask(n),
        nodes: 0,
        limits,
        aborted: false,
    };
    let found = s.run();
    let outcome = if found {
        let pairs = (0..n).filter(|&v| v < s.mate[v]).map(|v| (v, s.mate[v]));
        Extension::Found(Matching::new(pairs)?)
    } else if s.aborted {
        Extension::Aborted
    } else {
        Extension::NotExtendable
    };
    Ok((outcome, s.nodes))
}

/// Finds a perfect matching `N` of `g`, disjoint from the pairing `m`, such
/// that `m ∪ N` is a Hamiltonian cycle of the complete graph on `V(g)`.
/// `None` when no such `N` exists.
pub fn extend_to_hamiltonian(g: &Graph, m: &Matching) -> Result<Option<Matching>> {
    match extend_with_limits(g, m, SearchLimits::default())?.0 {
        Extension::Found(n) => Ok(Some(n)),
        Extension::NotExtendable => Ok(None),
        Extension::Aborted => unreachable!("unlimited search cannot abort"),
    }
}

/// True iff `edges` is a single cycle through all `vertex_count` vertices.
pub fn is_hamiltonian_cycle(edges: &[(usize, usize)], vertex_count: usize) -> bool {
    if vertex_count < 3 || edges.len() != vertex_count {
        return false;
    }
    let mut nbrs = vec![Vec::with_capacity(2); vertex_count];
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in edges {
        if a == b || a >= vertex_count || b >= vertex_count || !seen.insert((a.min(b), a.max(b))) {
            return false;
        }
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    if nbrs.iter().any(|l| l.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (0, nbrs[0][0], 1);
    while cur != 0 {
        let next = if nbrs[cur][0] == prev {
            nbrs[cur][1]
        } else {
            nbrs[cur][0]
        };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == vertex_count
}

/// `m ∪ n` as an edge list.
pub fn union_edges(m: &Matching, n: &Matching) -> Vec<(usize, usize)> {
    m.pairs().iter().chain(n.pairs()).copied().collect()
}
