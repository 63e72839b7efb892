//! Brute-force oracles shared by the integration tests. None of these use
//! the library's search code; they only read adjacency from `Graph`.

#![allow(dead_code)]

use accordion::{Graph, Matching};

/// Every perfect matching of `g`, by plain recursion on the lowest
/// unmatched vertex.
pub fn naive_perfect_matchings(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    fn go(
        g: &Graph,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some(a) = used.iter().position(|&u| !u) else {
            out.push(cur.clone());
            return;
        };
        used[a] = true;
        for b in a + 1..g.vertex_count() {
            if !used[b] && g.has_edge(a, b) {
                used[b] = true;
                cur.push((a, b));
                go(g, used, cur, out);
                cur.pop();
                used[b] = false;
            }
        }
        used[a] = false;
    }
    let mut out = Vec::new();
    if g.vertex_count().is_multiple_of(2) {
        go(
            g,
            &mut vec![false; g.vertex_count()],
            &mut Vec::new(),
            &mut out,
        );
    }
    out
}

/// Walks the 2-regular multigraph `edges` from vertex 0 and checks that it
/// is one cycle through all `n` vertices.
pub fn is_single_cycle(edges: &[(usize, usize)], n: usize) -> bool {
    if n < 3 || edges.len() != n {
        return false;
    }
    let mut adj = vec![vec![]; n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    if adj.iter().any(|l| l.len() != 2) {
        return false;
    }
    let mut seen = vec![false; n];
    let (mut prev, mut cur) = (usize::MAX, 0);
    for _ in 0..n {
        if seen[cur] {
            return false;
        }
        seen[cur] = true;
        let next = if adj[cur][0] != prev {
            adj[cur][0]
        } else {
            adj[cur][1]
        };
        prev = cur;
        cur = next;
    }
    cur == 0 && seen.iter().all(|&s| s)
}

/// Some perfect matching `N` of `g` with `m ∪ N` a Hamiltonian cycle,
/// found by trying every perfect matching of `g`.
pub fn naive_extension(g: &Graph, m: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
    let key = |&(a, b): &(usize, usize)| (a.min(b), a.max(b));
    let mset: std::collections::HashSet<_> = m.iter().map(key).collect();
    naive_perfect_matchings(g).into_iter().find(|n| {
        n.iter().all(|e| !mset.contains(&key(e))) && {
            let all: Vec<_> = m.iter().chain(n.iter()).copied().collect();
            is_single_cycle(&all, g.vertex_count())
        }
    })
}

/// Checks an extension returned by the library against the definitions.
pub fn valid_extension(g: &Graph, m: &Matching, n: &Matching) -> bool {
    let count = g.vertex_count();
    let mut covered = vec![0u8; count];
    for &(a, b) in n.pairs() {
        if !g.has_edge(a, b) || m.contains_pair(a, b) {
            return false;
        }
        covered[a] += 1;
        covered[b] += 1;
    }
    let all: Vec<_> = m.pairs().iter().chain(n.pairs()).copied().collect();
    covered.iter().all(|&c| c == 1) && is_single_cycle(&all, count)
}

/// A uniformly random pairing of `0..n` from a shuffled vertex order.
pub fn random_pairing(n: usize, rng: &mut impl rand::Rng) -> Vec<(usize, usize)> {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v.chunks(2).map(|c| (c[0], c[1])).collect()
}
