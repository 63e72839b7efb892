//! The blocking edge set `S` for accordions with `gcd(n,k) >= 5`.
//!
//! With `q = gcd(n,k)` and `p = 2n/q`, row `r` (1-based, `a` = 1) of the
//! grid layout is the `p`-cycle
//! `v_r, u_r, v_{r+k}, u_{r+k}, ..., v_{r+(p/2-1)k}, u_{r+(p/2-1)k}`,
//! so column `i` holds `v_{r+jk}` for odd `i = 2j+1` and `u_{r+jk}` for
//! even `i = 2j+2`. Rows `a` to `e` are always named; row `f` only when
//! `q >= 6`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{accordion, u_index, v_index, AccordionParams, Graph};
use crate::matching::{enumerate_perfect_matchings, Matching, MatchingStream};

const ROW_NAMES: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingLayout {
    params: AccordionParams,
    q: usize,
    p: usize,
    /// `rows[r][i-1]` is the vertex in row `r` (0 = `a`), column `i`.
    rows: Vec<Vec<usize>>,
}

impl BlockingLayout {
    pub fn new(params: AccordionParams) -> Result<Self> {
        let q = params.gcd();
        if q < 5 {
            return Err(Error::Precondition(format!(
                "gcd({}, {}) = {q} < 5",
                params.n(),
                params.k()
            )));
        }
        let (n, k) = (params.n(), params.k());
        let p = 2 * n / q;
        debug_assert!(p.is_multiple_of(2));
        let named_rows = if q >= 6 { 6 } else { 5 };
        let rows = (1..=named_rows)
            .map(|r| {
                (0..p)
                    .map(|col| {
                        let i = r + (col / 2) * k;
                        if col % 2 == 0 {
                            v_index(n, i)
                        } else {
                            u_index(n, i)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(BlockingLayout { params, q, p, rows })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn half_p(&self) -> usize {
        self.p / 2
    }

    pub fn params(&self) -> AccordionParams {
        self.params
    }

    /// Vertex at row `row` (`'a'..='f'`) and 1-based column `i`; the column
    /// is reduced modulo `p` into `1..=p`.
    pub fn cell(&self, row: char, i: usize) -> Option<usize> {
        let r = ROW_NAMES.iter().position(|&c| c == row)?;
        let col = (i + self.p - 1) % self.p;
        self.rows.get(r).map(|cols| cols[col])
    }

    fn at(&self, row: char, i: usize) -> usize {
        self.cell(row, i).expect("named row")
    }

    /// The edges of `S`:
    /// `a_i a_{i+1}` (even `i`), `b_i b_{i+1}` and `e_i e_{i+1}` (odd `i`),
    /// `c_i d_i` (all `i`), and `f_i f_{i+1}` (even `i`) when `q >= 6`.
    pub fn s_edges(&self) -> Vec<(usize, usize)> {
        let mut s = Vec::new();
        for i in 1..=self.p {
            if i % 2 == 0 {
                s.push((self.at('a', i), self.at('a', i + 1)));
            } else {
                s.push((self.at('b', i), self.at('b', i + 1)));
                s.push((self.at('e', i), self.at('e', i + 1)));
            }
            s.push((self.at('c', i), self.at('d', i)));
            if self.q >= 6 && i % 2 == 0 {
                s.push((self.at('f', i), self.at('f', i + 1)));
            }
        }
        s
    }

    pub fn s_matching(&self, g: &Graph) -> Result<Matching> {
        let s = Matching::new(self.s_edges())?;
        for &(a, b) in s.pairs() {
            if !g.has_edge(a, b) {
                return Err(Error::Internal(format!(
                    "S pair {}{} is not an edge",
                    g.vertex_name(a),
                    g.vertex_name(b)
                )));
            }
        }
        Ok(s)
    }
}

/// All perfect matchings of `A[n,k]` containing `S`, in canonical order.
pub fn blocking_completions(params: AccordionParams) -> Result<MatchingStream> {
    let layout = BlockingLayout::new(params)?;
    let g = accordion(params)?;
    let s = layout.s_matching(&g)?;
    enumerate_perfect_matchings(&g, Some(&s))
}

/// The lexicographically first perfect matching of `A[n,k]` containing `S`.
pub fn build_blocking_matching(params: AccordionParams) -> Result<Matching> {
    blocking_completions(params)?.next().ok_or_else(|| {
        Error::Internal(format!(
            "S has no perfect-matching completion in A[{},{}]",
            params.n(),
            params.k()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::is_perfect_matching;

    fn layout(n: usize, k: usize) -> (BlockingLayout, Graph) {
        let p = AccordionParams::new(n, k).unwrap();
        (BlockingLayout::new(p).unwrap(), accordion(p).unwrap())
    }

    #[test]
    fn rejects_small_gcd() {
        assert!(BlockingLayout::new(AccordionParams::new(12, 4).unwrap()).is_err());
        assert!(build_blocking_matching(AccordionParams::new(13, 3).unwrap()).is_err());
    }

    #[test]
    fn relabelling_10_5() {
        let (l, g) = layout(10, 5);
        assert_eq!((l.q(), l.p(), l.half_p()), (5, 4, 2));
        let name = |row, i| g.vertex_name(l.cell(row, i).unwrap());
        let a: Vec<_> = (1..=4).map(|i| name('a', i)).collect();
        assert_eq!(a, ["v1", "u1", "v6", "u6"]);
        assert_eq!(name('b', 1), "v2");
        assert_eq!(name('e', 2), "u5");
        assert_eq!(name('c', 3), "v8");
        assert!(l.cell('f', 1).is_none());
        // Rows are p-cycles of the accordion.
        for row in ['a', 'b', 'c', 'd', 'e'] {
            for i in 1..=4 {
                assert!(g.has_edge(l.cell(row, i).unwrap(), l.cell(row, i + 1).unwrap()));
            }
        }
    }

    #[test]
    fn relabelling_is_injective() {
        for (n, k) in [(10, 5), (12, 6), (15, 5), (14, 7), (20, 10)] {
            let (l, _) = layout(n, k);
            let mut all: Vec<_> = l.rows.iter().flatten().copied().collect();
            let len = all.len();
            all.sort();
            all.dedup();
            assert_eq!(all.len(), len, "({n},{k})");
        }
    }

    #[test]
    fn s_contains_c_d_pairs() {
        let (l, g) = layout(10, 5);
        let s = l.s_matching(&g).unwrap();
        for i in 1..=4 {
            assert!(s.contains_pair(l.cell('c', i).unwrap(), l.cell('d', i).unwrap()));
        }
        // c_1 d_1 is the inner-cycle edge v3v4.
        assert!(s.contains_pair(
            g.vertex_by_name("v3").unwrap(),
            g.vertex_by_name("v4").unwrap()
        ));
    }

    #[test]
    fn q5_s_is_already_perfect() {
        let (l, g) = layout(10, 5);
        let s = l.s_matching(&g).unwrap();
        assert!(is_perfect_matching(&g, &s));
        assert_eq!(build_blocking_matching(l.params()).unwrap(), s);
        assert_eq!(blocking_completions(l.params()).unwrap().count(), 1);
    }

    #[test]
    fn q6_has_f_row() {
        let (l, g) = layout(12, 6);
        let s = l.s_matching(&g).unwrap();
        for i in [2, 4] {
            assert!(s.contains_pair(l.cell('f', i).unwrap(), l.cell('f', i + 1).unwrap()));
        }
        let m = build_blocking_matching(l.params()).unwrap();
        assert!(is_perfect_matching(&g, &m) && m.contains_all(&s));
    }
}
