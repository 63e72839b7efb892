//! Accordion ↔ circulant isomorphisms: the explicit maps, a verifier, and an
//! exact backtracking search used to confirm non-isomorphism.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    accordion, bit, bits, circulant, u_index, v_index, AccordionParams, CirculantParams, Graph,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    ExplicitKOdd,
    ExplicitNOddKEven,
    ExplicitK2NEven,
    Search,
    Identity,
}

/// A vertex bijection `forward[v]` from one graph onto another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoMap {
    forward: Vec<usize>,
    provenance: Provenance,
}

impl IsoMap {
    pub fn new(forward: Vec<usize>, provenance: Provenance) -> Result<Self> {
        let n = forward.len();
        let mut hit = vec![false; n];
        for &w in &forward {
            if w >= n || std::mem::replace(&mut hit[w], true) {
                return Err(Error::InvalidMap(format!(
                    "not a bijection on {n} vertices"
                )));
            }
        }
        Ok(IsoMap {
            forward,
            provenance,
        })
    }

    pub fn identity(n: usize) -> Self {
        IsoMap {
            forward: (0..n).collect(),
            provenance: Provenance::Identity,
        }
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn apply(&self, v: usize) -> usize {
        self.forward[v]
    }

    pub fn inverse(&self) -> IsoMap {
        let mut inv = vec![0; self.forward.len()];
        for (v, &w) in self.forward.iter().enumerate() {
            inv[w] = v;
        }
        IsoMap {
            forward: inv,
            provenance: self.provenance,
        }
    }

    /// `(name in g, name in h)` for every vertex of `g`, in index order.
    pub fn to_names(&self, g: &Graph, h: &Graph) -> Vec<(String, String)> {
        self.forward
            .iter()
            .enumerate()
            .map(|(v, &w)| (g.vertex_name(v), h.vertex_name(w)))
            .collect()
    }
}

/// True iff `xy ∈ E(g) ⇔ map(x)map(y) ∈ E(h)` for all vertex pairs.
pub fn verify_isomorphism(g: &Graph, h: &Graph, map: &IsoMap) -> Result<bool> {
    let n = g.vertex_count();
    if h.vertex_count() != n || map.forward.len() != n {
        return Err(Error::InvalidMap(format!(
            "vertex counts differ: {} / {} / map {}",
            n,
            h.vertex_count(),
            map.forward.len()
        )));
    }
    IsoMap::new(map.forward.clone(), map.provenance)?;
    Ok((0..n).all(|x| {
        let image = bits(g.neighbor_mask(x)).fold(0u64, |acc, y| acc | bit(map.forward[y]));
        image == h.neighbor_mask(map.forward[x])
    }))
}

/// Per-vertex counts of triangles and 4-cycles through the vertex.
fn local_invariants(g: &Graph) -> Vec<(usize, usize, usize)> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            let nv = g.neighbor_mask(v);
            let triangles = bits(nv)
                .map(|w| (g.neighbor_mask(w) & nv).count_ones() as usize)
                .sum::<usize>()
                / 2;
            let squares = (0..n)
                .filter(|&w| w != v)
                .map(|w| {
                    let c = (g.neighbor_mask(w) & nv).count_ones() as usize;
                    c * c.saturating_sub(1) / 2
                })
                .sum::<usize>();
            (g.degree(v), triangles, squares)
        })
        .collect()
}

/// Colour refinement run on both graphs with a shared palette, so colours
/// are comparable across them. Returns `None` if the colour histograms
/// diverge (then the graphs are not isomorphic).
fn joint_refinement(g: &Graph, h: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.vertex_count();
    let mut palette: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut recolor = |inv: &[(usize, usize, usize)]| -> Vec<usize> {
        inv.iter()
            .map(|key| {
                let next = palette.len();
                *palette.entry(*key).or_insert(next)
            })
            .collect()
    };
    let mut cg = recolor(&local_invariants(g));
    let mut ch = recolor(&local_invariants(h));
    let histogram = |c: &[usize]| {
        let mut v = c.to_vec();
        v.sort_unstable();
        v
    };
    if histogram(&cg) != histogram(&ch) {
        return None;
    }
    let mut classes = histogram(&cg)
        .into_iter()
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    loop {
        let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut step = |graph: &Graph, c: &[usize]| -> Vec<usize> {
            (0..n)
                .map(|v| {
                    let mut nb: Vec<usize> = graph.neighbors(v).map(|w| c[w]).collect();
                    nb.sort_unstable();
                    let next = sig.len();
                    *sig.entry((c[v], nb)).or_insert(next)
                })
                .collect()
        };
        let ng = step(g, &cg);
        let nh = step(h, &ch);
        if histogram(&ng) != histogram(&nh) {
            return None;
        }
        let new_classes = sig.len();
        cg = ng;
        ch = nh;
        if new_classes == classes {
            return Some((cg, ch));
        }
        classes = new_classes;
    }
}

struct Matcher<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    class_masks: HashMap<usize, u64>,
    colors_g: Vec<usize>,
    map: Vec<usize>,
    used: u64,
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        let mut cand = self.class_masks[&self.colors_g[x]] & !self.used;
        for &y in &self.order[..depth] {
            let img = self.h.neighbor_mask(self.map[y]);
            if self.g.has_edge(x, y) {
                cand &= img;
            } else {
                cand &= !img;
            }
            if cand == 0 {
                return false;
            }
        }
        for w in bits(cand) {
            self.map[x] = w;
            self.used |= bit(w);
            if self.extend(depth + 1) {
                return true;
            }
            self.used &= !bit(w);
        }
        false
    }
}

/// Exact isomorphism test. Returns a verified map `g → h` when one exists.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Option<IsoMap> {
    let n = g.vertex_count();
    if h.vertex_count() != n || g.edge_count() != h.edge_count() {
        return None;
    }
    if n == 0 {
        return Some(IsoMap::identity(0));
    }
    let (cg, ch) = joint_refinement(g, h)?;
    let mut class_masks: HashMap<usize, u64> = HashMap::new();
    for (w, &c) in ch.iter().enumerate() {
        *class_masks.entry(c).or_default() |= bit(w);
    }
    let class_size = |c: usize| class_masks[&c].count_ones();

    // Start in the smallest colour class, then always take the unplaced
    // vertex with the most placed neighbours.
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| placed & bit(v) == 0)
            .max_by_key(|&v| {
                (
                    (g.neighbor_mask(v) & placed).count_ones(),
                    std::cmp::Reverse(class_size(cg[v])),
                    std::cmp::Reverse(v),
                )
            })
            .expect("unplaced vertex");
        placed |= bit(next);
        order.push(next);
    }

    let mut m = Matcher {
        g,
        h,
        order,
        class_masks,
        colors_g: cg,
        map: vec![usize::MAX; n],
        used: 0,
    };
    if !m.extend(0) {
        return None;
    }
    let map = IsoMap::new(m.map, Provenance::Search).ok()?;
    debug_assert!(verify_isomorphism(g, h, &map).unwrap_or(false));
    Some(map)
}

/// A verified isomorphism from `A[n,k]` onto a quartic circulant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantForm {
    pub accordion: AccordionParams,
    pub params: CirculantParams,
    pub map: IsoMap,
}

/// The explicit circulant form of `A[n,k]`, or `None` exactly when `n` and
/// `k` are both even with `k >= 4`.
///
/// * `k` odd: `Ci[2n,{2,k}]`, `u_i ↦ x_{2i}`, `v_i ↦ x_{2i-k}`.
/// * `n` odd, `k` even: `Ci[2n,{2,n-k}]`, `u_i ↦ x_{2i}`, `v_i ↦ x_{2i+n-k}`.
/// * `n` even, `k = 2`: `Ci[2n,{1,n-1}]`, `u_i ↦ x_{1+(n-1)(i-1)}`,
///   `v_1 ↦ x_{2+n}`, `v_i ↦ x_{2+(n-1)(i-1)}` for `i >= 2`.
///
/// Indices are modulo `2n` with residues `1..=2n`. Every map is checked
/// against both graphs before it is returned.
pub fn circulant_form(params: AccordionParams) -> Result<Option<CirculantForm>> {
    let (n, k) = (params.n(), params.k());
    let order = 2 * n as i64;
    let x = |j: i64| (j - 1).rem_euclid(order) as usize;
    let (lengths, provenance, image): (_, _, Box<dyn Fn(bool, usize) -> usize>) = if k % 2 == 1 {
        let k = k as i64;
        (
            (2, params.k()),
            Provenance::ExplicitKOdd,
            Box::new(move |is_u, i| {
                let i = i as i64;
                if is_u {
                    x(2 * i)
                } else {
                    x(2 * i - k)
                }
            }),
        )
    } else if n % 2 == 1 {
        let shift = (n - k) as i64;
        (
            (2, n - k),
            Provenance::ExplicitNOddKEven,
            Box::new(move |is_u, i| {
                let i = i as i64;
                if is_u {
                    x(2 * i)
                } else {
                    x(2 * i + shift)
                }
            }),
        )
    } else if k == 2 {
        let step = n as i64 - 1;
        let nn = n as i64;
        (
            (1, n - 1),
            Provenance::ExplicitK2NEven,
            Box::new(move |is_u, i| {
                let i = i as i64;
                match (is_u, i) {
                    (true, _) => x(1 + step * (i - 1)),
                    (false, 1) => x(2 + nn),
                    (false, _) => x(2 + step * (i - 1)),
                }
            }),
        )
    } else {
        return Ok(None);
    };

    let cparams = CirculantParams::unordered(n, lengths.0, lengths.1)?;
    let mut forward = vec![0; 2 * n];
    for i in 1..=n {
        forward[u_index(n, i)] = image(true, i);
        forward[v_index(n, i)] = image(false, i);
    }
    let map = IsoMap::new(forward, provenance)
        .map_err(|e| Error::Internal(format!("explicit map for A[{n},{k}]: {e}")))?;
    let g = accordion(params)?;
    let h = circulant(cparams);
    if !verify_isomorphism(&g, &h, &map)? {
        return Err(Error::Internal(format!(
            "explicit map A[{n},{k}] -> Ci[{},{{{},{}}}] does not preserve adjacency",
            2 * n,
            lengths.0,
            lengths.1
        )));
    }
    Ok(Some(CirculantForm {
        accordion: params,
        params: cparams,
        map,
    }))
}

pub const CIRCULANT_SWEEP_MAX_VERTICES: usize = 32;

/// Finds lengths `{a,b}` with `g ≅ Ci[2n,{a,b}]` by trying every admissible
/// pair. Candidates whose component count or bipartiteness differ from `g`
/// are skipped. Returns the first success in `(a, b)` order.
pub fn is_circulant_quartic(g: &Graph) -> Result<Option<(CirculantParams, IsoMap)>> {
    let order = g.vertex_count();
    if g.regular_degree() != Some(4) {
        return Err(Error::Precondition("graph is not 4-regular".into()));
    }
    if order % 2 == 1 {
        return Err(Error::OddVertexCount(order));
    }
    if order > CIRCULANT_SWEEP_MAX_VERTICES {
        return Err(Error::Precondition(format!(
            "{order} vertices exceeds the sweep limit of {CIRCULANT_SWEEP_MAX_VERTICES}"
        )));
    }
    let half = order / 2;
    let components = g.connected_components().len();
    let bipartite = g.is_bipartite();
    let candidates: Vec<CirculantParams> = (1..half)
        .flat_map(|a| (a + 1..half).map(move |b| (a, b)))
        .filter_map(|(a, b)| CirculantParams::new(half, a, b).ok())
        .filter(|p| p.component_count() == components)
        .collect();
    Ok(candidates.par_iter().find_map_first(|&p| {
        let h = circulant(p);
        if h.is_bipartite() != bipartite {
            return None;
        }
        are_isomorphic(g, &h).map(|m| (p, m))
    }))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BipartiteReport {
    pub accordions_checked: usize,
    pub circulants_checked: usize,
    pub violations: Vec<String>,
}

/// Cross-checks the parity rules against BFS two-colouring: `A[n,k]` is
/// bipartite iff `n` and `k` are even, and a connected `Ci[2n,{a,b}]` is
/// bipartite iff `a` and `b` are odd. Covers every valid accordion with
/// `n <= accordion_n_max` (and its circulant form), and every connected
/// circulant with half-order `<= circulant_n_max`.
pub fn bipartite_consistency(
    accordion_n_max: usize,
    circulant_n_max: usize,
) -> Result<BipartiteReport> {
    let mut report = BipartiteReport::default();
    let circulant_rule = |p: &CirculantParams| {
        let (a, b) = p.lengths();
        a % 2 == 1 && b % 2 == 1
    };
    for n in 3..=accordion_n_max {
        for k in 1..=n / 2 {
            let params = AccordionParams::new(n, k)?;
            let g = accordion(params)?;
            report.accordions_checked += 1;
            let predicted = n % 2 == 0 && k % 2 == 0;
            if g.is_bipartite() != predicted {
                report
                    .violations
                    .push(format!("A[{n},{k}]: BFS disagrees with parity rule"));
            }
            if let Some(form) = circulant_form(params)? {
                let h = circulant(form.params);
                report.circulants_checked += 1;
                if h.is_bipartite() != circulant_rule(&form.params) || h.is_bipartite() != predicted
                {
                    report.violations.push(format!(
                        "circulant form of A[{n},{k}]: bipartiteness mismatch"
                    ));
                }
            }
        }
    }
    for half in 3..=circulant_n_max {
        for a in 1..half {
            for b in a + 1..half {
                let p = CirculantParams::new(half, a, b)?;
                if p.component_count() != 1 {
                    continue;
                }
                report.circulants_checked += 1;
                if circulant(p).is_bipartite() != circulant_rule(&p) {
                    report.violations.push(format!(
                        "Ci[{},{{{a},{b}}}]: BFS disagrees with length rule",
                        2 * half
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{antiprism, cartesian_product, cycle, Label};

    fn acc(n: usize, k: usize) -> Graph {
        accordion(AccordionParams::new(n, k).unwrap()).unwrap()
    }

    #[test]
    fn explicit_form_examples() {
        let f = circulant_form(AccordionParams::new(7, 3).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(f.params.lengths(), (2, 3));
        assert_eq!(f.map.provenance(), Provenance::ExplicitKOdd);
        assert_eq!(f.map.apply(v_index(7, 1)), 12); // x13

        let f = circulant_form(AccordionParams::new(5, 2).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(f.params.lengths(), (2, 3));
        for i in 1..=5 {
            assert_eq!(f.map.apply(v_index(5, i)), (2 * i + 3 - 1) % 10);
        }

        assert!(circulant_form(AccordionParams::new(8, 4).unwrap())
            .unwrap()
            .is_none());

        let f = circulant_form(AccordionParams::new(6, 2).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(f.params.lengths(), (1, 5));
        assert_eq!(f.map.provenance(), Provenance::ExplicitK2NEven);
    }

    #[test]
    fn verify_examples() {
        let g = acc(10, 3);
        assert!(verify_isomorphism(&g, &g, &IsoMap::identity(20)).unwrap());

        // The odd-k map for A[6,3], aimed at the wrong circulant.
        let bad = acc(6, 3);
        let h = circulant(CirculantParams::new(6, 2, 4).unwrap());
        let forward = (1..=6)
            .map(|i| (2 * i - 1) % 12)
            .chain((1..=6).map(|i| ((2 * i as i64 - 3 - 1).rem_euclid(12)) as usize))
            .collect();
        let map = IsoMap::new(forward, Provenance::ExplicitKOdd).unwrap();
        assert!(!verify_isomorphism(&bad, &h, &map).unwrap());

        assert!(verify_isomorphism(&acc(5, 2), &acc(6, 2), &IsoMap::identity(10)).is_err());
        assert!(IsoMap::new(vec![0, 0, 1], Provenance::Search).is_err());
    }

    #[test]
    fn search_examples() {
        let c6 = cycle(6).unwrap();
        let shuffled =
            Graph::from_edges(6, [(0, 3), (3, 1), (1, 5), (5, 2), (2, 4), (4, 0)]).unwrap();
        let m = are_isomorphic(&c6, &shuffled).unwrap();
        assert!(verify_isomorphism(&c6, &shuffled, &m).unwrap());

        let triangles =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(are_isomorphic(&c6, &triangles).is_none());
    }

    #[test]
    fn accordion_10_5_is_some_circulant() {
        let g = acc(10, 5);
        let hits: Vec<_> = (1..10)
            .flat_map(|a| (a + 1..10).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                are_isomorphic(&g, &circulant(CirculantParams::new(10, a, b).unwrap())).is_some()
            })
            .collect();
        assert!(hits.contains(&(2, 5)), "{hits:?}");
    }

    #[test]
    fn circulant_sweep_examples() {
        assert!(is_circulant_quartic(&acc(8, 4)).unwrap().is_none());
        let (p, m) = is_circulant_quartic(&acc(9, 4)).unwrap().unwrap();
        assert!(verify_isomorphism(&acc(9, 4), &circulant(p), &m).unwrap());
        let predicted = CirculantParams::new(9, 2, 5).unwrap();
        assert!(are_isomorphic(&acc(9, 4), &circulant(predicted)).is_some());
        let (p, _) = is_circulant_quartic(&antiprism(4).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(p.lengths(), (1, 2));
        assert!(is_circulant_quartic(&cycle(8).unwrap()).is_err());
    }

    #[test]
    fn torus_spot_check() {
        let c3c4 = cartesian_product(&cycle(3).unwrap(), &cycle(4).unwrap()).unwrap();
        let ci = circulant(CirculantParams::new(6, 3, 4).unwrap());
        assert!(are_isomorphic(&ci, &c3c4).is_some());
        let c4c4 = cartesian_product(&cycle(4).unwrap(), &cycle(4).unwrap()).unwrap();
        assert!(is_circulant_quartic(&c4c4).unwrap().is_none());
    }

    #[test]
    fn names_of_map() {
        let f = circulant_form(AccordionParams::new(4, 1).unwrap())
            .unwrap()
            .unwrap();
        let g = acc(4, 1);
        let h = circulant(f.params);
        let names = f.map.to_names(&g, &h);
        assert_eq!(names[0], ("u1".to_string(), "x2".to_string()));
        assert_eq!(h.labels().unwrap()[0], Label::X(1));
    }

    #[test]
    fn bipartite_small() {
        let r = bipartite_consistency(8, 5).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.accordions_checked > 0 && r.circulants_checked > 0);
        assert!(circulant(CirculantParams::new(4, 1, 3).unwrap()).is_bipartite());
    }
}
