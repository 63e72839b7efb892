use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Graph, Label};
use crate::error::{Error, Result};

fn out_of_range(name: &'static str, value: usize, bound: impl Into<String>) -> Error {
    Error::ParamOutOfRange {
        name,
        value: value as i64,
        bound: bound.into(),
    }
}

/// Parameters of the accordion `A[n,k]`: `n >= 3` and `0 < k <= n/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AccordionParams {
    n: usize,
    k: usize,
}

impl AccordionParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(out_of_range("n", n, "n >= 3"));
        }
        if k == 0 || 2 * k > n {
            return Err(out_of_range("k", k, format!("0 < k <= n/2 = {}", n / 2)));
        }
        Ok(AccordionParams { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gcd(&self) -> usize {
        self.n.gcd(&self.k)
    }
}

/// Parameters of `Ci[2n,{a,b}]` with `1 <= a < b <= n-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CirculantParams {
    half_order: usize,
    a: usize,
    b: usize,
}

impl CirculantParams {
    pub fn new(half_order: usize, a: usize, b: usize) -> Result<Self> {
        if half_order < 3 {
            return Err(out_of_range("n", half_order, "n >= 3"));
        }
        if a < 1 {
            return Err(out_of_range("a", a, "a >= 1"));
        }
        if b <= a {
            return Err(out_of_range("b", b, format!("b > a = {a}")));
        }
        if b >= half_order {
            return Err(out_of_range(
                "b",
                b,
                format!("b <= n-1 = {}", half_order - 1),
            ));
        }
        Ok(CirculantParams { half_order, a, b })
    }

    /// As [`CirculantParams::new`] but with the two lengths in either order.
    pub fn unordered(half_order: usize, x: usize, y: usize) -> Result<Self> {
        Self::new(half_order, x.min(y), x.max(y))
    }

    pub fn half_order(&self) -> usize {
        self.half_order
    }

    pub fn order(&self) -> usize {
        2 * self.half_order
    }

    pub fn lengths(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// Number of connected components, `gcd(2n, a, b)`.
    pub fn component_count(&self) -> usize {
        self.order().gcd(&self.a).gcd(&self.b)
    }
}

pub fn u_index(n: usize, i: usize) -> usize {
    (i - 1) % n
}

pub fn v_index(n: usize, i: usize) -> usize {
    n + (i - 1) % n
}

fn accordion_labels(n: usize) -> Vec<Label> {
    (1..=n).map(Label::U).chain((1..=n).map(Label::V)).collect()
}

/// `A[n,k]`. Vertex `u_i` is index `i-1`, `v_i` is index `n+i-1`.
pub fn accordion(params: AccordionParams) -> Result<Graph> {
    accordion_edges_unchecked(params.n, params.k)
}

/// The accordion edge rule for any `n >= 3` and `0 < k < n`, without the
/// `k <= n/2` bound. `A[3,2]` is only reachable through this.
pub fn accordion_edges_unchecked(n: usize, k: usize) -> Result<Graph> {
    if n < 3 {
        return Err(out_of_range("n", n, "n >= 3"));
    }
    if k == 0 || k >= n {
        return Err(out_of_range("k", k, format!("0 < k < n = {n}")));
    }
    let mut edges = Vec::with_capacity(4 * n);
    for i in 1..=n {
        edges.push((u_index(n, i), u_index(n, i + 1)));
        edges.push((v_index(n, i), v_index(n, i + 1)));
        edges.push((u_index(n, i), v_index(n, i)));
        edges.push((u_index(n, i), v_index(n, i + k)));
    }
    let g = Graph::from_edges(2 * n, edges)
        .map_err(|e| Error::Internal(format!("A[{n},{k}] is not simple: {e}")))?;
    debug_assert_eq!(g.regular_degree(), Some(4));
    g.with_labels(accordion_labels(n))
}

/// The antiprism `A_n = A[n,1]`.
pub fn antiprism(n: usize) -> Result<Graph> {
    accordion(AccordionParams::new(n, 1)?)
}

/// Whether a circulant's lengths give a simple 4-regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CirculantStatus {
    Quartic,
    /// Some length coincides with its negative or with the other length.
    Degenerate,
}

/// `Ci[2n,{a,b}]`; `x_i` is index `i-1`.
pub fn circulant(params: CirculantParams) -> Graph {
    let (g, status) = circulant_lengths(params.order(), params.a, params.b)
        .expect("validated circulant parameters");
    debug_assert_eq!(status, CirculantStatus::Quartic);
    g
}

/// Circulant on `order` vertices with lengths `a` and `b` taken as given
/// (reduced modulo `order`). Coinciding adjacencies collapse, which is
/// flagged as [`CirculantStatus::Degenerate`].
pub fn circulant_lengths(order: usize, a: usize, b: usize) -> Result<(Graph, CirculantStatus)> {
    if order < 3 {
        return Err(out_of_range("order", order, "order >= 3"));
    }
    if order > super::MAX_VERTICES {
        return Err(Error::TooManyVertices(order));
    }
    let (a, b) = (a % order, b % order);
    if a == 0 || b == 0 {
        return Err(out_of_range(
            "length",
            0,
            "lengths nonzero modulo the order",
        ));
    }
    let mut rows = vec![0u64; order];
    for (i, row) in rows.iter_mut().enumerate() {
        for len in [a, b, order - a, order - b] {
            *row |= super::bit((i + len) % order);
        }
    }
    let g = Graph::from_rows(rows)
        .with_labels((1..=order).map(Label::X).collect())
        .expect("distinct labels");
    let status = if g.regular_degree() == Some(4) {
        CirculantStatus::Quartic
    } else {
        CirculantStatus::Degenerate
    };
    Ok((g, status))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(out_of_range("n", n, "cycle needs n >= 3"));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(out_of_range("n", n, "path needs n >= 1"));
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(out_of_range("n", n, "complete graph needs n >= 1"));
    }
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

/// `g □ h`; vertex `(x, y)` gets index `x * |V(h)| + y`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    if ng == 0 || nh == 0 {
        return Err(Error::Precondition(
            "cartesian product of an empty graph".into(),
        ));
    }
    let n = ng * nh;
    if n > super::MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let idx = |x: usize, y: usize| x * nh + y;
    let mut edges = Vec::new();
    for x in 0..ng {
        for (y1, y2) in h.edges() {
            edges.push((idx(x, y1), idx(x, y2)));
        }
    }
    for (x1, x2) in g.edges() {
        for y in 0..nh {
            edges.push((idx(x1, y), idx(x2, y)));
        }
    }
    Graph::from_edges(n, edges)
}

/// `A'[n,2]`: `A[n,2]` without `u1un, v1vn, u(n-1)v1, unv2`.
pub fn a_prime(n: usize) -> Result<Graph> {
    let g = accordion_edges_unchecked(n, 2)?;
    let removed = [
        (u_index(n, 1), u_index(n, n)),
        (v_index(n, 1), v_index(n, n)),
        (u_index(n, n - 1), v_index(n, 1)),
        (u_index(n, n), v_index(n, 2)),
    ];
    g.remove_edges(&removed)
}

/// `A[n,k]` with the cycle edges `u_{tq}u_{tq+1}` and `v_{tq}v_{tq+1}`
/// removed, `q = gcd(n,k)`.
pub fn cylinder_subgraph(params: AccordionParams) -> Result<Graph> {
    let n = params.n();
    let q = params.gcd();
    let g = accordion(params)?;
    let removed: Vec<_> = (1..=n / q)
        .flat_map(|t| {
            let i = t * q;
            [
                (u_index(n, i), u_index(n, i + 1)),
                (v_index(n, i), v_index(n, i + 1)),
            ]
        })
        .collect();
    g.remove_edges(&removed)
}

/// Checks that [`cylinder_subgraph`] is isomorphic to `C_{2n/q} □ P_q`.
pub fn cylinder_decomposition_check(params: AccordionParams) -> Result<bool> {
    let q = params.gcd();
    let lhs = cylinder_subgraph(params)?;
    let rhs = cartesian_product(&cycle(2 * params.n() / q)?, &path(q)?)?;
    Ok(crate::isomorphism::are_isomorphic(&lhs, &rhs).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc(n: usize, k: usize) -> Graph {
        accordion(AccordionParams::new(n, k).unwrap()).unwrap()
    }

    fn name_edge(g: &Graph, a: &str, b: &str) -> bool {
        g.has_edge(g.vertex_by_name(a).unwrap(), g.vertex_by_name(b).unwrap())
    }

    #[test]
    fn accordion_small() {
        let g = acc(3, 1);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn accordion_10_3_edges() {
        let g = acc(10, 3);
        for (a, b) in [("u1", "u2"), ("v10", "v1"), ("u1", "v1"), ("u1", "v4")] {
            assert!(name_edge(&g, a, b), "{a}{b}");
        }
        assert!(!name_edge(&g, "u1", "v3"));
    }

    #[test]
    fn accordion_bounds() {
        assert!(matches!(
            AccordionParams::new(4, 3),
            Err(Error::ParamOutOfRange { name: "k", .. })
        ));
        assert!(AccordionParams::new(4, 0).is_err());
        assert!(matches!(
            AccordionParams::new(2, 1),
            Err(Error::ParamOutOfRange { name: "n", .. })
        ));
        assert!(AccordionParams::new(10, 5).is_ok());
    }

    #[test]
    fn antiprism_matches_accordion() {
        assert_eq!(antiprism(3).unwrap(), acc(3, 1));
        let a7 = antiprism(7).unwrap();
        assert!(name_edge(&a7, "u1", "v1"));
        assert!(name_edge(&a7, "u1", "v2"));
        assert!(antiprism(2).is_err());
    }

    #[test]
    fn circulant_examples() {
        let g = circulant(CirculantParams::new(5, 2, 3).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 20));
        assert_eq!(g.regular_degree(), Some(4));

        let g = circulant(CirculantParams::new(4, 1, 3).unwrap());
        let mut x1: Vec<String> = g.neighbors(0).map(|v| g.vertex_name(v)).collect();
        x1.sort();
        assert_eq!(x1, ["x2", "x4", "x6", "x8"]);

        let g = circulant(CirculantParams::new(6, 2, 4).unwrap());
        assert_eq!(g.connected_components().len(), 2);
    }

    #[test]
    fn circulant_params_bounds() {
        assert!(CirculantParams::new(4, 3, 3).is_err());
        assert!(CirculantParams::new(4, 1, 4).is_err());
        assert!(CirculantParams::new(4, 0, 2).is_err());
        assert!(CirculantParams::unordered(5, 3, 2).is_ok());
    }

    #[test]
    fn degenerate_circulant_is_flagged() {
        let (g, status) = circulant_lengths(8, 4, 1).unwrap();
        assert_eq!(status, CirculantStatus::Degenerate);
        assert_eq!(g.degree(0), 3);
        let (_, status) = circulant_lengths(8, 1, 3).unwrap();
        assert_eq!(status, CirculantStatus::Quartic);
    }

    #[test]
    fn basic_families() {
        assert_eq!(cycle(3).unwrap().edge_count(), 3);
        assert!(cycle(2).is_err());
        let p1 = path(1).unwrap();
        assert_eq!((p1.vertex_count(), p1.edge_count()), (1, 0));
        assert_eq!(complete(6).unwrap().edge_count(), 15);
    }

    #[test]
    fn products() {
        let cube = cartesian_product(&cycle(4).unwrap(), &path(2).unwrap()).unwrap();
        assert_eq!((cube.vertex_count(), cube.edge_count()), (8, 12));
        assert_eq!(cube.regular_degree(), Some(3));
        let t = cartesian_product(&cycle(4).unwrap(), &cycle(4).unwrap()).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (16, 32));
        assert_eq!(t.regular_degree(), Some(4));
        let g = acc(5, 2).without_labels();
        assert_eq!(cartesian_product(&path(1).unwrap(), &g).unwrap(), g);
    }

    #[test]
    fn a_prime_shapes() {
        let g = a_prime(3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 8));
        let g5 = a_prime(5).unwrap();
        assert_eq!(g5.degree(g5.vertex_by_name("u5").unwrap()), 2);
        assert!(a_prime(4).unwrap().is_spanning_subgraph_of(&acc(4, 2)));
        assert!(a_prime(2).is_err());
    }

    #[test]
    fn bipartite_examples() {
        let g = acc(4, 2);
        let (a, b) = g.bipartite_classes().unwrap();
        let names = |s: &[usize]| s.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>();
        assert_eq!(names(&a), ["u1", "u3", "v2", "v4"]);
        assert_eq!(names(&b), ["u2", "u4", "v1", "v3"]);
        assert!(!acc(5, 2).is_bipartite());
        assert!(circulant(CirculantParams::new(4, 1, 3).unwrap()).is_bipartite());
    }

    #[test]
    fn component_examples() {
        assert_eq!(acc(10, 3).connected_components().len(), 1);
        let p = CirculantParams::new(5, 2, 3).unwrap();
        assert_eq!(circulant(p).connected_components().len(), 1);
        assert_eq!(p.component_count(), 1);
    }

    #[test]
    fn cylinder_examples() {
        for (n, k) in [(10, 5), (10, 3), (12, 4)] {
            assert!(cylinder_decomposition_check(AccordionParams::new(n, k).unwrap()).unwrap());
        }
        let c = cylinder_subgraph(AccordionParams::new(10, 3).unwrap()).unwrap();
        assert_eq!(c.edge_count(), 20);
        assert_eq!(c.connected_components().len(), 1);
        assert_eq!(c.regular_degree(), Some(2));
    }
}
