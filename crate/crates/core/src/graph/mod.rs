//! Small simple graphs, rooted graphs, and the plain-text graph format.
//!
//! Pattern graphs (F, F*, enumeration universes) and moderately sized hosts
//! share one representation: a sorted edge list plus dense bitset rows.

pub mod bitset;
pub mod canon;
pub mod count;
pub mod enumerate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unordered vertex pair, always stored with `.0 < .1`.
pub type Edge = (usize, usize);

#[inline]
pub fn norm(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Anything exposing dense bitset adjacency rows; the subgraph matcher runs on it.
pub trait AdjacencyRows {
    fn order(&self) -> usize;
    fn row(&self, v: usize) -> &[u64];

    fn words(&self) -> usize {
        bitset::words_for(self.order())
    }

    fn adjacent(&self, u: usize, w: usize) -> bool {
        bitset::test(self.row(u), w)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    words: usize,
    adj: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    v: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.v, r.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            v: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(v={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if !set.insert(norm(a, b)) {
                return Err(Error::InvalidGraph(format!("repeated edge ({a},{b})")));
            }
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    /// Builds a graph from edges that may repeat; duplicates collapse to one edge.
    ///
    /// Panics on loops or out-of-range endpoints; used by internal constructions.
    pub(crate) fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = Edge>) -> Graph {
        let set: BTreeSet<Edge> = edges
            .into_iter()
            .map(|(a, b)| {
                assert!(a != b && a < n && b < n, "bad edge ({a},{b}) for n={n}");
                norm(a, b)
            })
            .collect();
        Self::from_sorted(n, set.into_iter().collect())
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Graph {
        let words = bitset::words_for(n);
        let mut adj = vec![0u64; n * words];
        for &(a, b) in &edges {
            bitset::set(&mut adj[a * words..(a + 1) * words], b);
            bitset::set(&mut adj[b * words..(b + 1) * words], a);
        }
        Graph { n, edges, words, adj }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::from_sorted(n, edges)
    }

    /// Cycle on `n ≥ 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Self::from_edges_dedup(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Path on `n` vertices (`n − 1` edges).
    pub fn path(n: usize) -> Graph {
        Self::from_edges_dedup(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Star with `leaves` leaves around vertex 0.
    pub fn star(leaves: usize) -> Graph {
        Self::from_edges_dedup(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    /// Two triangles sharing vertex 0.
    pub fn bowtie() -> Graph {
        Self::from_edges_dedup(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
    }

    /// Two triangles sharing the edge {0,1}.
    pub fn diamond() -> Graph {
        Self::from_edges_dedup(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])
    }

    /// Looks up a named builtin: `K2..K7`, `C3..C9`, `P2..P8`, `bowtie`, `diamond`.
    pub fn builtin(name: &str) -> Option<Graph> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "bowtie" => return Some(Self::bowtie()),
            "diamond" => return Some(Self::diamond()),
            _ => {}
        }
        let (kind, num) = lower.split_at(1);
        let k: usize = num.parse().ok()?;
        match kind {
            "k" if (2..=7).contains(&k) => Some(Self::complete(k)),
            "c" if (3..=9).contains(&k) => Some(Self::cycle(k)),
            "p" if (2..=8).contains(&k) => Some(Self::path(k)),
            _ => None,
        }
    }

    /// Parses the text format: `v <n>` followed by `e <u> <w>` lines.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("v") => {
                    if n.is_some() {
                        return Err(err("second `v` line"));
                    }
                    let v: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err("expected `v <n>`"))?;
                    n = Some(v);
                }
                Some("e") => {
                    if n.is_none() {
                        return Err(err("edge before the `v` line"));
                    }
                    let a: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err("expected `e <u> <w>`"))?;
                    let b: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err("expected `e <u> <w>`"))?;
                    edges.push((a, b));
                }
                _ => return Err(err("expected a `v` or `e` line")),
            }
            if parts.next().is_some() {
                return Err(err("trailing tokens"));
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `v <n>` line".into(),
        })?;
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("v {}\n", self.n);
        for &(a, b) in &self.edges {
            s.push_str(&format!("e {a} {b}\n"));
        }
        s
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && bitset::test(self.row(a), b)
    }

    pub fn degree(&self, v: usize) -> usize {
        bitset::count(self.row(v)) as usize
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::ones(self.row(v))
    }

    /// Neighborhood as a `u64` mask; requires `v() ≤ 64`.
    pub fn mask_row(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[v * self.words]
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| norm(pos[a], pos[b]));
        Self::from_edges_dedup(vertices.len(), edges)
    }

    /// Number of edges with both endpoints in `vertices`.
    pub fn edges_within(&self, vertices: &[usize]) -> usize {
        let mut mask = vec![0u64; self.words];
        for &v in vertices {
            bitset::set(&mut mask, v);
        }
        let twice: u32 = vertices.iter().map(|&v| bitset::and_count(self.row(v), &mask)).sum();
        twice as usize / 2
    }

    pub fn without_edge(&self, a: usize, b: usize) -> Graph {
        let e = norm(a, b);
        Self::from_sorted(self.n, self.edges.iter().copied().filter(|&x| x != e).collect())
    }

    pub fn with_edge(&self, a: usize, b: usize) -> Graph {
        Self::from_edges_dedup(self.n, self.edges.iter().copied().chain(std::iter::once(norm(a, b))))
    }

    /// Applies `perm` with `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Self::from_edges_dedup(self.n, self.edges.iter().map(|&(a, b)| norm(perm[a], perm[b])))
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.v()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        Self::from_edges_dedup(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(a, b)| (a + off, b + off))),
        )
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut comps = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            comps += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_count() == 1
    }

    /// A graph is a forest iff `e = v − #components`.
    pub fn is_forest(&self) -> bool {
        self.e() + self.component_count() == self.n
    }
}

impl AdjacencyRows for Graph {
    #[inline]
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    fn words(&self) -> usize {
        self.words
    }
}

/// A graph with an ordered list of distinct root vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootedGraph {
    graph: Graph,
    roots: Vec<usize>,
}

impl RootedGraph {
    pub fn new(graph: Graph, roots: Vec<usize>) -> Result<RootedGraph> {
        let mut seen = BTreeSet::new();
        for &r in &roots {
            if r >= graph.v() {
                return Err(Error::InvalidGraph(format!("root {r} is not a vertex")));
            }
            if !seen.insert(r) {
                return Err(Error::InvalidGraph(format!("root {r} repeated")));
            }
        }
        Ok(RootedGraph { graph, roots })
    }

    /// `(e, G)`: the graph rooted at the two endpoints of `edge` (in the given order).
    /// The pair does not need to be an edge of `graph`.
    pub fn at_pair(graph: Graph, a: usize, b: usize) -> Result<RootedGraph> {
        Self::new(graph, vec![a, b])
    }

    /// The single edge rooted at both endpoints; the unique member of 𝓕¹.
    pub fn rooted_edge() -> RootedGraph {
        RootedGraph {
            graph: Graph::complete(2),
            roots: vec![0, 1],
        }
    }

    pub fn unrooted(graph: Graph) -> RootedGraph {
        RootedGraph {
            graph,
            roots: Vec::new(),
        }
    }

    /// Roots every vertex.
    pub fn fully_rooted(graph: Graph) -> RootedGraph {
        let roots = (0..graph.v()).collect();
        RootedGraph { graph, roots }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn into_parts(self) -> (Graph, Vec<usize>) {
        (self.graph, self.roots)
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.roots.contains(&v)
    }

    /// Number of edges with both endpoints among the roots, `e_{G[R]}`.
    pub fn root_edge_count(&self) -> usize {
        self.graph.edges_within(&self.roots)
    }

    /// `v̄ = v_G − |R|`.
    pub fn v_bar(&self) -> usize {
        self.graph.v() - self.roots.len()
    }

    /// `ē = e_G − e_{G[R]}`.
    pub fn e_bar(&self) -> usize {
        self.graph.e() - self.root_edge_count()
    }

    /// Edges of `G` not inside the root set.
    pub fn non_root_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.graph
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| !(self.is_root(a) && self.is_root(b)))
    }
}

/// A copy of `pattern` located in a host: `map[i]` is the host image of pattern vertex `i`.
pub type VertexMap = Vec<usize>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_and_errors() {
        let g = Graph::bowtie();
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(matches!(Graph::parse("v 3\ne 0 3\n"), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::parse("e 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(Graph::parse("v 3\ne 0 1\ne 1 0\n").is_err());
        assert!(Graph::parse("v 2\ne 1 1\n").is_err());
        assert!(Graph::parse("").is_err());
        let g = Graph::parse("# comment\nv 3\n\ne 0 1\n").unwrap();
        assert_eq!(g.e(), 1);
    }

    #[test]
    fn builtins() {
        assert_eq!(Graph::builtin("K4").unwrap().e(), 6);
        assert_eq!(Graph::builtin("C9").unwrap().e(), 9);
        assert_eq!(Graph::builtin("P2").unwrap().e(), 1);
        assert_eq!(Graph::builtin("P8").unwrap().v(), 8);
        assert_eq!(Graph::builtin("diamond").unwrap().e(), 5);
        assert!(Graph::builtin("K8").is_none());
        assert!(Graph::builtin("C2").is_none());
        assert!(Graph::builtin("notagraph").is_none());
    }

    #[test]
    fn forest_and_components() {
        assert!(Graph::path(5).is_forest());
        assert!(Graph::empty(3).is_forest());
        assert!(!Graph::cycle(4).is_forest());
        assert_eq!(Graph::empty(3).component_count(), 3);
        assert!(Graph::bowtie().is_connected());
    }

    #[test]
    fn rooted_bookkeeping() {
        let rg = RootedGraph::at_pair(Graph::complete(3), 0, 1).unwrap();
        assert_eq!(rg.v_bar(), 1);
        assert_eq!(rg.e_bar(), 2);
        assert_eq!(rg.root_edge_count(), 1);
        assert!(RootedGraph::new(Graph::complete(3), vec![0, 0]).is_err());
        assert!(RootedGraph::new(Graph::complete(3), vec![3]).is_err());
    }

    #[test]
    fn induced_relabels() {
        let g = Graph::complete(4).without_edge(0, 3);
        let h = g.induced(&[3, 0, 1]);
        assert_eq!(h.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(g.edges_within(&[0, 1, 2]), 3);
    }
}
