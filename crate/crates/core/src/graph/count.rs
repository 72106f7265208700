//! Backtracking subgraph matcher and the copy-counting operations built on it.
//!
//! Pattern vertices are matched along a connected, most-constrained-first
//! order; candidates for the next vertex are the AND of the host rows of its
//! already-matched neighbors, minus used vertices.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{bitset, norm, AdjacencyRows, Edge, Graph, RootedGraph, VertexMap};
use crate::error::{ensure_size, Error, Result};

/// Patterns larger than this are rejected by the counting operations.
pub const PATTERN_MAX_VERTICES: usize = 10;

/// Rooted patterns are only ever matched locally around an anchor, so they may be larger.
pub const ROOTED_PATTERN_MAX_VERTICES: usize = 24;

/// Unlabelled copy count with one witness embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCount {
    pub count: u64,
    pub sample: Option<VertexMap>,
}

/// A search plan for embedding `pattern` with some vertices pinned.
struct Plan {
    /// Pattern vertices in matching order (pinned vertices excluded).
    order: Vec<usize>,
    /// For each position, pattern neighbors matched earlier (including pinned).
    back: Vec<Vec<usize>>,
}

fn plan(pattern: &Graph, pinned: &[usize]) -> Plan {
    let n = pattern.v();
    let mut placed = vec![false; n];
    for &p in pinned {
        placed[p] = true;
    }
    let mut order = Vec::with_capacity(n);
    let mut back = Vec::with_capacity(n);
    for _ in pinned.len()..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let matched = pattern.neighbors(v).filter(|&w| placed[w]).count();
                (matched, pattern.degree(v), std::cmp::Reverse(v))
            })
            .expect("an unplaced vertex remains");
        back.push(pattern.neighbors(next).filter(|&w| placed[w]).collect());
        placed[next] = true;
        order.push(next);
    }
    Plan { order, back }
}

/// Enumerates injective homomorphisms `pattern → host` extending `pins`.
///
/// `allowed` restricts the images of unpinned vertices. Counting skips
/// materializing the last level and takes a popcount instead.
struct Matcher<'a, H: AdjacencyRows> {
    host: &'a H,
    plan: Plan,
    map: Vec<usize>,
    used: Vec<u64>,
    allowed: Vec<u64>,
    scratch: Vec<Vec<u64>>,
}

impl<'a, H: AdjacencyRows> Matcher<'a, H> {
    fn new(host: &'a H, pattern: &Graph, pins: &[(usize, usize)], allowed: Option<&[u64]>) -> Self {
        let words = host.words();
        let pinned: Vec<usize> = pins.iter().map(|&(p, _)| p).collect();
        let plan = plan(pattern, &pinned);
        let mut map = vec![usize::MAX; pattern.v()];
        let mut used = vec![0u64; words];
        for &(p, h) in pins {
            map[p] = h;
            if h < host.order() {
                bitset::set(&mut used, h);
            }
        }
        let allowed = match allowed {
            Some(a) => a.to_vec(),
            None => {
                let mut a = vec![0u64; words];
                bitset::fill(&mut a, host.order());
                a
            }
        };
        let depth = plan.order.len();
        Matcher {
            host,
            plan,
            map,
            used,
            allowed,
            scratch: vec![vec![0u64; words]; depth],
        }
    }

    /// Checks pinned pattern edges are present in the host.
    fn pins_consistent(&self, pattern: &Graph, pins: &[(usize, usize)]) -> bool {
        let mut seen = vec![false; self.host.order()];
        for &(_, h) in pins {
            if h >= self.host.order() || std::mem::replace(&mut seen[h], true) {
                return false;
            }
        }
        pins.iter().all(|&(p, hp)| {
            pins.iter()
                .all(|&(q, hq)| !pattern.has_edge(p, q) || self.host.adjacent(hp, hq))
        })
    }

    fn candidates(&mut self, level: usize) {
        let Matcher {
            host,
            plan,
            map,
            used,
            allowed,
            scratch,
        } = self;
        let buf = &mut scratch[level];
        buf.copy_from_slice(allowed);
        for (b, u) in buf.iter_mut().zip(used.iter()) {
            *b &= !u;
        }
        for &p in &plan.back[level] {
            let row = host.row(map[p]);
            for (b, r) in buf.iter_mut().zip(row) {
                *b &= r;
            }
        }
    }

    fn count(&mut self, level: usize) -> u64 {
        if level == self.plan.order.len() {
            return 1;
        }
        self.candidates(level);
        if level + 1 == self.plan.order.len() {
            return bitset::count(&self.scratch[level]) as u64;
        }
        let cands: Vec<usize> = bitset::ones(&self.scratch[level]).collect();
        let pv = self.plan.order[level];
        let mut total = 0;
        for h in cands {
            self.map[pv] = h;
            bitset::set(&mut self.used, h);
            total += self.count(level + 1);
            bitset::clear(&mut self.used, h);
        }
        self.map[pv] = usize::MAX;
        total
    }

    fn visit<F>(&mut self, level: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if level == self.plan.order.len() {
            return f(&self.map);
        }
        self.candidates(level);
        let cands: Vec<usize> = bitset::ones(&self.scratch[level]).collect();
        let pv = self.plan.order[level];
        for h in cands {
            self.map[pv] = h;
            bitset::set(&mut self.used, h);
            let flow = self.visit(level + 1, f);
            bitset::clear(&mut self.used, h);
            if flow.is_break() {
                self.map[pv] = usize::MAX;
                return flow;
            }
        }
        self.map[pv] = usize::MAX;
        ControlFlow::Continue(())
    }
}

/// Number of injective homomorphisms `pattern → host` extending `pins`.
pub fn count_embeddings<H: AdjacencyRows>(
    host: &H,
    pattern: &Graph,
    pins: &[(usize, usize)],
    allowed: Option<&[u64]>,
) -> u64 {
    let mut m = Matcher::new(host, pattern, pins, allowed);
    if !m.pins_consistent(pattern, pins) {
        return 0;
    }
    m.count(0)
}

/// Visits every embedding extending `pins` until the callback breaks.
pub fn for_each_embedding<H, F>(
    host: &H,
    pattern: &Graph,
    pins: &[(usize, usize)],
    allowed: Option<&[u64]>,
    mut f: F,
) -> ControlFlow<()>
where
    H: AdjacencyRows,
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut m = Matcher::new(host, pattern, pins, allowed);
    if !m.pins_consistent(pattern, pins) {
        return ControlFlow::Continue(());
    }
    m.visit(0, &mut f)
}

pub fn find_embedding<H: AdjacencyRows>(
    host: &H,
    pattern: &Graph,
    pins: &[(usize, usize)],
    allowed: Option<&[u64]>,
) -> Option<VertexMap> {
    let mut found = None;
    let _ = for_each_embedding(host, pattern, pins, allowed, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// |Aut(pattern)| restricted to maps fixing each vertex in `fixed`.
pub fn automorphism_count(pattern: &Graph, fixed: &[usize]) -> u64 {
    let pins: Vec<(usize, usize)> = fixed.iter().map(|&v| (v, v)).collect();
    count_embeddings(pattern, pattern, &pins, None)
}

/// Number of subgraphs of `host` isomorphic to `pattern`.
pub fn count_subgraph_copies(host: &Graph, pattern: &Graph) -> Result<EmbeddingCount> {
    ensure_size("pattern vertices", pattern.v(), PATTERN_MAX_VERTICES)?;
    let emb = count_embeddings(host, pattern, &[], None);
    let aut = automorphism_count(pattern, &[]);
    let sample = if emb > 0 {
        find_embedding(host, pattern, &[], None)
    } else {
        None
    };
    Ok(EmbeddingCount {
        count: emb / aut,
        sample,
    })
}

/// Copies of `pattern − pattern[R]` whose root images are `anchor`, positionally.
///
/// Host edges among the anchor vertices are irrelevant since the pattern has
/// no edges there once root edges are dropped.
pub fn count_rooted_copies<H: AdjacencyRows>(
    host: &H,
    anchor: &[usize],
    pattern: &RootedGraph,
) -> Result<EmbeddingCount> {
    rooted_copies_within(host, anchor, pattern, None)
}

/// As [`count_rooted_copies`], with non-root images restricted to `allowed`.
pub fn rooted_copies_within<H: AdjacencyRows>(
    host: &H,
    anchor: &[usize],
    pattern: &RootedGraph,
    allowed: Option<&[u64]>,
) -> Result<EmbeddingCount> {
    ensure_size(
        "rooted pattern vertices",
        pattern.graph().v(),
        ROOTED_PATTERN_MAX_VERTICES,
    )?;
    if anchor.len() != pattern.roots().len() {
        return Err(Error::ArityMismatch {
            expected: pattern.roots().len(),
            got: anchor.len(),
        });
    }
    for (i, &a) in anchor.iter().enumerate() {
        if a >= host.order() || anchor[..i].contains(&a) {
            return Err(Error::Parameter(
                "anchor vertices must be distinct host vertices".into(),
            ));
        }
    }
    let stripped = strip_root_edges(pattern);
    let pins: Vec<(usize, usize)> = pattern.roots().iter().copied().zip(anchor.iter().copied()).collect();
    let emb = count_embeddings(host, &stripped, &pins, allowed);
    let aut = automorphism_count(&stripped, pattern.roots());
    let sample = if emb > 0 {
        find_embedding(host, &stripped, &pins, allowed)
    } else {
        None
    };
    Ok(EmbeddingCount {
        count: emb / aut,
        sample,
    })
}

fn strip_root_edges(rg: &RootedGraph) -> Graph {
    Graph::from_edges_dedup(rg.graph().v(), rg.non_root_edges())
}

/// Number of copies of `pattern` in `host` whose edge set contains `e`.
pub fn count_copies_through_edge(host: &Graph, e: Edge, pattern: &Graph) -> Result<u64> {
    ensure_size("pattern vertices", pattern.v(), PATTERN_MAX_VERTICES)?;
    let (u, w) = norm(e.0, e.1);
    if !host.has_edge(u, w) {
        return Err(Error::EdgeAbsent((u, w)));
    }
    let compiled = CompiledPattern::new(pattern);
    Ok(compiled.count_through(host, u, w))
}

/// A pattern with precomputed automorphism data for repeated through-edge queries.
#[derive(Clone, Debug)]
pub struct CompiledPattern {
    graph: Graph,
    aut: u64,
    /// One representative ordered arc per Aut-orbit of arcs, with its orbit size.
    arc_reps: Vec<((usize, usize), u64)>,
}

impl CompiledPattern {
    pub fn new(pattern: &Graph) -> CompiledPattern {
        let aut = automorphism_count(pattern, &[]);
        let arcs: Vec<(usize, usize)> = pattern.edges().iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        let mut rep_of: Vec<Option<usize>> = vec![None; arcs.len()];
        let mut arc_reps: Vec<((usize, usize), u64)> = Vec::new();
        for i in 0..arcs.len() {
            if rep_of[i].is_some() {
                continue;
            }
            let (x, y) = arcs[i];
            let idx = arc_reps.len();
            let mut size = 0;
            for j in i..arcs.len() {
                if rep_of[j].is_some() {
                    continue;
                }
                let (x2, y2) = arcs[j];
                if find_embedding(pattern, pattern, &[(x, x2), (y, y2)], None).is_some() {
                    rep_of[j] = Some(idx);
                    size += 1;
                }
            }
            arc_reps.push(((x, y), size));
        }
        CompiledPattern {
            graph: pattern.clone(),
            aut,
            arc_reps,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn automorphisms(&self) -> u64 {
        self.aut
    }

    /// Counts copies through the host edge `{u, w}`; zero if `{u, w}` is not an edge.
    pub fn count_through<H: AdjacencyRows>(&self, host: &H, u: usize, w: usize) -> u64 {
        let total: u64 = self
            .arc_reps
            .iter()
            .map(|&((x, y), size)| size * count_embeddings(host, &self.graph, &[(x, u), (y, w)], None))
            .sum();
        total / self.aut
    }

    /// One copy through the host edge `{u, w}` as a vertex map, if any exists.
    pub fn find_through<H: AdjacencyRows>(&self, host: &H, u: usize, w: usize) -> Option<VertexMap> {
        self.arc_reps
            .iter()
            .find_map(|&((x, y), _)| find_embedding(host, &self.graph, &[(x, u), (y, w)], None))
    }
}
