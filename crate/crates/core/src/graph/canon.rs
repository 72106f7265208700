//! Canonical labelling by individualization–refinement.
//!
//! The search tree individualizes one vertex of the first non-singleton cell of
//! an equitable ordered partition per level. Leaves are compared by their
//! permuted adjacency matrix; the smallest one is the canonical form.
//! Automorphisms discovered from equal leaves prune children that lie in the
//! same orbit of the subgroup fixing the current prefix pointwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{bitset, AdjacencyRows, Graph, RootedGraph};
use crate::error::{ensure_size, Result};

/// Largest graph accepted by [`canonical_form`].
pub const CANON_MAX_VERTICES: usize = 16;

/// Opaque canonical label; equal labels ⇔ isomorphic (colored) graphs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalLabel({self})")
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl From<CanonicalLabel> for String {
    fn from(l: CanonicalLabel) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for CanonicalLabel {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        if !s.len().is_multiple_of(2) {
            return Err("odd-length hex label".into());
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<u8>, String>>()
            .map(CanonicalLabel)
    }
}

/// Result of a canonical labelling run.
#[derive(Clone, Debug)]
pub struct Canon {
    pub label: CanonicalLabel,
    /// `order[i]` is the original vertex placed at canonical position `i`.
    pub order: Vec<usize>,
}

impl Canon {
    /// The permutation `old → new`.
    pub fn perm(&self) -> Vec<usize> {
        let mut p = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            p[v] = i;
        }
        p
    }
}

/// Canonical label of an uncolored graph with at most 16 vertices.
pub fn canonical_form(g: &Graph) -> Result<CanonicalLabel> {
    ensure_size("canonical_form vertices", g.v(), CANON_MAX_VERTICES)?;
    Ok(canonical_labeling(g, &vec![0; g.v()]).label)
}

/// Label invariant under root-preserving isomorphism: root `i` gets color `i + 1`.
pub fn rooted_canonical_form(rg: &RootedGraph) -> CanonicalLabel {
    canonical_labeling(rg.graph(), &root_colors(rg)).label
}

pub(crate) fn root_colors(rg: &RootedGraph) -> Vec<u32> {
    let mut colors = vec![0u32; rg.graph().v()];
    for (i, &r) in rg.roots().iter().enumerate() {
        colors[r] = i as u32 + 1;
    }
    colors
}

/// The graph relabelled into canonical order.
pub fn canonical_graph(g: &Graph) -> Graph {
    let c = canonical_labeling(g, &vec![0; g.v()]);
    g.relabel(&c.perm())
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.v() == b.v()
        && a.e() == b.e()
        && canonical_labeling(a, &vec![0; a.v()]).label == canonical_labeling(b, &vec![0; b.v()]).label
}

/// Canonical labelling of a vertex-colored graph of any size.
pub fn canonical_labeling(g: &Graph, colors: &[u32]) -> Canon {
    assert_eq!(colors.len(), g.v());
    let n = g.v();
    let mut by_color: Vec<usize> = (0..n).collect();
    by_color.sort_by_key(|&v| (colors[v], v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in by_color {
        match cells.last_mut() {
            Some(c) if colors[c[0]] == colors[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut s = Searcher {
        g,
        best: None,
        first: None,
        generators: Vec::new(),
    };
    let mut prefix = Vec::new();
    s.search(cells, &mut prefix);
    let (cert, order) = s.best.expect("search visits at least one leaf");

    let mut bytes = Vec::with_capacity(4 + 4 * n + 8 * cert.len());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for &v in &order {
        bytes.extend_from_slice(&colors[v].to_le_bytes());
    }
    for w in &cert {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    Canon {
        label: CanonicalLabel(bytes),
        order,
    }
}

struct Searcher<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<usize>)>,
    first: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Searcher<'_> {
    fn search(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let cells = refine(self.g, cells);
        let Some(t) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            self.leaf(order);
            return;
        };
        let mut target = cells[t].clone();
        target.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &target {
            if !explored.is_empty() {
                let mut uf = self.orbits_fixing(prefix);
                let rv = uf.find(v);
                if explored.iter().any(|&w| uf.find(w) == rv) {
                    continue;
                }
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend(cells[..t].iter().cloned());
            child.push(vec![v]);
            child.push(cells[t].iter().copied().filter(|&x| x != v).collect());
            child.extend(cells[t + 1..].iter().cloned());
            prefix.push(v);
            self.search(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let cert = certificate(self.g, &order);
        match &self.first {
            None => {
                self.first = Some((cert.clone(), order.clone()));
                self.best = Some((cert, order));
                return;
            }
            Some((fc, fo)) => {
                if *fc == cert {
                    self.generators.push(mapping(fo, &order));
                }
            }
        }
        let (bc, bo) = self.best.as_ref().unwrap();
        match cert.cmp(bc) {
            std::cmp::Ordering::Equal => {
                let first_equal = self.first.as_ref().map(|(fc, _)| *fc == cert) == Some(true);
                if !first_equal {
                    self.generators.push(mapping(bo, &order));
                }
            }
            std::cmp::Ordering::Less => self.best = Some((cert, order)),
            std::cmp::Ordering::Greater => {}
        }
    }

    fn orbits_fixing(&self, prefix: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.v());
        for gamma in &self.generators {
            if prefix.iter().all(|&p| gamma[p] == p) {
                for (a, &b) in gamma.iter().enumerate() {
                    uf.union(a, b);
                }
            }
        }
        uf
    }
}

/// Automorphism sending `from[i]` to `to[i]`.
fn mapping(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut m = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        m[a] = b;
    }
    m
}

fn certificate(g: &Graph, order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let bits = n * n.saturating_sub(1) / 2;
    let mut cert = vec![0u64; bits.div_ceil(64).max(1)];
    let mut k = 0;
    for i in 0..n {
        let row = g.row(order[i]);
        for &oj in &order[i + 1..] {
            if bitset::test(row, oj) {
                cert[k >> 6] |= 1u64 << (63 - (k & 63));
            }
            k += 1;
        }
    }
    cert
}

/// Coarsest equitable refinement of an ordered partition.
///
/// Cells split by neighbor counts into each splitter cell; the pieces replace
/// the cell in ascending count order, so the result depends only on the
/// ordered partition up to relabelling.
pub(crate) fn refine(g: &Graph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.v();
    let words = g.words();
    let mut mask = vec![0u64; words];
    let mut cnt = vec![0u32; n];
    let mut s = 0;
    while s < cells.len() {
        if cells.len() == n {
            break;
        }
        mask.iter_mut().for_each(|w| *w = 0);
        for &v in &cells[s] {
            bitset::set(&mut mask, v);
        }
        let mut split_any = false;
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in cells.drain(..) {
            if cell.len() == 1 {
                next.push(cell);
                continue;
            }
            for &v in &cell {
                cnt[v] = bitset::and_count(g.row(v), &mask);
            }
            let c0 = cnt[cell[0]];
            if cell.iter().all(|&v| cnt[v] == c0) {
                next.push(cell);
                continue;
            }
            split_any = true;
            let mut sorted = cell;
            sorted.sort_by_key(|&v| (cnt[v], v));
            let mut start = 0;
            for i in 1..=sorted.len() {
                if i == sorted.len() || cnt[sorted[i]] != cnt[sorted[start]] {
                    next.push(sorted[start..i].to_vec());
                    start = i;
                }
            }
        }
        cells = next;
        s = if split_any { 0 } else { s + 1 };
    }
    cells
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
