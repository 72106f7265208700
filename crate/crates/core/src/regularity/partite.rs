use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pair::BipartitePair;
use super::roots::RootHypergraph;
use super::{check_regular_pair, CheckMode, RegularityVerdict};
use crate::error::{ensure_size, Error, Result};
use crate::graph::{bitset, Edge, Graph, RootedGraph};

pub const PARTITE_MAX_PATTERN: usize = 6;
pub const PARTITE_MAX_PART: usize = 80;
const PARTITE_NODE_BUDGET: u64 = 500_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct PairRows {
    /// Row `a` of part `i` over part `j`, and the transpose.
    fwd: Vec<u64>,
    back: Vec<u64>,
    count: usize,
}

/// Vertex-disjoint parts of equal size `n`, one per pattern vertex, with
/// bipartite edge sets between selected pairs of parts.
///
/// Vertex `a` of part `i` is addressed locally as `(i, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteSystem {
    n: usize,
    parts: usize,
    words: usize,
    pairs: BTreeMap<(usize, usize), PairRows>,
    roots: Option<RootHypergraph>,
}

impl PartiteSystem {
    pub fn new(parts: usize, n: usize) -> PartiteSystem {
        PartiteSystem {
            n,
            parts,
            words: bitset::words_for(n),
            pairs: BTreeMap::new(),
            roots: None,
        }
    }

    /// `K_{F,n}`: complete bipartite between the parts of every edge of `F`.
    pub fn complete_for(f: &Graph, n: usize) -> PartiteSystem {
        let mut sys = PartiteSystem::new(f.v(), n);
        for &(i, j) in f.edges() {
            for a in 0..n {
                for b in 0..n {
                    sys.add_edge((i, a), (j, b)).expect("fresh edge");
                }
            }
        }
        sys
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn roots(&self) -> Option<&RootHypergraph> {
        self.roots.as_ref()
    }

    pub fn set_roots(&mut self, gr: RootHypergraph) -> Result<()> {
        if gr.n() != self.n || gr.parts().iter().any(|&p| p >= self.parts) {
            return Err(Error::Parameter("root hypergraph does not fit the system".into()));
        }
        self.roots = Some(gr);
        Ok(())
    }

    pub fn add_edge(&mut self, (i, a): (usize, usize), (j, b): (usize, usize)) -> Result<()> {
        if i == j || i >= self.parts || j >= self.parts || a >= self.n || b >= self.n {
            return Err(Error::InvalidGraph(format!(
                "({i},{a})–({j},{b}) is not a cross-part pair"
            )));
        }
        let ((i, a), (j, b)) = if i < j { ((i, a), (j, b)) } else { ((j, b), (i, a)) };
        let (n, words) = (self.n, self.words);
        let rows = self.pairs.entry((i, j)).or_insert_with(|| PairRows {
            fwd: vec![0; n * words],
            back: vec![0; n * words],
            count: 0,
        });
        if bitset::test(&rows.fwd[a * words..(a + 1) * words], b) {
            return Err(Error::DuplicateEdge((a, b)));
        }
        bitset::set(&mut rows.fwd[a * words..(a + 1) * words], b);
        bitset::set(&mut rows.back[b * words..(b + 1) * words], a);
        rows.count += 1;
        Ok(())
    }

    pub fn has_edge(&self, (i, a): (usize, usize), (j, b): (usize, usize)) -> bool {
        self.row(i, a, j).is_some_and(|r| bitset::test(r, b))
    }

    /// Neighbours of `(i, a)` in part `j`.
    fn row(&self, i: usize, a: usize, j: usize) -> Option<&[u64]> {
        let w = self.words;
        if i < j {
            self.pairs.get(&(i, j)).map(|r| &r.fwd[a * w..(a + 1) * w])
        } else {
            self.pairs.get(&(j, i)).map(|r| &r.back[a * w..(a + 1) * w])
        }
    }

    pub fn pair_edge_count(&self, i: usize, j: usize) -> usize {
        let key = if i < j { (i, j) } else { (j, i) };
        self.pairs.get(&key).map_or(0, |r| r.count)
    }

    /// Edges between parts `i < j` as local index pairs.
    pub fn pair_edges(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let w = self.words;
        match self.pairs.get(&(i, j)) {
            None => Vec::new(),
            Some(r) => (0..self.n)
                .flat_map(|a| bitset::ones(&r.fwd[a * w..(a + 1) * w]).map(move |b| (a, b)))
                .collect(),
        }
    }

    pub fn pair(&self, i: usize, j: usize) -> Result<BipartitePair> {
        BipartitePair::new(self.n, self.n, self.pair_edges(i.min(j), i.max(j)))
    }

    fn check_pattern(&self, f: &Graph) -> Result<()> {
        ensure_size("partite pattern vertices", f.v(), PARTITE_MAX_PATTERN)?;
        ensure_size("part size", self.n, PARTITE_MAX_PART)?;
        if f.v() != self.parts {
            return Err(Error::ArityMismatch {
                expected: self.parts,
                got: f.v(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> PartiteSystemJson {
        let label = |i: usize, a: usize| i * self.n + a;
        PartiteSystemJson {
            parts: (0..self.parts)
                .map(|i| (0..self.n).map(|a| label(i, a)).collect())
                .collect(),
            pairs: self
                .pairs
                .keys()
                .map(|&(i, j)| {
                    let es = self
                        .pair_edges(i, j)
                        .into_iter()
                        .map(|(a, b)| [label(i, a), label(j, b)])
                        .collect();
                    (format!("{i}-{j}"), es)
                })
                .collect(),
            roots: self.roots.as_ref().map(|gr| {
                gr.tuples()
                    .map(|t| t.iter().zip(gr.parts()).map(|(&a, &p)| label(p, a)).collect())
                    .collect()
            }),
            root_parts: self.roots.as_ref().map(|gr| gr.parts().to_vec()),
        }
    }
}

/// Serialized form with global vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiteSystemJson {
    pub parts: Vec<Vec<usize>>,
    /// Keyed `"i-j"` by part indices.
    pub pairs: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Vec<usize>>>,
    /// Part of each tuple position; inferred from the first tuple when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_parts: Option<Vec<usize>>,
}

impl TryFrom<PartiteSystemJson> for PartiteSystem {
    type Error = Error;

    fn try_from(js: PartiteSystemJson) -> Result<PartiteSystem> {
        let k = js.parts.len();
        let n = js.parts.first().map_or(0, Vec::len);
        if js.parts.iter().any(|p| p.len() != n) {
            return Err(Error::Parameter("parts must have equal size".into()));
        }
        let mut place = std::collections::HashMap::new();
        for (i, p) in js.parts.iter().enumerate() {
            for (a, &v) in p.iter().enumerate() {
                if place.insert(v, (i, a)).is_some() {
                    return Err(Error::Parameter(format!("vertex {v} appears in two parts")));
                }
            }
        }
        let locate = |v: usize| {
            place
                .get(&v)
                .copied()
                .ok_or_else(|| Error::Parameter(format!("unknown vertex {v}")))
        };
        let mut sys = PartiteSystem::new(k, n);
        for (key, edges) in &js.pairs {
            let (i, j) = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::Parameter(format!("bad pair key {key:?}")))?;
            for &[u, w] in edges {
                let (pu, pw) = (locate(u)?, locate(w)?);
                let ok = (pu.0 == i && pw.0 == j) || (pu.0 == j && pw.0 == i);
                if !ok {
                    return Err(Error::Parameter(format!(
                        "edge [{u},{w}] is not between parts {i} and {j}"
                    )));
                }
                sys.add_edge(pu, pw)?;
            }
        }
        if let Some(tuples) = js.roots {
            let parts = match (js.root_parts, tuples.first()) {
                (Some(p), _) => p,
                (None, Some(t)) => t.iter().map(|&v| locate(v).map(|x| x.0)).collect::<Result<_>>()?,
                (None, None) => return Err(Error::Parameter("root_parts is required when roots is empty".into())),
            };
            let mut gr = RootHypergraph::new(parts.clone(), n)?;
            for t in tuples {
                if t.len() != parts.len() {
                    return Err(Error::ArityMismatch {
                        expected: parts.len(),
                        got: t.len(),
                    });
                }
                let mut local = Vec::with_capacity(t.len());
                for (&v, &p) in t.iter().zip(&parts) {
                    let (pv, a) = locate(v)?;
                    if pv != p {
                        return Err(Error::Parameter(format!("root vertex {v} lies outside part {p}")));
                    }
                    local.push(a);
                }
                gr.insert(local)?;
            }
            sys.set_roots(gr)?;
        }
        Ok(sys)
    }
}

/// Backtracking over pattern vertices; the last vertex is counted by popcount.
struct PartiteCounter<'a> {
    sys: &'a PartiteSystem,
    order: Vec<usize>,
    /// Earlier neighbours of `order[d]` within the pattern.
    back: Vec<Vec<usize>>,
    image: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a> PartiteCounter<'a> {
    fn new(sys: &'a PartiteSystem, f: &Graph, pinned: &[usize]) -> PartiteCounter<'a> {
        let v = f.v();
        let mut order: Vec<usize> = pinned.to_vec();
        let mut placed = vec![false; v];
        for &p in pinned {
            placed[p] = true;
        }
        while order.len() < v {
            let next = (0..v)
                .filter(|&x| !placed[x])
                .max_by_key(|&x| {
                    (
                        f.neighbors(x).filter(|&y| placed[y]).count(),
                        f.degree(x),
                        usize::MAX - x,
                    )
                })
                .expect("unplaced vertex");
            placed[next] = true;
            order.push(next);
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; v];
            for (d, &x) in order.iter().enumerate() {
                p[x] = d;
            }
            p
        };
        let back = order
            .iter()
            .map(|&x| f.neighbors(x).filter(|&y| pos[y] < pos[x]).collect())
            .collect();
        PartiteCounter {
            sys,
            order,
            back,
            image: vec![usize::MAX; v],
            nodes: 0,
            budget: PARTITE_NODE_BUDGET,
        }
    }

    fn candidates(&self, d: usize) -> Option<Vec<u64>> {
        let x = self.order[d];
        let mut cand = vec![0u64; self.sys.words];
        bitset::fill(&mut cand, self.sys.n);
        for &y in &self.back[d] {
            let row = self.sys.row(y, self.image[y], x)?;
            for (c, r) in cand.iter_mut().zip(row) {
                *c &= r;
            }
        }
        Some(cand)
    }

    /// Copies extending the images already fixed for `order[..d]`.
    fn count(&mut self, d: usize) -> Result<u64> {
        if d == self.order.len() {
            return Ok(1);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "partite copy search",
                detail: format!("more than {} nodes", self.budget),
            });
        }
        let Some(cand) = self.candidates(d) else {
            return Ok(0);
        };
        if d + 1 == self.order.len() {
            return Ok(bitset::count(&cand) as u64);
        }
        let x = self.order[d];
        let mut total = 0;
        for a in bitset::ones(&cand) {
            self.image[x] = a;
            total += self.count(d + 1)?;
        }
        self.image[x] = usize::MAX;
        Ok(total)
    }

    /// Copies with `order[..pins.len()]` mapped to `pins`.
    fn count_pinned(&mut self, pins: &[usize]) -> Result<u64> {
        for (d, &a) in pins.iter().enumerate() {
            let x = self.order[d];
            let ok = self.back[d]
                .iter()
                .all(|&y| self.sys.has_edge((y, self.image[y]), (x, a)));
            if !ok {
                self.reset(d);
                return Ok(0);
            }
            self.image[x] = a;
        }
        let out = self.count(pins.len());
        self.reset(pins.len());
        out
    }

    fn reset(&mut self, upto: usize) {
        for &x in &self.order[..upto] {
            self.image[x] = usize::MAX;
        }
    }
}

/// Number of partite copies of `F`: one vertex per part, edges wherever `F` has them.
pub fn count_partite_copies(sys: &PartiteSystem, f: &Graph) -> Result<u64> {
    sys.check_pattern(f)?;
    if f.v() == 0 {
        return Ok(1);
    }
    PartiteCounter::new(sys, f, &[]).count(0)
}

/// `T(G, G_R)`: root tuples of `G_R` weighted by the partite copies of `F₋` through them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TMultiset {
    /// Tuples with positive multiplicity.
    pub entries: Vec<(Vec<usize>, u64)>,
    pub total_multiplicity: u64,
    pub support_size: usize,
}

pub fn build_t(sys: &PartiteSystem, rg: &RootedGraph) -> Result<TMultiset> {
    let f_minus = minus(rg);
    sys.check_pattern(&f_minus)?;
    let gr = sys
        .roots()
        .ok_or_else(|| Error::Parameter("system has no root hypergraph".into()))?;
    if gr.parts() != rg.roots() {
        return Err(Error::RootMismatch);
    }
    let mut counter = PartiteCounter::new(sys, &f_minus, rg.roots());
    let mut entries = Vec::new();
    let mut total = 0;
    for t in gr.tuples() {
        let k = counter.count_pinned(t)?;
        if k > 0 {
            entries.push((t.clone(), k));
            total += k;
        }
    }
    Ok(TMultiset {
        support_size: entries.len(),
        entries,
        total_multiplicity: total,
    })
}

/// `F₋`: the rooted graph with its root edges removed.
pub(crate) fn minus(rg: &RootedGraph) -> Graph {
    Graph::new(rg.graph().v(), rg.non_root_edges()).expect("subgraph of a valid graph")
}

/// `m` uniformly random edges between the parts of every edge of `F`.
pub fn random_partite_system<R: Rng>(f: &Graph, n: usize, m: usize, rng: &mut R) -> Result<PartiteSystem> {
    if m > n * n {
        return Err(Error::Parameter(format!("m = {m} exceeds n² = {}", n * n)));
    }
    let mut sys = PartiteSystem::new(f.v(), n);
    for &(i, j) in f.edges() {
        for k in index::sample(rng, n * n, m) {
            sys.add_edge((i, k / n), (j, k % n))?;
        }
    }
    Ok(sys)
}

/// Membership in `𝒢(F, n, m, ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMembership {
    /// `m` edges on every pair of `E(F)` and none elsewhere.
    pub edge_counts_ok: bool,
    pub verdicts: Vec<(Edge, RegularityVerdict)>,
}

impl ClassMembership {
    /// Certainly a member: counts hold and every pair is verified.
    pub fn is_member(&self) -> bool {
        self.edge_counts_ok && self.verdicts.iter().all(|(_, v)| *v == RegularityVerdict::Verified)
    }

    /// Certainly not a member.
    pub fn is_excluded(&self) -> bool {
        !self.edge_counts_ok || self.verdicts.iter().any(|(_, v)| v.is_falsified())
    }
}

pub fn check_class_membership(
    sys: &PartiteSystem,
    f: &Graph,
    m: usize,
    eps: f64,
    mode: CheckMode,
) -> Result<ClassMembership> {
    if f.v() != sys.parts() {
        return Err(Error::ArityMismatch {
            expected: sys.parts(),
            got: f.v(),
        });
    }
    let mut counts_ok = true;
    for i in 0..f.v() {
        for j in i + 1..f.v() {
            let want = if f.has_edge(i, j) { m } else { 0 };
            counts_ok &= sys.pair_edge_count(i, j) == want;
        }
    }
    let mut verdicts = Vec::new();
    for &(i, j) in f.edges() {
        let pair = sys.pair(i, j)?;
        let p = pair.density();
        verdicts.push(((i, j), check_regular_pair(&pair, eps, p, mode)?));
    }
    Ok(ClassMembership {
        edge_counts_ok: counts_ok,
        verdicts,
    })
}
