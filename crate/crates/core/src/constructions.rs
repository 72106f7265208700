//! Rooted-graph algebra: `F₋`, products `×`, root-joins `⊔`, the classes `𝓕ᵏ`,
//! dangerous colorings and `F*`-spanning subgraphs.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_size, Error, Result};
use crate::graph::canon::{canonical_labeling, root_colors, CanonicalLabel};
use crate::graph::count::for_each_embedding;
use crate::graph::{bitset, norm, Edge, Graph, RootedGraph};

pub const FK_MAX_K: usize = 4;
/// Largest realized member `enumerate_fk` will build.
pub const FK_MAX_VERTICES: usize = 2048;
pub const SPANNING_MAX_EDGES: usize = 12;
const SPANNING_COPY_BUDGET: usize = 200_000;
const SPANNING_NODE_BUDGET: u64 = 20_000_000;

/// `F₋`: the same rooted graph without the edges inside the root set.
pub fn drop_root_edges(rg: &RootedGraph) -> RootedGraph {
    let g = Graph::from_edges_dedup(rg.graph().v(), rg.non_root_edges());
    RootedGraph::new(g, rg.roots().to_vec()).expect("roots unchanged")
}

/// One attachment of a product: the target edge and the image of each attached vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub edge: Edge,
    pub map: Vec<usize>,
}

/// `(R,G)×(e,F)` together with the attachment maps.
///
/// Non-root edges of `G` are processed in sorted order. Each receives fresh
/// copies of the non-root vertices of `attach`, numbered after all earlier
/// vertices; `attach`'s first root goes to the smaller endpoint. The target
/// edge survives iff `attach` has an edge between its roots.
pub fn rooted_product_with_maps(rg: &RootedGraph, attach: &RootedGraph) -> Result<(RootedGraph, Vec<Attachment>)> {
    if attach.roots().len() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: attach.roots().len(),
        });
    }
    let (r0, r1) = (attach.roots()[0], attach.roots()[1]);
    let keep_target = attach.graph().has_edge(r0, r1);
    let a = attach.graph();
    let mut n = rg.graph().v();
    let mut edges: Vec<Edge> = Vec::new();
    let mut attachments = Vec::new();
    for &(x, y) in rg.graph().edges() {
        if rg.is_root(x) && rg.is_root(y) {
            edges.push((x, y));
            continue;
        }
        let mut map = vec![usize::MAX; a.v()];
        map[r0] = x;
        map[r1] = y;
        for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = n;
            n += 1;
        }
        for &(p, q) in a.edges() {
            if (p, q) != norm(r0, r1) {
                edges.push(norm(map[p], map[q]));
            }
        }
        if keep_target {
            edges.push((x, y));
        }
        attachments.push(Attachment { edge: (x, y), map });
    }
    let g = Graph::from_edges_dedup(n, edges);
    Ok((RootedGraph::new(g, rg.roots().to_vec())?, attachments))
}

/// `(R,G)×(e,F)`: a fresh copy of `attach` rooted at every non-root edge.
pub fn rooted_product(rg: &RootedGraph, attach: &RootedGraph) -> Result<RootedGraph> {
    rooted_product_with_maps(rg, attach).map(|(g, _)| g)
}

/// Glues disjoint copies of `parts` along their roots, positionally.
///
/// The first part keeps its vertex numbering; later parts' non-root vertices
/// follow in order. Each part is also returned as its vertex map.
pub fn root_join_with_maps(parts: &[RootedGraph]) -> Result<(RootedGraph, Vec<Vec<usize>>)> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Parameter("root_join of no parts".into()))?;
    let roots = first.roots().to_vec();
    let root_pattern = |rg: &RootedGraph| -> Vec<bool> {
        let r = rg.roots();
        let mut out = Vec::new();
        for i in 0..r.len() {
            for j in i + 1..r.len() {
                out.push(rg.graph().has_edge(r[i], r[j]));
            }
        }
        out
    };
    let pattern = root_pattern(first);
    for p in &parts[1..] {
        if p.roots().len() != roots.len() {
            return Err(Error::ArityMismatch {
                expected: roots.len(),
                got: p.roots().len(),
            });
        }
        if root_pattern(p) != pattern {
            return Err(Error::RootMismatch);
        }
    }
    let mut n = first.graph().v();
    let mut edges: Vec<Edge> = first.graph().edges().to_vec();
    let mut maps = vec![(0..n).collect::<Vec<_>>()];
    for p in &parts[1..] {
        let mut map = vec![usize::MAX; p.graph().v()];
        for (i, &r) in p.roots().iter().enumerate() {
            map[r] = roots[i];
        }
        for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = n;
            n += 1;
        }
        edges.extend(p.graph().edges().iter().map(|&(a, b)| norm(map[a], map[b])));
        maps.push(map);
    }
    let g = Graph::from_edges_dedup(n, edges);
    Ok((RootedGraph::new(g, roots)?, maps))
}

/// `⊔ parts`; root-internal edges are counted once.
pub fn root_join(parts: &[RootedGraph]) -> Result<RootedGraph> {
    root_join_with_maps(parts).map(|(g, _)| g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionKind {
    /// The rooted edge, sole member of `𝓕¹`.
    Leaf,
    /// `base × attached`, with the same attached tree at every non-root edge of `base`.
    Product {
        base: RootedGraph,
        attached: Box<ConstructionTree>,
    },
    Join {
        branches: Vec<ConstructionTree>,
    },
}

/// A member of `𝓕ᵏ` together with how it was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTree {
    pub kind: ConstructionKind,
    pub realized: RootedGraph,
    pub level: usize,
    /// Edge sets, in realized coordinates, of the `level − 1` top-level copies of `F₋`
    /// glued at the roots.
    pub designated_f_minus: Vec<Vec<Edge>>,
}

impl ConstructionTree {
    pub fn leaf() -> ConstructionTree {
        ConstructionTree {
            kind: ConstructionKind::Leaf,
            realized: RootedGraph::rooted_edge(),
            level: 1,
            designated_f_minus: Vec::new(),
        }
    }

    /// Rebuilds the realized graph from the tree alone.
    pub fn rebuild(&self) -> Result<RootedGraph> {
        match &self.kind {
            ConstructionKind::Leaf => Ok(RootedGraph::rooted_edge()),
            ConstructionKind::Product { base, attached } => rooted_product(base, &attached.rebuild()?),
            ConstructionKind::Join { branches } => {
                let parts = branches.iter().map(|b| b.rebuild()).collect::<Result<Vec<_>>>()?;
                root_join(&parts)
            }
        }
    }

    /// `F*₋` of the realized member.
    pub fn realized_minus(&self) -> RootedGraph {
        drop_root_edges(&self.realized)
    }
}

/// `(e,F) × (e, F*ᵢ)` as a tree whose designated copy is the base's `F₋`.
fn product_branch(base: &RootedGraph, attached: &ConstructionTree) -> Result<ConstructionTree> {
    let realized = rooted_product(base, &attached.realized)?;
    Ok(ConstructionTree {
        kind: ConstructionKind::Product {
            base: base.clone(),
            attached: Box::new(attached.clone()),
        },
        designated_f_minus: vec![base.non_root_edges().collect()],
        realized,
        level: attached.level + 1,
    })
}

fn join_branches(branches: Vec<ConstructionTree>, level: usize) -> Result<ConstructionTree> {
    let parts: Vec<RootedGraph> = branches.iter().map(|b| b.realized.clone()).collect();
    let (realized, maps) = root_join_with_maps(&parts)?;
    let designated = branches
        .iter()
        .zip(&maps)
        .map(|(b, map)| {
            let mut es: Vec<Edge> = b.designated_f_minus[0]
                .iter()
                .map(|&(x, y)| norm(map[x], map[y]))
                .collect();
            es.sort_unstable();
            es
        })
        .collect();
    Ok(ConstructionTree {
        kind: ConstructionKind::Join { branches },
        realized,
        level,
        designated_f_minus: designated,
    })
}

/// The class `𝓕ᵏ` for `(e,F)`: every construction tree plus one representative
/// per root-preserving isomorphism class of realized graphs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FkClass {
    pub k: usize,
    pub trees: Vec<ConstructionTree>,
    /// Indices into `trees` of the representatives, sorted by `(v, e, label)`.
    pub members: Vec<usize>,
    pub labels: Vec<CanonicalLabel>,
}

impl FkClass {
    pub fn member_trees(&self) -> impl Iterator<Item = &ConstructionTree> + '_ {
        self.members.iter().map(|&i| &self.trees[i])
    }

    /// The member with the most edges, ties broken by the smaller canonical label.
    pub fn densest(&self) -> &ConstructionTree {
        let best = (0..self.members.len())
            .max_by(|&a, &b| {
                let (ta, tb) = (&self.trees[self.members[a]], &self.trees[self.members[b]]);
                ta.realized
                    .graph()
                    .e()
                    .cmp(&tb.realized.graph().e())
                    .then_with(|| self.labels[b].cmp(&self.labels[a]))
            })
            .expect("nonempty class");
        &self.trees[self.members[best]]
    }
}

fn rooted_label(rg: &RootedGraph) -> CanonicalLabel {
    canonical_labeling(rg.graph(), &root_colors(rg)).label
}

fn dedup(trees: &[ConstructionTree]) -> (Vec<usize>, Vec<CanonicalLabel>) {
    let mut seen: BTreeMap<(usize, usize, CanonicalLabel), usize> = BTreeMap::new();
    for (i, t) in trees.iter().enumerate() {
        let g = t.realized.graph();
        seen.entry((g.v(), g.e(), rooted_label(&t.realized))).or_insert(i);
    }
    seen.into_iter().map(|((_, _, l), i)| (i, l)).unzip()
}

/// All classes `𝓕¹, …, 𝓕ᵏ` for `F` rooted at `edge`; lower classes are shared.
///
/// `𝓕ʲ` joins, for `i < j`, branches `(e,F) × (e,F*ᵢ)` with `F*ᵢ` ranging
/// over the representatives of `𝓕^{≤i}`.
pub fn enumerate_fk_levels(f: &Graph, edge: Edge, k: usize) -> Result<Vec<FkClass>> {
    if k == 0 || k > FK_MAX_K {
        return Err(Error::Parameter(format!("k = {k} outside 1..={FK_MAX_K}")));
    }
    let (a, b) = norm(edge.0, edge.1);
    if !f.has_edge(a, b) {
        return Err(Error::EdgeAbsent((a, b)));
    }
    let base = RootedGraph::at_pair(f.clone(), a, b)?;
    let leaf = ConstructionTree::leaf();
    let mut levels = vec![FkClass {
        k: 1,
        labels: vec![rooted_label(&leaf.realized)],
        trees: vec![leaf],
        members: vec![0],
    }];
    for j in 2..=k {
        // representatives of 𝓕^{≤i}, deduplicated across levels
        let mut upto: Vec<Vec<ConstructionTree>> = Vec::new();
        let mut pool: BTreeMap<CanonicalLabel, ConstructionTree> = BTreeMap::new();
        for lvl in &levels {
            for (t, l) in lvl.member_trees().zip(&lvl.labels) {
                pool.entry(l.clone()).or_insert_with(|| t.clone());
            }
            let mut reps: Vec<ConstructionTree> = pool.values().cloned().collect();
            reps.sort_by_key(|t| (t.level, t.realized.graph().v(), t.realized.graph().e()));
            upto.push(reps);
        }
        let branch_sets: Vec<Vec<ConstructionTree>> = upto
            .iter()
            .map(|reps| {
                reps.iter()
                    .map(|t| product_branch(&base, t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut trees = Vec::new();
        let mut choice = vec![0usize; j - 1];
        'tuples: loop {
            let branches: Vec<ConstructionTree> = choice
                .iter()
                .enumerate()
                .map(|(i, &c)| branch_sets[i][c].clone())
                .collect();
            let size: usize = 2 + branches.iter().map(|b| b.realized.graph().v() - 2).sum::<usize>();
            if size > FK_MAX_VERTICES {
                return Err(Error::Budget {
                    what: "enumerate_fk",
                    detail: format!(
                        "member of level {j} needs {size} vertices (limit {FK_MAX_VERTICES}); {} trees built",
                        trees.len()
                    ),
                });
            }
            trees.push(join_branches(branches, j)?);
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break 'tuples;
                }
                choice[pos] += 1;
                if choice[pos] < branch_sets[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
        let (members, labels) = dedup(&trees);
        levels.push(FkClass {
            k: j,
            trees,
            members,
            labels,
        });
    }
    Ok(levels)
}

/// `𝓕ᵏ` for `F` rooted at `edge`.
pub fn enumerate_fk(f: &Graph, edge: Edge, k: usize) -> Result<FkClass> {
    let mut levels = enumerate_fk_levels(f, edge, k)?;
    Ok(levels.pop().expect("k ≥ 1"))
}

/// An `r`-coloring of a set of edges, colors `1..=r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    r: u8,
    colors: BTreeMap<Edge, u8>,
}

impl EdgeColoring {
    pub fn new(r: u8, colors: impl IntoIterator<Item = (Edge, u8)>) -> Result<EdgeColoring> {
        let mut map = BTreeMap::new();
        for ((a, b), c) in colors {
            if c == 0 || c > r {
                return Err(Error::Parameter(format!("color {c} outside 1..={r}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at {a}")));
            }
            map.insert(norm(a, b), c);
        }
        Ok(EdgeColoring { r, colors: map })
    }

    /// Every edge of `edges` in color `c`.
    pub fn constant(r: u8, edges: &[Edge], c: u8) -> Result<EdgeColoring> {
        Self::new(r, edges.iter().map(|&e| (e, c)))
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn color(&self, e: Edge) -> Option<u8> {
        self.colors.get(&norm(e.0, e.1)).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = Edge> + '_ {
        self.colors.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    fn covers_exactly(&self, edges: &[Edge]) -> bool {
        self.colors.len() == edges.len() && edges.iter().all(|e| self.colors.contains_key(e))
    }
}

/// Whether `coloring` of `F*₋` makes the designated `F₋` copies monochromatic in
/// pairwise distinct colors. Only the top-level copies are inspected.
pub fn is_dangerous(tree: &ConstructionTree, coloring: &EdgeColoring) -> Result<bool> {
    let minus = tree.realized_minus();
    if !coloring.covers_exactly(minus.graph().edges()) {
        return Err(Error::DomainMismatch);
    }
    Ok(dangerous_colors(tree, |e| coloring.color(e)).is_some())
}

/// Colors of the designated copies if they are monochromatic and distinct.
fn dangerous_colors(tree: &ConstructionTree, color: impl Fn(Edge) -> Option<u8>) -> Option<Vec<u8>> {
    let mut used = Vec::new();
    for copy in &tree.designated_f_minus {
        let mut cs = copy.iter().map(|&e| color(e));
        let first = match cs.next() {
            Some(c) => c?,
            None => continue,
        };
        if cs.any(|c| c != Some(first)) || used.contains(&first) {
            return None;
        }
        used.push(first);
    }
    Some(used)
}

/// Whether a coloring of `F × (e,F*₋)` colors every attached copy of `F*₋` by the
/// same dangerous coloring, pulled back through the attachment maps.
pub fn is_product_dangerous(f: &Graph, tree: &ConstructionTree, coloring: &EdgeColoring) -> Result<bool> {
    let minus = tree.realized_minus();
    let (prod, attachments) = rooted_product_with_maps(&RootedGraph::unrooted(f.clone()), &minus)?;
    if !coloring.covers_exactly(prod.graph().edges()) {
        return Err(Error::DomainMismatch);
    }
    let mut pulled: Option<Vec<u8>> = None;
    for att in &attachments {
        let colors: Vec<u8> = minus
            .graph()
            .edges()
            .iter()
            .map(|&(x, y)| coloring.color((att.map[x], att.map[y])).expect("covered"))
            .collect();
        match &pulled {
            None => pulled = Some(colors),
            Some(p) if *p != colors => return Ok(false),
            Some(_) => {}
        }
    }
    let Some(colors) = pulled else {
        return Ok(true);
    };
    let lookup: BTreeMap<Edge, u8> = minus.graph().edges().iter().copied().zip(colors).collect();
    Ok(dangerous_colors(tree, |e| lookup.get(&e).copied()).is_some())
}

/// Whether every edge `uw` of `edges` extends to a copy of `fstar` rooted at `u, w`
/// (either order) with all non-root vertices outside `V(edges)` and all
/// copies pairwise edge-disjoint.
pub fn is_fstar_spanning(host: &Graph, edges: &[Edge], fstar: &RootedGraph) -> Result<bool> {
    ensure_size("spanning subgraph edges", edges.len(), SPANNING_MAX_EDGES)?;
    if fstar.roots().len() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: fstar.roots().len(),
        });
    }
    let edges: Vec<Edge> = edges
        .iter()
        .map(|&(a, b)| norm(a, b))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for &(a, b) in &edges {
        if b >= host.v() || !host.has_edge(a, b) {
            return Err(Error::EdgeAbsent((a, b)));
        }
    }
    let mut allowed = vec![0u64; bitset::words_for(host.v())];
    bitset::fill(&mut allowed, host.v());
    for &(a, b) in &edges {
        bitset::clear(&mut allowed, a);
        bitset::clear(&mut allowed, b);
    }
    let pattern = fstar.graph();
    let (r0, r1) = (fstar.roots()[0], fstar.roots()[1]);
    // candidate copies per edge, as sorted sets of non-root edges
    let mut options: Vec<Vec<Vec<Edge>>> = Vec::with_capacity(edges.len());
    for &(a, b) in &edges {
        let mut found: BTreeSet<Vec<Edge>> = BTreeSet::new();
        let mut over = false;
        for pins in [[(r0, a), (r1, b)], [(r0, b), (r1, a)]] {
            let _ = for_each_embedding(host, pattern, &pins, Some(&allowed), |map| {
                let mut es: Vec<Edge> = fstar.non_root_edges().map(|(x, y)| norm(map[x], map[y])).collect();
                es.sort_unstable();
                found.insert(es);
                if found.len() > SPANNING_COPY_BUDGET {
                    over = true;
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
        }
        if over {
            return Err(Error::Budget {
                what: "is_fstar_spanning",
                detail: format!("more than {SPANNING_COPY_BUDGET} copies at edge {:?}", (a, b)),
            });
        }
        if found.is_empty() {
            return Ok(false);
        }
        options.push(found.into_iter().collect());
    }
    // fewest options first
    options.sort_by_key(|o| o.len());
    let mut used: BTreeSet<Edge> = BTreeSet::new();
    let mut nodes = 0u64;
    match disjoint_choice(&options, 0, &mut used, &mut nodes) {
        Some(ok) => Ok(ok),
        None => Err(Error::Budget {
            what: "is_fstar_spanning",
            detail: format!("backtracking exceeded {SPANNING_NODE_BUDGET} nodes"),
        }),
    }
}

fn disjoint_choice(options: &[Vec<Vec<Edge>>], i: usize, used: &mut BTreeSet<Edge>, nodes: &mut u64) -> Option<bool> {
    if i == options.len() {
        return Some(true);
    }
    for copy in &options[i] {
        *nodes += 1;
        if *nodes > SPANNING_NODE_BUDGET {
            return None;
        }
        if copy.iter().any(|e| used.contains(e)) {
            continue;
        }
        used.extend(copy.iter().copied());
        let res = disjoint_choice(options, i + 1, used, nodes);
        for e in copy {
            used.remove(e);
        }
        match res {
            Some(false) => {}
            other => return other,
        }
    }
    Some(false)
}
