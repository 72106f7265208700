//! Exact density calculus: `m`, `m₁`, `m₂`, the game densities `m̄₂ʳ`, rooted
//! densities and the threshold exponent `2 − 1/m̄₂ʳ`.
//!
//! Every maximum over subgraphs is taken over induced subgraphs: deleting an
//! edge never increases any of these ratios. Graphs on at most
//! [`EXHAUSTIVE_MAX_VERTICES`] vertices are scanned exhaustively and report all
//! maximizers. Larger graphs go through a max-closure flow and report only the
//! inclusion-maximal maximizer; `m₂_bar` and `rooted_m2` have no flow route.

mod exhaustive;
mod flow;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_size, Error, Result};
use crate::graph::{Edge, Graph, RootedGraph};
use crate::rational::XRational;
use exhaustive::{mask_vertices, scan, Scan, Sub, Val};

pub use exhaustive::EXHAUSTIVE_MAX_VERTICES;

pub const FLOW_MAX_VERTICES: usize = 4096;
pub const M2_BAR_MAX_R: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub value: XRational,
    /// Vertex sets of maximizing induced subgraphs, in increasing mask order, at most 64.
    pub maximizers: Vec<Vec<usize>>,
    /// Total number of maximizing vertex sets; `None` on the flow route.
    pub maximizer_count: Option<u64>,
    /// The whole graph attains the maximum.
    pub balanced: bool,
    /// The whole graph is the unique maximizer.
    pub strict: bool,
}

impl DensityReport {
    fn from_scan(s: Scan, n: usize) -> Self {
        let whole = s.full_attains && n > 0;
        DensityReport {
            value: s.best.map(to_x).unwrap_or(XRational::ZERO),
            maximizers: s.masks.iter().map(|&m| mask_vertices(m)).collect(),
            maximizer_count: Some(s.count),
            balanced: whole,
            strict: whole && s.count == 1,
        }
    }
}

fn to_x(v: Val) -> XRational {
    match v {
        Val::Frac(p, q) => XRational::new(p, q),
        Val::Inf => XRational::Infinity,
    }
}

fn frac(p: i128, q: i128) -> Val {
    if p == 0 {
        Val::Frac(0, 1)
    } else {
        Val::Frac(p, q)
    }
}

fn exhaustive(g: &Graph) -> bool {
    g.v() <= EXHAUSTIVE_MAX_VERTICES
}

fn root_mask(rg: &RootedGraph) -> u32 {
    rg.roots().iter().fold(0, |m, &r| m | 1 << r)
}

/// `d(G) = e/v`.
pub fn d(g: &Graph) -> XRational {
    XRational::ratio(g.e(), g.v())
}

/// `d₁(G) = e/(v−1)`.
pub fn d1(g: &Graph) -> XRational {
    XRational::ratio(g.e(), g.v().saturating_sub(1))
}

/// `d₂(G) = (e−1)/(v−2)` with `0/0 = 0`; `0` for edgeless graphs.
pub fn d2(g: &Graph) -> XRational {
    if g.e() == 0 {
        return XRational::ZERO;
    }
    XRational::ratio(g.e() - 1, g.v() - 2)
}

/// `d(R,G) = ē/v̄`.
pub fn rooted_d(rg: &RootedGraph) -> XRational {
    XRational::ratio(rg.e_bar(), rg.v_bar())
}

/// `m(G)`, maximum of `e_H/v_H` over `v_H ≥ 1`.
pub fn m(g: &Graph) -> Result<DensityReport> {
    ensure_size("density vertices", g.v(), FLOW_MAX_VERTICES)?;
    if exhaustive(g) {
        let s = scan(g, 0, |h| Some(frac(h.e, h.v)));
        return Ok(DensityReport::from_scan(s, g.v()));
    }
    Ok(flow_rooted_report(g, &vec![false; g.v()]))
}

/// `m₁(G)`, maximum of `e_H/(v_H−1)` over `v_H ≥ 2`.
pub fn m1(g: &Graph) -> Result<DensityReport> {
    ensure_size("density vertices", g.v(), FLOW_MAX_VERTICES)?;
    if exhaustive(g) {
        let s = scan(g, 0, |h| (h.v >= 2).then(|| frac(h.e, h.v - 1)));
        return Ok(DensityReport::from_scan(s, g.v()));
    }
    // m₁(G) = max over x of m({x}, G)
    let pins: Vec<Vec<usize>> = (0..g.v()).map(|x| vec![x]).collect();
    Ok(flow_pinned_report(g, &pins, d1, m1))
}

/// `m₂(G)`, maximum of `(e_H−1)/(v_H−2)` over `e_H ≥ 1` with `0/0 = 0`.
pub fn m2(g: &Graph) -> Result<DensityReport> {
    ensure_size("density vertices", g.v(), FLOW_MAX_VERTICES)?;
    if exhaustive(g) {
        let s = scan(g, 0, |h| (h.e >= 1).then(|| frac(h.e - 1, h.v - 2)));
        return Ok(DensityReport::from_scan(s, g.v()));
    }
    // m₂(G) = max over edges uw of m({u,w}, G)
    let pins: Vec<Vec<usize>> = g.edges().iter().map(|&(a, b)| vec![a, b]).collect();
    Ok(flow_pinned_report(g, &pins, d2, m2))
}

/// `m̄₂ʳ(G)`: `m(G)` for `r = 1`, otherwise the maximum over `e_H ≥ 1` of
/// `e_H/(v_H − 2 + 1/m̄₂ʳ⁻¹(G))`.
pub fn m2_bar(g: &Graph, r: u32) -> Result<DensityReport> {
    ensure_size("density vertices", g.v(), EXHAUSTIVE_MAX_VERTICES)?;
    if g.e() == 0 {
        return Err(Error::Edgeless("m2_bar"));
    }
    if r == 0 || r > M2_BAR_MAX_R {
        return Err(Error::Parameter(format!("r = {r} outside 1..={M2_BAR_MAX_R}")));
    }
    let mut report = m(g)?;
    for _ in 1..r {
        let prev = report.value.finite().expect("finite density");
        let (a, b) = (*prev.numer(), *prev.denom());
        // e / (v − 2 + b/a) = e·a / ((v−2)·a + b)
        let s = scan(g, 0, |h| (h.e >= 1).then(|| frac(h.e * a, (h.v - 2) * a + b)));
        report = DensityReport::from_scan(s, g.v());
    }
    Ok(report)
}

/// `2 − 1/m̄₂ʳ(G)`.
pub fn threshold_exponent(g: &Graph, r: u32) -> Result<XRational> {
    let mbar = m2_bar(g, r)?.value;
    Ok(XRational::int(2) - mbar.recip())
}

/// `m(R,G)`, maximum of `d(R∩V(H), H)` with subgraphs inside `R` contributing 0.
pub fn rooted_m(rg: &RootedGraph) -> Result<DensityReport> {
    let g = rg.graph();
    ensure_size("density vertices", g.v(), FLOW_MAX_VERTICES)?;
    if exhaustive(g) {
        let s = scan(g, root_mask(rg), |h| Some(frac(h.e - h.root_edges, h.v - h.roots)));
        return Ok(DensityReport::from_scan(s, g.v()));
    }
    let mut roots = vec![false; g.v()];
    for &x in rg.roots() {
        roots[x] = true;
    }
    Ok(flow_rooted_report(g, &roots))
}

/// `m₂(R,G,t)`: maximum over `e_H − e_{H[R]} > 1` of
/// `(ē_H − 1)/(v_H − 2 − t·e_{H[R]})`, which is `+∞` when the denominator is `≤ 0`.
/// Returns 0 when no subgraph is admissible.
pub fn rooted_m2(rg: &RootedGraph, t: XRational) -> Result<XRational> {
    let g = rg.graph();
    ensure_size("density vertices", g.v(), EXHAUSTIVE_MAX_VERTICES)?;
    let tq = match t.finite() {
        Some(q) if !t.is_negative() => q,
        _ => return Err(Error::Parameter(format!("t = {t} must be finite and nonnegative"))),
    };
    let (a, b) = (*tq.numer(), *tq.denom());
    let s = scan(g, root_mask(rg), |h: Sub| {
        let ebar = h.e - h.root_edges;
        if ebar <= 1 {
            return None;
        }
        // (ē − 1) / (v − 2 − (a/b)·e_R) = (ē − 1)·b / ((v − 2)·b − a·e_R)
        let den = (h.v - 2) * b - a * h.root_edges;
        Some(if den <= 0 { Val::Inf } else { frac((ebar - 1) * b, den) })
    });
    Ok(s.best.map(to_x).unwrap_or(XRational::ZERO))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Balancedness {
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub one_balanced: bool,
    pub strictly_one_balanced: bool,
    pub two_balanced: bool,
    pub strictly_two_balanced: bool,
}

/// Whether the whole graph attains (uniquely) each of `m`, `m₁`, `m₂`.
/// A flag is false when the whole graph is outside the density's range.
pub fn balancedness(g: &Graph) -> Result<Balancedness> {
    let (a, b, c) = (m(g)?, m1(g)?, m2(g)?);
    Ok(Balancedness {
        balanced: a.balanced,
        strictly_balanced: a.strict,
        one_balanced: b.balanced,
        strictly_one_balanced: b.strict,
        two_balanced: c.balanced,
        strictly_two_balanced: c.strict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseReport {
    pub is_2_balanced: bool,
    pub m2_bar_2: XRational,
    /// Edges `e` with `m₂(G − e) ≤ m̄₂²(G)`.
    pub witnesses: Vec<Edge>,
}

impl PremiseReport {
    pub fn holds(&self) -> bool {
        self.is_2_balanced && !self.witnesses.is_empty()
    }
}

/// The main theorem's premise: 2-balanced, with an edge whose deletion brings `m₂` to at most `m̄₂²`.
pub fn premise_check(g: &Graph) -> Result<PremiseReport> {
    if g.is_forest() {
        return Err(Error::Forest("premise_check"));
    }
    let bar = m2_bar(g, 2)?.value;
    let mut witnesses = Vec::new();
    for &(a, b) in g.edges() {
        if m2(&g.without_edge(a, b))?.value <= bar {
            witnesses.push((a, b));
        }
    }
    Ok(PremiseReport {
        is_2_balanced: m2(g)?.balanced,
        m2_bar_2: bar,
        witnesses,
    })
}

fn from_pq((p, q): (i128, i128)) -> XRational {
    XRational::new(p, q)
}

fn flow_value(g: &Graph, roots: &[bool]) -> XRational {
    from_pq(flow::rooted_density(g, roots).0)
}

fn flow_rooted_report(g: &Graph, roots: &[bool]) -> DensityReport {
    let ((p, q), set) = flow::rooted_density(g, roots);
    let value = XRational::new(p, q);
    let balanced = set.len() == g.v();
    let strict = balanced
        && (0..g.v()).all(|x| {
            let (h, hr) = delete_vertex(g, roots, x);
            flow_value(&h, &hr) < value
        });
    DensityReport {
        value,
        maximizers: vec![set],
        maximizer_count: None,
        balanced,
        strict,
    }
}

/// Maximum of `m(P, G)` over the pin sets `P`, with balancedness decided against
/// `whole(G)` and strictness by single-vertex deletion through `recurse`.
fn flow_pinned_report(
    g: &Graph,
    pins: &[Vec<usize>],
    whole: fn(&Graph) -> XRational,
    recurse: fn(&Graph) -> Result<DensityReport>,
) -> DensityReport {
    let mut best: Option<(XRational, Vec<usize>)> = None;
    for pin in pins {
        let mut roots = vec![false; g.v()];
        for &x in pin {
            roots[x] = true;
        }
        let ((p, q), set) = flow::rooted_density(g, &roots);
        let val = XRational::new(p, q);
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, set));
        }
    }
    let Some((value, set)) = best else {
        return DensityReport {
            value: XRational::ZERO,
            maximizers: Vec::new(),
            maximizer_count: None,
            balanced: false,
            strict: false,
        };
    };
    let balanced = whole(g) == value;
    let strict = balanced
        && (0..g.v()).all(|x| {
            let keep: Vec<usize> = (0..g.v()).filter(|&v| v != x).collect();
            recurse(&g.induced(&keep)).is_ok_and(|r| r.maximizers.is_empty() || r.value < value)
        });
    DensityReport {
        value,
        maximizers: vec![set],
        maximizer_count: None,
        balanced,
        strict,
    }
}

fn delete_vertex(g: &Graph, roots: &[bool], x: usize) -> (Graph, Vec<bool>) {
    let keep: Vec<usize> = (0..g.v()).filter(|&v| v != x).collect();
    let r = keep.iter().map(|&v| roots[v]).collect();
    (g.induced(&keep), r)
}
