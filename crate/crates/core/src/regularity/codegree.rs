use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::partite::minus;
use super::roots::{check_upper_extensible, RootHypergraph};
use super::TOLERANCE;
use crate::density::rooted_m2;
use crate::error::{ensure_size, Error, Result};
use crate::graph::RootedGraph;
use crate::rational::XRational;

pub const CODEGREE_MAX_EDGES: usize = 1_000_000;
pub const CODEGREE_MAX_UNIFORMITY: usize = 6;

/// An explicit `r`-uniform hypergraph on `0..order`; repeated edges are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub order: usize,
    pub uniformity: usize,
    /// Each edge sorted increasingly.
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(order: usize, uniformity: usize, edges: Vec<Vec<usize>>) -> Result<Hypergraph> {
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            let distinct = e.windows(2).all(|w| w[0] < w[1]);
            if e.len() != uniformity || !distinct || e.last().is_some_and(|&v| v >= order) {
                return Err(Error::InvalidGraph(format!(
                    "{e:?} is not a {uniformity}-set of 0..{order}"
                )));
            }
            out.push(e);
        }
        Ok(Hypergraph {
            order,
            uniformity,
            edges: out,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodegreeReport {
    pub tau: f64,
    pub uniformity: usize,
    pub order: usize,
    pub edge_count: usize,
    /// Average degree `r·|E|/order`.
    pub average_degree: f64,
    /// Entry `j − 2`: `max_v d^{(j)}(v)`.
    pub codegree_max: Vec<u64>,
    /// Entry `j − 2`: `Σ_v d^{(j)}(v)`.
    pub codegree_sum: Vec<u64>,
    /// Entry `j − 2`: `δ_j`.
    pub delta_j: Vec<f64>,
    pub delta: f64,
}

impl CodegreeReport {
    /// `δ` recomputed from the stored `δ_j`.
    pub fn recomputed_delta(&self) -> f64 {
        combine(self.uniformity, &self.delta_j)
    }
}

fn binom2(x: usize) -> i32 {
    (x * x.saturating_sub(1) / 2) as i32
}

/// `2^{C(r,2)−1} Σ_{j=2}^{r} δ_j 2^{−C(j−1,2)}`.
fn combine(r: usize, delta_j: &[f64]) -> f64 {
    let sum: f64 = delta_j
        .iter()
        .enumerate()
        .map(|(i, d)| d * 2f64.powi(-binom2(i + 1)))
        .sum();
    2f64.powi(binom2(r) - 1) * sum
}

/// All `j`-subsets of a sorted edge, by index combination.
fn for_each_subset(edge: &[usize], j: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(edge: &[usize], j: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == j {
            f(cur);
            return;
        }
        for i in start..edge.len() {
            if edge.len() - i < j - cur.len() {
                break;
            }
            cur.push(edge[i]);
            rec(edge, j, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(edge, j, 0, &mut Vec::with_capacity(j), f);
}

/// The co-degree function `δ(𝓔, τ)` with its intermediate quantities.
pub fn codegree_function(h: &Hypergraph, tau: f64) -> Result<CodegreeReport> {
    ensure_size("hypergraph edges", h.edges.len(), CODEGREE_MAX_EDGES)?;
    ensure_size("uniformity", h.uniformity, CODEGREE_MAX_UNIFORMITY)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Parameter(format!("tau = {tau} must be positive")));
    }
    let r = h.uniformity;
    let d = if h.order == 0 {
        0.0
    } else {
        (r * h.edges.len()) as f64 / h.order as f64
    };
    let levels = r.saturating_sub(1);
    let mut codegree_max = vec![0u64; levels];
    let mut codegree_sum = vec![0u64; levels];
    let mut delta_j = vec![0.0; levels];
    for j in 2..=r {
        let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
        for e in &h.edges {
            for_each_subset(e, j, &mut |s| *counts.entry(s.to_vec()).or_default() += 1);
        }
        let mut best = vec![0u64; h.order];
        for (s, c) in &counts {
            for &v in s {
                best[v] = best[v].max(*c);
            }
        }
        let sum: u64 = best.iter().sum();
        codegree_max[j - 2] = best.iter().copied().max().unwrap_or(0);
        codegree_sum[j - 2] = sum;
        if d > 0.0 {
            delta_j[j - 2] = sum as f64 / (tau.powi(j as i32 - 1) * h.order as f64 * d);
        }
    }
    let delta = if d > 0.0 { combine(r, &delta_j) } else { 0.0 };
    Ok(CodegreeReport {
        tau,
        uniformity: r,
        order: h.order,
        edge_count: h.edges.len(),
        average_degree: d,
        codegree_max,
        codegree_sum,
        delta_j,
        delta,
    })
}

/// `𝓔(G_R, F)`: vertices are the edges of `K_{F₋,n}`, edges are the partite
/// copies of `F₋` whose roots form a tuple of `G_R`.
///
/// Edge `k` of `F₋` between parts `i < j` contributes vertices `k·n² + a·n + b`.
pub fn extension_hypergraph(gr: &RootHypergraph, rg: &RootedGraph) -> Result<Hypergraph> {
    if gr.parts() != rg.roots() {
        return Err(Error::RootMismatch);
    }
    let f_minus = minus(rg);
    let n = gr.n();
    let v = f_minus.v();
    let free: Vec<usize> = (0..v).filter(|x| !rg.is_root(*x)).collect();
    let per_tuple = n
        .checked_pow(free.len() as u32)
        .ok_or_else(|| Error::Parameter("extension count overflows".into()))?;
    let total = per_tuple.saturating_mul(gr.len());
    ensure_size("extension hypergraph edges", total, CODEGREE_MAX_EDGES)?;
    let mut edges = Vec::with_capacity(total);
    let mut image = vec![0usize; v];
    for t in gr.tuples() {
        for (&x, &a) in rg.roots().iter().zip(t) {
            image[x] = a;
        }
        for code in 0..per_tuple {
            for (i, &x) in free.iter().enumerate() {
                image[x] = code / n.pow(i as u32) % n;
            }
            let e: Vec<usize> = f_minus
                .edges()
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| k * n * n + image[i] * n + image[j])
                .collect();
            edges.push(e);
        }
    }
    Hypergraph::new(f_minus.e() * n * n, f_minus.e(), edges)
}

/// One numeric instance of the co-degree bound for extension hypergraphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaLemmaInstance {
    pub n: usize,
    pub gamma: f64,
    /// `q = n^{−t}`.
    pub t: XRational,
    pub a: f64,
    pub rooted_m2: XRational,
    pub tau: f64,
    pub upper_extensible: bool,
    pub delta: f64,
    pub bound: f64,
}

impl DeltaLemmaInstance {
    /// The premise holds and the bound is met.
    pub fn holds(&self) -> bool {
        !self.upper_extensible || self.delta <= self.bound * (1.0 + TOLERANCE)
    }
}

/// Evaluates `δ(𝓔(G_R,F), γ^{-1}n^{-1/m₂(R,F,t)})` against
/// `γ·e_{F₋}·2^{e_{F₋}²}·n^{|R|}·(Aq)^{e(F[R])}/|E(G_R)|` with `q = n^{−t}`.
pub fn delta_lemma_instance(
    gr: &RootHypergraph,
    rg: &RootedGraph,
    gamma: f64,
    t: XRational,
    a: f64,
) -> Result<DeltaLemmaInstance> {
    let e_minus = rg.graph().e() - rg.root_edge_count();
    if e_minus <= 1 {
        return Err(Error::Parameter("needs at least two non-root edges".into()));
    }
    if gr.is_empty() {
        return Err(Error::Parameter("G_R has no tuples".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Parameter(format!("gamma = {gamma} must lie in (0, 1]")));
    }
    let n = gr.n();
    let nf = n as f64;
    let q = nf.powf(-t.to_f64());
    let m2 = rooted_m2(rg, t)?;
    if m2.is_zero() {
        return Err(Error::Parameter(
            "no admissible subgraph for the rooted 2-density".into(),
        ));
    }
    let tau = nf.powf(-m2.recip().to_f64()) / gamma;
    let report = codegree_function(&extension_hypergraph(gr, rg)?, tau)?;
    let upper_extensible = check_upper_extensible(gr, rg, q, a)?.holds;
    let bound = gamma
        * e_minus as f64
        * 2f64.powi((e_minus * e_minus) as i32)
        * nf.powi(gr.arity() as i32)
        * (a * q).powi(rg.root_edge_count() as i32)
        / gr.len() as f64;
    Ok(DeltaLemmaInstance {
        n,
        gamma,
        t,
        a,
        rooted_m2: m2,
        tau,
        upper_extensible,
        delta: report.delta,
        bound,
    })
}
