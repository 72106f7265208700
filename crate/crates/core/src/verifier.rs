//! Exact brute-force checks of the density lemmas over enumerated small universes.
//!
//! Every check is a list of [`Instance`]s fed through [`evaluate`]. An instance
//! either fails a hypothesis filter or yields exact comparisons. A
//! [`Counterexample`] stores its instance, so [`Counterexample::reverify`]
//! recomputes it without the enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{enumerate_fk_levels, root_join, rooted_product, FkClass, FK_MAX_K};
use crate::density::{d2, m, m1, m2, m2_bar, premise_check, rooted_d, rooted_m, rooted_m2, M2_BAR_MAX_R};
use crate::error::{Error, Result};
use crate::graph::enumerate::{enumerate_connected_graphs, enumerate_graphs};
use crate::graph::{norm, Edge, Graph, RootedGraph};
use crate::rational::XRational;

type Builder<'a> = dyn Fn(&Graph, &RootedGraph, &[FkClass]) -> Vec<Instance> + 'a;

/// Largest pattern the co-rooted products of [`default_prod_universe`] draw from.
pub const PROD_MAX_VERTICES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    DensityChain,
    #[serde(rename = "m2_le_2m")]
    M2Le2m,
    Building,
    FstarDensity,
    KlrDensity,
    RootedDensity,
    ForbiddenDensity,
    ProdDensity,
    FtimesFstar,
}

impl LemmaId {
    pub const ALL: [LemmaId; 9] = [
        LemmaId::DensityChain,
        LemmaId::M2Le2m,
        LemmaId::Building,
        LemmaId::FstarDensity,
        LemmaId::KlrDensity,
        LemmaId::RootedDensity,
        LemmaId::ForbiddenDensity,
        LemmaId::ProdDensity,
        LemmaId::FtimesFstar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::DensityChain => "density_chain",
            LemmaId::M2Le2m => "m2_le_2m",
            LemmaId::Building => "building",
            LemmaId::FstarDensity => "fstar_density",
            LemmaId::KlrDensity => "klr_density",
            LemmaId::RootedDensity => "rooted_density",
            LemmaId::ForbiddenDensity => "forbidden_density",
            LemmaId::ProdDensity => "prod_density",
            LemmaId::FtimesFstar => "ftimes_fstar",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        LemmaId::ALL
            .into_iter()
            .find(|l| l.as_str() == key)
            .ok_or_else(|| Error::Parameter(format!("unknown lemma `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: XRational, rhs: XRational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

/// `lhs relation rhs`, the exact claim one clause makes about an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub clause: String,
    pub lhs: XRational,
    pub rhs: XRational,
    pub relation: Relation,
    /// Set when the clause applies to one value of a parameter list, e.g. one `t` of a grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding: Option<(String, XRational)>,
}

impl Comparison {
    fn new(clause: impl Into<String>, lhs: XRational, relation: Relation, rhs: XRational) -> Self {
        Comparison {
            clause: clause.into(),
            lhs,
            rhs,
            relation,
            binding: None,
        }
    }

    /// `lhs ≥ rhs`, stored as `rhs ≤ lhs`.
    fn ge(clause: impl Into<String>, lhs: XRational, rhs: XRational) -> Self {
        Comparison::new(clause, rhs, Relation::Le, lhs)
    }

    pub fn holds(&self) -> bool {
        self.relation.holds(self.lhs, self.rhs)
    }
}

/// The graphs and exact parameters one lemma application needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graphs: Vec<RootedGraph>,
    pub params: BTreeMap<String, XRational>,
}

impl Instance {
    fn new(graphs: Vec<RootedGraph>, params: &[(&str, XRational)]) -> Self {
        Instance {
            graphs,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn graph(&self, i: usize) -> Result<&RootedGraph> {
        self.graphs
            .get(i)
            .ok_or_else(|| Error::Parameter(format!("instance lacks graph #{i}")))
    }

    fn param(&self, key: &str) -> Result<XRational> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("instance lacks parameter `{key}`")))
    }

    fn param_u32(&self, key: &str) -> Result<u32> {
        let x = self.param(key)?;
        match (x.numer(), x.denom()) {
            (Some(p), Some(1)) if (0..=u32::MAX as i128).contains(&p) => Ok(p as u32),
            _ => Err(Error::Parameter(format!(
                "parameter `{key}` = {x} is not a small integer"
            ))),
        }
    }

    /// Every value whose key is `key` or starts with `key.`.
    fn param_list(&self, key: &str) -> Vec<XRational> {
        let dotted = format!("{key}.");
        self.params
            .iter()
            .filter(|(k, _)| *k == key || k.starts_with(&dotted))
            .map(|(_, v)| *v)
            .collect()
    }

    fn narrowed(&self, binding: &Option<(String, XRational)>) -> Instance {
        let mut out = self.clone();
        if let Some((key, value)) = binding {
            let dotted = format!("{key}.");
            out.params.retain(|k, _| k != key && !k.starts_with(&dotted));
            out.params.insert(key.clone(), *value);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Evaluation {
    /// A hypothesis of the lemma fails; the reason names it.
    Filtered {
        reason: String,
    },
    Checked {
        comparisons: Vec<Comparison>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: Instance,
    pub clause: String,
    pub lhs: XRational,
    pub rhs: XRational,
    pub relation: Relation,
}

impl Counterexample {
    /// Re-evaluates the stored instance; true iff the same clause fails with the same values.
    pub fn reverify(&self, lemma: LemmaId) -> Result<bool> {
        let Evaluation::Checked { comparisons } = evaluate(lemma, &self.instance)? else {
            return Ok(false);
        };
        Ok(comparisons.iter().any(|c| {
            c.clause == self.clause
                && c.lhs == self.lhs
                && c.rhs == self.rhs
                && c.relation == self.relation
                && !c.holds()
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub lemma: LemmaId,
    pub universe: String,
    pub instances: u64,
    /// Comparisons evaluated on instances that met the hypotheses.
    pub checked: u64,
    /// Instances rejected by a hypothesis filter.
    pub filtered: u64,
    pub counterexamples: Vec<Counterexample>,
    pub pass: bool,
}

impl LemmaResult {
    /// Concatenates results of the same lemma over several universes.
    pub fn merge(lemma: LemmaId, parts: Vec<LemmaResult>) -> LemmaResult {
        let mut out = LemmaResult {
            lemma,
            universe: String::new(),
            instances: 0,
            checked: 0,
            filtered: 0,
            counterexamples: Vec::new(),
            pass: true,
        };
        let mut names = Vec::new();
        for p in parts {
            debug_assert_eq!(p.lemma, lemma);
            names.push(p.universe);
            out.instances += p.instances;
            out.checked += p.checked;
            out.filtered += p.filtered;
            out.counterexamples.extend(p.counterexamples);
        }
        out.universe = names.join("; ");
        out.pass = out.counterexamples.is_empty();
        out
    }
}

/// Evaluates every instance in parallel; output order follows input order.
pub fn run_instances(lemma: LemmaId, universe: impl Into<String>, instances: &[Instance]) -> Result<LemmaResult> {
    let evals: Vec<Evaluation> = instances
        .par_iter()
        .map(|inst| evaluate(lemma, inst))
        .collect::<Result<_>>()?;
    let mut out = LemmaResult {
        lemma,
        universe: universe.into(),
        instances: instances.len() as u64,
        checked: 0,
        filtered: 0,
        counterexamples: Vec::new(),
        pass: true,
    };
    for (inst, ev) in instances.iter().zip(evals) {
        match ev {
            Evaluation::Filtered { .. } => out.filtered += 1,
            Evaluation::Checked { comparisons } => {
                out.checked += comparisons.len() as u64;
                for c in comparisons.into_iter().filter(|c| !c.holds()) {
                    out.counterexamples.push(Counterexample {
                        instance: inst.narrowed(&c.binding),
                        clause: c.clause,
                        lhs: c.lhs,
                        rhs: c.rhs,
                        relation: c.relation,
                    });
                }
            }
        }
    }
    out.pass = out.counterexamples.is_empty();
    Ok(out)
}

/// Applies one lemma to one instance.
pub fn evaluate(lemma: LemmaId, inst: &Instance) -> Result<Evaluation> {
    match lemma {
        LemmaId::DensityChain => eval_chain(inst),
        LemmaId::M2Le2m => eval_m2_le_2m(inst),
        LemmaId::Building => eval_building(inst),
        LemmaId::FstarDensity => eval_fstar(inst),
        LemmaId::KlrDensity => eval_klr(inst),
        LemmaId::RootedDensity => eval_rooted(inst),
        LemmaId::ForbiddenDensity => eval_forbidden(inst),
        LemmaId::ProdDensity => eval_prod(inst),
        LemmaId::FtimesFstar => eval_ftimes(inst),
    }
}

fn filtered(reason: impl Into<String>) -> Result<Evaluation> {
    Ok(Evaluation::Filtered { reason: reason.into() })
}

fn checked(comparisons: Vec<Comparison>) -> Result<Evaluation> {
    Ok(Evaluation::Checked { comparisons })
}

fn int(x: u32) -> XRational {
    XRational::int(x as i128)
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 || r > M2_BAR_MAX_R {
        return Err(Error::Parameter(format!("r = {r} outside 1..={M2_BAR_MAX_R}")));
    }
    Ok(())
}

/// `[m̄₂⁰ (unused), m̄₂¹, …, m̄₂^{r_max}]`.
fn mbar_table(f: &Graph, r_max: u32) -> Result<Vec<XRational>> {
    let mut out = vec![XRational::ZERO];
    for r in 1..=r_max {
        out.push(m2_bar(f, r)?.value);
    }
    Ok(out)
}

/// `−1/x` with `−1/0 = −∞`; `None` stands for `−∞`.
fn neg_recip(x: XRational) -> Option<XRational> {
    (!x.is_zero()).then(|| -x.recip())
}

// ---------------------------------------------------------------- density chain

fn eval_chain(inst: &Instance) -> Result<Evaluation> {
    let g = inst.graph(0)?.graph();
    let r_max = inst.param_u32("r_max")?;
    check_r(r_max)?;
    if g.is_forest() {
        return filtered("forest");
    }
    let bars = mbar_table(g, r_max)?;
    let mut out = vec![Comparison::new("m = mbar2^1", m(g)?.value, Relation::Eq, bars[1])];
    for r in 1..r_max as usize {
        out.push(Comparison::new(
            format!("mbar2^{r} < mbar2^{}", r + 1),
            bars[r],
            Relation::Lt,
            bars[r + 1],
        ));
    }
    out.push(Comparison::new(
        format!("mbar2^{r_max} < m2"),
        bars[r_max as usize],
        Relation::Lt,
        m2(g)?.value,
    ));
    checked(out)
}

/// Strict chain `m = m̄₂¹ < … < m̄₂^{r_max} < m₂` over connected graphs on at most `v_max` vertices.
pub fn check_density_chain(v_max: usize, r_max: u32) -> Result<LemmaResult> {
    check_r(r_max)?;
    let instances: Vec<Instance> = enumerate_connected_graphs(v_max)?
        .into_iter()
        .map(|g| Instance::new(vec![RootedGraph::unrooted(g)], &[("r_max", int(r_max))]))
        .collect();
    run_instances(
        LemmaId::DensityChain,
        format!("connected graphs on <= {v_max} vertices, forests filtered; r <= {r_max}"),
        &instances,
    )
}

// ---------------------------------------------------------------- m₂ ≤ 2m

fn eval_m2_le_2m(inst: &Instance) -> Result<Evaluation> {
    let g = inst.graph(0)?.graph();
    if g.v() < 3 || g.e() == 0 {
        return filtered("fewer than 3 vertices or edgeless");
    }
    checked(vec![Comparison::new(
        "m2 <= 2m",
        m2(g)?.value,
        Relation::Le,
        XRational::int(2) * m(g)?.value,
    )])
}

/// `m₂(F) ≤ 2m(F)` over all graphs on at most `v_max` vertices.
pub fn check_m2_le_2m(v_max: usize) -> Result<LemmaResult> {
    let instances: Vec<Instance> = enumerate_graphs(v_max)?
        .into_iter()
        .map(|g| Instance::new(vec![RootedGraph::unrooted(g)], &[]))
        .collect();
    run_instances(
        LemmaId::M2Le2m,
        format!("all graphs on <= {v_max} vertices, v >= 3 and e >= 1"),
        &instances,
    )
}

// ---------------------------------------------------------------- building

fn root_pattern(rg: &RootedGraph) -> Vec<bool> {
    let r = rg.roots();
    let mut out = Vec::new();
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            out.push(rg.graph().has_edge(r[i], r[j]));
        }
    }
    out
}

fn eval_building(inst: &Instance) -> Result<Evaluation> {
    let (a, b) = (inst.graph(0)?, inst.graph(1)?);
    let rooted = inst.param_u32("rooted")? == 1;
    if rooted {
        if a.roots().len() != b.roots().len() || root_pattern(a) != root_pattern(b) {
            return filtered("root graphs disagree");
        }
        let (ma, mb) = (rooted_m(a)?, rooted_m(b)?);
        if !ma.balanced || !mb.balanced {
            return filtered("not balanced");
        }
        if ma.value != mb.value {
            return filtered("densities differ");
        }
        let glued = root_join(&[a.clone(), b.clone()])?;
        let mg = rooted_m(&glued)?.value;
        return checked(vec![
            Comparison::new("m(R, G u H) = d", mg, Relation::Eq, ma.value),
            Comparison::new("(R, G u H) balanced", rooted_d(&glued), Relation::Eq, mg),
        ]);
    }
    let is_edge = |rg: &RootedGraph| rg.roots().len() == 2 && rg.graph().has_edge(rg.roots()[0], rg.roots()[1]);
    if !is_edge(a) || !is_edge(b) {
        return filtered("roots are not an edge");
    }
    let (ma, mb) = (m2(a.graph())?, m2(b.graph())?);
    if !ma.balanced || !mb.balanced {
        return filtered("not 2-balanced");
    }
    if ma.value != mb.value {
        return filtered("2-densities differ");
    }
    let glued = root_join(&[a.clone(), b.clone()])?;
    let mg = m2(glued.graph())?.value;
    checked(vec![
        Comparison::new("m2(G u_e H) = d", mg, Relation::Eq, ma.value),
        Comparison::new("G u_e H 2-balanced", d2(glued.graph()), Relation::Eq, mg),
    ])
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Vertex sets `R ⊊ {0..n}`, including the empty set, as sorted lists.
fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n) - 1)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Instances gluing pool graphs along edges (every oriented edge pair) and,
/// for the rooted variant, along equal-arity root sets in every root order.
pub fn building_instances(pool: &[Graph]) -> Result<Vec<Instance>> {
    let edge_rooted = |g: &Graph| -> Result<Vec<RootedGraph>> {
        let mut out = Vec::new();
        for &(x, y) in g.edges() {
            out.push(RootedGraph::at_pair(g.clone(), x, y)?);
            out.push(RootedGraph::at_pair(g.clone(), y, x)?);
        }
        Ok(out)
    };
    let mut out = Vec::new();
    for (i, g) in pool.iter().enumerate() {
        let g2 = m2(g)?.value;
        for h in &pool[i..] {
            if m2(h)?.value != g2 {
                continue;
            }
            let ge = &edge_rooted(g)?;
            let ge = ge.iter().step_by(2);
            for a in ge {
                for b in edge_rooted(h)? {
                    out.push(Instance::new(vec![a.clone(), b], &[("rooted", XRational::ZERO)]));
                }
            }
        }
    }
    // rooted variant: (R, G) balanced, grouped by arity, root pattern and density
    let mut rooted: Vec<(RootedGraph, XRational)> = Vec::new();
    for g in pool {
        for r in proper_subsets(g.v()) {
            let rg = RootedGraph::new(g.clone(), r)?;
            let rep = rooted_m(&rg)?;
            if rep.balanced && rep.value > XRational::ZERO {
                rooted.push((rg, rep.value));
            }
        }
    }
    for (i, (a, da)) in rooted.iter().enumerate() {
        for (b, db) in &rooted[i..] {
            if da != db || a.roots().len() != b.roots().len() {
                continue;
            }
            for order in permutations(b.roots()) {
                let b2 = RootedGraph::new(b.graph().clone(), order)?;
                if root_pattern(a) == root_pattern(&b2) {
                    out.push(Instance::new(vec![a.clone(), b2], &[("rooted", XRational::ONE)]));
                }
            }
        }
    }
    Ok(out)
}

/// Gluing 2-balanced graphs of equal 2-density along an edge, and balanced
/// rooted graphs of equal density along their roots.
pub fn check_building(pool: &[Graph]) -> Result<LemmaResult> {
    let instances = building_instances(pool)?;
    run_instances(
        LemmaId::Building,
        format!(
            "pool of {} graphs, equal-density pairs, edge and root gluings",
            pool.len()
        ),
        &instances,
    )
}

// ---------------------------------------------------------------- 𝓕ᵏ-based lemmas

fn fk(f: &Graph, e: Edge, k_max: usize) -> Result<Vec<FkClass>> {
    if k_max == 0 || k_max > FK_MAX_K {
        return Err(Error::Parameter(format!("k = {k_max} outside 1..={FK_MAX_K}")));
    }
    enumerate_fk_levels(f, e, k_max)
}

fn rooted_at(f: &Graph, e: Edge) -> Result<RootedGraph> {
    let (a, b) = norm(e.0, e.1);
    if !f.has_edge(a, b) {
        return Err(Error::EdgeAbsent((a, b)));
    }
    RootedGraph::at_pair(f.clone(), a, b)
}

fn fstar_instance(fe: &RootedGraph, fstar: &RootedGraph, params: &[(&str, XRational)]) -> Instance {
    Instance::new(vec![fe.clone(), fstar.clone()], params)
}

fn eval_fstar(inst: &Instance) -> Result<Evaluation> {
    let (fe, fstar) = (inst.graph(0)?, inst.graph(1)?);
    let (k, r) = (inst.param_u32("k")?, inst.param_u32("r")?);
    check_r(r)?;
    if k == 0 || k > r {
        return filtered("k outside 1..=r");
    }
    let f = fe.graph();
    let bar_r = m2_bar(f, r)?.value;
    let bar_low = m2_bar(f, r - k + 1)?.value;
    let (v, e) = (fstar.graph().v() as i128, fstar.graph().e() as i128);
    let lhs = XRational::int(v - 2) - XRational::int(e) / bar_r;
    checked(vec![Comparison::ge(
        "v* - 2 - e*/mbar2^r >= -1/mbar2^(r-k+1)",
        lhs,
        -bar_low.recip(),
    )])
}

fn fstar_instances_from(fe: &RootedGraph, levels: &[FkClass], k_max: usize, r: u32) -> Vec<Instance> {
    let mut out = Vec::new();
    for class in levels.iter().take(k_max.min(r as usize)) {
        for t in class.member_trees() {
            out.push(fstar_instance(
                fe,
                &t.realized,
                &[("k", int(class.k as u32)), ("r", int(r))],
            ));
        }
    }
    out
}

/// `v_{F*} − 2 − e_{F*}/m̄₂ʳ(F) ≥ −1/m̄₂^{r−k+1}(F)` for every `F* ∈ 𝓕ᵏ`, `k ≤ min(k_max, r)`.
pub fn check_fstar_density(f: &Graph, e: Edge, k_max: usize, r: u32) -> Result<LemmaResult> {
    check_r(r)?;
    let fe = rooted_at(f, e)?;
    let levels = fk(f, e, k_max.min(r as usize).max(1))?;
    let instances = fstar_instances_from(&fe, &levels, k_max, r);
    run_instances(
        LemmaId::FstarDensity,
        format!("F = {}, k <= {}, r = {r}", describe(f), k_max.min(r as usize)),
        &instances,
    )
}

fn eval_klr(inst: &Instance) -> Result<Evaluation> {
    let fe = inst.graph(0)?;
    let (k, r) = (inst.param_u32("k")?, inst.param_u32("r")?);
    check_r(r)?;
    if k < 2 || k > r {
        return filtered("k outside 2..=r");
    }
    let f = fe.graph();
    if f.is_forest() {
        return filtered("forest");
    }
    let premise = premise_check(f)?;
    let e = norm(fe.roots()[0], fe.roots()[1]);
    if !premise.is_2_balanced {
        return filtered("not 2-balanced");
    }
    if !premise.witnesses.contains(&e) {
        return filtered("m2(F - e) exceeds mbar2^2(F)");
    }
    let bar_k = m2_bar(f, k)?.value;
    let bar_r = m2_bar(f, r)?.value;
    let t = bar_k.recip() - bar_r.recip();
    let first = rooted_m2(fe, t)?;
    let prod = rooted_product(&RootedGraph::unrooted(f.clone()), fe)?;
    let inner = RootedGraph::new(prod.graph().clone(), (0..f.v()).collect())?;
    let second = rooted_m2(&inner, t)?;
    checked(vec![
        Comparison::new("m2(e, F, t) <= mbar2^k", first, Relation::Le, bar_k),
        Comparison::new("m2(V(F), F x (e,F), t) <= mbar2^k", second, Relation::Le, bar_k),
    ])
}

fn klr_instances(fe: &RootedGraph, r_max: u32) -> Vec<Instance> {
    let mut out = Vec::new();
    for r in 2..=r_max {
        for k in 2..=r {
            out.push(Instance::new(vec![fe.clone()], &[("k", int(k)), ("r", int(r))]));
        }
    }
    out
}

/// Both KLR-variant density bounds for `2 ≤ k ≤ r ≤ r_max`, with `t = 1/m̄₂ᵏ − 1/m̄₂ʳ`.
pub fn check_klr_density(f: &Graph, e: Edge, r_max: u32) -> Result<LemmaResult> {
    check_r(r_max)?;
    let fe = rooted_at(f, e)?;
    run_instances(
        LemmaId::KlrDensity,
        format!("F = {}, 2 <= k <= r <= {r_max}", describe(f)),
        &klr_instances(&fe, r_max),
    )
}

fn eval_rooted(inst: &Instance) -> Result<Evaluation> {
    let (fe, fstar) = (inst.graph(0)?, inst.graph(1)?);
    let k = inst.param_u32("k")?;
    check_r(k)?;
    if k < 2 {
        return filtered("k < 2");
    }
    let f = fe.graph();
    let bar_k = m2_bar(f, k)?.value;
    let minus = crate::constructions::drop_root_edges(fstar);
    let mut out = vec![Comparison::new(
        "m1(F*_-) < mbar2^k",
        m1(minus.graph())?.value,
        Relation::Lt,
        bar_k,
    )];
    for v0 in proper_subsets(f.v()) {
        let base = RootedGraph::new(f.clone(), v0.clone())?;
        let prod = rooted_product(&base, &minus)?;
        out.push(Comparison::new(
            format!("m(V0, (V0,F) x (e,F*_-)) < mbar2^k, V0 = {v0:?}"),
            rooted_m(&prod)?.value,
            Relation::Lt,
            bar_k,
        ));
    }
    checked(out)
}

fn rooted_instances_from(fe: &RootedGraph, levels: &[FkClass], k_max: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for class in levels.iter().take(k_max).skip(1) {
        for t in class.member_trees() {
            out.push(fstar_instance(fe, &t.realized, &[("k", int(class.k as u32))]));
        }
    }
    out
}

/// `m₁(F*₋) < m̄₂ᵏ(F)` and `m(V₀,(V₀,F)×(e,F*₋)) < m̄₂ᵏ(F)` for all `V₀ ⊊ V(F)`, `2 ≤ k ≤ k_max`.
pub fn check_rooted_density(f: &Graph, e: Edge, k_max: usize) -> Result<LemmaResult> {
    let fe = rooted_at(f, e)?;
    let levels = fk(f, e, k_max)?;
    run_instances(
        LemmaId::RootedDensity,
        format!("F = {}, 2 <= k <= {k_max}, all V0 proper subsets of V(F)", describe(f)),
        &rooted_instances_from(&fe, &levels, k_max),
    )
}

fn eval_ftimes(inst: &Instance) -> Result<Evaluation> {
    let (fe, fstar) = (inst.graph(0)?, inst.graph(1)?);
    let r = inst.param_u32("r")?;
    check_r(r)?;
    if r < 2 {
        return filtered("r < 2");
    }
    let f = fe.graph();
    let prod = rooted_product(&RootedGraph::unrooted(f.clone()), fstar)?;
    checked(vec![Comparison::new(
        "m(F x (e,F*)) <= mbar2^r",
        m(prod.graph())?.value,
        Relation::Le,
        m2_bar(f, r)?.value,
    )])
}

fn ftimes_instances_from(fe: &RootedGraph, levels: &[FkClass], r: u32) -> Vec<Instance> {
    match levels.get(r as usize - 1) {
        Some(class) if r >= 2 => class
            .member_trees()
            .map(|t| fstar_instance(fe, &t.realized, &[("r", int(r))]))
            .collect(),
        _ => Vec::new(),
    }
}

/// `m(F×(e,F*)) ≤ m̄₂ʳ(F)` for every `F* ∈ 𝓕ʳ`, `r ≥ 2`.
pub fn check_ftimes_fstar(f: &Graph, e: Edge, r: u32) -> Result<LemmaResult> {
    if r < 2 {
        return Err(Error::Parameter(format!("r = {r} must be at least 2")));
    }
    let fe = rooted_at(f, e)?;
    let levels = fk(f, e, r as usize)?;
    run_instances(
        LemmaId::FtimesFstar,
        format!("F = {}, r = {r}", describe(f)),
        &ftimes_instances_from(&fe, &levels, r),
    )
}

// ---------------------------------------------------------------- forbidden density

fn eval_forbidden(inst: &Instance) -> Result<Evaluation> {
    let g = inst.graph(0)?.graph();
    let r = inst.param_u32("r")?;
    check_r(r)?;
    if r < 2 {
        return filtered("r < 2");
    }
    if g.e() < g.v() {
        return filtered("density below 1");
    }
    let rep2 = m2(g)?;
    if !rep2.balanced {
        return filtered("not 2-balanced");
    }
    let mut worst = XRational::ZERO;
    for roots in proper_subsets(g.v()) {
        worst = worst.max(rooted_m(&RootedGraph::new(g.clone(), roots)?)?.value);
    }
    let v1 = XRational::int(g.v() as i128 - 1);
    let gap = m(g)?.value.recip() - m2_bar(g, r)?.value.recip();
    let bound = if gap.is_zero() {
        XRational::Infinity
    } else {
        gap.recip()
    };
    checked(vec![
        Comparison::new("max_R m(R,G) <= v - 1", worst, Relation::Le, v1),
        Comparison::new("v - 1 < (1/m - 1/mbar2^r)^-1", v1, Relation::Lt, bound),
    ])
}

/// `max_{R⊊V} m(R,G) ≤ v−1 < (1/m(G) − 1/m̄₂ʳ(G))⁻¹` for 2-balanced graphs of density at least 1.
/// `R = ∅` is part of the maximum.
pub fn check_forbidden_density(v_max: usize, r_max: u32) -> Result<LemmaResult> {
    check_r(r_max)?;
    let mut instances = Vec::new();
    for g in enumerate_graphs(v_max)? {
        for r in 2..=r_max {
            instances.push(Instance::new(vec![RootedGraph::unrooted(g.clone())], &[("r", int(r))]));
        }
    }
    run_instances(
        LemmaId::ForbiddenDensity,
        format!("all graphs on <= {v_max} vertices, 2-balanced with e >= v; 2 <= r <= {r_max}"),
        &instances,
    )
}

// ---------------------------------------------------------------- prod density

fn eval_prod(inst: &Instance) -> Result<Evaluation> {
    let (rg, eh) = (inst.graph(0)?, inst.graph(1)?);
    let ts = inst.param_list("t");
    if eh.roots().len() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: eh.roots().len(),
        });
    }
    if !rooted_m(eh)?.balanced {
        return filtered("(e,H) not balanced");
    }
    let minus = crate::constructions::drop_root_edges(eh);
    let m1_minus = m1(minus.graph())?.value;
    let m_rg = rooted_m(rg)?.value;
    let (vbar, ebar) = (eh.v_bar() as i128, eh.e_bar() as i128);
    let admissible: Vec<XRational> = ts
        .into_iter()
        .filter(|&t| t > XRational::ZERO && !t.is_infinite())
        .filter(|&t| m1_minus <= t)
        .filter(|&t| match neg_recip(m_rg) {
            None => true,
            Some(floor) => XRational::int(vbar) - XRational::int(ebar) / t >= floor,
        })
        .collect();
    if admissible.is_empty() {
        return filtered("no t satisfies the premises");
    }
    let prod = rooted_product(rg, &minus)?;
    let lhs = rooted_m(&prod)?.value;
    checked(
        admissible
            .into_iter()
            .map(|t| Comparison {
                clause: format!("m(R, (R,G) x (e,H-e)) <= t, t = {t}"),
                lhs,
                rhs: t,
                relation: Relation::Le,
                binding: Some(("t".into(), t)),
            })
            .collect(),
    )
}

/// Rooted pairs `((R,G), (e,H))`: `G` connected on at most `v_max` vertices with
/// every `R ⊊ V(G)`, `H` connected on `2..=v_max` vertices rooted at every ordered-ascending pair.
pub fn default_prod_universe(v_max: usize) -> Result<Vec<(RootedGraph, RootedGraph)>> {
    let v_max = v_max.min(PROD_MAX_VERTICES);
    let graphs = enumerate_connected_graphs(v_max)?;
    let mut bases = Vec::new();
    for g in &graphs {
        for r in proper_subsets(g.v()) {
            bases.push(RootedGraph::new(g.clone(), r)?);
        }
    }
    let mut attach = Vec::new();
    for h in graphs.iter().filter(|h| h.v() >= 2) {
        for a in 0..h.v() {
            for b in a + 1..h.v() {
                attach.push(RootedGraph::at_pair(h.clone(), a, b)?);
            }
        }
    }
    let mut out = Vec::with_capacity(bases.len() * attach.len());
    for b in &bases {
        for a in &attach {
            out.push((b.clone(), a.clone()));
        }
    }
    Ok(out)
}

/// A fixed rational grid plus, for each pattern, `m̄₂ᵏ`, `m̄₂ᵏ − 1/1000` and `1/m̄₂ᵏ − 1/m̄₂ʳ`
/// for `2 ≤ k ≤ r ≤ r_max`; positive values only, sorted and deduplicated.
pub fn default_t_grid(patterns: &[Graph], r_max: u32) -> Result<Vec<XRational>> {
    check_r(r_max)?;
    let mut ts: Vec<XRational> = [
        (1, 3),
        (1, 2),
        (2, 3),
        (1, 1),
        (5, 4),
        (4, 3),
        (3, 2),
        (5, 3),
        (2, 1),
        (5, 2),
        (3, 1),
    ]
    .into_iter()
    .map(|(p, q)| XRational::new(p, q))
    .collect();
    for f in patterns {
        let bars = mbar_table(f, r_max)?;
        for k in 1..=r_max as usize {
            ts.push(bars[k]);
            ts.push(bars[k] - XRational::new(1, 1000));
            for r in k..=r_max as usize {
                ts.push(bars[k].recip() - bars[r].recip());
            }
        }
    }
    ts.retain(|t| *t > XRational::ZERO);
    ts.sort();
    ts.dedup();
    Ok(ts)
}

/// The product-density lemma at every `t` in `ts` whose premises hold.
///
/// The lemma quantifies over all real `t > 0`; only the given grid is checked.
pub fn check_prod_density(instances: &[(RootedGraph, RootedGraph)], ts: &[XRational]) -> Result<LemmaResult> {
    let mut params: Vec<(String, XRational)> = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        params.push((format!("t.{i:03}"), t));
    }
    let list: Vec<Instance> = instances
        .iter()
        .map(|(rg, eh)| Instance {
            graphs: vec![rg.clone(), eh.clone()],
            params: params.iter().cloned().collect(),
        })
        .collect();
    run_instances(
        LemmaId::ProdDensity,
        format!("{} rooted pairs x {} values of t", instances.len(), ts.len()),
        &list,
    )
}

// ---------------------------------------------------------------- suite

/// Parameters of the full suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub v_max: usize,
    pub r_max: u32,
    pub k_max: usize,
    /// Patterns `F`, each rooted at its first edge.
    pub patterns: Vec<Graph>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            v_max: 6,
            r_max: 4,
            k_max: 3,
            patterns: default_patterns(),
        }
    }
}

/// `K₃, C₄, K₄, C₅`.
pub fn default_patterns() -> Vec<Graph> {
    vec![Graph::complete(3), Graph::cycle(4), Graph::complete(4), Graph::cycle(5)]
}

fn describe(f: &Graph) -> String {
    format!("v{}e{}", f.v(), f.e())
}

fn first_edge(f: &Graph) -> Result<Edge> {
    f.edges().first().copied().ok_or(Error::Edgeless("verifier pattern"))
}

/// One lemma over the suite's universes.
pub fn run_lemma(lemma: LemmaId, opts: &VerifyOptions) -> Result<LemmaResult> {
    check_r(opts.r_max)?;
    if opts.k_max == 0 || opts.k_max > FK_MAX_K {
        return Err(Error::Parameter(format!("k = {} outside 1..={FK_MAX_K}", opts.k_max)));
    }
    let per_pattern = |build: &Builder<'_>, needs_fk: usize| {
        let mut instances = Vec::new();
        let mut names = Vec::new();
        for f in &opts.patterns {
            let e = first_edge(f)?;
            let fe = rooted_at(f, e)?;
            let levels = if needs_fk > 0 { fk(f, e, needs_fk)? } else { Vec::new() };
            instances.extend(build(f, &fe, &levels));
            names.push(describe(f));
        }
        Ok::<_, Error>((instances, names.join(",")))
    };
    let (k, r) = (opts.k_max, opts.r_max);
    match lemma {
        LemmaId::DensityChain => check_density_chain(opts.v_max, r),
        LemmaId::M2Le2m => check_m2_le_2m(opts.v_max),
        LemmaId::Building => check_building(&opts.patterns),
        LemmaId::ForbiddenDensity => check_forbidden_density(opts.v_max, r),
        LemmaId::ProdDensity => {
            let universe = default_prod_universe(opts.v_max)?;
            check_prod_density(&universe, &default_t_grid(&opts.patterns, r)?)
        }
        LemmaId::FstarDensity => {
            let (inst, names) = per_pattern(
                &|_, fe, levels| (1..=r).flat_map(|rr| fstar_instances_from(fe, levels, k, rr)).collect(),
                k,
            )?;
            run_instances(lemma, format!("F in {{{names}}}, k <= {k}, k <= r <= {r}"), &inst)
        }
        LemmaId::KlrDensity => {
            let (inst, names) = per_pattern(&|_, fe, _| klr_instances(fe, r), 0)?;
            run_instances(lemma, format!("F in {{{names}}}, 2 <= k <= r <= {r}"), &inst)
        }
        LemmaId::RootedDensity => {
            let (inst, names) = per_pattern(&|_, fe, levels| rooted_instances_from(fe, levels, k), k)?;
            run_instances(lemma, format!("F in {{{names}}}, 2 <= k <= {k}"), &inst)
        }
        LemmaId::FtimesFstar => {
            let top = (r as usize).min(k);
            let (inst, names) = per_pattern(
                &|_, fe, levels| {
                    (2..=top as u32)
                        .flat_map(|rr| ftimes_instances_from(fe, levels, rr))
                        .collect()
                },
                top,
            )?;
            run_instances(lemma, format!("F in {{{names}}}, 2 <= r <= {top}"), &inst)
        }
    }
}

/// Every lemma, in [`LemmaId::ALL`] order.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<LemmaResult>> {
    LemmaId::ALL.iter().map(|&l| run_lemma(l, opts)).collect()
}

#[cfg(test)]
mod tests;
