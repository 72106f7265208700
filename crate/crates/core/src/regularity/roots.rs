use std::collections::{BTreeSet, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_fraction, check_nonneg, exceeds, mask_members, min_subset_size, order_by_degree, random_subset, sorted,
    Certificate, CheckMode, RegularityVerdict, TOLERANCE,
};
use crate::error::{ensure_size, Error, Result};
use crate::graph::{bitset, RootedGraph};

pub const LOWER_EXACT_MAX_PART: usize = 10;
pub const LOWER_EXACT_MAX_ARITY: usize = 3;

/// A partite `|R|`-uniform hypergraph; position `j` of every tuple lies in part `parts[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootHypergraph {
    parts: Vec<usize>,
    n: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl RootHypergraph {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<RootHypergraph> {
        let mut seen = parts.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != parts.len() {
            return Err(Error::Parameter("root parts must be distinct".into()));
        }
        Ok(RootHypergraph {
            parts,
            n,
            tuples: BTreeSet::new(),
        })
    }

    /// Every tuple of `V_{parts[0]} × … × V_{parts[k−1]}`.
    pub fn complete(parts: Vec<usize>, n: usize) -> Result<RootHypergraph> {
        let mut gr = RootHypergraph::new(parts, n)?;
        let k = gr.arity();
        let total = n
            .checked_pow(k as u32)
            .ok_or_else(|| Error::Parameter("too many tuples".into()))?;
        for code in 0..total {
            gr.tuples.insert((0..k).map(|i| code / n.pow(i as u32) % n).collect());
        }
        Ok(gr)
    }

    pub fn insert(&mut self, t: Vec<usize>) -> Result<bool> {
        if t.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: t.len(),
            });
        }
        if t.iter().any(|&a| a >= self.n) {
            return Err(Error::Parameter(format!("tuple {t:?} leaves the parts")));
        }
        Ok(self.tuples.insert(t))
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.tuples.iter()
    }

    /// Tuples induced by the chosen subsets of each position.
    pub fn induced_count(&self, subsets: &[Vec<usize>]) -> usize {
        let member: Vec<Vec<bool>> = subsets
            .iter()
            .map(|s| {
                let mut m = vec![false; self.n];
                for &a in s {
                    m[a] = true;
                }
                m
            })
            .collect();
        self.tuples
            .iter()
            .filter(|t| t.iter().zip(&member).all(|(&a, m)| m[a]))
            .count()
    }
}

fn check_fit(gr: &RootHypergraph, rg: &RootedGraph) -> Result<()> {
    if gr.parts() != rg.roots() {
        return Err(Error::RootMismatch);
    }
    Ok(())
}

/// Tuples grouped by (last, head) with a bitset over the second-to-last position.
struct LowerIndex {
    words: usize,
    groups: Vec<(usize, Vec<usize>, Vec<u64>)>,
}

impl LowerIndex {
    fn new(gr: &RootHypergraph) -> LowerIndex {
        let k = gr.arity();
        let words = bitset::words_for(gr.n);
        let mut map: HashMap<(usize, Vec<usize>), Vec<u64>> = HashMap::new();
        for t in gr.tuples() {
            let key = (t[k - 1], t[..k.saturating_sub(2)].to_vec());
            let row = map.entry(key).or_insert_with(|| vec![0; words]);
            if k >= 2 {
                bitset::set(row, t[k - 2]);
            }
        }
        let mut groups: Vec<_> = map.into_iter().map(|((c, h), m)| (c, h, m)).collect();
        groups.sort();
        LowerIndex { words, groups }
    }

    /// Degrees of last-position vertices into the product of `prefix`.
    fn degrees(&self, n: usize, prefix: &[Vec<usize>]) -> Vec<u64> {
        let k = prefix.len() + 1;
        let member: Vec<Vec<bool>> = prefix
            .iter()
            .map(|s| {
                let mut m = vec![false; n];
                for &a in s {
                    m[a] = true;
                }
                m
            })
            .collect();
        let mut sel = vec![0u64; self.words];
        if k >= 2 {
            for &a in &prefix[k - 2] {
                bitset::set(&mut sel, a);
            }
        }
        let mut deg = vec![0u64; n];
        for (c, head, row) in &self.groups {
            if head.iter().zip(&member).all(|(&a, m)| m[a]) {
                deg[*c] += if k >= 2 { bitset::and_count(row, &sel) as u64 } else { 1 };
            }
        }
        deg
    }
}

/// Whether all `V'_j ⊆_ε V_j` induce at least `q^{e(F[R])}·Π|V'_j|` tuples of `G_R`.
pub fn check_lower_regular(
    gr: &RootHypergraph,
    rg: &RootedGraph,
    q: f64,
    eps: f64,
    mode: CheckMode,
) -> Result<RegularityVerdict> {
    check_fit(gr, rg)?;
    check_nonneg("q", q)?;
    check_fraction("epsilon", eps)?;
    let k = gr.arity();
    let n = gr.n();
    let factor = q.powi(rg.root_edge_count() as i32);
    if k == 0 {
        let have = gr.len() as f64;
        let found = (have + TOLERANCE < factor).then(|| Certificate {
            subsets: Vec::new(),
            observed: have,
            bound: factor,
        });
        return Ok(RegularityVerdict::settle(found, mode));
    }
    let lo = min_subset_size(eps, n);
    if lo > n {
        return Ok(RegularityVerdict::settle(None, mode));
    }
    let index = LowerIndex::new(gr);
    let probe = |prefix: Vec<Vec<usize>>| -> Option<Certificate> {
        let deg = index.degrees(n, &prefix);
        let order = order_by_degree(&deg);
        let base: f64 = factor * prefix.iter().map(|s| s.len() as f64).product::<f64>();
        let mut bottom = 0u64;
        for (i, &c) in order.iter().enumerate() {
            bottom += deg[c];
            let s = i + 1;
            if s < lo {
                continue;
            }
            let bound = base * s as f64;
            if exceeds(bound, bottom as f64) {
                let mut subsets = prefix.clone();
                subsets.push(sorted(order[..s].to_vec()));
                return Some(Certificate {
                    subsets,
                    observed: bottom as f64,
                    bound,
                });
            }
        }
        None
    };
    let found = match mode {
        CheckMode::Exact => {
            ensure_size("exact lower-regularity part size", n, LOWER_EXACT_MAX_PART)?;
            ensure_size("exact lower-regularity arity", k, LOWER_EXACT_MAX_ARITY)?;
            let masks: Vec<u64> = (1u64..1 << n).filter(|m| m.count_ones() as usize >= lo).collect();
            let mut odo = vec![0usize; k - 1];
            loop {
                let prefix: Vec<Vec<usize>> = odo.iter().map(|&i| mask_members(masks[i])).collect();
                if let Some(c) = probe(prefix) {
                    break Some(c);
                }
                let mut j = 0;
                while j < odo.len() {
                    odo[j] += 1;
                    if odo[j] < masks.len() {
                        break;
                    }
                    odo[j] = 0;
                    j += 1;
                }
                if j == odo.len() {
                    break None;
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).find_map(|_| probe((0..k - 1).map(|_| random_subset(&mut rng, n, lo, n)).collect()))
        }
    };
    Ok(RegularityVerdict::settle(found, mode))
}

/// A tuple over a subset of root positions with its degree and the bound it is held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionWitness {
    /// Indices into the root list.
    pub positions: Vec<usize>,
    pub tuple: Vec<usize>,
    pub degree: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensibilityReport {
    pub holds: bool,
    /// Largest `degree / bound` over all positions and tuples of positive degree.
    pub worst: Option<ExtensionWitness>,
}

/// Upper-extensibility with parameter `A·q`: for every `S ⊆ R`, each tuple on `S`
/// has degree at most `(Aq)^{e(F[R]) − e(F[S])}·n^{|R| − |S|}`.
pub fn check_upper_extensible(gr: &RootHypergraph, rg: &RootedGraph, q: f64, a: f64) -> Result<ExtensibilityReport> {
    check_fit(gr, rg)?;
    check_nonneg("q", q)?;
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::Parameter(format!("A = {a} must be at least 1")));
    }
    let k = gr.arity();
    ensure_size("root arity", k, 16)?;
    let g = rg.graph();
    let roots = rg.roots();
    let aq = a * q;
    let n = gr.n() as f64;
    let e_r = rg.root_edge_count() as i32;
    let mut worst: Option<(f64, ExtensionWitness)> = None;
    for s in 0u32..1 << k {
        let pos = mask_members(s as u64);
        let e_s = pos
            .iter()
            .enumerate()
            .map(|(i, &x)| pos[i + 1..].iter().filter(|&&y| g.has_edge(roots[x], roots[y])).count())
            .sum::<usize>() as i32;
        let bound = aq.powi(e_r - e_s) * n.powi(k as i32 - pos.len() as i32);
        let mut deg: HashMap<Vec<usize>, u64> = HashMap::new();
        for t in gr.tuples() {
            *deg.entry(pos.iter().map(|&x| t[x]).collect()).or_default() += 1;
        }
        let mut local: Vec<_> = deg.into_iter().collect();
        local.sort();
        for (tuple, d) in local {
            let ratio = if bound > 0.0 { d as f64 / bound } else { f64::INFINITY };
            if worst.as_ref().is_none_or(|(r, _)| ratio > *r) {
                worst = Some((
                    ratio,
                    ExtensionWitness {
                        positions: pos.clone(),
                        tuple,
                        degree: d,
                        bound,
                    },
                ));
            }
        }
    }
    let holds = worst.as_ref().is_none_or(|(_, w)| !exceeds(w.degree as f64, w.bound));
    Ok(ExtensibilityReport {
        holds,
        worst: worst.map(|(_, w)| w),
    })
}
