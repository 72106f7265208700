//! Maximization of a ratio over all induced subgraphs by scanning vertex masks.

use std::cmp::Ordering;

use crate::graph::Graph;

pub const EXHAUSTIVE_MAX_VERTICES: usize = 20;
pub(crate) const LISTED_MAXIMIZERS: usize = 64;

/// Statistics of one induced subgraph `G[S]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sub {
    pub v: i128,
    pub e: i128,
    pub roots: i128,
    pub root_edges: i128,
}

/// A nonnegative extended ratio `num/den`, `den > 0`, compared exactly.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Val {
    Frac(i128, i128),
    Inf,
}

impl Val {
    pub fn cmp(&self, other: &Val) -> Ordering {
        match (*self, *other) {
            (Val::Inf, Val::Inf) => Ordering::Equal,
            (Val::Inf, _) => Ordering::Greater,
            (_, Val::Inf) => Ordering::Less,
            (Val::Frac(a, b), Val::Frac(c, d)) => (a * d).cmp(&(c * b)),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Scan {
    pub best: Option<Val>,
    /// The first `LISTED_MAXIMIZERS` maximizing masks in increasing order.
    pub masks: Vec<u32>,
    pub count: u64,
    /// The full vertex set is among the maximizers.
    pub full_attains: bool,
}

/// Evaluates `eval` on every nonempty vertex subset; `None` marks inadmissible subsets.
pub(crate) fn scan(g: &Graph, root_mask: u32, eval: impl Fn(Sub) -> Option<Val>) -> Scan {
    let n = g.v();
    assert!(n <= EXHAUSTIVE_MAX_VERTICES);
    let nbr: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, w| m | 1 << w)).collect();
    let full = 1usize << n;
    let mut edges = vec![0u16; full];
    let mut out = Scan {
        best: None,
        masks: Vec::new(),
        count: 0,
        full_attains: false,
    };
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        edges[s] = edges[rest] + (nbr[low] & rest as u32).count_ones() as u16;
        let sub = Sub {
            v: s.count_ones() as i128,
            e: edges[s] as i128,
            roots: (s as u32 & root_mask).count_ones() as i128,
            root_edges: edges[s & root_mask as usize] as i128,
        };
        let Some(val) = eval(sub) else { continue };
        let ord = match &out.best {
            None => Ordering::Greater,
            Some(b) => val.cmp(b),
        };
        match ord {
            Ordering::Greater => {
                out.best = Some(val);
                out.masks.clear();
                out.masks.push(s as u32);
                out.count = 1;
            }
            Ordering::Equal => {
                if out.masks.len() < LISTED_MAXIMIZERS {
                    out.masks.push(s as u32);
                }
                out.count += 1;
            }
            Ordering::Less => {}
        }
        // the full mask comes last, so nothing can displace it afterwards
        if s == full - 1 && ord != Ordering::Less {
            out.full_attains = true;
        }
    }
    out
}

pub(crate) fn mask_vertices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}
