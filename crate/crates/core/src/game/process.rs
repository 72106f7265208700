//! The random graph process: a uniformly random ordering of all `C(n,2)` pairs.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Edge;

/// ChaCha8 stream carrying the edge order.
pub const EDGE_STREAM: u64 = 0;
/// ChaCha8 stream carrying strategy randomness.
pub const STRATEGY_STREAM: u64 = 1;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Lazy Fisher–Yates shuffle of the lexicographically enumerated pairs of `[n]`.
///
/// Only displaced positions are stored, so a game that stops early pays for
/// the rounds it played.
#[derive(Debug, Clone)]
pub struct EdgeProcess {
    n: usize,
    total: u64,
    next: u64,
    displaced: HashMap<u64, u64>,
    rng: ChaCha8Rng,
}

/// The edges of `K_n` in uniformly random order, determined by `seed`.
pub fn edge_process(n: usize, seed: u64) -> EdgeProcess {
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    EdgeProcess {
        n,
        total,
        next: 0,
        displaced: HashMap::new(),
        rng: stream_rng(seed, EDGE_STREAM),
    }
}

impl EdgeProcess {
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for EdgeProcess {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        if self.next >= self.total {
            return None;
        }
        let i = self.next;
        let j = self.rng.gen_range(i..self.total);
        let at = |d: &HashMap<u64, u64>, k: u64| d.get(&k).copied().unwrap_or(k);
        let picked = at(&self.displaced, j);
        let here = at(&self.displaced, i);
        self.displaced.insert(j, here);
        self.displaced.remove(&i);
        self.next += 1;
        Some(pair_at(self.n, picked))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

/// Offset of the first pair `(a, ·)` in lexicographic order.
fn row_start(n: u64, a: u64) -> u64 {
    a * (2 * n - a - 1) / 2
}

/// The `k`-th pair `(a, b)`, `a < b`, in lexicographic order.
pub fn pair_at(n: usize, k: u64) -> Edge {
    let n64 = n as u64;
    let (mut lo, mut hi) = (0u64, n64 - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if row_start(n64, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = lo;
    let b = a + 1 + (k - row_start(n64, a));
    (a as usize, b as usize)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    #[test]
    fn pair_indexing_is_lexicographic() {
        for n in 2..12 {
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    assert_eq!(pair_at(n, k), (a, b));
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn process_is_a_permutation() {
        for n in [2, 3, 7, 30] {
            let mut seen: Vec<Edge> = edge_process(n, 99).collect();
            assert_eq!(seen.len(), n * (n - 1) / 2);
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), n * (n - 1) / 2);
        }
        assert_eq!(edge_process(2, 5).collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(edge_process(1, 5).count(), 0);
    }

    #[test]
    fn same_seed_same_order() {
        let a: Vec<Edge> = edge_process(40, 7).collect();
        let b: Vec<Edge> = edge_process(40, 7).collect();
        let c: Vec<Edge> = edge_process(40, 8).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn triangle_orders_are_uniform() {
        let mut freq: BTreeMap<Vec<Edge>, u32> = BTreeMap::new();
        let draws = 6000;
        for seed in 0..draws {
            *freq.entry(edge_process(3, seed).collect()).or_default() += 1;
        }
        assert_eq!(freq.len(), 6);
        let mut chi2 = 0.0;
        for &c in freq.values() {
            let p = c as f64 / draws as f64;
            assert!((p - 1.0 / 6.0).abs() <= 0.05, "frequency {p}");
            let exp = draws as f64 / 6.0;
            chi2 += (c as f64 - exp).powi(2) / exp;
        }
        // 5 degrees of freedom, 0.999 quantile
        assert!(chi2 < 20.52, "chi-square {chi2}");
    }
}
