use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_fraction, check_nonneg, exceeds, mask_members, min_subset_size, order_by_degree, random_subset, sorted,
    Certificate, CheckMode, RegularityVerdict,
};
use crate::error::{ensure_size, Error, Result};
use crate::graph::Graph;

/// Exact pair checks enumerate the subsets of the smaller side.
pub const PAIR_EXACT_MAX_SIDE: usize = 16;
pub const UNIFORM_EXACT_MAX_VERTICES: usize = 20;

/// A bipartite graph between `U = 0..left` and `W = 0..right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct BipartitePair {
    left: usize,
    right: usize,
    /// `nbrs[0][u]` lists the `W`-neighbours of `u`; `nbrs[1][w]` the `U`-neighbours of `w`.
    nbrs: [Vec<Vec<usize>>; 2],
    edges: usize,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    left: usize,
    right: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<PairRepr> for BipartitePair {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        BipartitePair::new(r.left, r.right, r.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<BipartitePair> for PairRepr {
    fn from(p: BipartitePair) -> Self {
        PairRepr {
            left: p.left,
            right: p.right,
            edges: p.edge_list().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl BipartitePair {
    pub fn new(left: usize, right: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<BipartitePair> {
        if left == 0 || right == 0 {
            return Err(Error::Parameter("both sides of a pair must be nonempty".into()));
        }
        let mut nbrs = [vec![Vec::new(); left], vec![Vec::new(); right]];
        let mut count = 0;
        for (u, w) in edges {
            if u >= left || w >= right {
                return Err(Error::InvalidGraph(format!("pair edge ({u},{w}) out of range")));
            }
            if nbrs[0][u].contains(&w) {
                return Err(Error::InvalidGraph(format!("repeated pair edge ({u},{w})")));
            }
            nbrs[0][u].push(w);
            nbrs[1][w].push(u);
            count += 1;
        }
        for side in nbrs.iter_mut() {
            for l in side.iter_mut() {
                l.sort_unstable();
            }
        }
        Ok(BipartitePair {
            left,
            right,
            nbrs,
            edges: count,
        })
    }

    pub fn complete(left: usize, right: usize) -> Result<BipartitePair> {
        BipartitePair::new(left, right, (0..left).flat_map(|u| (0..right).map(move |w| (u, w))))
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.nbrs[0][u].binary_search(&w).is_ok()
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.nbrs[0]
            .iter()
            .enumerate()
            .flat_map(|(u, ws)| ws.iter().map(move |&w| (u, w)))
            .collect()
    }

    pub fn density(&self) -> f64 {
        self.edges as f64 / (self.left * self.right) as f64
    }

    /// `|E(U', W')|`.
    pub fn edges_between(&self, us: &[usize], ws: &[usize]) -> usize {
        let mut inw = vec![false; self.right];
        for &w in ws {
            inw[w] = true;
        }
        us.iter()
            .map(|&u| self.nbrs[0][u].iter().filter(|&&w| inw[w]).count())
            .sum()
    }

    fn size(&self, side: usize) -> usize {
        [self.left, self.right][side]
    }
}

/// Degrees of the vertices of side `1 − x` into `members ⊆ side x`.
fn degrees_into(pair: &BipartitePair, x: usize, members: &[usize]) -> Vec<u64> {
    let mut deg = vec![0u64; pair.size(1 - x)];
    for &a in members {
        for &y in &pair.nbrs[x][a] {
            deg[y] += 1;
        }
    }
    deg
}

/// Whether `(U', W')` with `|U'|,|W'| ⊆_ε` deviates from the pair density by more than `ε·p`.
pub fn check_regular_pair(pair: &BipartitePair, eps: f64, p: f64, mode: CheckMode) -> Result<RegularityVerdict> {
    check_fraction("epsilon", eps)?;
    check_nonneg("p", p)?;
    let global = pair.density();
    let bound = eps * p;
    // enumerate the smaller side
    let x = if pair.left <= pair.right { 0 } else { 1 };
    let (nx, ny) = (pair.size(x), pair.size(1 - x));
    let (kx, ky) = (min_subset_size(eps, nx), min_subset_size(eps, ny));
    if kx > nx || ky > ny {
        return Ok(RegularityVerdict::settle(None, mode));
    }
    let probe = |members: Vec<usize>| -> Option<Certificate> {
        let deg = degrees_into(pair, x, &members);
        let order = order_by_degree(&deg);
        let a = members.len() as f64;
        let mut bottom = 0u64;
        let mut prefix = Vec::with_capacity(ny + 1);
        prefix.push(0u64);
        for &y in &order {
            bottom += deg[y];
            prefix.push(bottom);
        }
        let total = bottom;
        for s in ky..=ny {
            let low = prefix[s] as f64 / (a * s as f64);
            let high = (total - prefix[ny - s]) as f64 / (a * s as f64);
            let (dev, chosen) = if high - global >= global - low {
                (high - global, order[ny - s..].to_vec())
            } else {
                (global - low, order[..s].to_vec())
            };
            if exceeds(dev, bound) {
                let (mut us, mut ws) = (members.clone(), sorted(chosen));
                if x == 1 {
                    std::mem::swap(&mut us, &mut ws);
                }
                return Some(Certificate {
                    subsets: vec![us, ws],
                    observed: dev,
                    bound,
                });
            }
        }
        None
    };
    let found = match mode {
        CheckMode::Exact => {
            ensure_size("exact pair side", nx, PAIR_EXACT_MAX_SIDE)?;
            (1u64..1 << nx)
                .filter(|m| m.count_ones() as usize >= kx)
                .find_map(|m| probe(mask_members(m)))
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).find_map(|_| probe(random_subset(&mut rng, nx, kx, nx)))
        }
    };
    Ok(RegularityVerdict::settle(found, mode))
}

/// Whether all disjoint `U, W ⊆_η V` satisfy `|E(U,W)| ≤ (1+η)·p·|U|·|W|`.
pub fn check_upper_uniform(g: &Graph, eta: f64, p: f64, mode: CheckMode) -> Result<RegularityVerdict> {
    check_fraction("eta", eta)?;
    check_fraction("p", p)?;
    let n = g.v();
    let k = min_subset_size(eta, n);
    if 2 * k > n {
        return Ok(RegularityVerdict::settle(None, mode));
    }
    let probe = |us: Vec<usize>| -> Option<Certificate> {
        let mut inside = vec![false; n];
        for &u in &us {
            inside[u] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
        let deg: Vec<u64> = rest
            .iter()
            .map(|&v| g.neighbors(v).filter(|&x| inside[x]).count() as u64)
            .collect();
        let order = order_by_degree(&deg);
        let a = us.len() as f64;
        let mut top = 0u64;
        for (i, &j) in order.iter().rev().enumerate() {
            top += deg[j];
            let s = i + 1;
            if s < k {
                continue;
            }
            let bound = (1.0 + eta) * p * a * s as f64;
            if exceeds(top as f64, bound) {
                let ws = sorted(order[order.len() - s..].iter().map(|&j| rest[j]).collect());
                return Some(Certificate {
                    subsets: vec![us.clone(), ws],
                    observed: top as f64,
                    bound,
                });
            }
        }
        None
    };
    let found = match mode {
        CheckMode::Exact => {
            ensure_size("exact uniformity vertices", n, UNIFORM_EXACT_MAX_VERTICES)?;
            (1u64..1 << n)
                .filter(|m| {
                    let c = m.count_ones() as usize;
                    c >= k && n - c >= k
                })
                .find_map(|m| probe(mask_members(m)))
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).find_map(|_| probe(random_subset(&mut rng, n, k, n - k)))
        }
    };
    Ok(RegularityVerdict::settle(found, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Deviation of `(U', W')` recomputed from scratch.
    fn deviation(pair: &BipartitePair, us: &[usize], ws: &[usize]) -> f64 {
        let e = pair.edges_between(us, ws) as f64;
        (e / (us.len() * ws.len()) as f64 - pair.density()).abs()
    }

    fn half_complete(n: usize) -> BipartitePair {
        let h = n / 2;
        BipartitePair::new(n, n, (0..h).flat_map(|u| (0..n).map(move |w| (u, w)))).unwrap()
    }

    #[test]
    fn complete_and_empty_pairs_are_regular() {
        let k = BipartitePair::complete(7, 9).unwrap();
        let e = BipartitePair::new(8, 5, []).unwrap();
        for eps in [0.05, 0.3, 1.0] {
            assert_eq!(
                check_regular_pair(&k, eps, 1.0, CheckMode::Exact).unwrap(),
                RegularityVerdict::Verified
            );
            for p in [0.0, 0.2, 1.0] {
                assert_eq!(
                    check_regular_pair(&e, eps, p, CheckMode::Exact).unwrap(),
                    RegularityVerdict::Verified
                );
            }
        }
    }

    #[test]
    fn half_complete_pair_is_irregular() {
        let pair = half_complete(10);
        let p = pair.density();
        let v = check_regular_pair(&pair, 0.4, p, CheckMode::Exact).unwrap();
        let c = v.certificate().expect("falsified");
        assert!(c.subsets[0].len() >= 4 && c.subsets[1].len() >= 4);
        let dev = deviation(&pair, &c.subsets[0], &c.subsets[1]);
        assert!((dev - c.observed).abs() < 1e-12);
        assert!(dev > 0.4 * p);
        let s = check_regular_pair(&pair, 0.4, p, CheckMode::Sampled { samples: 200, seed: 1 }).unwrap();
        let c = s.certificate().expect("sampled falsifies");
        assert!(deviation(&pair, &c.subsets[0], &c.subsets[1]) > 0.4 * p);
    }

    /// Brute force over both sides, no extremal shortcut.
    fn brute_regular(pair: &BipartitePair, eps: f64, p: f64) -> bool {
        let (ku, kw) = (min_subset_size(eps, pair.left), min_subset_size(eps, pair.right));
        for mu in 1u64..1 << pair.left {
            if (mu.count_ones() as usize) < ku {
                continue;
            }
            for mw in 1u64..1 << pair.right {
                if (mw.count_ones() as usize) < kw {
                    continue;
                }
                if deviation(pair, &mask_members(mu), &mask_members(mw)) > eps * p + 1e-9 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn exact_mode_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..80 {
            let (l, r) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let dens: f64 = rng.gen();
            let edges: Vec<_> = (0..l)
                .flat_map(|u| (0..r).map(move |w| (u, w)))
                .filter(|_| rng.gen::<f64>() < dens)
                .collect();
            let pair = BipartitePair::new(l, r, edges).unwrap();
            let eps = rng.gen_range(0.2..1.0);
            let p = pair.density().max(0.1);
            let v = check_regular_pair(&pair, eps, p, CheckMode::Exact).unwrap();
            assert_eq!(!v.is_falsified(), brute_regular(&pair, eps, p), "{pair:?} eps={eps}");
            let s = check_regular_pair(&pair, eps, p, CheckMode::Sampled { samples: 30, seed: 2 }).unwrap();
            match s {
                RegularityVerdict::Verified => panic!("sampled mode verified"),
                RegularityVerdict::Falsified(c) => {
                    assert!(v.is_falsified());
                    assert!(deviation(&pair, &c.subsets[0], &c.subsets[1]) > eps * p);
                }
                RegularityVerdict::Unfalsified { samples } => assert_eq!(samples, 30),
            }
        }
    }

    #[test]
    fn exact_pair_size_limit() {
        let pair = BipartitePair::complete(17, 17).unwrap();
        assert!(matches!(
            check_regular_pair(&pair, 0.5, 1.0, CheckMode::Exact),
            Err(Error::SizeExceeded { .. })
        ));
        let lopsided = BipartitePair::complete(3, 200).unwrap();
        assert!(check_regular_pair(&lopsided, 0.5, 1.0, CheckMode::Exact).is_ok());
    }

    #[test]
    fn uniformity_examples() {
        for n in [6, 10] {
            let empty = Graph::empty(n);
            let kn = Graph::complete(n);
            assert_eq!(
                check_upper_uniform(&empty, 0.2, 0.3, CheckMode::Exact).unwrap(),
                RegularityVerdict::Verified
            );
            assert_eq!(
                check_upper_uniform(&kn, 0.2, 1.0, CheckMode::Exact).unwrap(),
                RegularityVerdict::Verified
            );
            let v = check_upper_uniform(&kn, 0.1, 0.5, CheckMode::Exact).unwrap();
            let c = v.certificate().unwrap();
            let (us, ws) = (&c.subsets[0], &c.subsets[1]);
            assert!(us.iter().all(|u| !ws.contains(u)));
            let e = us
                .iter()
                .map(|&u| ws.iter().filter(|&&w| kn.has_edge(u, w)).count())
                .sum::<usize>();
            assert_eq!(e as f64, c.observed);
            assert!(e as f64 > 1.1 * 0.5 * (us.len() * ws.len()) as f64);
            let s = check_upper_uniform(&kn, 0.1, 0.5, CheckMode::Sampled { samples: 5, seed: 0 }).unwrap();
            assert!(s.is_falsified());
        }
        let big = Graph::empty(40);
        assert!(check_upper_uniform(&big, 0.1, 0.5, CheckMode::Exact).is_err());
        assert_eq!(
            check_upper_uniform(&big, 0.1, 0.5, CheckMode::Sampled { samples: 7, seed: 0 }).unwrap(),
            RegularityVerdict::Unfalsified { samples: 7 }
        );
    }

    #[test]
    fn bad_parameters() {
        let pair = BipartitePair::complete(2, 2).unwrap();
        assert!(check_regular_pair(&pair, 0.0, 1.0, CheckMode::Exact).is_err());
        assert!(check_regular_pair(&pair, 0.5, -1.0, CheckMode::Exact).is_err());
        assert!(BipartitePair::new(2, 2, [(0, 0), (0, 0)]).is_err());
        assert!(BipartitePair::new(0, 2, []).is_err());
        let back: BipartitePair = serde_json::from_str(&serde_json::to_string(&pair).unwrap()).unwrap();
        assert_eq!(back, pair);
    }
}
