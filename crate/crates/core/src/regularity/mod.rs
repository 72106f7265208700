//! Checkers for sparse regularity notions on explicit small instances.
//!
//! Exact mode enumerates every qualifying subset family and returns
//! `Verified` or `Falsified`. Sampled mode can only return `Falsified` or
//! `Unfalsified`. Each subset of one side is paired with the extremal subsets
//! of the other side, which are the top or bottom vertices by degree.

mod codegree;
mod pair;
mod partite;
mod roots;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use codegree::{
    codegree_function, delta_lemma_instance, extension_hypergraph, CodegreeReport, DeltaLemmaInstance, Hypergraph,
};
pub use pair::{check_regular_pair, check_upper_uniform, BipartitePair};
pub use partite::{
    build_t, check_class_membership, count_partite_copies, random_partite_system, PartiteSystem, PartiteSystemJson,
    TMultiset, PARTITE_MAX_PART, PARTITE_MAX_PATTERN,
};
pub use roots::{check_lower_regular, check_upper_extensible, ExtensibilityReport, RootHypergraph};

use crate::error::{Error, Result};

/// Relative slack on floating comparisons against thresholds.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

/// A violating subset family with the measured quantity and the bound it breaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub subsets: Vec<Vec<usize>>,
    pub observed: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RegularityVerdict {
    Verified,
    Falsified(Certificate),
    Unfalsified { samples: usize },
}

impl RegularityVerdict {
    pub fn is_falsified(&self) -> bool {
        matches!(self, RegularityVerdict::Falsified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            RegularityVerdict::Falsified(c) => Some(c),
            _ => None,
        }
    }

    fn settle(found: Option<Certificate>, mode: CheckMode) -> RegularityVerdict {
        match (found, mode) {
            (Some(c), _) => RegularityVerdict::Falsified(c),
            (None, CheckMode::Exact) => RegularityVerdict::Verified,
            (None, CheckMode::Sampled { samples, .. }) => RegularityVerdict::Unfalsified { samples },
        }
    }
}

/// Smallest admissible size of `V' ⊆_ε V`: `max(1, ⌈ε|V|⌉)`.
pub fn min_subset_size(eps: f64, size: usize) -> usize {
    ((eps * size as f64 - TOLERANCE).ceil().max(1.0)) as usize
}

pub(crate) fn check_fraction(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {x} must lie in (0, 1]")))
    }
}

pub(crate) fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {x} must be finite and nonnegative")))
    }
}

/// `x` exceeds `bound` beyond floating slack.
pub(crate) fn exceeds(x: f64, bound: f64) -> bool {
    x > bound + TOLERANCE * bound.abs().max(1.0)
}

/// Uniform random subset of `0..n` with size uniform in `lo..=hi`, sorted.
pub(crate) fn random_subset<R: Rng>(rng: &mut R, n: usize, lo: usize, hi: usize) -> Vec<usize> {
    let size = rng.gen_range(lo..=hi);
    let mut v = index::sample(rng, n, size).into_vec();
    v.sort_unstable();
    v
}

/// Indices of `deg` ordered by degree, ties broken by index.
pub(crate) fn order_by_degree(deg: &[u64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..deg.len()).collect();
    idx.sort_by_key(|&i| (deg[i], i));
    idx
}

/// Sorted sub-slice helper for certificates.
pub(crate) fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

pub(crate) fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}
