//! Isomorphism-class enumeration of small graphs by vertex augmentation.
//!
//! Every connected graph on `k` vertices arises from a connected graph on
//! `k − 1` vertices by adding a vertex with a nonempty neighborhood (delete a
//! leaf of a spanning tree). Candidates are deduplicated by canonical label.

use std::collections::BTreeMap;

use super::canon::{canonical_labeling, CanonicalLabel};
use super::Graph;
use crate::error::{ensure_size, Result};

pub const ENUMERATION_MAX_VERTICES: usize = 7;

/// One representative per isomorphism class of connected graphs on `1..=v_max` vertices.
///
/// Representatives are in canonical vertex order, sorted by `(v, e, label)`.
pub fn enumerate_connected_graphs(v_max: usize) -> Result<Vec<Graph>> {
    enumerate(v_max, true)
}

/// One representative per isomorphism class of all graphs on `1..=v_max` vertices.
pub fn enumerate_graphs(v_max: usize) -> Result<Vec<Graph>> {
    enumerate(v_max, false)
}

fn enumerate(v_max: usize, connected: bool) -> Result<Vec<Graph>> {
    ensure_size("enumeration vertices", v_max, ENUMERATION_MAX_VERTICES)?;
    let mut out = Vec::new();
    if v_max == 0 {
        return Ok(out);
    }
    let mut level = vec![Graph::empty(1)];
    out.extend(level.iter().cloned());
    for k in 2..=v_max {
        let mut next: BTreeMap<(usize, CanonicalLabel), Graph> = BTreeMap::new();
        for g in &level {
            let lo = if connected { 1u32 } else { 0 };
            for nbhd in lo..(1u32 << (k - 1)) {
                let edges = g
                    .edges()
                    .iter()
                    .copied()
                    .chain((0..k - 1).filter(|&i| nbhd >> i & 1 == 1).map(|i| (i, k - 1)));
                let cand = Graph::from_edges_dedup(k, edges);
                let canon = canonical_labeling(&cand, &vec![0; k]);
                next.entry((cand.e(), canon.label.clone()))
                    .or_insert_with(|| cand.relabel(&canon.perm()));
            }
        }
        level = next.into_values().collect();
        out.extend(level.iter().cloned());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let one = enumerate_connected_graphs(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], Graph::empty(1));
        let three = enumerate_connected_graphs(3).unwrap();
        assert_eq!(three.len(), 4);
        let edge_counts: Vec<usize> = three.iter().map(Graph::e).collect();
        assert_eq!(edge_counts, vec![0, 1, 2, 3]);
        assert_eq!(enumerate_connected_graphs(5).unwrap().len(), 31);
        assert!(enumerate_connected_graphs(8).is_err());
    }

    #[test]
    fn per_order_counts_match_known_sequences() {
        let conn = enumerate_connected_graphs(7).unwrap();
        let all = enumerate_graphs(6).unwrap();
        let by_v = |gs: &[Graph], v: usize| gs.iter().filter(|g| g.v() == v).count();
        let conn_counts: Vec<usize> = (1..=7).map(|v| by_v(&conn, v)).collect();
        assert_eq!(conn_counts, vec![1, 1, 2, 6, 21, 112, 853]);
        let all_counts: Vec<usize> = (1..=6).map(|v| by_v(&all, v)).collect();
        assert_eq!(all_counts, vec![1, 2, 4, 11, 34, 156]);
        assert!(conn.iter().all(Graph::is_connected));
    }
}
