//! Brute-force enumeration of small connected graphs up to isomorphism.
//!
//! Every edge subset is mapped to its canonical form, the minimum adjacency
//! bitmask over all node permutations, so the output order is deterministic.

use std::collections::BTreeSet;

use super::graph::Graph;
use crate::error::{invalid, Error, Result};

pub const MAX_ENUMERATION_NODES: usize = 6;

fn pair_slots(n: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            slots.push((i, j));
        }
    }
    slots
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

fn mask_to_graph(n: usize, mask: u32, slots: &[(usize, usize)]) -> Graph {
    let pairs: Vec<(usize, usize)> = slots
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &p)| p)
        .collect();
    Graph::unweighted(n, &pairs).expect("slots are valid pairs")
}

/// One canonical representative per isomorphism class of connected simple
/// graphs on `n` nodes, in increasing canonical-mask order.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 {
        return Err(invalid("enumeration needs at least one node"));
    }
    if n > MAX_ENUMERATION_NODES {
        return Err(Error::ResourceLimit {
            requested: n,
            limit: MAX_ENUMERATION_NODES,
        });
    }
    let slots = pair_slots(n);
    let mut slot_index = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in slots.iter().enumerate() {
        slot_index[i][j] = k;
        slot_index[j][i] = k;
    }
    // For each permutation, where each slot bit moves to.
    let relabel: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|perm| {
            slots
                .iter()
                .map(|&(i, j)| slot_index[perm[i]][perm[j]])
                .collect()
        })
        .collect();

    let mut classes = BTreeSet::new();
    for mask in 0u32..(1u32 << slots.len()) {
        let canonical = relabel
            .iter()
            .map(|map| {
                map.iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(0u32, |acc, (_, &to)| acc | (1 << to))
            })
            .min()
            .unwrap();
        if canonical != mask {
            continue;
        }
        if mask_to_graph(n, mask, &slots).is_connected() {
            classes.insert(mask);
        }
    }
    Ok(classes
        .into_iter()
        .map(|mask| mask_to_graph(n, mask, &slots))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &Graph) -> BTreeSet<(usize, usize)> {
        g.edges().iter().map(|&(i, j, _)| (i, j)).collect()
    }

    // Oracle independent of the canonical mask: try every relabeling.
    fn isomorphic(a: &Graph, b: &Graph) -> bool {
        if a.n_nodes() != b.n_nodes() || a.edges().len() != b.edges().len() {
            return false;
        }
        let target = edge_set(b);
        permutations(a.n_nodes()).iter().any(|perm| {
            a.edges()
                .iter()
                .map(|&(i, j, _)| {
                    let (x, y) = (perm[i], perm[j]);
                    (x.min(y), x.max(y))
                })
                .collect::<BTreeSet<_>>()
                == target
        })
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[5], vec![2, 1, 0]);
    }

    #[test]
    fn connected_graph_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| enumerate_connected_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn members_pairwise_non_isomorphic_and_connected() {
        for n in 1..=5 {
            let graphs = enumerate_connected_graphs(n).unwrap();
            for (a, ga) in graphs.iter().enumerate() {
                assert!(ga.is_connected());
                assert!(ga.edges().iter().all(|e| e.2 == 1.0));
                for gb in &graphs[a + 1..] {
                    assert!(!isomorphic(ga, gb));
                }
            }
        }
    }

    #[test]
    fn every_connected_graph_is_covered() {
        // each connected edge subset on 4 nodes is isomorphic to some member
        let n = 4;
        let reps = enumerate_connected_graphs(n).unwrap();
        let slots = pair_slots(n);
        for mask in 0u32..(1 << slots.len()) {
            let g = mask_to_graph(n, mask, &slots);
            if g.is_connected() {
                assert_eq!(reps.iter().filter(|r| isomorphic(r, &g)).count(), 1);
            }
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            enumerate_connected_graphs(7),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(enumerate_connected_graphs(0).is_err());
    }

    #[test]
    fn output_is_deterministic() {
        assert_eq!(
            enumerate_connected_graphs(4).unwrap(),
            enumerate_connected_graphs(4).unwrap()
        );
    }
}
