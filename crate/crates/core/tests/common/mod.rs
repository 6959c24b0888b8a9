//! Shared test oracles, deliberately independent of the library's search
//! machinery: plain subset/permutation enumeration only.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::BTreeSet;

use itertools::Itertools;
use rlab_core::hypergraph::KGraph;

/// Every copy of `target` in `host` as (sorted vertex set, sorted edge list),
/// by brute force over vertex subsets and bijections.
pub fn enumerate_copies(host: &KGraph, target: &KGraph) -> Vec<(Vec<u32>, Vec<Vec<u32>>)> {
    let tv = target.vertex_count();
    let mut copies: BTreeSet<(Vec<u32>, Vec<Vec<u32>>)> = BTreeSet::new();
    for subset in (0..host.vertex_count() as u32).combinations(tv) {
        for perm in subset.iter().copied().permutations(tv) {
            let mut edges: Vec<Vec<u32>> = Vec::with_capacity(target.edge_count());
            let mut ok = true;
            for e in target.edges() {
                let mut img: Vec<u32> = e.iter().map(|&x| perm[x as usize]).collect();
                img.sort_unstable();
                if !host.has_edge(&img) {
                    ok = false;
                    break;
                }
                edges.push(img);
            }
            if ok {
                edges.sort_unstable();
                copies.insert((subset.clone(), edges));
            }
        }
    }
    copies.into_iter().collect()
}

pub fn naive_copy_count(host: &KGraph, target: &KGraph) -> u64 {
    enumerate_copies(host, target).len() as u64
}

/// Exhaustive-minimal-subgraph core oracle: the subgraph with the fewest
/// edges receiving a homomorphism from `f`, scanned over all edge subsets in
/// (popcount, lexicographic) order. Returns it normalized.
pub fn exhaustive_core_oracle(f: &KGraph) -> KGraph {
    let e = f.edge_count();
    assert!(e > 0, "oracle needs at least one edge");
    assert!(e <= 20, "oracle is exponential in the edge count");
    let mut masks: Vec<u64> = (1..1u64 << e).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let edges: Vec<Vec<u32>> = f
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, edge)| edge.clone())
            .collect();
        let target = KGraph::new(f.k(), f.vertex_count(), edges).unwrap();
        if rlab_core::homomorphism::find_homomorphism(f, &target)
            .unwrap()
            .is_some()
        {
            let (normalized, _) = target.normalize();
            return normalized;
        }
    }
    unreachable!("the full edge set always receives the identity homomorphism");
}
