//! Structural trichotomy on the 2-shadow: chordality with self-certifying
//! outcomes, maximum cliques in chordal graphs, and the witness selection
//! the instance builders consume.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homomorphism::{self, CoreOpts};
use crate::hypergraph::{Graph, KGraph};

/// Outcome of chordality testing: a perfect elimination ordering, or a
/// chordless cycle of length at least four. Exactly one is returned and both
/// are verified before being handed out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chordality {
    Chordal { peo: Vec<u32> },
    ChordlessCycle { cycle: Vec<u32> },
}

/// Lexicographic BFS visit order, deterministic (initial bucket in id order,
/// ties broken by position).
pub fn lex_bfs(g: &Graph) -> Vec<u32> {
    let n = g.n();
    // partition refinement over an ordered list of buckets
    let mut buckets: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    let mut order = Vec::with_capacity(n);
    while let Some(first) = buckets.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            buckets.remove(0);
        }
        order.push(v);
        let mut next: Vec<Vec<u32>> = Vec::with_capacity(buckets.len() * 2);
        for bucket in buckets.drain(..) {
            let (adj, rest): (Vec<u32>, Vec<u32>) =
                bucket.into_iter().partition(|&u| g.is_edge(v, u));
            if !adj.is_empty() {
                next.push(adj);
            }
            if !rest.is_empty() {
                next.push(rest);
            }
        }
        buckets = next;
    }
    order
}

/// Checks the perfect elimination property directly: for every vertex, its
/// neighbors later in the order are pairwise adjacent.
pub fn is_peo(g: &Graph, order: &[u32]) -> bool {
    let n = g.n();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if (v as usize) >= n || pos[v as usize] != usize::MAX {
            return false;
        }
        pos[v as usize] = i;
    }
    for &v in order {
        let later: Vec<u32> = g
            .neighbors(v)
            .iter()
            .map(|u| u as u32)
            .filter(|&u| pos[u as usize] > pos[v as usize])
            .collect();
        if !g.is_clique(&later) {
            return false;
        }
    }
    true
}

/// Shortest chordless cycle of length >= `min_len`, smallest start vertex
/// and lexicographically smallest traversal among ties. Enumerates canonical
/// induced paths; intended for the small graphs this crate analyzes.
pub fn shortest_chordless_cycle(g: &Graph, min_len: usize) -> Option<Vec<u32>> {
    let n = g.n();
    for len in min_len..=n {
        for start in 0..n as u32 {
            let mut path = vec![start];
            if let Some(cycle) = extend_cycle(g, &mut path, len) {
                return Some(cycle);
            }
        }
    }
    None
}

/// DFS extension of a canonical induced cycle: all vertices exceed the start
/// vertex, the second vertex is smaller than the last (direction canon), and
/// non-consecutive pairs are non-adjacent.
fn extend_cycle(g: &Graph, path: &mut Vec<u32>, len: usize) -> Option<Vec<u32>> {
    let depth = path.len();
    let start = path[0];
    if depth == len {
        return if g.is_edge(*path.last().unwrap(), start) && path[1] < path[len - 1] {
            Some(path.clone())
        } else {
            None
        };
    }
    let last = *path.last().unwrap();
    for w in g.neighbors(last).iter().map(|u| u as u32) {
        if w <= start || path.contains(&w) {
            continue;
        }
        // induced: w may touch only its predecessor, except the closing
        // vertex which must touch the start
        let closing = depth == len - 1;
        let mut ok = true;
        for (i, &p) in path.iter().enumerate() {
            if i == depth - 1 {
                continue;
            }
            let adj = g.is_edge(w, p);
            if i == 0 {
                if closing != adj {
                    ok = false;
                    break;
                }
            } else if adj {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        path.push(w);
        if let Some(c) = extend_cycle(g, path, len) {
            return Some(c);
        }
        path.pop();
    }
    None
}

/// Chordality with certificates: LexBFS produces a candidate elimination
/// order; if its reverse fails the clique check the graph is not chordal and
/// the deterministic shortest chordless cycle is extracted instead.
pub fn chordality(g: &Graph) -> Chordality {
    let visit = lex_bfs(g);
    let peo: Vec<u32> = visit.into_iter().rev().collect();
    if is_peo(g, &peo) {
        Chordality::Chordal { peo }
    } else {
        let cycle = shortest_chordless_cycle(g, 4)
            .expect("a graph without a perfect elimination ordering has a chordless cycle");
        Chordality::ChordlessCycle { cycle }
    }
}

/// Maximum clique of a chordal graph from a perfect elimination ordering:
/// the best vertex-plus-later-neighbors set. The ordering is re-validated.
pub fn max_clique_chordal(g: &Graph, peo: &[u32]) -> Result<Vec<u32>> {
    if !is_peo(g, peo) {
        return Err(Error::Parameter(
            "supplied ordering is not a perfect elimination ordering".into(),
        ));
    }
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in peo.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut best: Vec<u32> = Vec::new();
    for &v in peo {
        let mut clique: Vec<u32> = g
            .neighbors(v)
            .iter()
            .map(|u| u as u32)
            .filter(|&u| pos[u as usize] > pos[v as usize])
            .collect();
        clique.push(v);
        if clique.len() > best.len() {
            clique.sort_unstable();
            best = clique;
        }
    }
    Ok(best)
}

/// Witness backing the analyzer verdict: either a chordless cycle in the
/// 2-shadow whose vertices meet every edge at most twice, or a set `I`
/// spanning a complete (s-1)-uniform pattern with no edge containing all
/// of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Witness {
    Cycle {
        #[serde(rename = "I")]
        i_set: Vec<u32>,
        cycle: Vec<u32>,
    },
    Clique {
        #[serde(rename = "I")]
        i_set: Vec<u32>,
        s: usize,
    },
}

impl Witness {
    pub fn i_set(&self) -> &[u32] {
        match self {
            Witness::Cycle { i_set, .. } => i_set,
            Witness::Clique { i_set, .. } => i_set,
        }
    }

    /// Checks the type invariants against `f`. For the cycle variant the
    /// cycle may have any length >= 3 (the builder only needs the meets-
    /// at-most-twice condition); the analyzer itself always produces
    /// chordless cycles of length >= 4.
    pub fn validate(&self, f: &KGraph) -> Result<()> {
        match self {
            Witness::Cycle { i_set, cycle } => {
                if cycle.len() < 3 {
                    return Err(Error::Invariant("witness cycle shorter than 3".into()));
                }
                let mut distinct = cycle.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() != cycle.len() {
                    return Err(Error::Invariant("witness cycle repeats a vertex".into()));
                }
                if !distinct.iter().all(|v| i_set.contains(v)) {
                    return Err(Error::Invariant("witness cycle leaves I".into()));
                }
                let shadow = f.shadow_graph();
                for w in 0..cycle.len() {
                    let a = cycle[w];
                    let b = cycle[(w + 1) % cycle.len()];
                    if !shadow.is_edge(a, b) {
                        return Err(Error::Invariant(format!(
                            "witness cycle edge ({a},{b}) missing from shadow"
                        )));
                    }
                }
                for e in f.edges() {
                    let hits = e.iter().filter(|x| distinct.binary_search(x).is_ok()).count();
                    if hits > 2 {
                        return Err(Error::Invariant(format!(
                            "edge {e:?} meets the witness cycle in {hits} > 2 vertices"
                        )));
                    }
                }
                Ok(())
            }
            Witness::Clique { i_set, s } => {
                let k = f.k();
                if *s != i_set.len() {
                    return Err(Error::Invariant("clique witness size mismatch".into()));
                }
                if *s < 3 || *s > k + 1 {
                    return Err(Error::Invariant(format!(
                        "clique witness size {s} outside 3..={}",
                        k + 1
                    )));
                }
                let mut sorted = i_set.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != *s {
                    return Err(Error::Invariant("clique witness repeats a vertex".into()));
                }
                // every (s-1)-subset of I must sit inside some edge
                for sub in sorted.iter().copied().combinations(s - 1) {
                    let covered = f
                        .edges()
                        .iter()
                        .any(|e| sub.iter().all(|x| e.contains(x)));
                    if !covered {
                        return Err(Error::Invariant(format!(
                            "subset {sub:?} of witness I is uncovered"
                        )));
                    }
                }
                for e in f.edges() {
                    let hits = e.iter().filter(|x| sorted.binary_search(x).is_ok()).count();
                    if hits > s - 1 {
                        return Err(Error::Invariant(format!(
                            "edge {e:?} contains the whole witness set I"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Witness selection for a normalized, non-k-partite core. The 2-shadow is
/// inspected first for a chordless cycle; otherwise it is chordal, a clique
/// on k+1 vertices exists, and the smallest uncovered subset of that clique
/// is returned. Deterministic: cycles are shortest-then-lexicographic, the
/// clique subset enumeration is by (size, lexicographic) order.
pub fn find_witness(f: &KGraph) -> Result<Witness> {
    find_witness_opts(f, &CoreOpts::default())
}

pub fn find_witness_opts(f: &KGraph, core_opts: &CoreOpts) -> Result<Witness> {
    if !f.is_normalized() {
        return Err(Error::Precondition("find_witness requires a normalized graph".into()));
    }
    if f.is_k_partite().is_some() {
        return Err(Error::Precondition(
            "find_witness is undefined for k-partite inputs; reduce via core first".into(),
        ));
    }
    if !homomorphism::is_core_opts(f, core_opts)? {
        return Err(Error::Precondition(
            "find_witness requires a core; reduce via core first".into(),
        ));
    }
    let shadow = f.shadow_graph();
    let witness = match chordality(&shadow) {
        Chordality::ChordlessCycle { cycle } => {
            let mut i_set = cycle.clone();
            i_set.sort_unstable();
            Witness::Cycle { i_set, cycle }
        }
        Chordality::Chordal { peo } => {
            let k = f.k();
            let clique = max_clique_chordal(&shadow, &peo)?;
            if clique.len() < k + 1 {
                return Err(Error::Invariant(format!(
                    "chordal shadow of a non-{k}-partite core has clique number {} <= k",
                    clique.len()
                )));
            }
            // deterministic clique: lexicographically smallest k+1 vertices
            let x: Vec<u32> = clique.into_iter().take(k + 1).collect();
            let mut found: Option<Vec<u32>> = None;
            'sizes: for s in 3..=k + 1 {
                for cand in x.iter().copied().combinations(s) {
                    let covered = f
                        .edges()
                        .iter()
                        .any(|e| cand.iter().all(|v| e.contains(v)));
                    if !covered {
                        found = Some(cand);
                        break 'sizes;
                    }
                }
            }
            let i_set = found.ok_or_else(|| {
                Error::Invariant("no uncovered subset found inside a (k+1)-clique".into())
            })?;
            let s = i_set.len();
            Witness::Clique { i_set, s }
        }
    };
    witness.validate(f)?;
    Ok(witness)
}

/// Analyzer output: partiteness verdict, the core, and the witness driving
/// the construction path.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub k_partite: bool,
    pub partition: Option<Vec<Vec<u32>>>,
    pub core: KGraph,
    pub is_core_already: bool,
    pub witness: Option<Witness>,
}

/// Full trichotomy pass: normalize, test partiteness, reduce to the core,
/// and select a witness when one exists.
pub fn analyze(f: &KGraph) -> Result<AnalysisReport> {
    analyze_opts(f, &CoreOpts::default())
}

pub fn analyze_opts(f: &KGraph, core_opts: &CoreOpts) -> Result<AnalysisReport> {
    let (g, _) = f.normalize();
    if g.edge_count() == 0 {
        return Err(Error::Precondition("cannot analyze an empty hypergraph".into()));
    }
    let partition = g.is_k_partite();
    let core_res = homomorphism::core_opts(&g, core_opts)?;
    let is_core_already = core_res.core.edge_count() == g.edge_count()
        && core_res.core.vertex_count() == g.vertex_count();
    let witness = if partition.is_some() {
        None
    } else {
        Some(find_witness_opts(&core_res.core, core_opts)?)
    };
    Ok(AnalysisReport {
        k_partite: partition.is_some(),
        partition,
        core: core_res.core,
        is_core_already,
        witness,
    })
}
