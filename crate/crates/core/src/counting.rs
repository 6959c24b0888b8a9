//! Exact copy counting and disjointness verification.
//!
//! A copy of a pattern in a host is a vertex set together with an edge set
//! isomorphic to the pattern (copies carry their own edges, they are not
//! induced). Counting enumerates labeled embeddings (injective maps sending
//! every pattern edge to a host edge) with bitset candidate domains pruned
//! through the host's 2-shadow, then divides by the pattern's automorphism
//! count. Canonical-partite mode restricts the image of role i to part i and
//! counts tuples directly.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::constructions::CopyFamily;
use crate::error::{Error, Result};
use crate::hypergraph::KGraph;

#[derive(Clone, Debug)]
pub struct CountOpts {
    /// Search-tree node budget; exceeding it yields an explicit
    /// `BudgetExceeded` count, never a silent partial number.
    pub node_budget: u64,
}

impl Default for CountOpts {
    fn default() -> Self {
        CountOpts {
            node_budget: 200_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CountValue {
    Exact { count: u64 },
    Exceeded { nodes: u64 },
}

impl CountValue {
    pub fn exact(&self) -> Option<u64> {
        match self {
            CountValue::Exact { count } => Some(*count),
            CountValue::Exceeded { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub k: usize,
    pub v: usize,
    pub edges: usize,
}

impl GraphSummary {
    fn of(g: &KGraph) -> Self {
        GraphSummary {
            k: g.k(),
            v: g.vertex_count(),
            edges: g.edge_count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    General,
    Canonical,
}

/// Outcome of a counting run. `count * automorphisms = labeled` holds for
/// general mode and is asserted internally.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountReport {
    pub target: GraphSummary,
    pub host: GraphSummary,
    pub mode: CountMode,
    pub count: CountValue,
    /// Labeled embedding count (general mode only).
    pub labeled: Option<u64>,
    pub automorphisms: u64,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

/// Number of unlabeled copies of `target` in `host`.
pub fn count_copies(host: &KGraph, target: &KGraph, opts: &CountOpts) -> Result<CountReport> {
    if host.k() != target.k() {
        return Err(Error::Parameter(format!(
            "uniformity mismatch: host {} vs target {}",
            host.k(),
            target.k()
        )));
    }
    let start = Instant::now();
    let aut = automorphism_count(target)?;
    let mut enumerator = Embedder::new(host, target, None, opts.node_budget);
    let outcome = enumerator.count();
    let (count, labeled) = match outcome {
        Outcome::Complete(labeled) => {
            if labeled % aut != 0 {
                return Err(Error::Invariant(format!(
                    "labeled count {labeled} not divisible by |Aut| = {aut}"
                )));
            }
            (
                CountValue::Exact {
                    count: labeled / aut,
                },
                Some(labeled),
            )
        }
        Outcome::Exceeded(nodes) => (CountValue::Exceeded { nodes }, None),
    };
    Ok(CountReport {
        target: GraphSummary::of(target),
        host: GraphSummary::of(host),
        mode: CountMode::General,
        count,
        labeled,
        automorphisms: aut,
        nodes: enumerator.nodes,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Number of canonical copies: tuples `(v_0, ..., v_{s-1})` with `v_i` in
/// part i such that every target edge maps to a host edge. `parts` supplies
/// the part vertex lists; the target's vertex i is tied to `parts[i]`.
pub fn count_canonical_copies(
    host: &KGraph,
    parts: &[Vec<u32>],
    target: &KGraph,
    opts: &CountOpts,
) -> Result<CountReport> {
    if host.k() != target.k() {
        return Err(Error::Parameter("uniformity mismatch".into()));
    }
    if target.vertex_count() > parts.len() {
        return Err(Error::Parameter(format!(
            "target has {} roles but only {} parts exist",
            target.vertex_count(),
            parts.len()
        )));
    }
    let start = Instant::now();
    let aut = automorphism_count(target)?;
    let mut masks = Vec::with_capacity(target.vertex_count());
    for part in parts.iter().take(target.vertex_count()) {
        let mut mask = BitSet::new(host.vertex_count());
        for &x in part {
            mask.insert(x as usize);
        }
        masks.push(mask);
    }
    let mut enumerator = Embedder::new(host, target, Some(masks), opts.node_budget);
    let outcome = enumerator.count();
    let count = match outcome {
        Outcome::Complete(tuples) => CountValue::Exact { count: tuples },
        Outcome::Exceeded(nodes) => CountValue::Exceeded { nodes },
    };
    Ok(CountReport {
        target: GraphSummary::of(target),
        host: GraphSummary::of(host),
        mode: CountMode::Canonical,
        count,
        labeled: None,
        automorphisms: aut,
        nodes: enumerator.nodes,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// |Aut(f)|: labeled embeddings of `f` into itself.
pub fn automorphism_count(f: &KGraph) -> Result<u64> {
    let mut embedder = Embedder::new(f, f, None, CountOpts::default().node_budget);
    match embedder.count() {
        Outcome::Complete(n) => Ok(n),
        Outcome::Exceeded(nodes) => Err(Error::Budget(format!(
            "automorphism count exceeded {nodes} nodes"
        ))),
    }
}

enum Outcome {
    Complete(u64),
    Exceeded(u64),
}

struct Embedder<'a> {
    host: &'a KGraph,
    target: &'a KGraph,
    /// assignment order over target vertices (most-constrained first)
    order: Vec<u32>,
    /// target edges to check when the order position is reached
    check_at: Vec<Vec<usize>>,
    /// target neighbors (in the 2-shadow) assigned before each position
    earlier_neighbors: Vec<Vec<u32>>,
    host_adj: Vec<BitSet>,
    part_masks: Option<Vec<BitSet>>,
    assignment: Vec<u32>,
    used: BitSet,
    nodes: u64,
    budget: u64,
    found: u64,
    exceeded: bool,
}

const UNASSIGNED: u32 = u32::MAX;

impl<'a> Embedder<'a> {
    fn new(
        host: &'a KGraph,
        target: &'a KGraph,
        part_masks: Option<Vec<BitSet>>,
        budget: u64,
    ) -> Self {
        let tn = target.vertex_count();
        let tshadow = target.shadow_graph();
        // order: highest shadow degree first, then grow by connectivity
        let mut order: Vec<u32> = Vec::with_capacity(tn);
        let mut placed = vec![false; tn];
        for _ in 0..tn {
            let mut best: Option<(usize, usize, std::cmp::Reverse<u32>)> = None;
            let mut best_v = 0u32;
            for v in 0..tn as u32 {
                if placed[v as usize] {
                    continue;
                }
                let attached = tshadow
                    .neighbors(v)
                    .iter()
                    .filter(|&u| placed[u])
                    .count();
                let key = (attached, tshadow.degree(v), std::cmp::Reverse(v));
                if best.is_none() || key > best.unwrap() {
                    best = Some(key);
                    best_v = v;
                }
            }
            placed[best_v as usize] = true;
            order.push(best_v);
        }
        let mut pos = vec![usize::MAX; tn];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        // each target edge is checked as soon as its last vertex is placed
        let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); tn];
        for (ei, e) in target.edges().iter().enumerate() {
            let last = e.iter().map(|&x| pos[x as usize]).max().unwrap();
            check_at[last].push(ei);
        }
        let earlier_neighbors: Vec<Vec<u32>> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                tshadow
                    .neighbors(v)
                    .iter()
                    .map(|u| u as u32)
                    .filter(|&u| pos[u as usize] < i)
                    .collect()
            })
            .collect();
        let hshadow = host.shadow_graph();
        let host_adj: Vec<BitSet> = (0..host.vertex_count() as u32)
            .map(|v| hshadow.neighbors(v).clone())
            .collect();
        Embedder {
            host,
            target,
            order,
            check_at,
            earlier_neighbors,
            host_adj,
            part_masks,
            assignment: vec![UNASSIGNED; tn],
            used: BitSet::new(host.vertex_count()),
            nodes: 0,
            budget,
            found: 0,
            exceeded: false,
        }
    }

    fn count(&mut self) -> Outcome {
        if self.target.vertex_count() == 0 {
            return Outcome::Complete(if self.target.edge_count() == 0 { 1 } else { 0 });
        }
        self.descend(0);
        if self.exceeded {
            Outcome::Exceeded(self.nodes)
        } else {
            Outcome::Complete(self.found)
        }
    }

    fn descend(&mut self, depth: usize) {
        if self.exceeded {
            return;
        }
        if depth == self.order.len() {
            self.found += 1;
            return;
        }
        let u = self.order[depth];
        let pos = depth;
        // candidate domain: intersection of assigned-neighbor adjacency rows
        let mut domain = match &self.part_masks {
            Some(masks) => masks[u as usize].clone(),
            None => BitSet::full(self.host.vertex_count()),
        };
        for &nb in &self.earlier_neighbors[pos] {
            domain.intersect_with(&self.host_adj[self.assignment[nb as usize] as usize]);
        }
        let candidates: Vec<usize> = domain.iter().collect();
        for w in candidates {
            if self.used.contains(w) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exceeded = true;
                return;
            }
            self.assignment[u as usize] = w as u32;
            if self.edges_ok(pos) {
                self.used.insert(w);
                self.descend(depth + 1);
                self.used.remove(w);
            }
            self.assignment[u as usize] = UNASSIGNED;
            if self.exceeded {
                return;
            }
        }
    }

    fn edges_ok(&self, pos: usize) -> bool {
        for &ei in &self.check_at[pos] {
            let mut img: Vec<u32> = self.target.edges()[ei]
                .iter()
                .map(|&x| self.assignment[x as usize])
                .collect();
            img.sort_unstable();
            if !self.host.has_edge(&img) {
                return false;
            }
        }
        true
    }
}

/// Result of a pairwise-disjointness scan; the violation is the first pair
/// (in index order) whose vertex sets share at least `ell` elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub ok: bool,
    pub checked_pairs: u64,
    pub violation: Option<(usize, usize)>,
}

/// Exhaustive check that all tuples in `fam` are pairwise ell-disjoint
/// (vertex sets intersect in at most ell-1 elements).
pub fn verify_pairwise_disjoint(fam: &CopyFamily, ell: usize) -> DisjointnessReport {
    let sorted: Vec<Vec<u32>> = fam
        .tuples
        .iter()
        .map(|t| {
            let mut s = t.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let mut checked = 0u64;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            checked += 1;
            if intersection_at_least(&sorted[i], &sorted[j], ell) {
                return DisjointnessReport {
                    ok: false,
                    checked_pairs: checked,
                    violation: Some((i, j)),
                };
            }
        }
    }
    DisjointnessReport {
        ok: true,
        checked_pairs: checked,
        violation: None,
    }
}

/// Sorted-merge intersection size test with early exit at `bound`.
fn intersection_at_least(a: &[u32], b: &[u32], bound: usize) -> bool {
    if bound == 0 {
        return true;
    }
    let (mut i, mut j, mut hits) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                hits += 1;
                if hits >= bound {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDisjointnessReport {
    pub ok: bool,
    /// (earlier copy, later copy, shared edge)
    pub violation: Option<(usize, usize, Vec<u32>)>,
}

/// Checks that no edge occurs in two of the given copies, via a global
/// edge-to-owner map. Edges must be sorted.
pub fn verify_edge_disjoint(copies: &[Vec<Vec<u32>>]) -> EdgeDisjointnessReport {
    let mut owner: std::collections::HashMap<&[u32], usize> = std::collections::HashMap::new();
    for (i, edges) in copies.iter().enumerate() {
        for e in edges {
            debug_assert!(e.windows(2).all(|w| w[0] < w[1]), "edges must be sorted");
            if let Some(&prev) = owner.get(e.as_slice()) {
                return EdgeDisjointnessReport {
                    ok: false,
                    violation: Some((prev, i, e.clone())),
                };
            }
            owner.insert(e, i);
        }
    }
    EdgeDisjointnessReport {
        ok: true,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::KGraph;
    use itertools::Itertools;

    /// Reference counter: enumerate all v(target)-subsets of the host and
    /// all bijections onto each, collecting distinct (vertex set, edge set)
    /// pairs. Exponential; test oracle only.
    pub fn naive_copy_count(host: &KGraph, target: &KGraph) -> u64 {
        use std::collections::HashSet;
        let tv = target.vertex_count();
        let mut copies: HashSet<(Vec<u32>, Vec<Vec<u32>>)> = HashSet::new();
        for subset in (0..host.vertex_count() as u32).combinations(tv) {
            for perm in subset.iter().copied().permutations(tv) {
                let mut image_edges: Vec<Vec<u32>> = Vec::with_capacity(target.edge_count());
                let mut ok = true;
                for e in target.edges() {
                    let mut img: Vec<u32> = e.iter().map(|&x| perm[x as usize]).collect();
                    img.sort_unstable();
                    if !host.has_edge(&img) {
                        ok = false;
                        break;
                    }
                    image_edges.push(img);
                }
                if ok {
                    image_edges.sort_unstable();
                    image_edges.dedup();
                    copies.insert((subset.clone(), image_edges));
                }
            }
        }
        copies.len() as u64
    }

    fn k3() -> KGraph {
        KGraph::cycle_graph(3).unwrap()
    }

    #[test]
    fn count_triangle_in_itself() {
        let r = count_copies(&k3(), &k3(), &CountOpts::default()).unwrap();
        assert_eq!(r.count.exact(), Some(1));
        assert_eq!(r.automorphisms, 6);
        assert_eq!(r.labeled, Some(6));
    }

    #[test]
    fn count_triangles_in_k4() {
        let k4 = KGraph::complete_uniform(4, 2).unwrap();
        let r = count_copies(&k4, &k3(), &CountOpts::default()).unwrap();
        assert_eq!(r.count.exact(), Some(4));
    }

    #[test]
    fn count_triangles_in_blowup() {
        let (b, _) = k3().blowup(2).unwrap();
        let r = count_copies(&b, &k3(), &CountOpts::default()).unwrap();
        assert_eq!(r.count.exact(), Some(8));
        assert_eq!(r.count.exact().unwrap(), naive_copy_count(&b, &k3()));
    }

    #[test]
    fn matches_naive_oracle_on_corpus() {
        let hosts = vec![
            KGraph::complete_uniform(5, 2).unwrap(),
            KGraph::cycle_graph(6).unwrap(),
            k3().blowup(2).unwrap().0,
            KGraph::complete_uniform(5, 3).unwrap(),
            KGraph::new(3, 6, vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4, 5], vec![0, 4, 5]])
                .unwrap(),
        ];
        let targets = vec![
            k3(),
            KGraph::cycle_graph(4).unwrap(),
            KGraph::cycle_graph(5).unwrap(),
            KGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap(),
            KGraph::complete_uniform(4, 3).unwrap(),
            KGraph::new(3, 4, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap(),
        ];
        for host in &hosts {
            for target in &targets {
                if host.k() != target.k() {
                    continue;
                }
                let fast = count_copies(host, target, &CountOpts::default())
                    .unwrap()
                    .count
                    .exact()
                    .unwrap();
                let slow = naive_copy_count(host, target);
                assert_eq!(fast, slow, "host={host:?} target={target:?}");
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&k3()).unwrap(), 6);
        assert_eq!(
            automorphism_count(&KGraph::cycle_graph(5).unwrap()).unwrap(),
            10
        );
        assert_eq!(
            automorphism_count(&KGraph::complete_uniform(4, 3).unwrap()).unwrap(),
            24
        );
        let path = KGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(automorphism_count(&path).unwrap(), 2);
    }

    #[test]
    fn budget_exceeded_is_flagged() {
        let host = KGraph::complete_uniform(8, 2).unwrap();
        let r = count_copies(&host, &k3(), &CountOpts { node_budget: 5 }).unwrap();
        assert!(matches!(r.count, CountValue::Exceeded { .. }));
        assert!(r.labeled.is_none());
    }

    #[test]
    fn canonical_count_on_tripartite_triangle() {
        // parts {0},{1},{2} with a single triangle
        let host = k3();
        let parts = vec![vec![0u32], vec![1], vec![2]];
        let r = count_canonical_copies(&host, &parts, &k3(), &CountOpts::default()).unwrap();
        assert_eq!(r.count.exact(), Some(1));
        // canonical count <= unlabeled * |Aut|
        let general = count_copies(&host, &k3(), &CountOpts::default()).unwrap();
        assert!(r.count.exact().unwrap() <= general.count.exact().unwrap() * general.automorphisms);
    }

    #[test]
    fn pairwise_disjoint_scan() {
        let fam = CopyFamily {
            tuple_len: 3,
            tuples: vec![vec![0, 10, 20], vec![1, 11, 21], vec![0, 10, 22]],
            disjointness: None,
        };
        let ok = verify_pairwise_disjoint(&fam, 3);
        assert!(ok.ok);
        let bad = verify_pairwise_disjoint(&fam, 2);
        assert!(!bad.ok);
        assert_eq!(bad.violation, Some((0, 2)));
        // identical tuples always violate
        let dup = CopyFamily {
            tuple_len: 2,
            tuples: vec![vec![3, 4], vec![3, 4]],
            disjointness: None,
        };
        assert!(!verify_pairwise_disjoint(&dup, 2).ok);
    }

    #[test]
    fn edge_disjoint_scan() {
        let c1 = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let c2 = vec![vec![3, 4], vec![4, 5], vec![3, 5]];
        assert!(verify_edge_disjoint(&[c1.clone(), c2]).ok);
        let c3 = vec![vec![0, 1], vec![5, 6]];
        let bad = verify_edge_disjoint(&[c1, c3]);
        assert!(!bad.ok);
        assert_eq!(bad.violation, Some((0, 1, vec![0, 1])));
        assert!(verify_edge_disjoint(&[vec![vec![0, 1]]]).ok);
    }
}
