//! Homomorphism search, isomorphism testing and core computation.
//!
//! The search is plain backtracking over the source vertices (densest
//! shadow-degree first) with one sound pruning rule: the image of any
//! partially assigned edge must be extendable, i.e. it must be a subset of
//! some target edge with pairwise-distinct images. A node budget guards the
//! exponential worst case.

use std::collections::HashSet;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::hypergraph::{KGraph, VertexMap};

/// Default search budget (backtracking nodes) for homomorphism queries.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Largest graph `core`/`is_core` will process before erroring out; the
/// retract search is exponential and refusing is better than silently
/// approximating.
pub const DEFAULT_CORE_BOUND: usize = 16;

#[derive(Clone, Debug)]
pub struct HomOpts {
    /// Require the vertex map to be injective.
    pub injective: bool,
    /// Restrict images to this set of target vertices.
    pub allowed: Option<BitSet>,
    pub node_budget: u64,
}

impl Default for HomOpts {
    fn default() -> Self {
        HomOpts {
            injective: false,
            allowed: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// First homomorphism from `f1` to `f2` under the fixed search order, or
/// `None` after an exhaustive search.
pub fn find_homomorphism(f1: &KGraph, f2: &KGraph) -> Result<Option<VertexMap>> {
    find_homomorphism_opts(f1, f2, &HomOpts::default())
}

pub fn find_homomorphism_opts(f1: &KGraph, f2: &KGraph, opts: &HomOpts) -> Result<Option<VertexMap>> {
    if f1.k() != f2.k() {
        return Err(Error::Parameter(format!(
            "uniformity mismatch: {} vs {}",
            f1.k(),
            f2.k()
        )));
    }
    let mut search = Search::new(f1, f2, opts);
    search.run()?;
    Ok(search.found.map(|map| VertexMap {
        domain: f1.vertex_count(),
        image: f2.vertex_count(),
        map,
    }))
}

struct Search<'a> {
    f1: &'a KGraph,
    f2: &'a KGraph,
    order: Vec<u32>,
    /// edges of f1 indexed for incremental checking
    edges1: Vec<Vec<u32>>,
    /// for each f1 vertex, which edges contain it
    incident: Vec<Vec<usize>>,
    /// all sorted subsets of f2 edges (sizes 1..=k), for extendability tests
    partial_ok: HashSet<Vec<u32>>,
    injective: bool,
    allowed: BitSet,
    assignment: Vec<u32>,
    used: BitSet,
    nodes: u64,
    budget: u64,
    found: Option<Vec<u32>>,
}

const UNASSIGNED: u32 = u32::MAX;

impl<'a> Search<'a> {
    fn new(f1: &'a KGraph, f2: &'a KGraph, opts: &HomOpts) -> Self {
        let shadow_deg: Vec<usize> = {
            let g = f1.shadow_graph();
            (0..f1.vertex_count()).map(|v| g.degree(v as u32)).collect()
        };
        let mut order: Vec<u32> = (0..f1.vertex_count() as u32).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(shadow_deg[v as usize]), v));

        let mut partial_ok = HashSet::new();
        for e in f2.edges() {
            for size in 1..=f2.k() {
                for sub in combinations_of(e, size) {
                    partial_ok.insert(sub);
                }
            }
        }

        let mut incident = vec![Vec::new(); f1.vertex_count()];
        for (ei, e) in f1.edges().iter().enumerate() {
            for &x in e {
                incident[x as usize].push(ei);
            }
        }

        Search {
            f1,
            f2,
            order,
            edges1: f1.edges().to_vec(),
            incident,
            partial_ok,
            injective: opts.injective,
            allowed: opts
                .allowed
                .clone()
                .unwrap_or_else(|| BitSet::full(f2.vertex_count())),
            assignment: vec![UNASSIGNED; f1.vertex_count()],
            used: BitSet::new(f2.vertex_count()),
            nodes: 0,
            budget: opts.node_budget,
            found: None,
        }
    }

    fn run(&mut self) -> Result<()> {
        if self.f1.vertex_count() == 0 {
            self.found = Some(Vec::new());
            return Ok(());
        }
        self.descend(0)?;
        Ok(())
    }

    fn descend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            self.found = Some(self.assignment.clone());
            return Ok(true);
        }
        let u = self.order[depth];
        for w in 0..self.f2.vertex_count() as u32 {
            if !self.allowed.contains(w as usize) {
                continue;
            }
            if self.injective && self.used.contains(w as usize) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget(format!(
                    "homomorphism search exceeded {} nodes",
                    self.budget
                )));
            }
            if !self.consistent(u, w) {
                continue;
            }
            self.assignment[u as usize] = w;
            if self.injective {
                self.used.insert(w as usize);
            }
            let done = self.descend(depth + 1)?;
            self.assignment[u as usize] = UNASSIGNED;
            if self.injective {
                self.used.remove(w as usize);
            }
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every edge through `u` must keep a pairwise-distinct partial image
    /// that extends to some target edge.
    fn consistent(&self, u: u32, w: u32) -> bool {
        for &ei in &self.incident[u as usize] {
            let mut img: Vec<u32> = Vec::with_capacity(self.f1.k());
            for &x in &self.edges1[ei] {
                let y = if x == u { w } else { self.assignment[x as usize] };
                if y != UNASSIGNED {
                    img.push(y);
                }
            }
            img.sort_unstable();
            if img.windows(2).any(|p| p[0] == p[1]) {
                return false;
            }
            if !self.partial_ok.contains(&img) {
                return false;
            }
        }
        true
    }
}

fn combinations_of(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    use itertools::Itertools;
    items.iter().copied().combinations(size).collect()
}

/// Isomorphism between copies carrying their own edge sets: a bijection
/// mapping the edge set onto the edge set. Cheap prefilters (vertex count,
/// edge count, shadow-degree multiset) run before the injective search.
pub fn is_isomorphic(f1: &KGraph, f2: &KGraph) -> Result<bool> {
    if f1.k() != f2.k()
        || f1.vertex_count() != f2.vertex_count()
        || f1.edge_count() != f2.edge_count()
    {
        return Ok(false);
    }
    let deg = |f: &KGraph| {
        let mut d = f.incidence_counts();
        d.sort_unstable();
        d
    };
    if deg(f1) != deg(f2) {
        return Ok(false);
    }
    // injective + equal edge counts forces the edge map to be a bijection;
    // the reverse direction is checked as well
    let opts = HomOpts {
        injective: true,
        ..HomOpts::default()
    };
    Ok(find_homomorphism_opts(f1, f2, &opts)?.is_some()
        && find_homomorphism_opts(f2, f1, &opts)?.is_some())
}

/// Result of the core computation: the minimal retract, the homomorphism
/// onto it, and where its vertices sit inside the original graph.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: KGraph,
    /// Homomorphism from the input onto the core's vertex labels.
    pub retraction: VertexMap,
    /// Core vertex -> original vertex (the subgraph embedding).
    pub embedding: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct CoreOpts {
    pub vertex_bound: usize,
    pub node_budget: u64,
}

impl Default for CoreOpts {
    fn default() -> Self {
        CoreOpts {
            vertex_bound: DEFAULT_CORE_BOUND,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// The minimum-edge subgraph receiving a homomorphism from `f`, found by
/// iterated retraction: first try to retract away a whole vertex, then fall
/// back to dropping a single edge. A fixpoint of both searches has no
/// endomorphism with a proper edge image, which is exactly minimality.
pub fn core(f: &KGraph) -> Result<CoreResult> {
    core_opts(f, &CoreOpts::default())
}

pub fn core_opts(f: &KGraph, opts: &CoreOpts) -> Result<CoreResult> {
    if !f.is_normalized() {
        return Err(Error::Precondition(
            "core requires a normalized graph (no isolated vertices)".into(),
        ));
    }
    if f.vertex_count() > opts.vertex_bound {
        return Err(Error::Budget(format!(
            "core search refuses v={} > bound {}",
            f.vertex_count(),
            opts.vertex_bound
        )));
    }
    let mut cur = f.clone();
    let mut retraction = VertexMap::identity(f.vertex_count());
    let mut embedding: Vec<u32> = (0..f.vertex_count() as u32).collect();

    loop {
        match find_retract(&cur, opts.node_budget)? {
            None => break,
            Some(phi) => {
                let (next, relabel) = image_subgraph(&cur, &phi);
                let step = VertexMap {
                    domain: cur.vertex_count(),
                    image: next.vertex_count(),
                    map: (0..cur.vertex_count())
                        .map(|x| relabel[phi[x] as usize])
                        .collect(),
                };
                retraction = retraction.then(&step);
                let mut emb = vec![0u32; next.vertex_count()];
                for (old, &new) in relabel.iter().enumerate() {
                    if new != u32::MAX {
                        emb[new as usize] = embedding[old];
                    }
                }
                embedding = emb;
                cur = next;
            }
        }
    }

    // the fixpoint of find_retract has no endomorphism with a proper edge
    // image, which is exactly edge-minimality; the composed map must still
    // be a homomorphism onto it
    if !retraction.is_homomorphism(f, &cur) {
        return Err(Error::Invariant(
            "composed retraction is not a homomorphism".into(),
        ));
    }
    Ok(CoreResult {
        core: cur,
        retraction,
        embedding,
    })
}

/// An endomorphism of `cur` whose edge image is a proper subset, if any.
/// Vertex-deletion retracts are tried first, then single-edge deletions.
fn find_retract(cur: &KGraph, budget: u64) -> Result<Option<Vec<u32>>> {
    if cur.edge_count() <= 1 {
        return Ok(None);
    }
    // heuristic pass: map into the graph minus one vertex
    for u in 0..cur.vertex_count() as u32 {
        let reduced: Vec<Vec<u32>> = cur
            .edges()
            .iter()
            .filter(|e| !e.contains(&u))
            .cloned()
            .collect();
        if reduced.len() == cur.edge_count() {
            continue; // isolated vertices cannot occur, but stay safe
        }
        let target = KGraph::new(cur.k(), cur.vertex_count(), reduced)?;
        let mut allowed = BitSet::full(cur.vertex_count());
        allowed.remove(u as usize);
        let opts = HomOpts {
            injective: false,
            allowed: Some(allowed),
            node_budget: budget,
        };
        if let Some(m) = find_homomorphism_opts(cur, &target, &opts)? {
            return Ok(Some(m.map));
        }
    }
    // complete pass: map into the graph minus one edge
    for drop_idx in 0..cur.edge_count() {
        let reduced: Vec<Vec<u32>> = cur
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop_idx)
            .map(|(_, e)| e.clone())
            .collect();
        let target = KGraph::new(cur.k(), cur.vertex_count(), reduced)?;
        let opts = HomOpts {
            injective: false,
            allowed: None,
            node_budget: budget,
        };
        if let Some(m) = find_homomorphism_opts(cur, &target, &opts)? {
            return Ok(Some(m.map));
        }
    }
    Ok(None)
}

/// Image subgraph of an endomorphism: vertices are the image set (relabeled
/// densely), edges are the images of edges. Returns the subgraph and the
/// old-to-new relabeling (`u32::MAX` for dropped vertices).
fn image_subgraph(g: &KGraph, phi: &[u32]) -> (KGraph, Vec<u32>) {
    let mut keep: Vec<u32> = phi.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut relabel = vec![u32::MAX; g.vertex_count()];
    for (new, &old) in keep.iter().enumerate() {
        relabel[old as usize] = new as u32;
    }
    let edges: Vec<Vec<u32>> = g
        .edges()
        .iter()
        .map(|e| e.iter().map(|&x| relabel[phi[x as usize] as usize]).collect())
        .collect();
    let sub = KGraph::new(g.k(), keep.len(), edges).expect("image of a homomorphism is a graph");
    (sub, relabel)
}

/// True iff every endomorphism is an isomorphism; for a normalized graph
/// this is equivalent to having no homomorphism into any single-edge-deleted
/// subgraph.
pub fn is_core(f: &KGraph) -> Result<bool> {
    is_core_opts(f, &CoreOpts::default())
}

pub fn is_core_opts(f: &KGraph, opts: &CoreOpts) -> Result<bool> {
    if !f.is_normalized() {
        return Err(Error::Precondition(
            "is_core requires a normalized graph".into(),
        ));
    }
    if f.vertex_count() > opts.vertex_bound {
        return Err(Error::Budget(format!(
            "is_core refuses v={} > bound {}",
            f.vertex_count(),
            opts.vertex_bound
        )));
    }
    if f.edge_count() <= 1 {
        return Ok(true);
    }
    for drop_idx in 0..f.edge_count() {
        let reduced: Vec<Vec<u32>> = f
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop_idx)
            .map(|(_, e)| e.clone())
            .collect();
        let target = KGraph::new(f.k(), f.vertex_count(), reduced)?;
        let opts = HomOpts {
            injective: false,
            allowed: None,
            node_budget: opts.node_budget,
        };
        if find_homomorphism_opts(f, &target, &opts)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::KGraph;

    fn k3() -> KGraph {
        KGraph::cycle_graph(3).unwrap()
    }

    fn c5() -> KGraph {
        KGraph::cycle_graph(5).unwrap()
    }

    /// Reference search over all |V2|^|V1| maps; test oracle only.
    fn brute_force_hom_exists(f1: &KGraph, f2: &KGraph) -> bool {
        let n1 = f1.vertex_count();
        let n2 = f2.vertex_count();
        let mut found = false;
        crate::util::for_each_tuple(&vec![n2; n1], |t| {
            if found {
                return;
            }
            let map = VertexMap {
                domain: n1,
                image: n2,
                map: t.iter().map(|&x| x as u32).collect(),
            };
            if map.is_homomorphism(f1, f2) {
                found = true;
            }
        });
        found
    }

    #[test]
    fn blowup_maps_home() {
        let (b, natural) = k3().blowup(2).unwrap();
        assert!(natural.is_homomorphism(&b, &k3()));
        let found = find_homomorphism(&b, &k3()).unwrap().unwrap();
        assert!(found.is_homomorphism(&b, &k3()));
    }

    #[test]
    fn c5_maps_to_k3() {
        // oracle: scan all 3^5 maps
        assert!(brute_force_hom_exists(&c5(), &k3()));
        let m = find_homomorphism(&c5(), &k3()).unwrap().unwrap();
        assert!(m.is_homomorphism(&c5(), &k3()));
    }

    #[test]
    fn triangle_has_no_hom_to_edge() {
        let edge = KGraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(find_homomorphism(&k3(), &edge).unwrap().is_none());
        assert!(!brute_force_hom_exists(&k3(), &edge));
    }

    #[test]
    fn uniformity_mismatch_is_error() {
        let f = KGraph::complete_uniform(4, 3).unwrap();
        assert!(find_homomorphism(&f, &k3()).is_err());
    }

    #[test]
    fn search_agrees_with_brute_force_on_small_corpus() {
        let corpus = vec![
            k3(),
            c5(),
            KGraph::cycle_graph(4).unwrap(),
            KGraph::from_pairs(2, &[(0, 1)]).unwrap(),
            KGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
            KGraph::complete_uniform(4, 2).unwrap(),
        ];
        for f1 in &corpus {
            for f2 in &corpus {
                let fast = find_homomorphism(f1, f2).unwrap();
                let slow = brute_force_hom_exists(f1, f2);
                assert_eq!(fast.is_some(), slow, "{f1:?} -> {f2:?}");
                if let Some(m) = fast {
                    assert!(m.is_homomorphism(f1, f2));
                }
            }
        }
    }

    #[test]
    fn core_of_partite_is_single_edge() {
        // a blowup of a single edge is k-partite; its core is one edge
        let e = KGraph::from_pairs(2, &[(0, 1)]).unwrap();
        let (b, _) = e.blowup(3).unwrap();
        let res = core(&b).unwrap();
        assert_eq!(res.core.edge_count(), 1);
        assert!(res.retraction.is_homomorphism(&b, &res.core));
    }

    #[test]
    fn core_of_c5_is_c5() {
        let res = core(&c5()).unwrap();
        assert_eq!(res.core.edge_count(), 5);
        assert!(is_isomorphic(&res.core, &c5()).unwrap());
    }

    #[test]
    fn core_of_k4_3_is_itself() {
        let f = KGraph::complete_uniform(4, 3).unwrap();
        let res = core(&f).unwrap();
        assert!(is_isomorphic(&res.core, &f).unwrap());
    }

    #[test]
    fn core_of_triangle_blowup_is_triangle() {
        let (b, _) = k3().blowup(3).unwrap();
        assert_eq!(b.edge_count(), 27);
        let res = core(&b).unwrap();
        assert!(is_isomorphic(&res.core, &k3()).unwrap());
        assert!(res.retraction.is_homomorphism(&b, &res.core));
        // oracle for minimality: no subgraph on <= 2 edges receives the blowup
        for i in 0..b.edge_count() {
            for j in i..b.edge_count() {
                let edges: Vec<Vec<u32>> = b
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| *x == i || *x == j)
                    .map(|(_, e)| e.clone())
                    .collect();
                let target = KGraph::new(2, b.vertex_count(), edges).unwrap();
                assert!(find_homomorphism(&b, &target).unwrap().is_none());
            }
        }
    }

    #[test]
    fn is_core_examples() {
        let edge = KGraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(is_core(&edge).unwrap());
        let (b, _) = k3().blowup(2).unwrap();
        assert!(!is_core(&b).unwrap());
        assert!(is_core(&c5()).unwrap());
        assert!(is_core(&KGraph::complete_uniform(4, 3).unwrap()).unwrap());
    }

    #[test]
    fn core_idempotent() {
        let (b, _) = k3().blowup(2).unwrap();
        let once = core(&b).unwrap();
        let twice = core(&once.core).unwrap();
        assert!(is_isomorphic(&once.core, &twice.core).unwrap());
    }

    #[test]
    fn embedding_points_into_original() {
        let (b, _) = k3().blowup(2).unwrap();
        let res = core(&b).unwrap();
        // each core edge must be an actual edge of the original graph under
        // the recorded embedding
        for e in res.core.edges() {
            let mut orig: Vec<u32> = e.iter().map(|&x| res.embedding[x as usize]).collect();
            orig.sort_unstable();
            assert!(b.has_edge(&orig));
        }
    }

    #[test]
    fn iso_prefilters() {
        let p3 = KGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let star = KGraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_isomorphic(&p3, &star).unwrap());
        let c5a = c5();
        let perm = vec![2u32, 0, 3, 1, 4];
        let c5b = c5a.relabel(&perm).unwrap();
        assert!(is_isomorphic(&c5a, &c5b).unwrap());
    }
}
