//! Uniform hypergraphs with dense vertex ids, their shadows and blowups,
//! partiteness testing, and the canonical text/JSON formats.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// A k-uniform hypergraph on vertices `0..v`. Edges are sorted k-subsets,
/// stored deduplicated in lexicographic order, so equal graphs have equal
/// representations and serialization is deterministic.
///
/// Isolated vertices are representable (`v` may exceed the largest vertex
/// appearing in an edge); operations that require the normalized form check
/// [`KGraph::is_normalized`] explicitly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KGraph {
    k: usize,
    v: usize,
    edges: Vec<Vec<u32>>,
}

impl KGraph {
    pub fn new(k: usize, v: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("uniformity k={k} must be >= 2")));
        }
        let mut canon: Vec<Vec<u32>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != k {
                return Err(Error::Parameter(format!(
                    "edge {:?} has {} vertices, expected {k}",
                    e,
                    e.len()
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&max) = e.last() {
                if max as usize >= v {
                    return Err(Error::Parameter(format!(
                        "edge {e:?} references vertex {max} but v={v}"
                    )));
                }
            }
            canon.push(e);
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(KGraph { k, v, edges: canon })
    }

    /// Graph with every `k`-subset of `0..s` as an edge.
    pub fn complete_uniform(s: usize, k: usize) -> Result<Self> {
        let edges = (0..s as u32).combinations(k).collect();
        KGraph::new(k, s, edges)
    }

    /// 2-uniform convenience constructor.
    pub fn from_pairs(v: usize, pairs: &[(u32, u32)]) -> Result<Self> {
        KGraph::new(2, v, pairs.iter().map(|&(a, b)| vec![a, b]).collect())
    }

    /// Cycle `0-1-...-(n-1)-0` as a 2-graph.
    pub fn cycle_graph(n: usize) -> Result<Self> {
        let pairs: Vec<(u32, u32)> = (0..n)
            .map(|i| (i as u32, ((i + 1) % n) as u32))
            .collect();
        KGraph::from_pairs(n, &pairs)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Membership test; `edge` must be sorted.
    pub fn has_edge(&self, edge: &[u32]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(edge)).is_ok()
    }

    pub fn edge_set(&self) -> HashSet<Vec<u32>> {
        self.edges.iter().cloned().collect()
    }

    /// Number of edges containing each vertex.
    pub fn incidence_counts(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for e in &self.edges {
            for &x in e {
                deg[x as usize] += 1;
            }
        }
        deg
    }

    pub fn is_normalized(&self) -> bool {
        self.incidence_counts().iter().all(|&d| d > 0)
    }

    /// Drops isolated vertices and relabels densely. Returns the normalized
    /// graph and the list of kept original ids (new id -> old id).
    pub fn normalize(&self) -> (KGraph, Vec<u32>) {
        let deg = self.incidence_counts();
        let kept: Vec<u32> = (0..self.v as u32).filter(|&x| deg[x as usize] > 0).collect();
        let mut new_of_old = vec![u32::MAX; self.v];
        for (new, &old) in kept.iter().enumerate() {
            new_of_old[old as usize] = new as u32;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&x| new_of_old[x as usize]).collect())
            .collect();
        let g = KGraph::new(self.k, kept.len(), edges).expect("relabeling preserves validity");
        (g, kept)
    }

    /// Applies the vertex permutation `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[u32]) -> Result<KGraph> {
        if perm.len() != self.v {
            return Err(Error::Parameter("permutation length mismatch".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&x| perm[x as usize]).collect())
            .collect();
        KGraph::new(self.k, self.v, edges)
    }

    /// The l-shadow: all l-subsets contained in some edge.
    pub fn shadow(&self, l: usize) -> Result<KGraph> {
        if l < 2 || l > self.k {
            return Err(Error::Parameter(format!(
                "shadow arity {l} out of range 2..={}",
                self.k
            )));
        }
        let mut subs: Vec<Vec<u32>> = Vec::new();
        for e in &self.edges {
            for f in e.iter().copied().combinations(l) {
                subs.push(f);
            }
        }
        KGraph::new(l, self.v, subs)
    }

    /// The 2-shadow as an adjacency-structure graph.
    pub fn shadow_graph(&self) -> Graph {
        let mut g = Graph::empty(self.v);
        for e in &self.edges {
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    g.add_edge(e[i], e[j]);
                }
            }
        }
        g
    }

    /// The b-blowup: every vertex becomes `b` clones, every edge all `b^k`
    /// transversal edges. Clone `j` of vertex `u` has id `u*b + j`. Returns
    /// the blowup and the clone-collapsing map, which is a homomorphism onto
    /// `self`.
    pub fn blowup(&self, b: usize) -> Result<(KGraph, VertexMap)> {
        if b < 1 {
            return Err(Error::Parameter("blowup factor must be >= 1".into()));
        }
        let mut edges = Vec::with_capacity(self.edges.len() * b.pow(self.k as u32));
        for e in &self.edges {
            crate::util::for_each_tuple(&vec![b; self.k], |choice| {
                let blown: Vec<u32> = e
                    .iter()
                    .zip(choice)
                    .map(|(&u, &j)| u * b as u32 + j as u32)
                    .collect();
                edges.push(blown);
            });
        }
        let graph = KGraph::new(self.k, self.v * b, edges)?;
        let map = VertexMap {
            domain: self.v * b,
            image: self.v,
            map: (0..(self.v * b) as u32).map(|x| x / b as u32).collect(),
        };
        Ok((graph, map))
    }

    /// Proper k-partition: classes such that every edge meets each class
    /// exactly once, equivalently a k-coloring of the 2-shadow. The returned
    /// partition is verified before it is handed out.
    pub fn is_k_partite(&self) -> Option<Vec<Vec<u32>>> {
        let shadow = self.shadow_graph();
        let colors = k_color(&shadow, self.k)?;
        // sanity: every edge must see k distinct colors
        for e in &self.edges {
            let mut seen = vec![false; self.k];
            for &x in e {
                let c = colors[x as usize] as usize;
                assert!(!seen[c], "improper coloring escaped the search");
                seen[c] = true;
            }
        }
        let mut classes = vec![Vec::new(); self.k];
        for x in 0..self.v as u32 {
            classes[colors[x as usize] as usize].push(x);
        }
        Some(classes)
    }

    /// Canonical text form: `k v` on the first line, one sorted edge per
    /// following line. Round-trips bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.k, self.v);
        for e in &self.edges {
            let line = e.iter().map(|x| x.to_string()).join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<KGraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty hypergraph text".into()))?;
        let mut it = header.split_whitespace();
        let k: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected `k v`".into()))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected `k v`".into()))?;
        if it.next().is_some() {
            return Err(Error::Parse("bad header: trailing tokens".into()));
        }
        let mut edges = Vec::new();
        for line in lines {
            let edge: std::result::Result<Vec<u32>, _> =
                line.split_whitespace().map(|t| t.parse()).collect();
            let edge = edge.map_err(|_| Error::Parse(format!("bad edge line `{line}`")))?;
            edges.push(edge);
        }
        KGraph::new(k, v, edges)
    }
}

impl fmt::Debug for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KGraph(k={}, v={}, edges={:?})", self.k, self.v, self.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct KGraphRepr {
    k: usize,
    v: usize,
    edges: Vec<Vec<u32>>,
}

impl Serialize for KGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        KGraphRepr {
            k: self.k,
            v: self.v,
            edges: self.edges.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = KGraphRepr::deserialize(deserializer)?;
        KGraph::new(repr.k, repr.v, repr.edges).map_err(D::Error::custom)
    }
}

/// Simple graph with bitset adjacency rows; the 2-shadow lives here for the
/// clique and chordality machinery.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(a, b) in pairs {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Parameter(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop at {a}")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn add_edge(&mut self, a: u32, b: u32) {
        debug_assert_ne!(a, b);
        self.adj[a as usize].insert(b as usize);
        self.adj[b as usize].insert(a as usize);
    }

    pub fn is_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].contains(b as usize)
    }

    pub fn neighbors(&self, a: u32) -> &BitSet {
        &self.adj[a as usize]
    }

    pub fn degree(&self, a: u32) -> usize {
        self.adj[a as usize].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count()).sum::<usize>() / 2
    }

    /// Sorted edge list (a < b).
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.adj[a].iter() {
                if b > a {
                    out.push((a as u32, b as u32));
                }
            }
        }
        out
    }

    /// Induced subgraph on `verts` (relabeled by position in `verts`).
    pub fn induced(&self, verts: &[u32]) -> Graph {
        let mut g = Graph::empty(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.is_edge(a, b) {
                    g.add_edge(i as u32, j as u32);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, verts: &[u32]) -> bool {
        verts.iter().enumerate().all(|(i, &a)| {
            verts[i + 1..].iter().all(|&b| self.is_edge(a, b))
        })
    }

    /// The same graph as a 2-uniform [`KGraph`].
    pub fn to_kgraph(&self) -> KGraph {
        KGraph::from_pairs(self.n, &self.edges()).expect("adjacency is a valid 2-graph")
    }
}

/// Total map between vertex sets; homomorphisms, retractions and blowup
/// collapses are all carried as `VertexMap`s.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VertexMap {
    pub domain: usize,
    pub image: usize,
    pub map: Vec<u32>,
}

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        VertexMap {
            domain: n,
            image: n,
            map: (0..n as u32).collect(),
        }
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    /// `other` after `self` (so `self: A->B`, `other: B->C`, result `A->C`).
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        assert_eq!(self.image, other.domain);
        VertexMap {
            domain: self.domain,
            image: other.image,
            map: self.map.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    /// Checks that every edge of `from` maps onto an edge of `to` with k
    /// distinct images.
    pub fn is_homomorphism(&self, from: &KGraph, to: &KGraph) -> bool {
        if from.k() != to.k() || self.domain != from.vertex_count() || self.image != to.vertex_count()
        {
            return false;
        }
        from.edges().iter().all(|e| {
            let mut img: Vec<u32> = e.iter().map(|&x| self.apply(x)).collect();
            img.sort_unstable();
            img.windows(2).all(|w| w[0] != w[1]) && to.has_edge(&img)
        })
    }
}

/// Backtracking k-coloring with a saturation-first vertex choice.
/// Deterministic: ties break by degree then by id, colors are tried in
/// ascending order and capped at one above the count already in use.
fn k_color(g: &Graph, k: usize) -> Option<Vec<u32>> {
    const UNSET: u32 = u32::MAX;
    let n = g.n();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut colors = vec![UNSET; n];

    fn pick(g: &Graph, colors: &[u32]) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None; // (sat, deg, id) maximizing sat,deg; min id
        for v in 0..g.n() {
            if colors[v] != UNSET {
                continue;
            }
            let mut seen = std::collections::BTreeSet::new();
            for u in g.neighbors(v as u32).iter() {
                if colors[u] != UNSET {
                    seen.insert(colors[u]);
                }
            }
            let key = (seen.len(), g.degree(v as u32), v);
            best = match best {
                None => Some(key),
                Some((s, d, id)) => {
                    if (key.0, key.1, std::cmp::Reverse(key.2)) > (s, d, std::cmp::Reverse(id)) {
                        Some(key)
                    } else {
                        Some((s, d, id))
                    }
                }
            };
        }
        best.map(|(_, _, id)| id)
    }

    fn go(g: &Graph, k: usize, colors: &mut [u32], used: u32) -> bool {
        let v = match pick(g, colors) {
            None => return true,
            Some(v) => v,
        };
        let cap = (used + 1).min(k as u32);
        for c in 0..cap {
            let conflict = g
                .neighbors(v as u32)
                .iter()
                .any(|u| colors[u] == c);
            if conflict {
                continue;
            }
            colors[v] = c;
            if go(g, k, colors, used.max(c + 1)) {
                return true;
            }
            colors[v] = u32::MAX;
        }
        false
    }

    if go(g, k, &mut colors, 0) {
        Some(colors)
    } else {
        None
    }
}
