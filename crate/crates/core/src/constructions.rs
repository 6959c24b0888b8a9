//! Materialized instances: arithmetic copy placements on partite vertex
//! sets, the randomized extension with alteration, probabilistic and
//! algebraic disjoint designs, end-to-end hard instances, blowup
//! amplification, and lifting along a subgraph embedding.
//!
//! Every builder verifies its own combinatorial claims before returning:
//! placed families are scanned for the declared disjointness, copy
//! collections for edge-disjointness, and collapse maps edge-by-edge.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::behrend::{BehrendOpts, BehrendSet};
use crate::counting::{verify_edge_disjoint, verify_pairwise_disjoint};
use crate::error::{Error, Result};
use crate::homomorphism::{self, CoreOpts, HomOpts};
use crate::hypergraph::{KGraph, VertexMap};
use crate::rng;
use crate::structure::{shortest_chordless_cycle, Witness};
use crate::util;

/// A family of vertex tuples, coordinate i drawn from part i.
/// `disjointness: Some(l)` declares the family pairwise l-disjoint
/// (vertex sets share at most l-1 elements); builders verify the claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyFamily {
    pub tuple_len: usize,
    pub tuples: Vec<Vec<u32>>,
    pub disjointness: Option<usize>,
}

impl CopyFamily {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Progression-free set parameters recorded in instance metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BParams {
    pub m: u64,
    pub t: usize,
    pub elements: Vec<u64>,
}

impl BParams {
    fn of(b: &BehrendSet) -> Self {
        BParams {
            m: b.m,
            t: b.t,
            elements: b.elements.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub seed: u64,
    pub s: usize,
    pub r: usize,
    pub l: usize,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<BParams>,
    /// Coordinate permutation applied during construction (index = pattern
    /// vertex, value = arithmetic-progression position).
    pub permutation: Vec<usize>,
    /// For instances built from a relabeled pattern: new id -> original id.
    pub relabeling: Option<Vec<u32>>,
}

/// A partite instance: `parts.len()` blocks of `n` vertices each (part j
/// owns ids `j*n .. (j+1)*n`), a k-uniform edge set that is exactly the
/// union of the placed copies of `target`, and construction metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct PartiteInstance {
    pub k: usize,
    pub n: usize,
    pub parts: Vec<Vec<u32>>,
    pub graph: KGraph,
    pub placed: CopyFamily,
    pub target: KGraph,
    pub meta: ConstructionMeta,
}

/// Identifies the producing tool in CLI outputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolStamp {
    pub name: String,
    pub version: String,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    tool: Option<ToolStamp>,
    #[serde(rename = "configHash", skip_serializing_if = "Option::is_none")]
    config_hash: Option<String>,
    k: usize,
    n: usize,
    parts: Vec<Vec<u32>>,
    edges: Vec<Vec<u32>>,
    placed: Vec<PlacedJson>,
    target: KGraph,
    meta: ConstructionMeta,
    #[serde(rename = "placedDisjointness")]
    placed_disjointness: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct PlacedJson {
    tuple: Vec<u32>,
}

pub const INSTANCE_SCHEMA: &str = "rlab/instance/1";

impl PartiteInstance {
    /// Part index owning a vertex.
    pub fn part_of(&self, vertex: u32) -> usize {
        vertex as usize / self.n
    }

    /// Global id of value `val` (1-based) in part `part`.
    pub fn vertex(&self, part: usize, val: u64) -> u32 {
        debug_assert!((1..=self.n as u64).contains(&val));
        (part * self.n) as u32 + (val - 1) as u32
    }

    /// Edges of the copy of `target` placed on `tuple`.
    pub fn copy_edges(&self, tuple: &[u32]) -> Vec<Vec<u32>> {
        copy_edges(&self.target, tuple)
    }

    pub fn placed_copy_edges(&self) -> Vec<Vec<Vec<u32>>> {
        self.placed
            .tuples
            .iter()
            .map(|t| self.copy_edges(t))
            .collect()
    }

    /// The part-collapse map (vertex -> its part index); for a valid
    /// instance it is a homomorphism onto `target`.
    pub fn collapse_map(&self) -> VertexMap {
        VertexMap {
            domain: self.graph.vertex_count(),
            image: self.parts.len(),
            map: (0..self.graph.vertex_count() as u32)
                .map(|x| self.part_of(x) as u32)
                .collect(),
        }
    }

    /// Re-checks every structural claim the instance makes: block layout,
    /// partite edges, canonical placed copies whose union is the edge set,
    /// the declared disjointness level, and the collapse homomorphism.
    pub fn validate(&self) -> Result<()> {
        let total = self.parts.len() * self.n;
        if self.graph.vertex_count() != total {
            return Err(Error::Invariant("vertex count does not match parts".into()));
        }
        if self.graph.k() != self.k || self.target.k() != self.k {
            return Err(Error::Invariant("uniformity mismatch".into()));
        }
        for (j, part) in self.parts.iter().enumerate() {
            let expect: Vec<u32> = (j * self.n..(j + 1) * self.n).map(|x| x as u32).collect();
            if part != &expect {
                return Err(Error::Invariant(format!("part {j} is not a contiguous block")));
            }
        }
        for e in self.graph.edges() {
            let mut ps: Vec<usize> = e.iter().map(|&x| self.part_of(x)).collect();
            ps.sort_unstable();
            ps.dedup();
            if ps.len() != self.k {
                return Err(Error::Invariant(format!(
                    "edge {e:?} touches a part more than once"
                )));
            }
        }
        if self.target.vertex_count() > self.parts.len() {
            return Err(Error::Invariant("target has more roles than parts".into()));
        }
        let mut union: BTreeSet<Vec<u32>> = BTreeSet::new();
        for tuple in &self.placed.tuples {
            if tuple.len() != self.target.vertex_count() {
                return Err(Error::Invariant("placed tuple arity mismatch".into()));
            }
            for (i, &x) in tuple.iter().enumerate() {
                if self.part_of(x) != i {
                    return Err(Error::Invariant(format!(
                        "placed tuple {tuple:?} is not canonical (coordinate {i})"
                    )));
                }
            }
            for e in self.copy_edges(tuple) {
                if !self.graph.has_edge(&e) {
                    return Err(Error::Invariant(format!(
                        "copy edge {e:?} missing from the instance"
                    )));
                }
                union.insert(e);
            }
        }
        if union.len() != self.graph.edge_count() {
            return Err(Error::Invariant(
                "instance contains edges outside the placed copies".into(),
            ));
        }
        if let Some(l) = self.placed.disjointness {
            let scan = verify_pairwise_disjoint(&self.placed, l);
            if !scan.ok {
                return Err(Error::Invariant(format!(
                    "placed family is not {l}-disjoint: pair {:?}",
                    scan.violation
                )));
            }
        }
        let collapse = self.collapse_map();
        if !collapse.is_homomorphism(&self.graph, &self.target) {
            return Err(Error::Invariant(
                "part collapse is not a homomorphism onto the target".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.to_json_stamped(None, None)
    }

    pub fn to_json_stamped(
        &self,
        tool: Option<ToolStamp>,
        config_hash: Option<String>,
    ) -> Result<String> {
        let repr = InstanceJson {
            schema: INSTANCE_SCHEMA.to_string(),
            tool,
            config_hash,
            k: self.k,
            n: self.n,
            parts: self.parts.clone(),
            edges: self.graph.edges().to_vec(),
            placed: self
                .placed
                .tuples
                .iter()
                .map(|t| PlacedJson { tuple: t.clone() })
                .collect(),
            target: self.target.clone(),
            meta: self.meta.clone(),
            placed_disjointness: self.placed.disjointness,
        };
        Ok(serde_json::to_string_pretty(&repr)?)
    }

    pub fn from_json(text: &str) -> Result<PartiteInstance> {
        let repr: InstanceJson = serde_json::from_str(text)?;
        if repr.schema != INSTANCE_SCHEMA {
            return Err(Error::Parse(format!("unknown schema `{}`", repr.schema)));
        }
        let total = repr.parts.len() * repr.n;
        let graph = KGraph::new(repr.k, total, repr.edges)?;
        let inst = PartiteInstance {
            k: repr.k,
            n: repr.n,
            parts: repr.parts,
            graph,
            placed: CopyFamily {
                tuple_len: repr.target.vertex_count(),
                tuples: repr.placed.into_iter().map(|p| p.tuple).collect(),
                disjointness: repr.placed_disjointness,
            },
            target: repr.target,
            meta: repr.meta,
        };
        inst.validate()?;
        Ok(inst)
    }
}

/// Images of the pattern's edges on a vertex tuple, each sorted.
pub fn copy_edges(target: &KGraph, tuple: &[u32]) -> Vec<Vec<u32>> {
    target
        .edges()
        .iter()
        .map(|e| {
            let mut img: Vec<u32> = e.iter().map(|&x| tuple[x as usize]).collect();
            img.sort_unstable();
            img
        })
        .collect()
}

fn contiguous_parts(count: usize, n: usize) -> Vec<Vec<u32>> {
    (0..count)
        .map(|j| ((j * n) as u32..((j + 1) * n) as u32).collect())
        .collect()
}

/// Arithmetic-progression placement of a pattern graph `s_graph` (2-uniform,
/// on vertices 0..s, containing a cycle): one canonical copy per pair
/// `(x, y)` with `x` in `[1..=n/s]` and `y` in the progression-free set,
/// vertex of role i at value `x + pos(i)*y` where `pos` permutes the
/// shortest cycle onto the leading positions. The copies are pairwise
/// 2-disjoint because two shared coordinates solve for `(x, y)`.
pub fn rs_graph(s_graph: &KGraph, n: usize, b: &BehrendSet) -> Result<PartiteInstance> {
    if s_graph.k() != 2 {
        return Err(Error::Parameter("pattern must be 2-uniform".into()));
    }
    let s = s_graph.vertex_count();
    if n < s {
        return Err(Error::Parameter(format!("n={n} smaller than s={s}")));
    }
    let adjacency = s_graph.shadow_graph();
    let cycle = shortest_chordless_cycle(&adjacency, 3)
        .ok_or_else(|| Error::Parameter("pattern contains no cycle".into()))?;
    let t = cycle.len();
    if b.t != t {
        return Err(Error::Parameter(format!(
            "progression-free set has arity {} but the cycle has length {t}",
            b.t
        )));
    }
    if !b.verified {
        return Err(Error::Precondition(
            "progression-free set must be oracle-verified".into(),
        ));
    }
    let m = (n / s) as u64;
    if b.elements.iter().any(|&y| y == 0 || y > m) {
        return Err(Error::Parameter(format!(
            "progression-free set exceeds [1..={m}]"
        )));
    }
    // cycle vertices take positions 0..t, the rest follow in ascending order
    let mut position = vec![usize::MAX; s];
    for (j, &v) in cycle.iter().enumerate() {
        position[v as usize] = j;
    }
    let mut next = t;
    for pos in position.iter_mut() {
        if *pos == usize::MAX {
            *pos = next;
            next += 1;
        }
    }

    let mut inst = PartiteInstance {
        k: 2,
        n,
        parts: contiguous_parts(s, n),
        graph: KGraph::new(2, s * n, Vec::new())?,
        placed: CopyFamily {
            tuple_len: s,
            tuples: Vec::new(),
            disjointness: Some(2),
        },
        target: s_graph.clone(),
        meta: ConstructionMeta {
            seed: 0,
            s,
            r: 0,
            l: 2,
            c: None,
            b: Some(BParams::of(b)),
            permutation: position.clone(),
            relabeling: None,
        },
    };

    let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
    for x in 1..=m {
        for &y in &b.elements {
            let tuple: Vec<u32> = (0..s)
                .map(|i| {
                    let val = x + position[i] as u64 * y;
                    assert!(val <= n as u64, "copy coordinate {val} does not fit in [1..={n}]");
                    inst.vertex(i, val)
                })
                .collect();
            for e in copy_edges(s_graph, &tuple) {
                if !edges.insert(e.clone()) {
                    return Err(Error::Invariant(format!(
                        "distinct copies produced the same edge {e:?}"
                    )));
                }
            }
            inst.placed.tuples.push(tuple);
        }
    }
    inst.graph = KGraph::new(2, s * n, edges.into_iter().collect())?;

    let expected = m as usize * b.len();
    if inst.placed.len() != expected {
        return Err(Error::Invariant(format!(
            "placed {} copies, expected {expected}",
            inst.placed.len()
        )));
    }
    if inst.placed.len() > 200_000 {
        return Err(Error::Budget(format!(
            "{} copies is too large for the exhaustive disjointness scan",
            inst.placed.len()
        )));
    }
    let scan = verify_pairwise_disjoint(&inst.placed, 2);
    if !scan.ok {
        return Err(Error::Invariant(format!(
            "copies are not 2-disjoint: {:?}",
            scan.violation
        )));
    }
    inst.validate()?;
    Ok(inst)
}

/// Arithmetic placement of complete (s-1)-uniform patterns on s parts: one
/// copy per `(x_1, ..., x_{s-2}, y)`, with the last two coordinates at
/// `y + sum(x)` and `2y + sum(x)`. Fixing any s-1 coordinates solves for all
/// parameters, so the copies are pairwise (s-1)-disjoint.
pub fn rs_simplex(s: usize, n: usize, b: &BehrendSet) -> Result<PartiteInstance> {
    if s < 3 {
        return Err(Error::Parameter(format!("s={s} must be >= 3")));
    }
    if n < s {
        return Err(Error::Parameter(format!("n={n} smaller than s={s}")));
    }
    if b.t != 3 {
        return Err(Error::Parameter(format!(
            "progression-free set has arity {}, need 3",
            b.t
        )));
    }
    if !b.verified {
        return Err(Error::Precondition(
            "progression-free set must be oracle-verified".into(),
        ));
    }
    let m = (n / s) as u64;
    if b.elements.iter().any(|&y| y == 0 || y > m) {
        return Err(Error::Parameter(format!(
            "progression-free set exceeds [1..={m}]"
        )));
    }
    let k = s - 1;
    let target = KGraph::complete_uniform(s, k)?;

    let mut inst = PartiteInstance {
        k,
        n,
        parts: contiguous_parts(s, n),
        graph: KGraph::new(k, s * n, Vec::new())?,
        placed: CopyFamily {
            tuple_len: s,
            tuples: Vec::new(),
            disjointness: Some(s - 1),
        },
        target: target.clone(),
        meta: ConstructionMeta {
            seed: 0,
            s,
            r: 0,
            l: s - 1,
            c: None,
            b: Some(BParams::of(b)),
            permutation: (0..s).collect(),
            relabeling: None,
        },
    };

    let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
    let dims = vec![m as usize; s - 2];
    let mut failure: Option<Error> = None;
    util::for_each_tuple(&dims, |xs| {
        if failure.is_some() {
            return;
        }
        let sum: u64 = xs.iter().map(|&x| x as u64 + 1).sum();
        for &y in &b.elements {
            let mut vals: Vec<u64> = xs.iter().map(|&x| x as u64 + 1).collect();
            vals.push(y + sum);
            vals.push(2 * y + sum);
            assert!(
                *vals.last().unwrap() <= n as u64,
                "copy coordinate does not fit in [1..={n}]"
            );
            let tuple: Vec<u32> = vals
                .iter()
                .enumerate()
                .map(|(i, &val)| inst.vertex(i, val))
                .collect();
            for e in copy_edges(&target, &tuple) {
                if !edges.insert(e.clone()) {
                    failure = Some(Error::Invariant(format!(
                        "distinct copies produced the same edge {e:?}"
                    )));
                    return;
                }
            }
            inst.placed.tuples.push(tuple);
        }
    });
    if let Some(err) = failure {
        return Err(err);
    }
    inst.graph = KGraph::new(k, s * n, edges.into_iter().collect())?;

    let expected = (m as u128).pow((s - 2) as u32) as usize * b.len();
    if inst.placed.len() != expected {
        return Err(Error::Invariant(format!(
            "placed {} copies, expected {expected}",
            inst.placed.len()
        )));
    }
    if inst.placed.len() > 200_000 {
        return Err(Error::Budget(format!(
            "{} copies is too large for the exhaustive disjointness scan",
            inst.placed.len()
        )));
    }
    let scan = verify_pairwise_disjoint(&inst.placed, s - 1);
    if !scan.ok {
        return Err(Error::Invariant(format!(
            "copies are not {}-disjoint: {:?}",
            s - 1,
            scan.violation
        )));
    }
    inst.validate()?;
    Ok(inst)
}

#[derive(Clone, Debug)]
pub struct ExtendOpts {
    /// Sampling constant; `None` computes it from the expectation bound so
    /// the expected surviving fraction is at least half the sampled mean.
    pub c: Option<f64>,
    pub retry_cap: usize,
    /// Guard on the number of candidate tuples per attempt.
    pub sample_budget: u64,
}

impl Default for ExtendOpts {
    fn default() -> Self {
        ExtendOpts {
            c: None,
            retry_cap: 16,
            sample_budget: 500_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtendOutcome {
    pub family: CopyFamily,
    /// Constant actually used for the sampling probability.
    pub c: f64,
    /// Size guarantee coefficient: the output has at least
    /// `beta * |base| * n^(k-l)` tuples.
    pub beta: f64,
    /// 1-based attempt index that met the size bound.
    pub attempts: usize,
    pub sampled: usize,
    pub deleted: usize,
}

/// Expectation constant for the alteration bound: summed over the number d
/// of agreeing new coordinates, the count of colliding configurations is at
/// most `K * |base| * n^(k-l)` times the squared keep probability.
fn alteration_constant(s: usize, r: usize, k: usize, ell: usize) -> f64 {
    let mut total = 0u64;
    for d in k.saturating_sub(ell)..=r {
        let need = k.saturating_sub(d);
        total = total.saturating_add(util::binomial(r, d) * util::binomial(s, need));
    }
    total.max(1) as f64
}

/// Randomized extension with alteration: every tuple of the l-disjoint base
/// family is paired with each tuple over the new parts and kept with
/// probability `1/(C n^(r-k+l))`; one member of every violating pair (shared
/// vertex count >= k with at least k-l agreeing new coordinates) is then
/// deleted. Retries with a derived seed until the output reaches
/// `beta |base| n^(k-l)` with `beta = 1/(4C)`.
pub fn extend_family(
    base: &CopyFamily,
    new_parts: &[Vec<u32>],
    n: usize,
    k: usize,
    ell: usize,
    seed: u64,
    opts: &ExtendOpts,
) -> Result<ExtendOutcome> {
    let s = base.tuple_len;
    let r = new_parts.len();
    if k < ell {
        return Err(Error::Parameter(format!("k={k} must be >= l={ell}")));
    }
    if r + ell < k {
        return Err(Error::Parameter(format!(
            "need r >= k - l, got r={r}, k={k}, l={ell}"
        )));
    }
    for (j, part) in new_parts.iter().enumerate() {
        if part.len() != n {
            return Err(Error::Parameter(format!(
                "new part {j} has size {}, expected n={n}",
                part.len()
            )));
        }
    }
    if base.tuples.iter().any(|t| t.len() != s) {
        return Err(Error::Parameter("base family has ragged tuples".into()));
    }
    let base_scan = verify_pairwise_disjoint(base, ell.max(1));
    if ell >= 1 && !base_scan.ok {
        return Err(Error::Precondition(format!(
            "base family is not {ell}-disjoint: {:?}",
            base_scan.violation
        )));
    }

    let c = match opts.c {
        Some(c) if c >= 1.0 => c,
        Some(c) => return Err(Error::Parameter(format!("C={c} must be >= 1"))),
        None => 2.0 * alteration_constant(s, r, k, ell),
    };
    let beta = 1.0 / (4.0 * c);
    let p = 1.0 / (c * util::powi(n, r + ell - k));
    let threshold = beta * base.len() as f64 * util::powi(n, k - ell);

    let candidates = base.len() as u128 * util::upow(n as u128, r as u32);
    if candidates > opts.sample_budget as u128 {
        return Err(Error::Budget(format!(
            "extension would scan {candidates} candidate tuples"
        )));
    }

    let dims = vec![n; r];
    for attempt in 0..opts.retry_cap {
        let mut gen = rng::stream(seed, attempt as u64);
        let mut family: Vec<Vec<u32>> = Vec::new();
        for stup in &base.tuples {
            util::for_each_tuple(&dims, |choice| {
                if gen.gen::<f64>() < p {
                    let mut tuple = stup.clone();
                    for (j, &idx) in choice.iter().enumerate() {
                        tuple.push(new_parts[j][idx]);
                    }
                    family.push(tuple);
                }
            });
        }
        let sampled = family.len();
        if sampled > 200_000 {
            return Err(Error::Budget(format!(
                "{sampled} sampled tuples is too large for the quadratic alteration pass"
            )));
        }

        // alteration: drop the later member of each violating pair
        let mut alive = vec![true; family.len()];
        for i in 0..family.len() {
            if !alive[i] {
                continue;
            }
            for j in i + 1..family.len() {
                if !alive[j] {
                    continue;
                }
                if violates_extension(&family[i], &family[j], s, k, ell) {
                    alive[j] = false;
                }
            }
        }
        let survivors: Vec<Vec<u32>> = family
            .into_iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|(t, _)| t)
            .collect();
        let deleted = sampled - survivors.len();

        if survivors.len() as f64 >= threshold {
            return Ok(ExtendOutcome {
                family: CopyFamily {
                    tuple_len: s + r,
                    tuples: survivors,
                    disjointness: None,
                },
                c,
                beta,
                attempts: attempt + 1,
                sampled,
                deleted,
            });
        }
    }
    Err(Error::RetryExhausted(format!(
        "extension undersized after {} attempts (needed {threshold:.2} tuples)",
        opts.retry_cap
    )))
}

/// The deletion predicate: vertex sets share at least k elements and the
/// new coordinates agree in at least k-l positions.
fn violates_extension(a: &[u32], b: &[u32], s: usize, k: usize, ell: usize) -> bool {
    let shared_total = a.iter().zip(b).filter(|(x, y)| x == y).count();
    if shared_total < k {
        return false;
    }
    let shared_new = a[s..].iter().zip(&b[s..]).filter(|(x, y)| x == y).count();
    shared_new + ell >= k
}

#[derive(Clone, Debug, Default)]
pub struct DesignOpts {
    /// Use the algebraic construction instead of the sampled one.
    pub deterministic: bool,
    pub extend: ExtendOpts,
}

/// A pairwise k-disjoint family of tuples over r fresh parts of size n.
///
/// The sampled route extends the empty family (the k=r grid needs no
/// sampling: distinct tuples already share at most k-1 coordinates). The
/// deterministic route evaluates low-degree polynomials: coefficient vectors
/// over `[n]^k` evaluated at r distinct points of a prime field, keeping
/// tuples whose values all land inside the parts; any k coordinates then
/// interpolate the polynomial, which is exactly k-disjointness. With a
/// single extra coordinate the sum-mod-n form keeps the full n^k grid.
pub fn disjoint_family(
    n: usize,
    r: usize,
    k: usize,
    seed: u64,
    opts: &DesignOpts,
) -> Result<CopyFamily> {
    if k < 1 || k > r {
        return Err(Error::Parameter(format!("need 1 <= k <= r, got k={k}, r={r}")));
    }
    let parts = contiguous_parts(r, n);
    let full_grid = util::upow(n as u128, k as u32);

    let family = if k == r {
        if full_grid > 20_000_000 {
            return Err(Error::Budget(format!("full grid has {full_grid} tuples")));
        }
        let mut tuples = Vec::with_capacity(full_grid as usize);
        util::for_each_tuple(&vec![n; k], |choice| {
            tuples.push(
                choice
                    .iter()
                    .enumerate()
                    .map(|(j, &idx)| parts[j][idx])
                    .collect(),
            );
        });
        CopyFamily {
            tuple_len: r,
            tuples,
            disjointness: Some(k),
        }
    } else if opts.deterministic {
        if full_grid > 20_000_000 {
            return Err(Error::Budget(format!("design grid has {full_grid} tuples")));
        }
        let mut tuples = Vec::new();
        if r == k + 1 {
            // one derived coordinate: residue of the coordinate sum mod n
            util::for_each_tuple(&vec![n; k], |choice| {
                let sum: usize = choice.iter().sum();
                let mut tuple: Vec<u32> = choice
                    .iter()
                    .enumerate()
                    .map(|(j, &idx)| parts[j][idx])
                    .collect();
                tuple.push(parts[k][sum % n]);
                tuples.push(tuple);
            });
        } else {
            let p = util::next_prime(n.max(r));
            util::for_each_tuple(&vec![n; k], |coeffs| {
                let mut tuple: Vec<u32> = Vec::with_capacity(r);
                for (alpha, part) in parts.iter().enumerate() {
                    let mut val = 0usize;
                    let mut power = 1usize;
                    for &a in coeffs {
                        val = (val + a * power) % p;
                        power = power * alpha % p;
                    }
                    if val >= n {
                        return;
                    }
                    tuple.push(part[val]);
                }
                tuples.push(tuple);
            });
        }
        CopyFamily {
            tuple_len: r,
            tuples,
            disjointness: Some(k),
        }
    } else {
        let base = CopyFamily {
            tuple_len: 0,
            tuples: vec![Vec::new()],
            disjointness: Some(0),
        };
        let outcome = extend_family(&base, &parts, n, k, 0, seed, &opts.extend)?;
        CopyFamily {
            disjointness: Some(k),
            ..outcome.family
        }
    };

    // certify the declared disjointness; refusing to certify is an error,
    // never a silent skip
    if family.len() > 30_000 {
        return Err(Error::Budget(format!(
            "family of {} tuples is too large for the exhaustive pair scan",
            family.len()
        )));
    }
    let scan = verify_pairwise_disjoint(&family, k);
    if !scan.ok {
        return Err(Error::Invariant(format!(
            "design family is not {k}-disjoint: {:?}",
            scan.violation
        )));
    }
    Ok(family)
}

#[derive(Clone, Debug, Default)]
pub struct ConstructOpts {
    pub extend: ExtendOpts,
    pub core: CoreOpts,
    pub behrend: BehrendOpts,
}

/// End-to-end instance for a core pattern `f` with a validated witness:
/// relabels the witness set onto the leading parts, builds the arithmetic
/// scaffold (cycle witnesses use the graph placement with l=2, clique
/// witnesses the simplex placement with l=s-1), extends the scaffold tuples
/// over the remaining parts, and places one canonical copy of the pattern
/// per surviving tuple. Placed copies are verified edge-disjoint and the
/// part collapse is verified to be a homomorphism.
pub fn hard_instance(
    f: &KGraph,
    witness: &Witness,
    n: usize,
    seed: u64,
    opts: &ConstructOpts,
) -> Result<PartiteInstance> {
    if !f.is_normalized() {
        return Err(Error::Precondition("pattern must be normalized".into()));
    }
    if !homomorphism::is_core_opts(f, &opts.core)? {
        return Err(Error::Precondition(
            "pattern must be a core; reduce via core first".into(),
        ));
    }
    witness.validate(f)?;
    let k = f.k();
    let v = f.vertex_count();
    let i_set = witness.i_set();
    let s = i_set.len();
    let r = v - s;

    // the extension needs every edge to fit l vertices inside the witness set
    let ell = match witness {
        Witness::Cycle { .. } => 2,
        Witness::Clique { s, .. } => s - 1,
    };
    for e in f.edges() {
        let hits = e.iter().filter(|x| i_set.contains(x)).count();
        if hits > ell {
            return Err(Error::Precondition(format!(
                "edge {e:?} meets the witness set in {hits} > {ell} vertices"
            )));
        }
    }

    // relabel so the witness set occupies 0..s
    let mut new_of_old = vec![u32::MAX; v];
    for (pos, &old) in i_set.iter().enumerate() {
        new_of_old[old as usize] = pos as u32;
    }
    let mut next = s as u32;
    for old in 0..v as u32 {
        if new_of_old[old as usize] == u32::MAX {
            new_of_old[old as usize] = next;
            next += 1;
        }
    }
    let pattern = f.relabel(&new_of_old)?;
    let mut orig_of_new = vec![0u32; v];
    for (old, &new) in new_of_old.iter().enumerate() {
        orig_of_new[new as usize] = old as u32;
    }

    let m = (n / s) as u64;
    if m == 0 {
        return Err(Error::Parameter(format!("n={n} smaller than s={s}")));
    }

    let scaffold = match witness {
        Witness::Cycle { .. } => {
            let shadow = pattern.shadow_graph();
            let induced = shadow.induced(&(0..s as u32).collect::<Vec<_>>());
            let s_graph = induced.to_kgraph();
            let cycle = shortest_chordless_cycle(&induced, 3)
                .ok_or_else(|| Error::Invariant("cycle witness without a cycle".into()))?;
            let b = crate::behrend::behrend_set_opts(m, cycle.len(), &opts.behrend)?;
            rs_graph(&s_graph, n, &b)?
        }
        Witness::Clique { .. } => {
            let b = crate::behrend::behrend_set_opts(m, 3, &opts.behrend)?;
            rs_simplex(s, n, &b)?
        }
    };

    let new_parts = (s..s + r)
        .map(|j| ((j * n) as u32..((j + 1) * n) as u32).collect::<Vec<u32>>())
        .collect::<Vec<_>>();
    let extension = extend_family(
        &scaffold.placed,
        &new_parts,
        n,
        k,
        ell,
        rng::derive_seed(seed, 1),
        &opts.extend,
    )?;

    // item 1 recheck: prefixes must come from the scaffold family
    let base_set: HashSet<&[u32]> = scaffold.placed.tuples.iter().map(|t| t.as_slice()).collect();
    for tuple in &extension.family.tuples {
        if !base_set.contains(&tuple[..s]) {
            return Err(Error::Invariant(
                "extended tuple prefix left the scaffold family".into(),
            ));
        }
    }

    let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
    for tuple in &extension.family.tuples {
        for e in copy_edges(&pattern, tuple) {
            edges.insert(e);
        }
    }
    let graph = KGraph::new(k, (s + r) * n, edges.into_iter().collect())?;

    let inst = PartiteInstance {
        k,
        n,
        parts: contiguous_parts(s + r, n),
        graph,
        placed: extension.family,
        target: pattern,
        meta: ConstructionMeta {
            seed,
            s,
            r,
            l: ell,
            c: Some(extension.c),
            b: scaffold.meta.b.clone(),
            permutation: scaffold.meta.permutation.clone(),
            relabeling: Some(orig_of_new),
        },
    };

    // the placed copies must be pairwise edge-disjoint; this is the built-in
    // consistency check behind the whole construction
    let edge_scan = verify_edge_disjoint(&inst.placed_copy_edges());
    if !edge_scan.ok {
        return Err(Error::Invariant(format!(
            "placed copies share an edge: {:?}",
            edge_scan.violation
        )));
    }
    inst.validate()?;
    Ok(inst)
}

#[derive(Clone, Debug)]
pub struct AmplifyOutcome {
    pub graph: KGraph,
    /// Blowup factor used.
    pub b: usize,
    /// Clone-collapsing homomorphism onto the input instance.
    pub natural: VertexMap,
    /// Composed homomorphism onto the pattern.
    pub to_pattern: VertexMap,
    /// Edge-disjoint pattern copies (role tuples in blowup ids).
    pub copies: Vec<Vec<u32>>,
}

/// Blowup amplification: blow the instance up by `floor(N / v(H))` and
/// replace every placed copy with a k-disjoint family of transversal
/// copies inside its clone blocks. The union over placed copies stays
/// edge-disjoint (verified), and the collapse maps compose to a
/// homomorphism onto the pattern.
pub fn amplify_blowup(
    h: &PartiteInstance,
    f: &KGraph,
    big_n: usize,
    seed: u64,
    design: &DesignOpts,
) -> Result<AmplifyOutcome> {
    h.validate()?;
    let vh = h.graph.vertex_count();
    if big_n < vh {
        return Err(Error::Parameter(format!(
            "N={big_n} smaller than the instance ({vh} vertices)"
        )));
    }
    if !homomorphism::is_isomorphic(f, &h.target)? {
        return Err(Error::Precondition(
            "pattern does not match the instance target".into(),
        ));
    }
    if !homomorphism::is_core(&h.target)? {
        return Err(Error::Precondition("pattern must be a core".into()));
    }
    let b = big_n / vh;
    let (graph, natural) = h.graph.blowup(b)?;
    let vt = h.target.vertex_count();
    let k = h.k;

    let mut copies: Vec<Vec<u32>> = Vec::new();
    if b == 1 {
        copies.extend(h.placed.tuples.iter().cloned());
    } else {
        for (idx, tuple) in h.placed.tuples.iter().enumerate() {
            let fam = disjoint_family(b, vt, k, rng::derive_seed(seed, idx as u64), design)?;
            for index_tuple in &fam.tuples {
                let copy: Vec<u32> = index_tuple
                    .iter()
                    .enumerate()
                    .map(|(i, &id)| {
                        let clone = id as usize - i * b;
                        tuple[i] * b as u32 + clone as u32
                    })
                    .collect();
                copies.push(copy);
            }
        }
    }

    // every copy edge must exist in the blowup, and the collection must be
    // edge-disjoint
    let copy_edge_sets: Vec<Vec<Vec<u32>>> = copies
        .iter()
        .map(|t| copy_edges(&h.target, t))
        .collect();
    for edges in &copy_edge_sets {
        for e in edges {
            if !graph.has_edge(e) {
                return Err(Error::Invariant(format!(
                    "amplified copy edge {e:?} missing from the blowup"
                )));
            }
        }
    }
    let scan = verify_edge_disjoint(&copy_edge_sets);
    if !scan.ok {
        return Err(Error::Invariant(format!(
            "amplified copies share an edge: {:?}",
            scan.violation
        )));
    }

    let collapse = h.collapse_map();
    let to_pattern = natural.then(&collapse);
    if !to_pattern.is_homomorphism(&graph, &h.target) {
        return Err(Error::Invariant(
            "composed collapse is not a homomorphism onto the pattern".into(),
        ));
    }
    Ok(AmplifyOutcome {
        graph,
        b,
        natural,
        to_pattern,
        copies,
    })
}

#[derive(Clone, Debug)]
pub struct LiftOutcome {
    pub graph: KGraph,
    pub b: usize,
    pub natural: VertexMap,
    /// One pattern copy per input copy (role tuples in blowup ids).
    pub copies: Vec<Vec<u32>>,
}

/// Lifts an instance packed with copies of a subpattern `c` to one packed
/// with copies of the full pattern `f`: blow the host up by v(f) and embed
/// `f` inside the blowup of each input copy (the embedding exists because
/// `f` maps homomorphically onto `c`; it is found by injective search and
/// asserted). Copies coming from edge-disjoint input copies stay
/// edge-disjoint.
pub fn lift_to_supergraph(
    host: &KGraph,
    c_copies: &[Vec<u32>],
    c: &KGraph,
    f: &KGraph,
    embedding: &[u32],
) -> Result<LiftOutcome> {
    if c.k() != f.k() || c.k() != host.k() {
        return Err(Error::Parameter("uniformity mismatch".into()));
    }
    // c must be a subgraph of f under the given embedding
    if embedding.len() != c.vertex_count() {
        return Err(Error::Parameter("embedding arity mismatch".into()));
    }
    let mut seen = HashSet::new();
    for &x in embedding {
        if x as usize >= f.vertex_count() || !seen.insert(x) {
            return Err(Error::Parameter("embedding is not injective into the pattern".into()));
        }
    }
    for e in c.edges() {
        let mut img: Vec<u32> = e.iter().map(|&x| embedding[x as usize]).collect();
        img.sort_unstable();
        if !f.has_edge(&img) {
            return Err(Error::Precondition(format!(
                "subpattern edge {e:?} missing from the pattern under the embedding"
            )));
        }
    }
    if homomorphism::find_homomorphism(f, c)?.is_none() {
        return Err(Error::Precondition(
            "pattern has no homomorphism onto the subpattern".into(),
        ));
    }
    let vc = c.vertex_count();
    for tuple in c_copies {
        if tuple.len() != vc {
            return Err(Error::Parameter("copy tuple arity mismatch".into()));
        }
        for e in copy_edges(c, tuple) {
            if !host.has_edge(&e) {
                return Err(Error::Precondition(format!(
                    "input copy edge {e:?} missing from the host"
                )));
            }
        }
    }
    let input_scan = verify_edge_disjoint(
        &c_copies
            .iter()
            .map(|t| copy_edges(c, t))
            .collect::<Vec<_>>(),
    );
    if !input_scan.ok {
        return Err(Error::Precondition(format!(
            "input copies share an edge: {:?}",
            input_scan.violation
        )));
    }

    let b = f.vertex_count();
    let (graph, natural) = host.blowup(b)?;

    let mut copies = Vec::with_capacity(c_copies.len());
    for tuple in c_copies {
        // the blowup of this copy, relabeled locally as i*b + clone
        let mut local_edges = Vec::new();
        for e in c.edges() {
            util::for_each_tuple(&vec![b; c.k()], |choice| {
                let blown: Vec<u32> = e
                    .iter()
                    .zip(choice)
                    .map(|(&x, &j)| x * b as u32 + j as u32)
                    .collect();
                local_edges.push(blown);
            });
        }
        let local = KGraph::new(c.k(), vc * b, local_edges)?;
        let found = homomorphism::find_homomorphism_opts(
            f,
            &local,
            &HomOpts {
                injective: true,
                ..HomOpts::default()
            },
        )?
        .ok_or_else(|| {
            Error::Invariant("pattern does not embed into the blown-up copy".into())
        })?;
        let copy: Vec<u32> = found
            .map
            .iter()
            .map(|&loc| {
                let base = loc / b as u32;
                let clone = loc % b as u32;
                tuple[base as usize] * b as u32 + clone
            })
            .collect();
        for e in copy_edges(f, &copy) {
            if !graph.has_edge(&e) {
                return Err(Error::Invariant(format!(
                    "lifted copy edge {e:?} missing from the blowup"
                )));
            }
        }
        copies.push(copy);
    }

    let scan = verify_edge_disjoint(&copies.iter().map(|t| copy_edges(f, t)).collect::<Vec<_>>());
    if !scan.ok {
        return Err(Error::Invariant(format!(
            "lifted copies share an edge: {:?}",
            scan.violation
        )));
    }
    Ok(LiftOutcome {
        graph,
        b,
        natural,
        copies,
    })
}
