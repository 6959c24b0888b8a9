//! Acceptance suite: one test per exit criterion, each printing a PASS line
//! with the measured quantities (failures surface as ordinary test
//! failures). Expected values marked as computed come from the independent
//! brute-force oracles in `common`.

mod common;

use std::time::Instant;

use rand::Rng;

use rlab_core::behrend::{behrend_set, max_solution_free_bruteforce, verify_solution_free, Verification};
use rlab_core::constructions::{
    amplify_blowup, copy_edges, disjoint_family, extend_family, hard_instance, lift_to_supergraph,
    ConstructOpts, ConstructionMeta, CopyFamily, DesignOpts, ExtendOpts, PartiteInstance,
};
use rlab_core::counting::{
    count_canonical_copies, count_copies, verify_edge_disjoint, verify_pairwise_disjoint,
    CountOpts,
};
use rlab_core::homomorphism::{core, is_core, is_isomorphic};
use rlab_core::hypergraph::KGraph;
use rlab_core::structure::{analyze, find_witness, Witness};
use rlab_core::util;

fn pass(id: u32, detail: &str) {
    println!("[acceptance] PASS criterion {id:02}: {detail}");
}

fn k3() -> KGraph {
    KGraph::cycle_graph(3).unwrap()
}

#[test]
fn criterion_01_graph_placement_fidelity() {
    let start = Instant::now();
    let opts = CountOpts::default();
    let mut details = Vec::new();
    for n in [30usize, 99] {
        let m = (n / 3) as u64;
        let b = behrend_set(m, 3).unwrap();
        assert!(b.verified);
        let inst = rlab_core::constructions::rs_graph(&k3(), n, &b).unwrap();
        let placed = inst.placed.len();
        assert_eq!(placed, m as usize * b.len(), "placed count at n={n}");
        let canon = count_canonical_copies(&inst.graph, &inst.parts, &inst.target, &opts).unwrap();
        let canon = canon.count.exact().unwrap();
        assert_eq!(canon, placed as u64, "s=t: every canonical copy is placed (n={n})");
        assert!(canon <= (n as u64).pow(2), "canonical bound n^2 at n={n}");
        let scan = verify_pairwise_disjoint(&inst.placed, 2);
        assert!(scan.ok, "2-disjointness violated: {:?}", scan.violation);
        details.push(format!("n={n}: placed={placed}, canonical={canon}, pairs={}", scan.checked_pairs));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}, limit 10s");
    pass(1, &format!("{} ({elapsed:?})", details.join("; ")));
}

#[test]
fn criterion_02_simplex_placement_fidelity() {
    let start = Instant::now();
    let b = behrend_set(10, 3).unwrap();
    let inst = rlab_core::constructions::rs_simplex(4, 40, &b).unwrap();
    let placed = inst.placed.len();
    assert_eq!(placed, 100 * b.len());
    let total = count_copies(&inst.graph, &inst.target, &CountOpts::default()).unwrap();
    let total = total.count.exact().unwrap();
    assert_eq!(total, placed as u64, "no copies besides the placed ones");
    let scan = verify_pairwise_disjoint(&inst.placed, 3);
    assert!(scan.ok, "3-disjointness violated: {:?}", scan.violation);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, limit 60s");
    pass(2, &format!(
        "s=4 n=40: placed={placed}, exhaustive copies={total}, pairs={} ({elapsed:?})",
        scan.checked_pairs
    ));
}

#[test]
fn criterion_03_extension_alteration() {
    // deterministic 2-disjoint base family of 60 triples over three parts
    // of size 30: values (x, x+y, x+2y) so two shared coordinates solve for
    // (x, y)
    let mut tuples = Vec::new();
    for x in 1..=10u32 {
        for y in 1..=6u32 {
            tuples.push(vec![x - 1, 30 + (x + y) - 1, 60 + (x + 2 * y) - 1]);
        }
    }
    let base = CopyFamily {
        tuple_len: 3,
        tuples,
        disjointness: Some(2),
    };
    assert_eq!(base.len(), 60);
    let parts: Vec<Vec<u32>> = vec![(90..120).collect()];
    let (n, k, ell) = (30usize, 3usize, 2usize);

    let mut first_try = 0;
    for seed in 0..20u64 {
        let out = extend_family(&base, &parts, n, k, ell, 1000 + seed, &ExtendOpts::default())
            .unwrap();
        // documented constant: K = C(1,1)*C(3,2) = 3, C = 2K = 6, beta = 1/24
        assert_eq!(out.c, 6.0);
        assert_eq!(out.beta, 1.0 / 24.0);
        if out.attempts == 1 {
            first_try += 1;
        }
        // item 1: prefixes stay in the base family
        for t in &out.family.tuples {
            assert!(base.tuples.iter().any(|b| b[..] == t[..3]), "item 1 violated");
        }
        // item 3: zero violations post-deletion, by exhaustive pair scan
        for i in 0..out.family.len() {
            for j in i + 1..out.family.len() {
                let a = &out.family.tuples[i];
                let b2 = &out.family.tuples[j];
                let shared = a.iter().zip(b2.iter()).filter(|(x, y)| x == y).count();
                let shared_new = a[3..].iter().zip(&b2[3..]).filter(|(x, y)| x == y).count();
                assert!(
                    !(shared >= k && shared_new >= k - ell),
                    "item 3 violated by pair ({i},{j})"
                );
            }
        }
        let bound = out.beta * 60.0 * 30.0;
        assert!(
            out.family.len() as f64 >= bound,
            "size {} below beta bound {bound}",
            out.family.len()
        );
    }
    assert!(first_try >= 18, "only {first_try}/20 runs met the bound on the first attempt");
    pass(3, &format!(
        "(s,r,k,l)=(3,1,3,2) n=30: 20/20 runs verified, {first_try}/20 on first attempt, beta=1/24"
    ));
}

#[test]
fn criterion_04_disjoint_design() {
    let fam = disjoint_family(10, 3, 2, 77, &DesignOpts::default()).unwrap();
    // gamma = 1/(4C) with C = 2K and K = C(3,2) + C(3,3) = 4
    let gamma = 1.0 / 32.0;
    assert!(
        fam.len() as f64 >= gamma * 100.0,
        "family size {} below gamma*n^k = {}",
        fam.len(),
        gamma * 100.0
    );
    let scan = verify_pairwise_disjoint(&fam, 2);
    assert!(scan.ok, "2-disjointness violated: {:?}", scan.violation);

    let det = disjoint_family(
        10,
        3,
        2,
        0,
        &DesignOpts {
            deterministic: true,
            ..DesignOpts::default()
        },
    )
    .unwrap();
    assert_eq!(det.len(), 100, "deterministic design must fill the n^k grid");
    assert!(verify_pairwise_disjoint(&det, 2).ok);
    pass(4, &format!(
        "(k,r,n)=(2,3,10): sampled size {} >= {:.3}, deterministic size 100",
        fam.len(),
        gamma * 100.0
    ));
}

#[test]
fn criterion_05_simplex_pipeline_k4() {
    let start = Instant::now();
    let f = KGraph::complete_uniform(4, 3).unwrap();
    let report = analyze(&f).unwrap();
    assert!(!report.k_partite);
    assert!(report.is_core_already);
    match report.witness.as_ref().unwrap() {
        Witness::Clique { i_set, s } => {
            assert_eq!(i_set, &vec![0, 1, 2, 3]);
            assert_eq!(*s, 4);
        }
        w => panic!("expected clique witness, got {w:?}"),
    }
    let inst = hard_instance(
        &report.core,
        report.witness.as_ref().unwrap(),
        40,
        1205,
        &ConstructOpts::default(),
    )
    .unwrap();
    let edge_scan = verify_edge_disjoint(&inst.placed_copy_edges());
    assert!(edge_scan.ok, "edge sharing: {:?}", edge_scan.violation);
    let collapse = inst.collapse_map();
    assert!(collapse.is_homomorphism(&inst.graph, &inst.target));
    let total = count_copies(&inst.graph, &inst.target, &CountOpts::default()).unwrap();
    let total = total.count.exact().unwrap();
    let bound = 40u64.pow(3);
    assert!(total <= bound, "{total} copies exceed n^(v-1) = {bound}");
    assert_eq!(total, inst.placed.len() as u64);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, limit 2min");
    pass(5, &format!(
        "K4(3) at n=40: {} edge-disjoint copies, total={total} <= {bound} ({elapsed:?})",
        inst.placed.len()
    ));
}

#[test]
fn criterion_06_cycle_and_triangle_pipelines_k2() {
    // cycle path: C5 at n=50
    let c5 = KGraph::cycle_graph(5).unwrap();
    let report = analyze(&c5).unwrap();
    let witness = report.witness.clone().unwrap();
    match &witness {
        Witness::Cycle { cycle, .. } => assert_eq!(cycle.len(), 5),
        w => panic!("expected cycle witness, got {w:?}"),
    }
    let inst = hard_instance(&report.core, &witness, 50, 607, &ConstructOpts::default()).unwrap();
    let edge_scan = verify_edge_disjoint(&inst.placed_copy_edges());
    assert!(edge_scan.ok);
    let canon = count_canonical_copies(&inst.graph, &inst.parts, &inst.target, &CountOpts::default())
        .unwrap()
        .count
        .exact()
        .unwrap();
    assert!(canon <= 50u64.pow(4), "canonical count {canon} exceeds n^4");
    assert_eq!(canon, inst.placed.len() as u64);

    // clique path at k=2: K3 at n=60
    let report = analyze(&k3()).unwrap();
    let witness = report.witness.clone().unwrap();
    match &witness {
        Witness::Clique { s, .. } => assert_eq!(*s, 3),
        w => panic!("expected clique witness, got {w:?}"),
    }
    let inst3 = hard_instance(&report.core, &witness, 60, 608, &ConstructOpts::default()).unwrap();
    let total = count_copies(&inst3.graph, &inst3.target, &CountOpts::default())
        .unwrap()
        .count
        .exact()
        .unwrap();
    assert_eq!(total, inst3.placed.len() as u64, "triangle count equals placed count");
    assert!(total <= 60 * 60, "triangle count exceeds n^2");
    pass(6, &format!(
        "C5 at n=50: canonical={canon} (= placed); K3 at n=60: triangles={total} (= placed)"
    ));
}

/// The deterministic candidate stream used by criteria 7 and 8: seeded
/// random k-graphs, normalized.
fn random_kgraph(master: u64, seed: u64, k: usize, v: usize, lo: f64, hi: f64) -> Option<KGraph> {
    use itertools::Itertools;
    let mut rng = rlab_core::rng::stream(master, seed);
    let density = lo + rng.gen::<f64>() * (hi - lo);
    let edges: Vec<Vec<u32>> = (0..v as u32)
        .combinations(k)
        .filter(|_| rng.gen::<f64>() < density)
        .collect();
    let g = KGraph::new(k, v, edges).ok()?;
    let (g, _) = g.normalize();
    if g.edge_count() == 0 {
        None
    } else {
        Some(g)
    }
}

#[test]
fn criterion_07_cycle_path_exists_for_3_uniform() {
    // search over 3-uniform cores with v <= 7 for a cycle-witness analyzer
    // output (the search doubles as the existence oracle)
    let mut found: Option<(KGraph, Witness, u64)> = None;
    for seed in 0..2000u64 {
        let v = 6 + (seed % 2) as usize;
        let Some(g) = random_kgraph(0xC0FFEE, seed, 3, v, 0.18, 0.43) else {
            continue;
        };
        if g.vertex_count() < 5 || g.vertex_count() > 7 || g.is_k_partite().is_some() {
            continue;
        }
        if !is_core(&g).unwrap() {
            continue;
        }
        if let Ok(w @ Witness::Cycle { .. }) = find_witness(&g) {
            found = Some((g, w, seed));
            break;
        }
    }
    let (f, witness, seed) = found.expect("no 3-uniform cycle-witness core with v <= 7 found");
    witness.validate(&f).unwrap();

    // full pipeline at n=20, checks analogous to criterion 5
    let inst = hard_instance(&f, &witness, 20, 777, &ConstructOpts::default()).unwrap();
    assert!(!inst.placed.is_empty());
    let edge_scan = verify_edge_disjoint(&inst.placed_copy_edges());
    assert!(edge_scan.ok, "edge sharing: {:?}", edge_scan.violation);
    assert!(inst.collapse_map().is_homomorphism(&inst.graph, &inst.target));
    let total = count_copies(&inst.graph, &inst.target, &CountOpts::default())
        .unwrap()
        .count
        .exact()
        .unwrap();
    let bound = util::upow(20, (f.vertex_count() - 1) as u32);
    assert!((total as u128) <= bound, "{total} copies exceed n^(v-1) = {bound}");
    pass(7, &format!(
        "found v={} e={} core at stream seed {seed}; n=20 pipeline: placed={}, total={total} <= {bound}",
        f.vertex_count(),
        f.edge_count(),
        inst.placed.len()
    ));
}

#[test]
fn criterion_08_trichotomy_totality() {
    let mut accepted = 0usize;
    let mut cycles = 0usize;
    let mut cliques = 0usize;
    let mut seed = 0u64;
    while accepted < 200 {
        seed += 1;
        assert!(seed < 200_000, "generator failed to produce 200 cores");
        let k = if accepted.is_multiple_of(2) { 2 } else { 3 };
        let v = 5 + (seed % 3) as usize;
        let (lo, hi) = if k == 2 { (0.35, 0.75) } else { (0.25, 0.60) };
        let Some(g) = random_kgraph(0xBEEF, seed, k, v, lo, hi) else {
            continue;
        };
        if g.vertex_count() > 7 || g.is_k_partite().is_some() {
            continue;
        }
        if !is_core(&g).unwrap() {
            continue;
        }
        accepted += 1;
        let w = find_witness(&g)
            .unwrap_or_else(|e| panic!("witness failed on core {g:?}: {e}"));
        w.validate(&g)
            .unwrap_or_else(|e| panic!("witness invalid on core {g:?}: {e}"));
        match w {
            Witness::Cycle { .. } => cycles += 1,
            Witness::Clique { .. } => cliques += 1,
        }
    }
    pass(8, &format!(
        "200 random non-k-partite cores (k in {{2,3}}, v <= 7): all witnessed ({cycles} cycle, {cliques} clique)"
    ));
}

#[test]
fn criterion_09_core_oracle_equivalence() {
    use itertools::Itertools;
    let mut corpus: Vec<KGraph> = Vec::new();
    // all 2-graphs on 4 labeled vertices
    let pairs4: Vec<Vec<u32>> = (0..4u32).combinations(2).collect();
    for mask in 1u32..(1 << pairs4.len()) {
        let edges: Vec<Vec<u32>> = pairs4
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        let (g, _) = KGraph::new(2, 4, edges).unwrap().normalize();
        corpus.push(g);
    }
    // all 3-graphs on 4 labeled vertices
    let triples4: Vec<Vec<u32>> = (0..4u32).combinations(3).collect();
    for mask in 1u32..(1 << triples4.len()) {
        let edges: Vec<Vec<u32>> = triples4
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        let (g, _) = KGraph::new(3, 4, edges).unwrap().normalize();
        corpus.push(g);
    }
    // seeded samples on 5 vertices
    for seed in 0..40u64 {
        if let Some(g) = random_kgraph(0x5EED2, seed, 2, 5, 0.25, 0.75) {
            corpus.push(g);
        }
    }
    for seed in 0..30u64 {
        if let Some(g) = random_kgraph(0x5EED3, seed, 3, 5, 0.25, 0.70) {
            corpus.push(g);
        }
    }
    // landmarks up to six vertices
    corpus.push(KGraph::cycle_graph(5).unwrap());
    corpus.push(KGraph::cycle_graph(6).unwrap());
    corpus.push(k3().blowup(2).unwrap().0);
    corpus.push(KGraph::complete_uniform(5, 3).unwrap());
    corpus.push(
        KGraph::new(3, 5, (0..5u32).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).map(|mut e| { e.sort_unstable(); e }).collect::<Vec<_>>()).unwrap(),
    );
    corpus.push(KGraph::new(3, 6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap());

    let mut checked = 0;
    for g in &corpus {
        if g.edge_count() == 0 {
            continue;
        }
        let impl_core = core(g).unwrap().core;
        let oracle_core = common::exhaustive_core_oracle(g);
        assert!(
            is_isomorphic(&impl_core, &oracle_core).unwrap(),
            "core mismatch on {g:?}: impl {impl_core:?} vs oracle {oracle_core:?}"
        );
        assert_eq!(
            g.is_k_partite().is_some(),
            impl_core.edge_count() == 1,
            "partite/core disagreement on {g:?}"
        );
        checked += 1;
    }
    pass(9, &format!("{checked} corpus graphs: core matches the exhaustive oracle"));
}

#[test]
fn criterion_10_progression_free_sets() {
    let grids: &[(usize, &[u64])] = &[
        (3, &[1, 2, 3, 5, 9, 17, 30, 33, 50, 99, 200]),
        (4, &[5, 20, 60, 200]),
        (5, &[10, 50]),
    ];
    let mut emitted = 0;
    for &(t, ms) in grids {
        for &m in ms {
            let b = behrend_set(m, t).unwrap();
            assert!(b.verified, "set m={m} t={t} not oracle-verified");
            match verify_solution_free(&b.elements, t, m).unwrap() {
                Verification::SolutionFree => {}
                v => panic!("emitted set m={m} t={t} fails the oracle: {v:?}"),
            }
            emitted += 1;
        }
    }
    let (max9, witness9) = max_solution_free_bruteforce(9, 3).unwrap();
    assert_eq!(max9, 5, "exhaustive maximum for m=9, t=3");
    assert_eq!(
        verify_solution_free(&witness9, 3, 9).unwrap(),
        Verification::SolutionFree
    );
    let b9 = behrend_set(9, 3).unwrap();
    assert!(
        2 * b9.len() >= max9,
        "behrend_set(9,3) has {} < half of the maximum {max9}",
        b9.len()
    );
    pass(10, &format!(
        "{emitted} emitted sets (m <= 200) oracle-verified; m=9 maximum {max9}, generator attains {}",
        b9.len()
    ));
}

#[test]
fn criterion_11_amplification_and_lifting_microchecks() {
    // -- amplification on a two-triangle instance, blowup factor 2 --
    let target = k3();
    let host = KGraph::from_pairs(6, &[(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)]).unwrap();
    let inst = PartiteInstance {
        k: 2,
        n: 2,
        parts: vec![vec![0, 1], vec![2, 3], vec![4, 5]],
        graph: host.clone(),
        placed: CopyFamily {
            tuple_len: 3,
            tuples: vec![vec![0, 2, 4], vec![1, 3, 5]],
            disjointness: Some(3),
        },
        target: target.clone(),
        meta: ConstructionMeta {
            seed: 0,
            s: 3,
            r: 0,
            l: 2,
            c: None,
            b: None,
            permutation: vec![0, 1, 2],
            relabeling: None,
        },
    };
    inst.validate().unwrap();
    assert!(inst.graph.vertex_count() <= 8);
    let out = amplify_blowup(&inst, &target, 12, 4242, &DesignOpts::default()).unwrap();
    assert_eq!(out.b, 2);

    let copies_h = common::enumerate_copies(&host, &target);
    let copies_g = common::enumerate_copies(&out.graph, &target);
    assert_eq!(copies_h.len(), 2);
    // exact inequality: copies in G <= copies in H * b^v(F)
    assert!(copies_g.len() <= copies_h.len() * 2usize.pow(3));
    // every copy in G projects onto a copy in H under the collapse
    use std::collections::BTreeSet;
    let h_set: BTreeSet<(Vec<u32>, Vec<Vec<u32>>)> = copies_h.into_iter().collect();
    for (verts, edges) in &copies_g {
        let mut pv: Vec<u32> = verts.iter().map(|&x| out.natural.apply(x)).collect();
        pv.sort_unstable();
        pv.dedup();
        assert_eq!(pv.len(), verts.len(), "collapse not injective on a copy");
        let mut pe: Vec<Vec<u32>> = edges
            .iter()
            .map(|e| {
                let mut img: Vec<u32> = e.iter().map(|&x| out.natural.apply(x)).collect();
                img.sort_unstable();
                img
            })
            .collect();
        pe.sort_unstable();
        pe.dedup();
        assert!(
            h_set.contains(&(pv.clone(), pe.clone())),
            "projected copy ({pv:?}, {pe:?}) not found in the base instance"
        );
    }

    // -- amplification of a single placed triangle, blowup factor 4 --
    let single = PartiteInstance {
        k: 2,
        n: 1,
        parts: vec![vec![0], vec![1], vec![2]],
        graph: KGraph::from_pairs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap(),
        placed: CopyFamily {
            tuple_len: 3,
            tuples: vec![vec![0, 1, 2]],
            disjointness: Some(3),
        },
        target: target.clone(),
        meta: ConstructionMeta {
            seed: 0,
            s: 3,
            r: 0,
            l: 2,
            c: None,
            b: None,
            permutation: vec![0, 1, 2],
            relabeling: None,
        },
    };
    single.validate().unwrap();
    let out4 = amplify_blowup(&single, &target, 12, 99, &DesignOpts::default()).unwrap();
    assert_eq!(out4.b, 4);
    // gamma * b^k = 16/32: at least one edge-disjoint copy survives sampling
    assert!(!out4.copies.is_empty());
    let det4 = amplify_blowup(
        &single,
        &target,
        12,
        99,
        &DesignOpts {
            deterministic: true,
            ..DesignOpts::default()
        },
    )
    .unwrap();
    assert_eq!(det4.copies.len(), 16, "deterministic design fills the b^k grid");

    // -- lifting: identity pattern --
    let tri_host = KGraph::from_pairs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
    let ident = lift_to_supergraph(&tri_host, &[vec![0, 1, 2]], &target, &target, &[0, 1, 2])
        .unwrap();
    assert_eq!(ident.copies.len(), 1);

    // -- lifting: triangle to triangle-with-pendant over two copies --
    let pattern = KGraph::from_pairs(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
    let lifted = lift_to_supergraph(&host, &[vec![0, 2, 4], vec![1, 3, 5]], &target, &pattern, &[0, 1, 2])
        .unwrap();
    assert_eq!(lifted.copies.len(), 2, "one pattern copy per input copy");
    let scan = verify_edge_disjoint(
        &lifted
            .copies
            .iter()
            .map(|t| copy_edges(&pattern, t))
            .collect::<Vec<_>>(),
    );
    assert!(scan.ok);
    // labeled-embedding inequality mirroring the subgraph containment:
    // emb(F) <= emb(C) * v(H)^(v(F)-v(C))
    let emb_f = count_copies(&lifted.graph, &pattern, &CountOpts::default())
        .unwrap()
        .labeled
        .unwrap();
    let emb_c = count_copies(&lifted.graph, &target, &CountOpts::default())
        .unwrap()
        .labeled
        .unwrap();
    let vh = lifted.graph.vertex_count() as u64;
    assert!(
        emb_f <= emb_c * vh,
        "labeled embeddings {emb_f} exceed {emb_c} * {vh}"
    );
    pass(11, &format!(
        "blowup b=2: {} copies <= 2*8; b=4 designs: sampled {}, deterministic 16; lift: 2 edge-disjoint copies, emb {emb_f} <= {}",
        copies_g.len(),
        out4.copies.len(),
        emb_c * vh
    ));
}

#[test]
fn criterion_12_construct_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pattern.txt");
    std::fs::write(&input, k3().to_text()).unwrap();
    let bin = env!("CARGO_BIN_EXE_rlab");

    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args([
                "construct",
                "--input",
                input.to_str().unwrap(),
                "--n",
                "30",
                "--seed",
                "42",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let a = run(&dir.path().join("a.json"));
    let b = run(&dir.path().join("b.json"));
    assert_eq!(a, b, "construct --seed 42 must be byte-identical across runs");
    assert!(!a.is_empty());
    pass(12, &format!("construct --seed 42 twice: {} identical bytes", a.len()));
}
