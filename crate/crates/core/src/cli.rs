//! Reproducible command front-end. Every JSON output carries a schema tag,
//! the tool name/version, and a hash of the effective configuration, so a
//! rerun with the same inputs is byte-identical (timing fields excluded
//! from the guarantee).

use serde::Serialize;

use crate::behrend::{self, BehrendOpts, Verification};
use crate::constructions::{hard_instance, ConstructOpts, ExtendOpts, PartiteInstance, ToolStamp};
use crate::counting::{
    count_canonical_copies, count_copies, verify_edge_disjoint, CountOpts, CountReport, CountValue,
};
use crate::error::{Error, Result};
use crate::homomorphism::{self, CoreOpts};
use crate::hypergraph::{KGraph, VertexMap};
use crate::rng;
use crate::structure::{analyze_opts, AnalysisReport};
use crate::util;

pub const TOOL_NAME: &str = "rlab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resource caps shared by all subcommands; flags and `RLAB_*` environment
/// variables both feed into this.
#[derive(Clone, Debug)]
pub struct RunCaps {
    pub node_budget: u64,
    pub retry_cap: usize,
    pub oracle_cap: u64,
    pub deterministic_design: bool,
}

impl Default for RunCaps {
    fn default() -> Self {
        RunCaps {
            node_budget: 200_000_000,
            retry_cap: 16,
            oracle_cap: 20_000_000,
            deterministic_design: false,
        }
    }
}

impl RunCaps {
    fn validate(&self) -> Result<()> {
        if self.node_budget == 0 || self.retry_cap == 0 || self.oracle_cap == 0 {
            return Err(Error::Parameter("caps must be positive".into()));
        }
        Ok(())
    }

    fn count_opts(&self) -> CountOpts {
        CountOpts {
            node_budget: self.node_budget,
        }
    }

    fn core_opts(&self) -> CoreOpts {
        CoreOpts {
            node_budget: self.node_budget,
            ..CoreOpts::default()
        }
    }

    fn behrend_opts(&self) -> BehrendOpts {
        BehrendOpts {
            oracle_cap: self.oracle_cap,
            node_budget: self.node_budget,
            ..BehrendOpts::default()
        }
    }

    fn construct_opts(&self) -> ConstructOpts {
        ConstructOpts {
            extend: ExtendOpts {
                retry_cap: self.retry_cap,
                ..ExtendOpts::default()
            },
            core: self.core_opts(),
            behrend: self.behrend_opts(),
        }
    }
}

fn stamp() -> ToolStamp {
    ToolStamp {
        name: TOOL_NAME.to_string(),
        version: TOOL_VERSION.to_string(),
    }
}

/// Stable fingerprint of the effective command configuration.
pub fn config_hash(parts: &[(&str, String)]) -> String {
    let mut material = format!("{TOOL_NAME}/{TOOL_VERSION}");
    for (key, value) in parts {
        material.push('|');
        material.push_str(key);
        material.push('=');
        material.push_str(value);
    }
    util::fnv1a_hex(material.as_bytes())
}

/// Parses a hypergraph from either the canonical text format or its JSON
/// mirror (detected by the leading non-space byte).
pub fn parse_hypergraph(input: &str) -> Result<KGraph> {
    if input.trim_start().starts_with('{') {
        Ok(serde_json::from_str(input)?)
    } else {
        KGraph::from_text(input)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeOut {
    schema: &'static str,
    tool: ToolStamp,
    config_hash: String,
    #[serde(flatten)]
    report: AnalysisReport,
}

pub fn cmd_analyze(f: &KGraph, caps: &RunCaps) -> Result<String> {
    caps.validate()?;
    let report = analyze_opts(f, &caps.core_opts())?;
    let out = AnalyzeOut {
        schema: "rlab/analysis/1",
        tool: stamp(),
        config_hash: config_hash(&[("cmd", "analyze".into()), ("input", f.to_text())]),
        report,
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CoreOut {
    schema: &'static str,
    tool: ToolStamp,
    config_hash: String,
    core: KGraph,
    retraction: VertexMap,
    embedding: Vec<u32>,
    is_core_already: bool,
}

pub fn cmd_core(f: &KGraph, caps: &RunCaps) -> Result<String> {
    caps.validate()?;
    let (g, _) = f.normalize();
    let res = homomorphism::core_opts(&g, &caps.core_opts())?;
    let is_core_already =
        res.core.edge_count() == g.edge_count() && res.core.vertex_count() == g.vertex_count();
    let out = CoreOut {
        schema: "rlab/core/1",
        tool: stamp(),
        config_hash: config_hash(&[("cmd", "core".into()), ("input", f.to_text())]),
        core: res.core,
        retraction: res.retraction,
        embedding: res.embedding,
        is_core_already,
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BehrendOut {
    schema: &'static str,
    tool: ToolStamp,
    config_hash: String,
    m: u64,
    t: usize,
    size: usize,
    elements: Vec<u64>,
    construction: behrend::Construction,
    verified: bool,
}

pub fn cmd_behrend(m: u64, t: usize, force_verify: bool, caps: &RunCaps) -> Result<String> {
    caps.validate()?;
    let set = behrend::behrend_set_opts(m, t, &caps.behrend_opts())?;
    let verified = if force_verify && !set.verified {
        // explicit re-verification request: run the oracle without a cap
        match behrend::verify_solution_free_capped(&set.elements, t, m, u64::MAX)? {
            Verification::SolutionFree => true,
            Verification::Violation(tuple) => {
                return Err(Error::Invariant(format!(
                    "emitted set admits the solution {tuple:?}"
                )))
            }
            Verification::Unverified(why) => return Err(Error::Budget(why)),
        }
    } else {
        set.verified
    };
    let out = BehrendOut {
        schema: "rlab/behrend/1",
        tool: stamp(),
        config_hash: config_hash(&[
            ("cmd", "behrend".into()),
            ("m", m.to_string()),
            ("t", t.to_string()),
        ]),
        m,
        t,
        size: set.elements.len(),
        elements: set.elements,
        construction: set.construction,
        verified,
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

/// Analyze, reduce to the core, and build the hard instance at size n.
pub fn cmd_construct(f: &KGraph, n: usize, seed: u64, caps: &RunCaps) -> Result<String> {
    caps.validate()?;
    let report = analyze_opts(f, &caps.core_opts())?;
    if report.k_partite {
        return Err(Error::Precondition(
            "input is k-partite: it admits no hard instance (construction targets non-k-partite cores)"
                .into(),
        ));
    }
    let witness = report
        .witness
        .ok_or_else(|| Error::Invariant("missing witness for a non-partite core".into()))?;
    let inst = hard_instance(&report.core, &witness, n, seed, &caps.construct_opts())?;
    inst.to_json_stamped(
        Some(stamp()),
        Some(config_hash(&[
            ("cmd", "construct".into()),
            ("input", f.to_text()),
            ("n", n.to_string()),
            ("seed", seed.to_string()),
        ])),
    )
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckOut {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyOut {
    schema: &'static str,
    tool: ToolStamp,
    config_hash: String,
    pass: bool,
    capped: bool,
    checks: Vec<CheckOut>,
    canonical: CountReport,
    total: Option<CountReport>,
}

/// Outcome of a verification run: whether every check passed, and whether
/// any count was cut short by the node budget (reported, never silently
/// treated as a pass).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyVerdict {
    pub pass: bool,
    pub capped: bool,
}

impl VerifyVerdict {
    pub fn exit_code(&self) -> i32 {
        if !self.pass {
            1
        } else if self.capped {
            3
        } else {
            0
        }
    }
}

/// Re-verifies an instance JSON against its own declared structure: block
/// layout, canonical placed copies, declared pairwise disjointness,
/// edge-disjointness, and the copy-count bounds. Returns the JSON report
/// and the overall verdict.
pub fn cmd_verify(instance_json: &str, caps: &RunCaps) -> Result<(String, VerifyVerdict)> {
    caps.validate()?;
    let inst = PartiteInstance::from_json(instance_json)?;
    let mut checks: Vec<CheckOut> = Vec::new();
    let mut record = |name: &str, pass: bool, detail: String| {
        checks.push(CheckOut {
            name: name.to_string(),
            pass,
            detail,
        });
    };

    match inst.validate() {
        Ok(()) => record("structure", true, "parts, edges, placed copies, collapse map".into()),
        Err(e) => record("structure", false, e.to_string()),
    }

    let edge_scan = verify_edge_disjoint(&inst.placed_copy_edges());
    record(
        "edge-disjoint",
        edge_scan.ok,
        match &edge_scan.violation {
            None => format!("{} copies share no edge", inst.placed.len()),
            Some((i, j, e)) => format!("copies {i} and {j} share edge {e:?}"),
        },
    );

    let mut capped = false;
    let canonical = count_canonical_copies(&inst.graph, &inst.parts, &inst.target, &caps.count_opts())?;
    let parts_count = inst.parts.len();
    let canon_bound = util::upow(inst.n as u128, (parts_count - 1) as u32);
    match canonical.count.exact() {
        Some(c) => {
            if inst.placed.disjointness.is_some() {
                record(
                    "canonical-bound",
                    (c as u128) <= canon_bound,
                    format!("{c} canonical copies vs bound n^(s-1) = {canon_bound}"),
                );
            }
            let must_equal = match (&inst.placed.disjointness, &inst.meta.b) {
                // simplex instances never contain extra copies; cycle
                // instances match exactly when the pattern is the cycle
                (Some(l), _) if *l == parts_count - 1 => true,
                (Some(2), Some(b)) => b.t == parts_count,
                _ => false,
            };
            if must_equal {
                record(
                    "canonical-equals-placed",
                    c == inst.placed.len() as u64,
                    format!("{c} canonical vs {} placed", inst.placed.len()),
                );
            } else {
                record(
                    "canonical-covers-placed",
                    c >= inst.placed.len() as u64,
                    format!("{c} canonical vs {} placed", inst.placed.len()),
                );
            }
        }
        None => {
            capped = true;
            record("canonical-bound", true, "skipped: node budget exceeded".into());
        }
    }

    // total unlabeled copies against the n^(v-1) bound (hard instances)
    let total = if inst.placed.disjointness.is_none() {
        let rep = count_copies(&inst.graph, &inst.target, &caps.count_opts())?;
        match rep.count.exact() {
            Some(c) => {
                let bound = util::upow(inst.n as u128, (inst.target.vertex_count() - 1) as u32);
                record(
                    "total-copy-bound",
                    (c as u128) <= bound,
                    format!("{c} copies vs bound n^(v-1) = {bound}"),
                );
            }
            None => {
                capped = true;
                record("total-copy-bound", true, "skipped: node budget exceeded".into());
            }
        }
        Some(rep)
    } else {
        None
    };

    let pass = checks.iter().all(|c| c.pass);
    let out = VerifyOut {
        schema: "rlab/verify/1",
        tool: stamp(),
        config_hash: config_hash(&[("cmd", "verify".into()), ("k", inst.k.to_string())]),
        pass,
        capped,
        checks,
        canonical,
        total,
    };
    Ok((serde_json::to_string_pretty(&out)?, VerifyVerdict { pass, capped }))
}

/// One row of the scaling report.
struct ReportRow {
    n: usize,
    placed: Option<u64>,
    eps: Option<f64>,
    total: Option<CountValue>,
    delta: Option<f64>,
    bound: f64,
    status: String,
}

/// Scaling table for a pattern: one row per n with the edge-disjoint placed
/// count, its density, the exact total copy count, and the density bound.
/// Construction failures mark their row and the run continues.
pub fn cmd_report(f: &KGraph, n_grid: &[usize], seed: u64, caps: &RunCaps) -> Result<String> {
    caps.validate()?;
    let report = analyze_opts(f, &caps.core_opts())?;
    if report.k_partite {
        return Err(Error::Precondition(
            "input is k-partite: it admits no hard instance (construction targets non-k-partite cores)"
                .into(),
        ));
    }
    let witness = report
        .witness
        .clone()
        .ok_or_else(|| Error::Invariant("missing witness".into()))?;
    let core = &report.core;
    let k = core.k();
    let v = core.vertex_count();

    let mut rows: Vec<ReportRow> = Vec::new();
    for &n in n_grid {
        let row_seed = rng::derive_seed(seed, n as u64);
        match hard_instance(core, &witness, n, row_seed, &caps.construct_opts()) {
            Ok(inst) => {
                let placed = inst.placed.len() as u64;
                let eps = placed as f64 / util::powi(n, k);
                let total_rep = count_copies(&inst.graph, &inst.target, &caps.count_opts())?;
                let delta = total_rep
                    .count
                    .exact()
                    .map(|c| c as f64 / util::powi(n, v));
                rows.push(ReportRow {
                    n,
                    placed: Some(placed),
                    eps: Some(eps),
                    total: Some(total_rep.count),
                    delta,
                    bound: 1.0 / n as f64,
                    status: "ok".into(),
                });
            }
            Err(e) => rows.push(ReportRow {
                n,
                placed: None,
                eps: None,
                total: None,
                delta: None,
                bound: 1.0 / n as f64,
                status: format!("failed: {e}"),
            }),
        }
    }

    let hash = config_hash(&[
        ("cmd", "report".into()),
        ("input", f.to_text()),
        ("grid", format!("{n_grid:?}")),
        ("seed", seed.to_string()),
    ]);
    let mut out = String::new();
    out.push_str(&format!("# {TOOL_NAME} {TOOL_VERSION}\n"));
    out.push_str(&format!("# seed={seed} configHash={hash}\n"));
    out.push_str(&format!(
        "# pattern: k={k} v={v} edges={} (core-reduced: {})\n",
        core.edge_count(),
        !report.is_core_already
    ));
    out.push_str("n,placed_edge_disjoint_count,eps,total_F_copies,delta,bound,status\n");
    for row in rows {
        let placed = row.placed.map_or(String::new(), |p| p.to_string());
        let eps = row.eps.map_or(String::new(), |e| format!("{e:.6e}"));
        let total = match &row.total {
            Some(CountValue::Exact { count }) => count.to_string(),
            Some(CountValue::Exceeded { nodes }) => format!("capped@{nodes}"),
            None => String::new(),
        };
        let delta = row.delta.map_or(String::new(), |d| format!("{d:.6e}"));
        out.push_str(&format!(
            "{},{},{},{},{},{:.6e},{}\n",
            row.n, placed, eps, total, delta, row.bound, row.status
        ));
    }
    Ok(out)
}
