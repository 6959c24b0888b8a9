//! Dense subsets of `[m]` with no non-trivial solution to
//! `y_1 + ... + y_{t-1} = (t-1) y_t` (trivial means all entries equal),
//! plus the exact oracles that certify them.
//!
//! Three generators compete and the largest set wins: an exact
//! branch-and-bound maximizer for small `m`, a greedy scan, and the
//! digit-sphere construction (digits on a sphere in base `2(t-1)d`, so the
//! (t-1)-fold sum is carry-free and any solution forces equal sphere
//! points).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How an emitted set was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Sphere,
    Greedy,
    Exhaustive,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehrendSet {
    pub m: u64,
    pub t: usize,
    pub elements: Vec<u64>,
    pub construction: Construction,
    /// True when solution-freeness was certified by the exhaustive oracle;
    /// false means the construction proof is the only guarantee (the oracle
    /// cap was exceeded).
    pub verified: bool,
}

impl BehrendSet {
    /// Wraps an explicit element list after validating and verifying it.
    pub fn explicit(m: u64, t: usize, mut elements: Vec<u64>) -> Result<BehrendSet> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x == 0 || x > m) {
            return Err(Error::Parameter("elements must lie in 1..=m".into()));
        }
        match verify_solution_free(&elements, t, m)? {
            Verification::SolutionFree => Ok(BehrendSet {
                m,
                t,
                elements,
                construction: Construction::Explicit,
                verified: true,
            }),
            Verification::Violation(tuple) => Err(Error::Parameter(format!(
                "element list admits the solution {tuple:?}"
            ))),
            Verification::Unverified(why) => Err(Error::Budget(why)),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct BehrendOpts {
    /// Largest m handled by the exact branch-and-bound fallback.
    pub exhaustive_cap: u64,
    /// Oracle work cap (pair scans / meet-in-the-middle table size).
    pub oracle_cap: u64,
    /// Node budget for the branch-and-bound maximizer.
    pub node_budget: u64,
}

impl Default for BehrendOpts {
    fn default() -> Self {
        BehrendOpts {
            exhaustive_cap: 30,
            oracle_cap: 20_000_000,
            node_budget: 200_000_000,
        }
    }
}

/// Outcome of the exhaustive verifier. `Unverified` is an explicit status,
/// never a silent pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    SolutionFree,
    /// A violating tuple `(y_1, ..., y_{t-1}, y_t)`.
    Violation(Vec<u64>),
    Unverified(String),
}

/// Exhaustive check that `b` has no non-trivial solution. For t=3 this is a
/// pair-sum scan; larger t uses meet-in-the-middle over the (t-1)-fold sums.
pub fn verify_solution_free(b: &[u64], t: usize, m: u64) -> Result<Verification> {
    verify_solution_free_capped(b, t, m, BehrendOpts::default().oracle_cap)
}

pub fn verify_solution_free_capped(
    b: &[u64],
    t: usize,
    m: u64,
    cap: u64,
) -> Result<Verification> {
    if t < 3 {
        return Err(Error::Parameter(format!("equation arity t={t} must be >= 3")));
    }
    if b.iter().any(|&x| x == 0 || x > m) {
        return Err(Error::Parameter("set must lie in 1..=m".into()));
    }
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != b.len() {
        return Err(Error::Parameter("set contains repeated elements".into()));
    }
    if t == 3 {
        if (sorted.len() as u64).pow(2) > cap {
            return Ok(Verification::Unverified(format!(
                "pair scan needs {} > cap {} steps",
                (sorted.len() as u64).pow(2),
                cap
            )));
        }
        let member: std::collections::HashSet<u64> = sorted.iter().copied().collect();
        for (i, &y1) in sorted.iter().enumerate() {
            for &y2 in &sorted[i + 1..] {
                let s = y1 + y2;
                if s % 2 == 0 && member.contains(&(s / 2)) {
                    return Ok(Verification::Violation(vec![y1, y2, s / 2]));
                }
            }
        }
        return Ok(Verification::SolutionFree);
    }
    // meet in the middle on the t-1 left-hand terms
    let lhs = t - 1;
    let a = lhs / 2 + lhs % 2;
    let low = lhs - a;
    let table_size = (sorted.len() as u64).saturating_pow(a as u32);
    if table_size > cap {
        return Ok(Verification::Unverified(format!(
            "meet-in-the-middle table needs {table_size} > cap {cap} entries"
        )));
    }
    // non-decreasing tuples of length `a`; keep one constant and one
    // non-constant representative per sum so triviality can be decided
    use std::collections::HashMap;
    #[derive(Clone)]
    struct Reps {
        constant: Option<Vec<u64>>,
        mixed: Option<Vec<u64>>,
    }
    let mut half: HashMap<u64, Reps> = HashMap::new();
    let mut stack: Vec<u64> = Vec::with_capacity(a);
    fn gen(
        sorted: &[u64],
        from: usize,
        left: usize,
        sum: u64,
        stack: &mut Vec<u64>,
        half: &mut std::collections::HashMap<u64, Reps>,
    ) {
        if left == 0 {
            let entry = half.entry(sum).or_insert(Reps {
                constant: None,
                mixed: None,
            });
            let constant = stack.windows(2).all(|w| w[0] == w[1]);
            if constant {
                entry.constant.get_or_insert_with(|| stack.clone());
            } else {
                entry.mixed.get_or_insert_with(|| stack.clone());
            }
            return;
        }
        for i in from..sorted.len() {
            stack.push(sorted[i]);
            gen(sorted, i, left - 1, sum + sorted[i], stack, half);
            stack.pop();
        }
    }
    gen(&sorted, 0, a, 0, &mut stack, &mut half);

    let mut low_stack: Vec<u64> = Vec::with_capacity(low);
    let mut violation: Option<Vec<u64>> = None;
    #[allow(clippy::too_many_arguments)]
    fn scan(
        sorted: &[u64],
        from: usize,
        left: usize,
        sum: u64,
        target_total: u64,
        yt: u64,
        low_stack: &mut Vec<u64>,
        half: &std::collections::HashMap<u64, Reps>,
        violation: &mut Option<Vec<u64>>,
    ) {
        if violation.is_some() {
            return;
        }
        if left == 0 {
            if sum > target_total {
                return;
            }
            let need = target_total - sum;
            if let Some(reps) = half.get(&need) {
                let low_constant = low_stack.windows(2).all(|w| w[0] == w[1]);
                let low_val = low_stack.first().copied();
                // prefer a representative that makes the tuple non-trivial
                let candidate = if let Some(mixed) = &reps.mixed {
                    Some(mixed.clone())
                } else if let Some(c) = &reps.constant {
                    let c_val = c.first().copied();
                    let all_yt = c_val.is_none_or(|v| v == yt)
                        && (low_stack.is_empty() || (low_constant && low_val == Some(yt)));
                    if all_yt {
                        None // the only decomposition is the trivial tuple
                    } else {
                        Some(c.clone())
                    }
                } else {
                    None
                };
                if let Some(high) = candidate {
                    let mut tuple = high;
                    tuple.extend_from_slice(low_stack);
                    tuple.sort_unstable();
                    tuple.push(yt);
                    *violation = Some(tuple);
                }
            }
            return;
        }
        for i in from..sorted.len() {
            low_stack.push(sorted[i]);
            scan(
                sorted,
                i,
                left - 1,
                sum + sorted[i],
                target_total,
                yt,
                low_stack,
                half,
                violation,
            );
            low_stack.pop();
            if violation.is_some() {
                return;
            }
        }
    }
    for &yt in &sorted {
        let total = (t as u64 - 1) * yt;
        scan(
            &sorted,
            0,
            low,
            0,
            total,
            yt,
            &mut low_stack,
            &half,
            &mut violation,
        );
        if let Some(v) = violation {
            return Ok(Verification::Violation(v));
        }
    }
    Ok(Verification::SolutionFree)
}

/// Exact maximum solution-free subset of `[m]` by branch-and-bound with the
/// usual cardinality prune; returns the size and one witness set.
pub fn max_solution_free_bruteforce(m: u64, t: usize) -> Result<(usize, Vec<u64>)> {
    max_solution_free_opts(m, t, &BehrendOpts::default())
}

pub fn max_solution_free_opts(
    m: u64,
    t: usize,
    opts: &BehrendOpts,
) -> Result<(usize, Vec<u64>)> {
    if t < 3 {
        return Err(Error::Parameter(format!("equation arity t={t} must be >= 3")));
    }
    if m > opts.exhaustive_cap.max(40) {
        return Err(Error::Parameter(format!(
            "exhaustive maximizer capped at m <= {}, got {m}",
            opts.exhaustive_cap.max(40)
        )));
    }
    let mut best: Vec<u64> = Vec::new();
    let mut cur: Vec<u64> = Vec::new();
    let mut nodes: u64 = 0;
    fn rec(
        next: u64,
        m: u64,
        t: usize,
        cur: &mut Vec<u64>,
        best: &mut Vec<u64>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::Budget(format!(
                "branch-and-bound exceeded {budget} nodes"
            )));
        }
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if next > m || cur.len() + (m - next + 1) as usize <= best.len() {
            return Ok(());
        }
        if !creates_violation(cur, t, next) {
            cur.push(next);
            rec(next + 1, m, t, cur, best, nodes, budget)?;
            cur.pop();
        }
        rec(next + 1, m, t, cur, best, nodes, budget)
    }
    rec(1, m, t, &mut cur, &mut best, &mut nodes, opts.node_budget)?;
    Ok((best.len(), best))
}

/// Does adding `x` to the solution-free set `cur` create a non-trivial
/// solution? Both callers grow their sets in ascending order, so `x` exceeds
/// everything in `cur`; a new solution then must place x on the left-hand
/// side with a smaller right-hand element z (the cases z = x force all
/// left-hand terms to equal x, which is the trivial tuple).
fn creates_violation(cur: &[u64], t: usize, x: u64) -> bool {
    debug_assert!(cur.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(cur.last().is_none_or(|&y| y < x));
    if cur.is_empty() {
        return false;
    }
    if t == 3 {
        // x + y1 = 2*y2 with y1, y2 already present
        return cur.iter().any(|&y1| {
            let s = x + y1;
            s.is_multiple_of(2) && cur.binary_search(&(s / 2)).is_ok()
        });
    }
    let lhs = t - 1;
    let max_sum = (t as u64 - 1) * *cur.last().unwrap();
    // reach[j][s]: s expressible as a sum of exactly j elements of cur
    let mut reach: Vec<Vec<bool>> = vec![vec![false; (max_sum + 1) as usize]; lhs + 1];
    reach[0][0] = true;
    for j in 1..=lhs {
        for s in 0..=max_sum {
            for &y in cur {
                if y > s {
                    break;
                }
                if reach[j - 1][(s - y) as usize] {
                    reach[j][s as usize] = true;
                    break;
                }
            }
        }
    }
    for &z in cur {
        let total = (t as u64 - 1) * z;
        for c in 1..lhs {
            let used = c as u64 * x;
            if used > total {
                break;
            }
            let rest = total - used;
            if rest <= max_sum && reach[lhs - c][rest as usize] {
                return true;
            }
        }
    }
    false
}

/// Greedy scan 1..=m keeping every element that stays solution-free.
/// For t=3 the membership check is O(|B|) per candidate; larger t uses the
/// DP check and is capped to modest m.
fn greedy(m: u64, t: usize) -> Option<Vec<u64>> {
    let cap = if t == 3 { 100_000 } else { 500 };
    if m > cap {
        return None;
    }
    let mut out: Vec<u64> = Vec::new();
    for x in 1..=m {
        if !creates_violation(&out, t, x) {
            out.push(x);
        }
    }
    Some(out)
}

/// Digit-sphere construction: digit vectors in `{0..d-1}^D` of a fixed
/// squared norm, read as base-`2(t-1)d` integers (shifted by one). The base
/// keeps the (t-1)-fold sums carry-free, so a solution forces the same
/// digit identity on vectors, and equal norms force all of them equal.
fn sphere(m: u64, t: usize) -> Option<(Vec<u64>, u32, u32)> {
    let q0 = 2 * (t as u64 - 1);
    let mut best: Option<(u64, u32, u32, u64)> = None; // (count, d, D, radius)
    let mut depth: u32 = 2;
    loop {
        // need (q0 * 2)^depth <= m for d = 2 to fit at all
        match (q0 * 2).checked_pow(depth) {
            Some(v) if v <= m => {}
            _ => break,
        }
        let mut d_max = 2u64;
        while let Some(v) = (q0 * (d_max + 1)).checked_pow(depth) {
            if v <= m {
                d_max += 1;
            } else {
                break;
            }
        }
        let d_candidates: Vec<u64> = if d_max <= 64 {
            (2..=d_max).collect()
        } else {
            vec![d_max, d_max * 3 / 4, d_max / 2, d_max / 4, 64].into_iter().filter(|&d| d >= 2).collect()
        };
        for d in d_candidates {
            // radius histogram by DP over digit squares
            let max_r = (depth as u64) * (d - 1) * (d - 1);
            let mut counts = vec![0u64; (max_r + 1) as usize];
            counts[0] = 1;
            for _ in 0..depth {
                let mut next = vec![0u64; (max_r + 1) as usize];
                for (r, &c) in counts.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for digit in 0..d {
                        let nr = r as u64 + digit * digit;
                        if nr <= max_r {
                            next[nr as usize] += c;
                        }
                    }
                }
                counts = next;
            }
            for (r, &c) in counts.iter().enumerate() {
                let better = match best {
                    None => c > 0,
                    Some((bc, bd, bdep, br)) => {
                        (c, std::cmp::Reverse(depth), std::cmp::Reverse(d), std::cmp::Reverse(r as u64))
                            > (bc, std::cmp::Reverse(bdep), std::cmp::Reverse(bd as u64), std::cmp::Reverse(br))
                    }
                };
                if better && c > 0 {
                    best = Some((c, d as u32, depth, r as u64));
                }
            }
        }
        depth += 1;
    }
    let (count, d, depth, radius) = best?;
    if count <= 1 {
        return None;
    }
    // enumerate vectors of squared norm `radius`
    let q = q0 * d as u64;
    let mut elements = Vec::with_capacity(count as usize);
    let mut digits = vec![0u64; depth as usize];
    fn enumerate(
        pos: usize,
        left: u64,
        d: u64,
        q: u64,
        digits: &mut Vec<u64>,
        elements: &mut Vec<u64>,
    ) {
        if pos == digits.len() {
            if left == 0 {
                let mut val: u64 = 0;
                for &dig in digits.iter().rev() {
                    val = val * q + dig;
                }
                elements.push(val + 1);
            }
            return;
        }
        for digit in 0..d {
            let sq = digit * digit;
            if sq > left {
                break;
            }
            digits[pos] = digit;
            enumerate(pos + 1, left - sq, d, q, digits, elements);
        }
        digits[pos] = 0;
    }
    enumerate(0, radius, d as u64, q, &mut digits, &mut elements);
    elements.sort_unstable();
    debug_assert_eq!(elements.len() as u64, count);
    debug_assert!(elements.iter().all(|&x| x <= m));
    Some((elements, d, depth))
}

/// Best available solution-free subset of `[1..=m]` for arity `t`.
///
/// All candidate constructions are generated and the largest wins
/// (exhaustive beats greedy beats sphere on ties). The result is certified
/// by the oracle whenever the scan fits under the cap.
pub fn behrend_set(m: u64, t: usize) -> Result<BehrendSet> {
    behrend_set_opts(m, t, &BehrendOpts::default())
}

pub fn behrend_set_opts(m: u64, t: usize, opts: &BehrendOpts) -> Result<BehrendSet> {
    if m < 1 {
        return Err(Error::Parameter("m must be >= 1".into()));
    }
    if t < 3 {
        return Err(Error::Parameter(format!("equation arity t={t} must be >= 3")));
    }
    let mut candidates: Vec<(Vec<u64>, Construction)> = Vec::new();
    let exhaustive_cap = if t == 3 {
        opts.exhaustive_cap
    } else {
        opts.exhaustive_cap.min(24)
    };
    if m <= exhaustive_cap {
        let (_, witness) = max_solution_free_opts(m, t, opts)?;
        candidates.push((witness, Construction::Exhaustive));
    }
    if let Some(g) = greedy(m, t) {
        candidates.push((g, Construction::Greedy));
    }
    if let Some((s, _, _)) = sphere(m, t) {
        candidates.push((s, Construction::Sphere));
    }
    candidates.push((vec![1], Construction::Explicit));
    // order of pushes breaks ties: exhaustive > greedy > sphere > fallback
    let (elements, construction) = candidates
        .into_iter()
        .enumerate()
        .max_by(|(ia, (a, _)), (ib, (b, _))| {
            a.len().cmp(&b.len()).then(ib.cmp(ia))
        })
        .map(|(_, c)| c)
        .expect("at least the fallback candidate exists");

    let verification = verify_solution_free_capped(&elements, t, m, opts.oracle_cap)?;
    let verified = match verification {
        Verification::SolutionFree => true,
        Verification::Violation(tuple) => {
            return Err(Error::Invariant(format!(
                "generator produced a set with solution {tuple:?}"
            )))
        }
        Verification::Unverified(_) => false,
    };
    Ok(BehrendSet {
        m,
        t,
        elements,
        construction,
        verified,
    })
}
