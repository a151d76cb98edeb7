//! BCEP₂ under spanning semantics via anchored representative families.
//!
//! `F_v^p` holds edge sets `X` of size `p` with `v` incident to `X`, `X`
//! edge-connected, and `g − X` connected on all vertices, compressed so that
//! it still `(k − p)`-represents every such set in the truncated co-graphic
//! matroid. Some `F_v^k` is nonempty iff a `k`-edge side exists, up to the
//! truncation's Monte Carlo error.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::field::{Field, DEFAULT_BITS};
use crate::graph::{is_connected, verify_bcep2, BcepSemantics, EdgePartitionWitness, Graph};
use crate::matroid::{
    cycle_space_basis, extend_minor_vector, is_independent_cographic, reduce_to_representative,
    truncate, truncation_failure_bound, FamilyEntry, RepFamily, TruncatedRep,
};
use crate::stats::Stats;
use crate::util::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BcepOptions {
    pub seed: u64,
    pub field_bits: u32,
}

impl Default for BcepOptions {
    fn default() -> Self {
        BcepOptions {
            seed: 0,
            field_bits: DEFAULT_BITS,
        }
    }
}

/// Single non-bridge edges at each vertex, with nonzero truncated columns.
pub fn init_families(g: &Graph, trep: &TruncatedRep) -> Vec<RepFamily> {
    (0..g.vertex_count())
        .map(|v| RepFamily {
            anchor: v,
            p: 1,
            entries: g
                .incident_edges(v)
                .iter()
                .filter(|&&e| {
                    is_independent_cographic(g, &[e]) && trep.column(e).iter().any(|&x| x != 0)
                })
                .map(|&e| FamilyEntry {
                    edges: vec![e],
                    minors: trep.column(e).to_vec(),
                })
                .collect(),
        })
        .collect()
}

/// Whether `entry` meets every invariant of a member of `F_v^p`.
pub fn entry_is_valid(g: &Graph, v: usize, p: usize, edges: &[usize]) -> bool {
    edges.len() == p
        && edges.iter().any(|&e| {
            let (x, y) = g.edge(e);
            x == v || y == v
        })
        && g.is_edge_set_connected(edges)
        && is_independent_cographic(g, edges)
}

#[derive(Clone, Debug, Default)]
struct Counters {
    candidates: u64,
    mc_failures: u64,
    bound_violations: u64,
    max_family: u64,
}

fn compress(fams: Vec<RepFamily>, p: usize, k: usize, trep: &TruncatedRep, ctr: &mut Counters) -> Result<Vec<RepFamily>> {
    let bound = binomial(k, p) as u64;
    fams.into_iter()
        .map(|f| {
            let r = reduce_to_representative(&f, p, k - p, trep)?;
            ctr.max_family = ctr.max_family.max(r.len() as u64);
            if r.len() as u64 > bound {
                ctr.bound_violations += 1;
            }
            Ok(r)
        })
        .collect()
}

/// Builds `F^p` from `F^{p−1}`: every stored set at a neighbor `u`, grown by
/// the edge `uv`, kept if `g` minus it stays connected, then compressed.
pub fn extend_family(
    g: &Graph,
    prev: &[RepFamily],
    p: usize,
    k: usize,
    trep: &TruncatedRep,
) -> Result<Vec<RepFamily>> {
    check_level(g, prev, p, k)?;
    let levels = vec![Vec::new(); p.saturating_sub(2)];
    extend(g, &levels, prev, p, k, trep, false, &mut Counters::default())
}

fn check_level(g: &Graph, prev: &[RepFamily], p: usize, k: usize) -> Result<()> {
    if p < 2 || p > k || prev.len() != g.vertex_count() {
        return Err(Error::param(format!("cannot extend to p = {p} with k = {k}")));
    }
    if let Some(f) = prev.iter().find(|f| f.p != p - 1) {
        return Err(Error::param(format!(
            "family at vertex {} has p = {}, expected {}",
            f.anchor,
            f.p,
            p - 1
        )));
    }
    Ok(())
}

/// Candidates for `F_v^p` are `{uv} ∪ X` with `X` in `F_u^{p−1}` and, with
/// `join`, also `A ∪ B` for disjoint `A ∈ F_v^a`, `B ∈ F_v^{p−a}`.
/// `levels[i]` holds `F^{i+1}` for `i + 2 < p`.
#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    levels: &[Vec<RepFamily>],
    prev: &[RepFamily],
    p: usize,
    k: usize,
    trep: &TruncatedRep,
    join: bool,
    ctr: &mut Counters,
) -> Result<Vec<RepFamily>> {
    let level = |a: usize| if a == p - 1 { prev } else { &levels[a - 1][..] };
    let mut out = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let mut seen: FxHashSet<Vec<usize>> = FxHashSet::default();
        let mut entries = Vec::new();
        let mut offer = |edges: Vec<usize>, base: &FamilyEntry, added: &[usize], ctr: &mut Counters| {
            if seen.contains(&edges) {
                return;
            }
            seen.insert(edges.clone());
            ctr.candidates += 1;
            if !is_independent_cographic(g, &edges) {
                return;
            }
            let mut minors = base.minors.clone();
            for (i, &e) in added.iter().enumerate() {
                minors = extend_minor_vector(trep, &minors, base.edges.len() + i, e);
            }
            if minors.iter().all(|&x| x == 0) {
                ctr.mc_failures += 1;
                return;
            }
            debug_assert!(entry_is_valid(g, v, p, &edges));
            entries.push(FamilyEntry { edges, minors });
        };
        for (&u, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
            for base in &prev[u].entries {
                if base.edges.contains(&e) {
                    continue;
                }
                let mut edges = base.edges.clone();
                let at = edges.binary_search(&e).unwrap_err();
                edges.insert(at, e);
                offer(edges, base, &[e], ctr);
            }
        }
        if join {
            for a in 1..=p / 2 {
                for x in &level(a)[v].entries {
                    for y in &level(p - a)[v].entries {
                        if y.edges.iter().any(|e| x.edges.binary_search(e).is_ok()) {
                            continue;
                        }
                        let mut edges = [x.edges.as_slice(), y.edges.as_slice()].concat();
                        edges.sort_unstable();
                        offer(edges, y, &x.edges, ctr);
                    }
                }
            }
        }
        out.push(RepFamily {
            anchor: v,
            p,
            entries,
        });
    }
    compress(out, p, k, trep, ctr)
}

/// Runs the family recursion for sides of exactly `k` edges.
fn search(g: &Graph, k: usize, opts: BcepOptions, stats: &mut Stats) -> Result<Option<Vec<usize>>> {
    let rep = cycle_space_basis(g);
    stats.set("rank", rep.rank() as u64);
    if k > rep.rank() {
        return Ok(None);
    }
    let field = Field::new(opts.field_bits)?;
    let trep = truncate(&rep, k, opts.seed, field);
    let mut ctr = Counters::default();
    let mut levels: Vec<Vec<RepFamily>> = Vec::with_capacity(k);
    let mut fams = compress(init_families(g, &trep), 1, k, &trep, &mut ctr)?;
    for p in 2..=k {
        if fams.iter().all(RepFamily::is_empty) {
            break;
        }
        let next = extend(g, &levels, &fams, p, k, &trep, true, &mut ctr)?;
        levels.push(std::mem::replace(&mut fams, next));
    }
    stats.add("candidates", ctr.candidates);
    stats.add("mc_failures", ctr.mc_failures);
    stats.add("family_bound_violations", ctr.bound_violations);
    stats.max("max_family", ctr.max_family);
    let found = fams
        .iter()
        .filter(|f| f.p == k)
        .find_map(|f| f.entries.first())
        .map(|e| e.edges.clone());
    if let Some(x) = &found {
        debug_assert!(fams.iter().all(|f| f
            .entries
            .iter()
            .all(|e| entry_is_valid(g, f.anchor, k, &e.edges))));
        debug_assert_eq!(x.len(), k);
    }
    Ok(found)
}

pub fn solve_bcep2(g: &Graph, n1: usize) -> Result<Option<EdgePartitionWitness>> {
    Ok(solve_bcep2_with(g, n1, BcepOptions::default())?.0)
}

/// Decides BCEP₂ with spanning semantics. The witness has exactly `n1` edges.
pub fn solve_bcep2_with(
    g: &Graph,
    n1: usize,
    opts: BcepOptions,
) -> Result<(Option<EdgePartitionWitness>, Stats)> {
    let m = g.edge_count();
    let n = g.vertex_count();
    if n1 == 0 || n1 >= m {
        return Err(Error::param(format!(
            "n1 = {n1} outside 1..={}",
            m.saturating_sub(1)
        )));
    }
    let mut stats = Stats::new();
    stats.set("seed", opts.seed);
    stats.set("field_bits", opts.field_bits as u64);
    stats.set("semantics", BcepSemantics::Spanning.to_string());
    if !is_connected(g) {
        stats.set("rule", "disconnected");
        return Ok((None, stats));
    }
    let accept = |x: EdgePartitionWitness| -> Result<Option<EdgePartitionWitness>> {
        Ok(verify_bcep2(g, &x, n1, BcepSemantics::Spanning)?.then_some(x))
    };
    let small = n1.min(m - n1);
    stats.set("k", small as u64);
    stats.set(
        "failure_bound",
        truncation_failure_bound(m, small, opts.field_bits),
    );
    if n1 <= m - n1 {
        let found = search(g, n1, opts, &mut stats)?;
        let w = match found {
            Some(x) => Some(
                accept(EdgePartitionWitness::new(x))?
                    .ok_or_else(|| Error::param("edge engine produced an invalid witness"))?,
            ),
            None => None,
        };
        return Ok((w, stats));
    }
    // The n1 side is the larger one; its complement must span all vertices.
    if m - n1 < n - 1 {
        stats.set("rule", "complement_cannot_span");
        return Ok((None, stats));
    }
    if let Some(y) = search(g, m - n1, opts, &mut stats)? {
        if let Some(w) = accept(EdgePartitionWitness::new(y).complement(m))? {
            return Ok((Some(w), stats));
        }
    }
    stats.set("k", n1 as u64);
    stats.set("failure_bound", truncation_failure_bound(m, n1, opts.field_bits));
    let found = search(g, n1, opts, &mut stats)?;
    let w = match found {
        Some(x) => Some(
            accept(EdgePartitionWitness::new(x))?
                .ok_or_else(|| Error::param("edge engine produced an invalid witness"))?,
        ),
        None => None,
    };
    Ok((w, stats))
}
