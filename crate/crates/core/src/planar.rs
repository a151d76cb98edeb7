//! Ball-and-contract engine for planar inputs.
//!
//! A side `X` of size `k` containing `v` lies inside the radius-`k` BFS ball
//! around `v`. Everything outside the ball is contracted to one terminal per
//! component, terminals are barred from `X`, and the DP runs on the small
//! contracted graph.

use crate::dp::{check_n1, run_dp_detailed, EdgeRule};
use crate::error::Result;
use crate::graph::{
    bfs_ball, contract_outside, is_connected, verify_bcp2, Contraction, Graph,
    VertexPartitionWitness,
};
use crate::stats::Stats;
use crate::treedecomp::{make_nice, min_fill_decomposition};

/// Finds `X` with `v ∈ X`, `|X| = k`, and both `g[X]` and `g − X` connected.
pub fn solve_restricted_planar(
    g: &Graph,
    k: usize,
    v: usize,
) -> Result<Option<VertexPartitionWitness>> {
    restricted(g, k, v, &mut Stats::new())
}

fn restricted(
    g: &Graph,
    k: usize,
    v: usize,
    stats: &mut Stats,
) -> Result<Option<VertexPartitionWitness>> {
    let n = g.vertex_count();
    g.check_vertex(v)?;
    check_n1(n, k)?;
    let ball = bfs_ball(g, v, k)?;
    let c = contract_outside(g, &ball)?;
    stats.max("max_ball", ball.len() as u64);
    let x = solve_contracted(&c, k, v, stats)?;
    debug_assert!(x
        .iter()
        .flat_map(|w| w.side_one())
        .all(|u| ball.binary_search(u).is_ok()));
    Ok(x)
}

/// Runs the DP on a contraction with `a = v` and terminals barred from the
/// `k`-side, mapping any witness back to original ids.
pub(crate) fn solve_contracted(
    c: &Contraction,
    k: usize,
    v: usize,
    stats: &mut Stats,
) -> Result<Option<VertexPartitionWitness>> {
    let h = &c.graph;
    stats.max("max_terminals", c.terminals.len() as u64);
    if k >= h.vertex_count() {
        return Ok(None);
    }
    let a = c.local_id(v).expect("centre is kept");
    let td = min_fill_decomposition(h);
    stats.max("width", td.width() as u64);
    // A terminal can never join X, so when one exists it can serve as b.
    let bs: Vec<usize> = match c.terminals.first() {
        Some(&t) => vec![t],
        None => (0..h.vertex_count()).filter(|&b| b != a).collect(),
    };
    for b in bs {
        let ntd = make_nice(&td, h, a, b)?;
        let run = run_dp_detailed(&ntd, h, &[k], &c.terminals, EdgeRule::Merge)?;
        stats.add("dp_runs", 1);
        stats.add("states", run.states);
        stats.max("max_states", run.max_states);
        if let Some((_, w)) = run.found {
            let x = w
                .side_one()
                .iter()
                .map(|&id| c.original(id).expect("witness avoids terminals"));
            return Ok(Some(VertexPartitionWitness::new(x)));
        }
    }
    Ok(None)
}

/// Decides BCP₂ by one restricted solve per vertex. The witness has exactly
/// `n1` vertices.
pub fn solve_bcp2_planar(g: &Graph, n1: usize) -> Result<Option<VertexPartitionWitness>> {
    Ok(solve_bcp2_planar_stats(g, n1)?.0)
}

pub fn solve_bcp2_planar_stats(
    g: &Graph,
    n1: usize,
) -> Result<(Option<VertexPartitionWitness>, Stats)> {
    let n = g.vertex_count();
    check_n1(n, n1)?;
    let mut stats = Stats::new();
    if !is_connected(g) {
        let (w, s) = crate::dp::solve_bcp2_tw_with(g, n1, 1)?;
        stats.merge(s);
        return Ok((w, stats));
    }
    let k = n1.min(n - n1);
    stats.set("k", k as u64);
    for v in 0..n {
        if let Some(x) = restricted(g, k, v, &mut stats)? {
            let w = x.normalized(n, n1);
            debug_assert!(verify_bcp2(g, &w, n1)?);
            stats.set("centre", v as u64);
            return Ok((Some(w), stats));
        }
    }
    Ok((None, stats))
}
