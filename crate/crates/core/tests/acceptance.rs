//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use bcp_core::bcep::{solve_bcep2_with, BcepOptions};
use bcp_core::dp::solve_bcp2_tw_with;
use bcp_core::generators::{
    band_graph, connected_graphs_by_edges, connected_graphs_by_vertices, gen_clique_reduction, gen_composition,
    gen_random, has_clique, is_planar, is_two_connected, series_parallel, RandomKind, RandomParams,
};
use bcp_core::oracle::{solve_bcep2_oracle, solve_bcp2_oracle};
use bcp_core::planar::solve_bcp2_planar;
use bcp_core::udg::{rule_dense_cell, solve_bcp2_udg, DiskInstance};
use bcp_core::{is_connected, verify_bcep2, verify_bcp2, BcepSemantics, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Counts and limits pinned here.
const C1_RANDOM: usize = 500;
const C1_BUDGET: Duration = Duration::from_secs(180);
const C2_GRAPHS: usize = 300;
const C2_MAX_N: usize = 14;
const C2_MAX_SIDE: usize = 4;
const C2_BUDGET: Duration = Duration::from_secs(180);
const C3_CLOUDS: usize = 200;
const C3_MAX_N: usize = 14;
const C3_DENSE: usize = 100;
const C3_DENSE_MARGIN: usize = 24;
const C3_BUDGET: Duration = Duration::from_secs(180);
const C4_GRAPHS: usize = 200;
const C4_MAX_N: usize = 12;
const C4_BUDGET: Duration = Duration::from_secs(300);
const C5_CASES: usize = 100;
const C5_BUDGET: Duration = Duration::from_secs(120);
const C6_BUNDLES: usize = 50;
const C6_BUDGET: Duration = Duration::from_secs(120);
const C7_MAX_M: usize = 10;
const C7_RANDOM: usize = 200;
const C7_RANDOM_MAX_M: usize = 12;
const C7_MAX_SIDE: usize = 5;
const C7_SEEDS: u64 = 20;
const C7_FIELD_BITS: u32 = 32;
const C7_BUDGET: Duration = Duration::from_secs(600);
const C9_N: usize = 200;
const C9_N1: [usize; 5] = [1, 50, 100, 137, 199];
const C9_PER_CALL: Duration = Duration::from_secs(10);
const C9_BAND_NS: [usize; 3] = [50, 100, 200];
const C9_BAND_N1: usize = 10;
const C9_GROWTH_RATIO: f64 = 1.5;

struct Report {
    passed: bool,
    detail: String,
}

impl Report {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Report {
            passed,
            detail: detail.into(),
        }
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + tag)
}

fn oracle(g: &Graph, n1: usize) -> bool {
    solve_bcp2_oracle(g, n1).expect("oracle within budget").is_some()
}

/// Random connected graph on `n` vertices with exactly `m` edges.
fn connected_with_edges(n: usize, m: usize, r: &mut impl Rng) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    let mut missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !edges.contains(e))
        .collect();
    while edges.len() < m {
        let i = r.gen_range(0..missing.len());
        edges.push(missing.swap_remove(i));
    }
    Graph::new(n, edges).unwrap()
}

fn gnp(n: usize, p: f64, r: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| r.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

/// Checks a vertex engine against the oracle for the given sides.
fn compare_vertex(
    g: &Graph,
    sides: impl Iterator<Item = usize>,
    engine: impl Fn(&Graph, usize) -> Option<bcp_core::VertexPartitionWitness>,
    disagreements: &mut Vec<String>,
    checked: &mut usize,
    label: &str,
) {
    for n1 in sides {
        let want = oracle(g, n1);
        let got = engine(g, n1);
        *checked += 1;
        if let Some(w) = &got {
            if !verify_bcp2(g, w, n1).unwrap() {
                disagreements.push(format!("{label} n1={n1}: witness rejected"));
                continue;
            }
        }
        if got.is_some() != want {
            disagreements.push(format!("{label} n1={n1}: engine {} oracle {want}", got.is_some()));
        }
    }
}

fn summarize(disagreements: &[String]) -> String {
    if disagreements.is_empty() {
        return String::new();
    }
    format!(" ({})", disagreements.iter().take(3).cloned().collect::<Vec<_>>().join("; "))
}

fn criterion_1() -> Report {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    let tw = |g: &Graph, n1| solve_bcp2_tw_with(g, n1, 1).unwrap().0;
    let mut catalog = 0;
    for n in 2..=7 {
        for (i, g) in connected_graphs_by_vertices(n).iter().enumerate() {
            catalog += 1;
            compare_vertex(g, 1..n, tw, &mut bad, &mut checked, &format!("catalog n={n} #{i}"));
        }
    }
    let mut r = rng(1);
    for i in 0..C1_RANDOM {
        let n = r.gen_range(8..=10);
        let density = r.gen_range(0.05..0.6);
        let g = gen_random(RandomKind::General, n, r.gen(), RandomParams { density, ..Default::default() })
            .unwrap()
            .into_graph()
            .unwrap();
        compare_vertex(&g, 1..n, tw, &mut bad, &mut checked, &format!("random #{i}"));
    }
    let elapsed = start.elapsed();
    Report::new(
        bad.is_empty() && elapsed < C1_BUDGET,
        format!(
            "{catalog} catalog + {C1_RANDOM} random graphs, {checked} instances, {} disagreements{}, {:.1}s",
            bad.len(),
            summarize(&bad),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Report {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut r = rng(2);
    for i in 0..C2_GRAPHS {
        let n = r.gen_range(4..=C2_MAX_N);
        let density = r.gen_range(0.0..0.8);
        let g = gen_random(RandomKind::Planar, n, r.gen(), RandomParams { density, ..Default::default() })
            .unwrap()
            .into_graph()
            .unwrap();
        assert!(is_planar(&g));
        let sides = (1..n).filter(|&n1| n1.min(n - n1) <= C2_MAX_SIDE);
        compare_vertex(
            &g,
            sides,
            |g, n1| solve_bcp2_planar(g, n1).unwrap(),
            &mut bad,
            &mut checked,
            &format!("planar #{i}"),
        );
    }
    let elapsed = start.elapsed();
    Report::new(
        bad.is_empty() && elapsed < C2_BUDGET,
        format!(
            "{C2_GRAPHS} planar graphs, {checked} instances, {} disagreements{}, {:.1}s",
            bad.len(),
            summarize(&bad),
            elapsed.as_secs_f64()
        ),
    )
}

/// A connected cloud whose first cell holds `dense` points, plus a short
/// chain leaving it.
fn dense_cloud(dense: usize, tail: usize, r: &mut impl Rng) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = (0..dense).map(|_| (r.gen_range(0.0..0.5), r.gen_range(0.0..0.5))).collect();
    let (mut x, mut y) = (0.25, 0.25);
    for _ in 0..tail {
        x += r.gen_range(0.3..0.7);
        y += r.gen_range(-0.3..0.3);
        pts.push((x, y));
    }
    pts
}

fn criterion_3() -> Report {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut r = rng(3);
    let mut connected = 0;
    for i in 0..C3_CLOUDS {
        let n = r.gen_range(3..=C3_MAX_N);
        let side = r.gen_range(0.8..2.5);
        let params = RandomParams {
            width: side,
            height: side,
            ..Default::default()
        };
        let pts = gen_random(RandomKind::UdgPoints, n, r.gen(), params).unwrap().into_points().unwrap();
        let di = DiskInstance::build(pts, 1.0).unwrap();
        connected += usize::from(is_connected(&di.graph));
        for n1 in 1..n {
            let want = oracle(&di.graph, n1);
            let got = solve_bcp2_udg(&di, n1).unwrap();
            checked += 1;
            if let Some(w) = &got {
                if !verify_bcp2(&di.graph, w, n1).unwrap() {
                    bad.push(format!("cloud #{i} n1={n1}: witness rejected"));
                    continue;
                }
            }
            if got.is_some() != want {
                bad.push(format!("cloud #{i} n1={n1}: engine {} oracle {want}", got.is_some()));
            }
        }
    }
    let mut dense_ok = 0;
    for i in 0..C3_DENSE {
        let k = r.gen_range(1..=5);
        let dense = k + C3_DENSE_MARGIN + r.gen_range(0..4);
        let pts = dense_cloud(dense, r.gen_range(0..6), &mut r);
        let di = DiskInstance::build(pts, 1.0).unwrap();
        match rule_dense_cell(&di, k) {
            Ok(Some(w)) if verify_bcp2(&di.graph, &w, k).unwrap() => dense_ok += 1,
            other => bad.push(format!("dense #{i} k={k}: {other:?}")),
        }
    }
    let elapsed = start.elapsed();
    Report::new(
        bad.is_empty() && dense_ok == C3_DENSE && elapsed < C3_BUDGET,
        format!(
            "{C3_CLOUDS} clouds ({connected} connected), {checked} instances, {dense_ok}/{C3_DENSE} dense-cell YES, {} failures{}, {:.1}s",
            bad.len(),
            summarize(&bad),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_4() -> Report {
    let start = Instant::now();
    let mut r = rng(4);
    let mut no = Vec::new();
    let mut checked = 0;
    for i in 0..C4_GRAPHS {
        let n = r.gen_range(3..=C4_MAX_N);
        let density = r.gen_range(0.0..0.5);
        let g = gen_random(RandomKind::TwoConnected, n, r.gen(), RandomParams { density, ..Default::default() })
            .unwrap()
            .into_graph()
            .unwrap();
        assert!(is_two_connected(&g));
        for n1 in 1..n {
            checked += 1;
            match solve_bcp2_tw_with(&g, n1, 1).unwrap().0 {
                Some(w) if verify_bcp2(&g, &w, n1).unwrap() => {}
                _ => no.push(format!("#{i} n={n} n1={n1}")),
            }
        }
    }
    let elapsed = start.elapsed();
    Report::new(
        no.is_empty() && elapsed < C4_BUDGET,
        format!(
            "{C4_GRAPHS} 2-connected graphs, {checked} splits, {} NO answers{}, {:.1}s",
            no.len(),
            summarize(&no),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Report {
    let start = Instant::now();
    let mut r = rng(5);
    let mut bad = Vec::new();
    let (mut yes, mut degenerate) = (0, 0);
    for i in 0..C5_CASES {
        let n = r.gen_range(3..=8);
        // k = n is outside the reduction's range, see gen_clique_reduction
        let k = r.gen_range(1..=(n - 1).min(4));
        let g = gnp(n, r.gen_range(0.2..0.9), &mut r);
        let red = gen_clique_reduction(&g, k).unwrap();
        let want = has_clique(&g, k);
        if red.degenerate {
            degenerate += 1;
            bad.push(format!("#{i}: degenerate output"));
            continue;
        }
        let got = oracle(&red.graph, red.n1);
        yes += usize::from(got);
        if got != want {
            bad.push(format!("#{i} n={n} k={k}: reduction {got} clique {want}"));
        }
    }
    let elapsed = start.elapsed();
    Report::new(
        bad.is_empty() && elapsed < C5_BUDGET,
        format!(
            "{C5_CASES} cases ({yes} YES, {degenerate} degenerate), {} disagreements{}, {:.1}s",
            bad.len(),
            summarize(&bad),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Report {
    let start = Instant::now();
    let mut r = rng(6);
    let mut bad = Vec::new();
    let mut yes = 0;
    for i in 0..C6_BUNDLES {
        let k = r.gen_range(2..=3);
        let t = r.gen_range(2..=3);
        let inputs: Vec<(Graph, usize)> = (0..t)
            .map(|_| {
                let n = r.gen_range(k + 2..=6);
                if r.gen_bool(0.6) {
                    // stars have no connected split with k ≥ 2 on one side
                    return (Graph::new(n, (1..n).map(|v| (0, v))).unwrap(), k);
                }
                let density = r.gen_range(0.0..0.6);
                let g = gen_random(RandomKind::Planar, n, r.gen(), RandomParams { density, ..Default::default() })
                    .unwrap()
                    .into_graph()
                    .unwrap();
                (g, k)
            })
            .collect();
        let want = inputs.iter().any(|(g, k)| oracle(g, *k));
        let composed = gen_composition(&inputs, k).unwrap();
        if !is_planar(&composed) {
            bad.push(format!("#{i}: composition not planar"));
        }
        let got = oracle(&composed, k);
        yes += usize::from(got);
        if got != want {
            bad.push(format!("#{i} k={k} t={t}: composition {got} OR {want}"));
        }
    }
    let elapsed = start.elapsed();
    Report::new(
        bad.is_empty() && elapsed < C6_BUDGET,
        format!(
            "{C6_BUNDLES} bundles ({yes} YES), {} failures{}, {:.1}s",
            bad.len(),
            summarize(&bad),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Report {
    let start = Instant::now();
    let mut graphs: Vec<Graph> = (1..=C7_MAX_M).flat_map(connected_graphs_by_edges).collect();
    let catalog = graphs.len();
    let mut r = rng(7);
    for _ in 0..C7_RANDOM {
        let n = r.gen_range(3..=9);
        let max_m = (n * (n - 1) / 2).min(C7_RANDOM_MAX_M);
        let m = r.gen_range((n - 1).max(2)..=max_m);
        graphs.push(connected_with_edges(n, m, &mut r));
    }
    let mut bad = Vec::new();
    let (mut instances, mut runs, mut mc, mut bound, mut yes) = (0, 0, 0u64, 0u64, 0);
    for (i, g) in graphs.iter().enumerate() {
        let m = g.edge_count();
        for n1 in (1..m).filter(|&n1| n1.min(m - n1) <= C7_MAX_SIDE) {
            instances += 1;
            let want = solve_bcep2_oracle(g, n1, BcepSemantics::Spanning).unwrap().is_some();
            yes += usize::from(want);
            for seed in 0..C7_SEEDS {
                let opts = BcepOptions {
                    seed,
                    field_bits: C7_FIELD_BITS,
                };
                let (w, stats) = solve_bcep2_with(g, n1, opts).unwrap();
                runs += 1;
                mc += stats.get_u64("mc_failures").unwrap_or(0);
                bound += stats.get_u64("family_bound_violations").unwrap_or(0);
                if let Some(w) = &w {
                    if !verify_bcep2(g, w, n1, BcepSemantics::Spanning).unwrap() {
                        bad.push(format!("graph #{i} n1={n1} seed={seed}: witness rejected"));
                    }
                }
                if w.is_some() != want {
                    bad.push(format!("graph #{i} n1={n1} seed={seed}: engine {} oracle {want}", w.is_some()));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Report::new(
        bad.is_empty() && mc == 0 && bound == 0 && elapsed < C7_BUDGET,
        format!(
            "{catalog} catalog + {C7_RANDOM} random graphs, {instances} instances ({yes} YES) x {C7_SEEDS} seeds = {runs} runs, {} disagreements{}, {mc} Monte Carlo failures, {bound} family bound violations, {:.1}s",
            bad.len(),
            summarize(&bad),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Report {
    let c6 = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
    let p4 = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, g, n1) in [("C6", &c6, 3), ("P4", &p4, 1)] {
        let spanning_engine = solve_bcep2_with(g, n1, BcepOptions::default()).unwrap().0.is_some();
        let spanning_oracle = solve_bcep2_oracle(g, n1, BcepSemantics::Spanning).unwrap().is_some();
        let induced = solve_bcep2_oracle(g, n1, BcepSemantics::EdgeInduced).unwrap();
        let induced_ok = induced
            .as_ref()
            .is_some_and(|w| verify_bcep2(g, w, n1, BcepSemantics::EdgeInduced).unwrap());
        ok &= !spanning_engine && !spanning_oracle && induced_ok;
        lines.push(format!(
            "{name} n1={n1}: spanning engine {} oracle {}, edge-induced {}",
            yn(spanning_engine),
            yn(spanning_oracle),
            yn(induced_ok)
        ));
    }
    Report::new(ok, lines.join("; "))
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn criterion_9() -> Report {
    let mut ok = true;
    let mut parts = Vec::new();
    let g = series_parallel(C9_N, 9, 0.25).unwrap();
    let mut worst = Duration::ZERO;
    let mut width = 0;
    for n1 in C9_N1 {
        let start = Instant::now();
        let (w, stats) = solve_bcp2_tw_with(&g, n1, 1).unwrap();
        let t = start.elapsed();
        worst = worst.max(t);
        width = stats.get_u64("width").unwrap_or(0);
        if let Some(w) = &w {
            ok &= verify_bcp2(&g, w, n1).unwrap();
        }
        ok &= t < C9_PER_CALL;
    }
    ok &= width <= 3;
    parts.push(format!(
        "series-parallel n={C9_N} width {width}: slowest of n1 {C9_N1:?} took {:.2}s",
        worst.as_secs_f64()
    ));
    // Signatures are bag side/partition labellings, the quantity bounded in
    // terms of the width; (signature, count) pairs also carry a factor ≤ n.
    let mut table = Vec::new();
    for w in 1..=3 {
        let (sigs, pairs): (Vec<u64>, Vec<u64>) = C9_BAND_NS
            .iter()
            .map(|&n| {
                let (_, stats) = solve_bcp2_tw_with(&band_graph(n, w), C9_BAND_N1, 1).unwrap();
                (stats.get_u64("max_signatures").unwrap(), stats.get_u64("max_states").unwrap())
            })
            .unzip();
        let ratio = sigs[sigs.len() - 1] as f64 / sigs[0] as f64;
        ok &= ratio <= C9_GROWTH_RATIO;
        parts.push(format!(
            "band w={w} n={C9_BAND_NS:?}: max signatures {sigs:?} (ratio {ratio:.2}), max (signature, count) pairs {pairs:?}"
        ));
        table.push(sigs);
    }
    for col in 0..C9_BAND_NS.len() {
        ok &= (1..table.len()).all(|w| table[w][col] > table[w - 1][col]);
    }
    Report::new(ok, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Report);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 treewidth engine vs oracle", criterion_1),
        ("2 planar engine vs oracle", criterion_2),
        ("3 disk engine vs oracle, dense-cell rule", criterion_3),
        ("4 2-connected graphs split every way", criterion_4),
        ("5 clique reduction", criterion_5),
        ("6 planar OR-composition", criterion_6),
        ("7 edge engine vs oracle", criterion_7),
        ("8 semantics gap", criterion_8),
        ("9 scaling", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        let id = name.split(' ').next().unwrap();
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let report = run();
        println!("[{}] criterion {name}: {}", if report.passed { "PASS" } else { "FAIL" }, report.detail);
        failed += usize::from(!report.passed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
