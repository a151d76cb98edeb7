//! Unit disk graphs: grid cells of side ½, the two reduction rules, and a
//! Turing kernel of one Euclidean-ball instance per vertex.

use std::collections::BTreeMap;

use crate::dp::check_n1;
use crate::error::{Error, Result};
use crate::graph::{
    connected_components, contract_outside, verify_bcp2, Contraction, Graph,
    VertexPartitionWitness,
};
use crate::planar::solve_contracted;
use crate::stats::Stats;

pub type Cell = (i64, i64);

/// Fixed-point copies of the coordinates, used when every input has a short
/// decimal form so that distance ties compare exactly.
#[derive(Clone, Debug)]
struct Exact {
    xs: Vec<(i128, i128)>,
    threshold: i128,
}

fn decimal(x: f64) -> Option<(i128, u32)> {
    let s = format!("{x}");
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if frac.len() > 18 || int.len() > 20 {
        return None;
    }
    let digits: i128 = format!("{int}{frac}").parse().ok()?;
    Some((if neg { -digits } else { digits }, frac.len() as u32))
}

impl Exact {
    fn new(points: &[(f64, f64)], threshold: f64) -> Option<Self> {
        const CAP: i128 = 1 << 61;
        let mut parsed = Vec::with_capacity(2 * points.len() + 1);
        for &(x, y) in points {
            parsed.push(decimal(x)?);
            parsed.push(decimal(y)?);
        }
        parsed.push(decimal(threshold)?);
        let places = parsed.iter().map(|&(_, d)| d).max().unwrap_or(0);
        let mut scaled = Vec::with_capacity(parsed.len());
        for (m, d) in parsed {
            let v = m.checked_mul(10i128.checked_pow(places - d)?)?;
            if v.abs() >= CAP {
                return None;
            }
            scaled.push(v);
        }
        let threshold = scaled.pop()?;
        let xs = scaled.chunks(2).map(|c| (c[0], c[1])).collect();
        Some(Exact { xs, threshold })
    }

    /// `|p_u − p_v| ≤ factor · threshold`.
    fn within(&self, u: usize, v: usize, factor: i128) -> bool {
        let (dx, dy) = (self.xs[u].0 - self.xs[v].0, self.xs[u].1 - self.xs[v].1);
        let r = self.threshold * factor;
        dx * dx + dy * dy <= r * r
    }
}

/// A point set, its unit disk graph, and the ½ × ½ grid cells.
#[derive(Clone, Debug)]
pub struct DiskInstance {
    pub points: Vec<(f64, f64)>,
    pub threshold: f64,
    pub graph: Graph,
    /// Nonempty cells, each listing its vertex ids ascending.
    pub cells: BTreeMap<Cell, Vec<usize>>,
    pub cell_of: Vec<Cell>,
    exact: Option<Exact>,
}

fn cell_of(p: (f64, f64)) -> Cell {
    ((2.0 * p.0).floor() as i64, (2.0 * p.1).floor() as i64)
}

impl DiskInstance {
    pub fn build(points: Vec<(f64, f64)>, threshold: f64) -> Result<Self> {
        if !(threshold.is_finite() && threshold > 0.0) {
            return Err(Error::param(format!("threshold {threshold} must be positive and finite")));
        }
        if let Some(i) = points.iter().position(|p| !(p.0.is_finite() && p.1.is_finite())) {
            return Err(Error::param(format!("point {i} has a non-finite coordinate")));
        }
        let exact = Exact::new(&points, threshold);
        let cell_of: Vec<Cell> = points.iter().map(|&p| cell_of(p)).collect();
        let mut cells: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
        for (v, &c) in cell_of.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let mut di = DiskInstance {
            points,
            threshold,
            graph: Graph::empty(0),
            cells,
            cell_of,
            exact,
        };
        let r = di.reach() as i64;
        let mut edges = Vec::new();
        for (&(cx, cy), members) in &di.cells {
            for dx in -r..=r {
                for dy in -r..=r {
                    let Some(other) = di.cells.get(&(cx + dx, cy + dy)) else {
                        continue;
                    };
                    for &u in members {
                        for &v in other {
                            if u < v && di.within(u, v, 1) {
                                edges.push((u, v));
                            }
                        }
                    }
                }
            }
        }
        edges.sort_unstable();
        di.graph = Graph::new(di.points.len(), edges)?;
        Ok(di)
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    /// How many cells apart two adjacent vertices can be, per axis.
    pub fn reach(&self) -> usize {
        (2.0 * self.threshold).ceil() as usize
    }

    /// Whether every pair of vertices sharing a cell is adjacent.
    pub fn cells_are_cliques(&self) -> bool {
        self.threshold >= std::f64::consts::FRAC_1_SQRT_2
    }

    /// Number of other cells in a vertex's neighborhood block: 24 at unit threshold.
    pub fn mark_budget(&self) -> usize {
        let side = 2 * self.reach() + 1;
        side * side - 1
    }

    fn within(&self, u: usize, v: usize, factor: usize) -> bool {
        match &self.exact {
            Some(e) => e.within(u, v, factor as i128),
            None => {
                let (p, q) = (self.points[u], self.points[v]);
                let r = self.threshold * factor as f64;
                (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2) <= r * r
            }
        }
    }

    /// Size counts per occupied cell, as `(size, cells with that size)`.
    pub fn cell_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for members in self.cells.values() {
            *h.entry(members.len()).or_insert(0) += 1;
        }
        h
    }
}

/// Result of a reduction rule that may settle the instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleOutcome {
    Decided(Option<VertexPartitionWitness>),
    Undecided,
}

/// Three or more components: NO. Two: YES iff one has a permitted size.
pub fn rule_components(di: &DiskInstance, n1: usize) -> Result<RuleOutcome> {
    let n = di.vertex_count();
    check_n1(n, n1)?;
    let comps = connected_components(&di.graph);
    Ok(match comps.len() {
        1 => RuleOutcome::Undecided,
        2 => RuleOutcome::Decided(
            comps
                .into_iter()
                .find(|c| c.len() == n1 || c.len() == n - n1)
                .map(|c| VertexPartitionWitness::new(c).normalized(n, n1)),
        ),
        _ => RuleOutcome::Decided(None),
    })
}

/// On a connected instance, a cell holding at least `k + 24` vertices
/// (at unit threshold) yields a `k`-vertex side directly: one vertex of the
/// cell is kept back for each neighboring cell that touches it, and the `k`
/// lowest-id vertices among the rest form `X`.
pub fn rule_dense_cell(di: &DiskInstance, k: usize) -> Result<Option<VertexPartitionWitness>> {
    let n = di.vertex_count();
    check_n1(n, k)?;
    if !crate::graph::is_connected(&di.graph) {
        return Err(Error::Disconnected(
            "the dense-cell rule needs a connected disk graph".into(),
        ));
    }
    if !di.cells_are_cliques() {
        return Ok(None);
    }
    let budget = di.mark_budget();
    let r = di.reach() as i64;
    let g = &di.graph;
    for (&(cx, cy), members) in &di.cells {
        if members.len() < k + budget {
            continue;
        }
        let mut marked = vec![false; n];
        for dx in -r..=r {
            for dy in -r..=r {
                if (dx, dy) == (0, 0) || !di.cells.contains_key(&(cx + dx, cy + dy)) {
                    continue;
                }
                let target = (cx + dx, cy + dy);
                if let Some(&m) = members
                    .iter()
                    .find(|&&s| g.neighbors(s).iter().any(|&y| di.cell_of[y] == target))
                {
                    marked[m] = true;
                }
            }
        }
        let x: Vec<usize> = members.iter().copied().filter(|&s| !marked[s]).take(k).collect();
        debug_assert_eq!(x.len(), k);
        let w = VertexPartitionWitness::new(x);
        debug_assert!(verify_bcp2(g, &w, k)?);
        return Ok(Some(w));
    }
    Ok(None)
}

/// Keeps the vertices within Euclidean distance `k · threshold` of `v` and
/// contracts every outside component to a terminal.
pub fn kernelize_restricted_udg(di: &DiskInstance, k: usize, v: usize) -> Result<Contraction> {
    di.graph.check_vertex(v)?;
    let keep: Vec<usize> = (0..di.vertex_count()).filter(|&u| di.within(u, v, k)).collect();
    contract_outside(&di.graph, &keep)
}

/// Upper bound on kernel size once neither rule applies: the cells meeting
/// a disk of radius `k · threshold`, each below the dense-cell threshold.
pub fn kernel_size_bound(di: &DiskInstance, k: usize) -> usize {
    let per_axis = (4.0 * k as f64 * di.threshold).floor() as usize + 2;
    per_axis * per_axis * (k + di.mark_budget() - 1)
}

pub fn solve_bcp2_udg(di: &DiskInstance, n1: usize) -> Result<Option<VertexPartitionWitness>> {
    Ok(solve_bcp2_udg_stats(di, n1)?.0)
}

/// Rules first, then one kernelized restricted solve per vertex. The
/// witness has exactly `n1` vertices.
pub fn solve_bcp2_udg_stats(
    di: &DiskInstance,
    n1: usize,
) -> Result<(Option<VertexPartitionWitness>, Stats)> {
    let n = di.vertex_count();
    let mut stats = Stats::new();
    stats.set("cells", di.cells.len() as u64);
    stats.set(
        "max_cell",
        di.cells.values().map(|c| c.len() as u64).max().unwrap_or(0),
    );
    if let RuleOutcome::Decided(w) = rule_components(di, n1)? {
        stats.set("rule", "components");
        return Ok((w, stats));
    }
    let k = n1.min(n - n1);
    if let Some(x) = rule_dense_cell(di, k)? {
        stats.set("rule", "dense_cell");
        return Ok((Some(x.normalized(n, n1)), stats));
    }
    stats.set("rule", "kernel");
    for v in 0..n {
        let c = kernelize_restricted_udg(di, k, v)?;
        stats.max("max_kernel", c.kept.len() as u64);
        if let Some(x) = solve_contracted(&c, k, v, &mut stats)? {
            let w = x.normalized(n, n1);
            debug_assert!(verify_bcp2(&di.graph, &w, n1)?);
            return Ok((Some(w), stats));
        }
    }
    Ok((None, stats))
}
