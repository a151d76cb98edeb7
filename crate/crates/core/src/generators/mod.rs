//! Instance generators: the clique gadget, the planar OR-composition and
//! seeded random corpora.

mod catalog;
mod planarity;

pub use catalog::{connected_graphs_by_edges, connected_graphs_by_vertices, is_isomorphic};
pub use planarity::is_planar;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};

/// Output of [`gen_clique_reduction`].
#[derive(Clone, Debug)]
pub struct CliqueReduction {
    pub graph: Graph,
    pub n1: usize,
    /// `n1` leaves no room for a second side (`n1 ≥ |V′|`).
    pub degenerate: bool,
}

/// Builds G′ from `g` and `k`: V becomes a clique, each non-adjacent pair
/// {v_i, v_j} gets a vertex u_ij adjacent to both, and each u_ij gets k+1
/// pendant vertices. G′ has a connected split with a side of size k iff
/// `g` has a k-clique.
///
/// The equivalence needs `k < n`. At `k = n` the side `X = V` leaves
/// `U ∪ W` behind, which is a star when `g` has exactly one non-edge.
///
/// Layout: V keeps ids `0..n`; the u-vertex of the `t`-th non-edge (in
/// lexicographic order) is `n + t`; its pendants follow all u-vertices in
/// blocks of `k + 1`.
pub fn gen_clique_reduction(g: &Graph, k: usize) -> Result<CliqueReduction> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let n = g.vertex_count();
    let mut edges = Vec::new();
    let mut non_edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
            if !g.has_edge(i, j) {
                non_edges.push((i, j));
            }
        }
    }
    let t = non_edges.len();
    for (idx, &(i, j)) in non_edges.iter().enumerate() {
        let u = n + idx;
        edges.push((i, u));
        edges.push((j, u));
        for l in 0..=k {
            edges.push((u, n + t + idx * (k + 1) + l));
        }
    }
    let total = n + t * (k + 2);
    Ok(CliqueReduction {
        graph: Graph::new(total, edges)?,
        n1: k,
        degenerate: k >= total,
    })
}

/// Designated chain vertices of a composition input: the `k + 1` vertices of
/// smallest degree, ties by id, in selection order.
pub fn designated_vertices(g: &Graph, k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    order.truncate(k + 1);
    order
}

/// Chains `k + 1` copies of every input. Copy ℓ of Gᵢ occupies a contiguous
/// id block; its designated vertex ℓ is joined to designated vertex ℓ+1 of
/// copy ℓ+1, and the last copy of Gᵢ is joined to the first copy of Gᵢ₊₁.
///
/// Each input needs at least `k + 1` vertices so that every chain vertex is
/// a cut vertex of the result.
pub fn gen_composition(instances: &[(Graph, usize)], k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let mut edges = Vec::new();
    let mut offset = 0;
    let mut prev_tail: Option<usize> = None;
    for (i, (g, n1)) in instances.iter().enumerate() {
        if *n1 != k {
            return Err(Error::param(format!("instance {i} has n1 = {n1}, expected {k}")));
        }
        if g.vertex_count() < k + 1 {
            return Err(Error::param(format!(
                "instance {i} has {} vertices, need at least {}",
                g.vertex_count(),
                k + 1
            )));
        }
        if !is_planar(g) {
            return Err(Error::NonPlanar);
        }
        let chain = designated_vertices(g, k);
        let n = g.vertex_count();
        for copy in 0..=k {
            let base = offset + copy * n;
            edges.extend(g.edges().iter().map(|&(u, v)| (base + u, base + v)));
            let here = base + chain[copy];
            if copy > 0 {
                edges.push((base - n + chain[copy - 1], here));
            } else if let Some(tail) = prev_tail {
                edges.push((tail, here));
            }
        }
        prev_tail = Some(offset + k * n + chain[k]);
        offset += (k + 1) * n;
    }
    Graph::new(offset, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    General,
    Planar,
    TwoConnected,
    UdgPoints,
}

impl std::str::FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(RandomKind::General),
            "planar" => Ok(RandomKind::Planar),
            "two_connected" | "two-connected" => Ok(RandomKind::TwoConnected),
            "udg_points" | "udg-points" => Ok(RandomKind::UdgPoints),
            other => Err(Error::param(format!("unknown random kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RandomParams {
    /// Probability of each optional extra edge.
    pub density: f64,
    /// Point box for `UdgPoints`.
    pub width: f64,
    pub height: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            density: 0.2,
            width: 4.0,
            height: 4.0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Generated {
    Graph(Graph),
    Points(Vec<(f64, f64)>),
}

impl Generated {
    pub fn into_graph(self) -> Option<Graph> {
        match self {
            Generated::Graph(g) => Some(g),
            Generated::Points(_) => None,
        }
    }

    pub fn into_points(self) -> Option<Vec<(f64, f64)>> {
        match self {
            Generated::Points(p) => Some(p),
            Generated::Graph(_) => None,
        }
    }
}

pub fn gen_random(kind: RandomKind, n: usize, seed: u64, params: RandomParams) -> Result<Generated> {
    if !(0.0..=1.0).contains(&params.density) {
        return Err(Error::param("density must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomKind::General => Ok(Generated::Graph(random_connected(n, params.density, &mut rng)?)),
        RandomKind::Planar => Ok(Generated::Graph(random_planar(n, params.density, &mut rng)?)),
        RandomKind::TwoConnected => {
            if n < 3 {
                return Err(Error::param("two_connected needs n ≥ 3"));
            }
            Ok(Generated::Graph(random_two_connected(n, params.density, &mut rng)?))
        }
        RandomKind::UdgPoints => {
            if !(params.width > 0.0 && params.height > 0.0) || !params.width.is_finite() || !params.height.is_finite() {
                return Err(Error::param("point box must have positive finite sides"));
            }
            let pts = (0..n)
                .map(|_| (rng.gen::<f64>() * params.width, rng.gen::<f64>() * params.height))
                .collect();
            Ok(Generated::Points(pts))
        }
    }
}

fn random_tree_edges(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    (1..n).map(|i| (perm[rng.gen_range(0..i)], perm[i])).collect()
}

fn random_connected(n: usize, density: f64, rng: &mut impl Rng) -> Result<Graph> {
    let mut edges = random_tree_edges(n, rng);
    let mut have: std::collections::HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for u in 0..n {
        for v in u + 1..n {
            if !have.contains(&(u, v)) && rng.gen_bool(density) {
                have.insert((u, v));
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

fn random_planar(n: usize, density: f64, rng: &mut impl Rng) -> Result<Graph> {
    let mut edges = random_tree_edges(n, rng);
    let mut candidates = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (u, v)) {
                candidates.push((u, v));
            }
        }
    }
    candidates.shuffle(rng);
    let target = (density * (3 * n.max(3) - 6) as f64).round() as usize;
    let mut added = 0;
    for (u, v) in candidates {
        if added >= target {
            break;
        }
        edges.push((u, v));
        if is_planar(&Graph::new(n, edges.iter().copied())?) {
            added += 1;
        } else {
            edges.pop();
        }
    }
    Graph::new(n, edges)
}

/// A cycle grown by random ears, then random chords.
fn random_two_connected(n: usize, density: f64, rng: &mut impl Rng) -> Result<Graph> {
    let start = rng.gen_range(3..=n);
    let mut edges: Vec<(usize, usize)> = (0..start).map(|i| (i, (i + 1) % start)).collect();
    let mut next = start;
    while next < n {
        let len = rng.gen_range(1..=(n - next).min(3));
        let a = rng.gen_range(0..next);
        let mut b = rng.gen_range(0..next - 1);
        if b >= a {
            b += 1;
        }
        let mut prev = a;
        for x in next..next + len {
            edges.push((prev, x));
            prev = x;
        }
        edges.push((prev, b));
        next += len;
    }
    let mut have: std::collections::HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for u in 0..n {
        for v in u + 1..n {
            if !have.contains(&(u, v)) && rng.gen_bool(density / 2.0) {
                have.insert((u, v));
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random graph of treewidth at most 2: each new vertex joins both ends of a
/// random existing edge, or with probability `pendant_prob` one random vertex.
pub fn series_parallel(n: usize, seed: u64, pendant_prob: f64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&pendant_prob) {
        return Err(Error::param("pendant_prob must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        if edges.is_empty() || rng.gen_bool(pendant_prob) {
            edges.push((rng.gen_range(0..v), v));
        } else {
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            edges.push((a, v));
            edges.push((b, v));
        }
    }
    Graph::new(n, edges)
}

/// `i ~ j` iff `0 < |i − j| ≤ w`; treewidth exactly `min(w, n − 1)`.
pub fn band_graph(n: usize, w: usize) -> Graph {
    Graph::new(
        n,
        (0..n).flat_map(|i| (i + 1..n.min(i + w + 1)).map(move |j| (i, j))),
    )
    .expect("band edges are simple")
}

/// Brute-force k-clique test.
pub fn has_clique(g: &Graph, k: usize) -> bool {
    fn grow(g: &Graph, chosen: &mut Vec<usize>, from: usize, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in from..g.vertex_count() {
            if chosen.iter().all(|&c| g.has_edge(c, v)) {
                chosen.push(v);
                if grow(g, chosen, v + 1, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    grow(g, &mut Vec::new(), 0, k)
}

/// Connected, at least three vertices and no cut vertex.
pub fn is_two_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n < 3 || !is_connected(g) {
        return false;
    }
    let mut keep = vec![true; n];
    (0..n).all(|v| {
        keep[v] = false;
        let ok = g.component_count_within(&keep) == 1;
        keep[v] = true;
        ok
    })
}
