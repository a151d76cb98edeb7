//! Exhaustive catalogs of small connected graphs up to isomorphism.

use std::collections::HashMap;

use petgraph::graph::UnGraph;

use crate::graph::Graph;

fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let mut pg = UnGraph::with_capacity(g.vertex_count(), g.edge_count());
    for _ in 0..g.vertex_count() {
        pg.add_node(());
    }
    pg.extend_with_edges(g.edges().iter().map(|&(u, v)| (u as u32, v as u32)));
    pg
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && petgraph::algo::is_isomorphic(&to_petgraph(a), &to_petgraph(b))
}

/// Isomorphism-invariant fingerprint from three rounds of colour refinement.
fn fingerprint(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut colour: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    for _ in 0..3 {
        let mut sigs: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = g.neighbors(v).iter().map(|&w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colour = sigs
            .drain(..)
            .map(|s| distinct.binary_search(&s).unwrap() as u64)
            .collect();
    }
    let mut out = vec![n as u64, g.edge_count() as u64];
    let mut c = colour;
    c.sort_unstable();
    out.extend(c);
    out
}

#[derive(Default)]
struct IsoSet {
    buckets: HashMap<Vec<u64>, Vec<usize>>,
    graphs: Vec<Graph>,
}

impl IsoSet {
    fn insert(&mut self, g: Graph) {
        let bucket = self.buckets.entry(fingerprint(&g)).or_default();
        if bucket.iter().any(|&i| is_isomorphic(&self.graphs[i], &g)) {
            return;
        }
        bucket.push(self.graphs.len());
        self.graphs.push(g);
    }
}

fn with_edges(n: usize, base: &Graph, extra: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::new(n, base.edges().iter().copied().chain(extra)).expect("catalog edges are simple")
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, for `n ≥ 1`. Every such graph arises from one on `n − 1`
/// vertices by adding a vertex joined to a nonempty subset.
pub fn connected_graphs_by_vertices(n: usize) -> Vec<Graph> {
    assert!((1..=9).contains(&n), "catalog supports 1..=9 vertices");
    let mut level = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut set = IsoSet::default();
        let v = size - 1;
        for g in &level {
            for mask in 1u32..1 << v {
                let extra = (0..v).filter(|&i| mask >> i & 1 == 1).map(|i| (i, v));
                set.insert(with_edges(size, g, extra));
            }
        }
        level = set.graphs;
    }
    level
}

/// One representative per isomorphism class of connected graphs with `m`
/// edges and no isolated vertices (`m = 0` gives the single vertex). Grown
/// by adding a chord or a pendant edge.
pub fn connected_graphs_by_edges(m: usize) -> Vec<Graph> {
    assert!(m <= 12, "catalog supports up to 12 edges");
    let mut level = vec![Graph::empty(1)];
    for _ in 0..m {
        let mut set = IsoSet::default();
        for g in &level {
            let n = g.vertex_count();
            for u in 0..n {
                for v in u + 1..n {
                    if !g.has_edge(u, v) {
                        set.insert(with_edges(n, g, [(u, v)]));
                    }
                }
                set.insert(with_edges(n + 1, g, [(u, n)]));
            }
        }
        level = set.graphs;
    }
    level
}
