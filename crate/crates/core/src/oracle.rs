//! Exhaustive reference solvers. Every other engine is checked against these.

use crate::error::{Error, Result};
use crate::graph::{
    verify_bcep2, BcepSemantics, EdgePartitionWitness, Graph, VertexPartitionWitness,
};

/// Refuse instances once candidates scanned × graph size exceeds this.
pub const ORACLE_WORK_LIMIT: u64 = 300_000_000;

struct Frame {
    set: Vec<usize>,
    /// Extension candidates, ascending.
    ext: Vec<usize>,
}

/// Streams every connected vertex set of a fixed size exactly once.
///
/// Sets are grown from a root by boundary expansion: a vertex enters the
/// extension list only if it is adjacent to the newest member and to nothing
/// already in the set or its neighborhood. Without an anchor each set is
/// rooted at its minimum vertex.
pub struct ConnectedSets<'g> {
    g: &'g Graph,
    size: usize,
    roots: std::vec::IntoIter<usize>,
    anchored: bool,
    root: usize,
    stack: Vec<Frame>,
    near: Vec<bool>,
}

impl<'g> ConnectedSets<'g> {
    fn exclusive_neighbors(&mut self, set: &[usize], w: usize) -> Vec<usize> {
        for &s in set {
            self.near[s] = true;
            for &x in self.g.neighbors(s) {
                self.near[x] = true;
            }
        }
        let out = self
            .g
            .neighbors(w)
            .iter()
            .copied()
            .filter(|&u| !self.near[u] && (self.anchored || u > self.root))
            .collect();
        for &s in set {
            self.near[s] = false;
            for &x in self.g.neighbors(s) {
                self.near[x] = false;
            }
        }
        out
    }
}

impl Iterator for ConnectedSets<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let Some(frame) = self.stack.last_mut() else {
                let root = self.roots.next()?;
                self.root = root;
                let ext = self
                    .g
                    .neighbors(root)
                    .iter()
                    .copied()
                    .filter(|&u| self.anchored || u > root)
                    .collect();
                self.stack.push(Frame {
                    set: vec![root],
                    ext,
                });
                continue;
            };
            if frame.set.len() == self.size {
                let mut set = self.stack.pop().unwrap().set;
                set.sort_unstable();
                return Some(set);
            }
            if frame.ext.is_empty() {
                self.stack.pop();
                continue;
            }
            let w = frame.ext.remove(0);
            let set = frame.set.clone();
            let mut ext = frame.ext.clone();
            ext.extend(self.exclusive_neighbors(&set, w));
            ext.sort_unstable();
            let mut grown = set;
            grown.push(w);
            self.stack.push(Frame { set: grown, ext });
        }
    }
}

pub fn enumerate_connected_vertex_sets(
    g: &Graph,
    size: usize,
    anchor: Option<usize>,
) -> Result<ConnectedSets<'_>> {
    let n = g.vertex_count();
    if size == 0 || size > n {
        return Err(Error::param(format!("set size {size} outside 1..={n}")));
    }
    let roots: Vec<usize> = match anchor {
        Some(a) => {
            g.check_vertex(a)?;
            vec![a]
        }
        None => (0..n).collect(),
    };
    Ok(ConnectedSets {
        g,
        size,
        roots: roots.into_iter(),
        anchored: anchor.is_some(),
        root: 0,
        stack: Vec::new(),
        near: vec![false; n],
    })
}

fn check_side(n1: usize, ground: usize, what: &str) -> Result<usize> {
    if n1 == 0 || n1 >= ground {
        return Err(Error::param(format!(
            "n1 = {n1} outside 1..={} for {ground} {what}",
            ground.saturating_sub(1)
        )));
    }
    Ok(n1.min(ground - n1))
}

fn budget_exceeded(scanned: usize, g: &Graph) -> Result<()> {
    let cost = (g.vertex_count() + g.edge_count()).max(1) as u64;
    if scanned as u64 * cost > ORACLE_WORK_LIMIT {
        return Err(Error::Limit(format!(
            "oracle gave up after {scanned} candidate sets"
        )));
    }
    Ok(())
}

/// Decides BCP₂ by enumerating connected sets of the smaller side.
/// The returned witness has exactly `n1` vertices.
pub fn solve_bcp2_oracle(g: &Graph, n1: usize) -> Result<Option<VertexPartitionWitness>> {
    let n = g.vertex_count();
    let k = check_side(n1, n, "vertices")?;
    let mut outside = vec![true; n];
    for (i, set) in enumerate_connected_vertex_sets(g, k, None)?.enumerate() {
        budget_exceeded(i, g)?;
        for &v in &set {
            outside[v] = false;
        }
        let ok = g.component_count_within(&outside) == 1;
        for &v in &set {
            outside[v] = true;
        }
        if ok {
            return Ok(Some(VertexPartitionWitness::new(set).normalized(n, n1)));
        }
    }
    Ok(None)
}

/// Line graph: vertex `i` is edge `i` of `g`.
pub fn line_graph(g: &Graph) -> Graph {
    let mut edges = Vec::new();
    for v in 0..g.vertex_count() {
        let inc = g.incident_edges(v);
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                edges.push((e.min(f), e.max(f)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(g.edge_count(), edges).expect("line graph of a simple graph is simple")
}

/// Decides BCEP₂ under `sem` by enumerating connected edge sets of the smaller side.
pub fn solve_bcep2_oracle(
    g: &Graph,
    n1: usize,
    sem: BcepSemantics,
) -> Result<Option<EdgePartitionWitness>> {
    let m = g.edge_count();
    let k = check_side(n1, m, "edges")?;
    // Both sides are edge-connected under either semantics, so the smaller
    // side is a connected vertex set of the line graph.
    let lg = line_graph(g);
    for (i, set) in enumerate_connected_vertex_sets(&lg, k, None)?.enumerate() {
        budget_exceeded(i, g)?;
        let mut w = EdgePartitionWitness::new(set);
        if w.len() != n1 {
            w = w.complement(m);
        }
        if verify_bcep2(g, &w, n1, sem)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::verify_bcp2;

    fn all(g: &Graph, size: usize, anchor: Option<usize>) -> Vec<Vec<usize>> {
        enumerate_connected_vertex_sets(g, size, anchor)
            .unwrap()
            .collect()
    }

    /// Independent check: scan every subset and keep the connected ones.
    fn brute(g: &Graph, size: usize, anchor: Option<usize>) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != size {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if anchor.is_some_and(|a| !set.contains(&a)) {
                continue;
            }
            if g.is_induced_connected(&set) {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn connected_set_examples() {
        assert_eq!(all(&path(3), 2, None), vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(all(&complete(3), 2, Some(0)), vec![vec![0, 1], vec![0, 2]]);
        let mut s = all(&star(3), 3, None);
        s.sort();
        assert_eq!(s, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]);
        assert!(enumerate_connected_vertex_sets(&path(3), 4, None).is_err());
        assert!(enumerate_connected_vertex_sets(&path(3), 1, Some(3)).is_err());
    }

    #[test]
    fn enumeration_matches_subset_scan() {
        let graphs = [grid(3, 3), cycle(7), complete(5), star(5), path(6)];
        for g in &graphs {
            for size in 1..=g.vertex_count() {
                let mut got = all(g, size, None);
                got.sort();
                let before = got.len();
                got.dedup();
                assert_eq!(before, got.len(), "duplicate sets");
                assert_eq!(got, brute(g, size, None));
                for a in 0..g.vertex_count() {
                    let mut got = all(g, size, Some(a));
                    got.sort();
                    assert_eq!(got, brute(g, size, Some(a)));
                }
            }
        }
    }

    #[test]
    fn bcp2_oracle_examples() {
        let w = solve_bcp2_oracle(&path(4), 2).unwrap().unwrap();
        assert!(w.side_one() == [0, 1] || w.side_one() == [2, 3]);
        assert_eq!(solve_bcp2_oracle(&star(3), 2).unwrap(), None);
        let c6 = cycle(6);
        let w = solve_bcp2_oracle(&c6, 3).unwrap().unwrap();
        assert!(verify_bcp2(&c6, &w, 3).unwrap());
        let s = w.side_one();
        // three consecutive cycle vertices
        assert!((0..6).any(|i| {
            let mut want = vec![i, (i + 1) % 6, (i + 2) % 6];
            want.sort();
            want == s
        }));
        assert!(solve_bcp2_oracle(&c6, 0).is_err());
        assert!(solve_bcp2_oracle(&c6, 6).is_err());
    }

    #[test]
    fn bcp2_oracle_returns_requested_side() {
        let w = solve_bcp2_oracle(&path(5), 4).unwrap().unwrap();
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn bcep2_oracle_examples() {
        let c6 = cycle(6);
        let w = solve_bcep2_oracle(&c6, 3, BcepSemantics::EdgeInduced)
            .unwrap()
            .unwrap();
        assert!(verify_bcep2(&c6, &w, 3, BcepSemantics::EdgeInduced).unwrap());
        assert_eq!(solve_bcep2_oracle(&c6, 3, BcepSemantics::Spanning).unwrap(), None);
        let k4 = complete(4);
        let w = solve_bcep2_oracle(&k4, 3, BcepSemantics::Spanning)
            .unwrap()
            .unwrap();
        assert!(verify_bcep2(&k4, &w, 3, BcepSemantics::Spanning).unwrap());
    }

    #[test]
    fn bcep2_oracle_larger_side() {
        // K4 with n1 = 4 needs a connected 4-edge side whose 2-edge complement spans
        let k4 = complete(4);
        assert_eq!(solve_bcep2_oracle(&k4, 4, BcepSemantics::Spanning).unwrap(), None);
        assert!(solve_bcep2_oracle(&k4, 4, BcepSemantics::EdgeInduced)
            .unwrap()
            .is_some());
    }

    #[test]
    fn oracle_refuses_huge_instances() {
        let g = star(79);
        assert!(matches!(solve_bcp2_oracle(&g, 40), Err(Error::Limit(_))));
        // few connected sets despite a large C(n, k)
        assert!(solve_bcp2_oracle(&path(60), 30).unwrap().is_some());
    }
}
