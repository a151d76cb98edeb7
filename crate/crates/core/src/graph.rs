//! Undirected simple graphs with stable vertex and edge identifiers, plus the
//! connectivity machinery and witness verifiers shared by every engine.
//!
//! Vertices are the dense range `0..n`. Edges are stored with their smaller
//! endpoint first and keep the id they were given at construction time; the
//! matroid code indexes matrix columns by these ids.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    /// Incident edge ids, ordered like `adj`.
    inc: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Edge ids follow iteration order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if index.insert(key, list.len()).is_some() {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            list.push(key);
        }
        let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in list.iter().enumerate() {
            pairs[u].push((v, id));
            pairs[v].push((u, id));
        }
        let mut adj = Vec::with_capacity(n);
        let mut inc = Vec::with_capacity(n);
        for mut p in pairs {
            p.sort_unstable();
            adj.push(p.iter().map(|&(w, _)| w).collect());
            inc.push(p.iter().map(|&(_, e)| e).collect());
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
            inc,
            index,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, std::iter::empty()).expect("edgeless graph is always valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edge ids incident to `v`, in the same order as [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// Number of connected components of the subgraph induced by `keep`.
    pub fn component_count_within(&self, keep: &[bool]) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if !keep[s] || seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if keep[y] && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }

    /// True iff the subgraph induced by `vertices` is connected (empty counts as connected).
    pub fn is_induced_connected(&self, vertices: &[usize]) -> bool {
        let mut keep = vec![false; self.n];
        for &v in vertices {
            keep[v] = true;
        }
        self.component_count_within(&keep) <= 1
    }

    /// Components of the graph `(V, E \ removed)` on all vertices.
    pub fn component_count_without_edges(&self, removed: &[bool]) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for (&y, &e) in self.adj[x].iter().zip(&self.inc[x]) {
                    if !removed[e] && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    /// True iff the subgraph formed by the given edges and their endpoints is
    /// connected. The empty edge set counts as connected.
    pub fn is_edge_set_connected(&self, edge_ids: &[usize]) -> bool {
        let Some(&first) = edge_ids.first() else {
            return true;
        };
        let mut chosen = vec![false; self.edges.len()];
        for &e in edge_ids {
            chosen[e] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![self.edges[first].0];
        seen[self.edges[first].0] = true;
        let mut reached_edges = 0;
        while let Some(x) = stack.pop() {
            for (&y, &e) in self.adj[x].iter().zip(&self.inc[x]) {
                if chosen[e] {
                    if x < y {
                        reached_edges += 1;
                    }
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        // Each reached edge is counted once, from its smaller endpoint.
        reached_edges == chosen.iter().filter(|&&c| c).count()
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Relabels vertices by `perm[old] = new` and edges by `edge_perm[old] = new`.
    pub fn relabeled(&self, perm: &[usize], edge_perm: &[usize]) -> Graph {
        let mut edges = vec![(0, 0); self.edges.len()];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            edges[edge_perm[id]] = (perm[u], perm[v]);
        }
        Graph::new(self.n, edges).expect("relabeling preserves simplicity")
    }
}

pub fn is_connected(g: &Graph) -> bool {
    g.component_count_within(&vec![true; g.vertex_count()]) <= 1
}

/// Components ordered by their minimum vertex; each component sorted.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// All vertices within BFS distance `radius` of `v`, sorted.
pub fn bfs_ball(g: &Graph, v: usize, radius: usize) -> Result<Vec<usize>> {
    g.check_vertex(v)?;
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    let mut ball = vec![v];
    while let Some(x) = queue.pop_front() {
        if dist[x] == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                ball.push(y);
                queue.push_back(y);
            }
        }
    }
    ball.sort_unstable();
    Ok(ball)
}

/// Result of contracting every component of `g - keep` to a single terminal.
///
/// Kept vertices occupy ids `0..kept.len()` in ascending original order;
/// terminal `i` has id `kept.len() + i` and stands for `components[i]`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    pub kept: Vec<usize>,
    pub terminals: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

impl Contraction {
    /// Original vertex for a kept id; `None` for terminals.
    pub fn original(&self, id: usize) -> Option<usize> {
        self.kept.get(id).copied()
    }

    pub fn is_terminal(&self, id: usize) -> bool {
        id >= self.kept.len()
    }

    /// Id in the contracted graph of a kept original vertex.
    pub fn local_id(&self, original: usize) -> Option<usize> {
        self.kept.binary_search(&original).ok()
    }
}

pub fn contract_outside(g: &Graph, keep: &[usize]) -> Result<Contraction> {
    let n = g.vertex_count();
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    for &v in &kept {
        g.check_vertex(v)?;
    }
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i;
    }
    let outside: Vec<bool> = (0..n).map(|v| new_id[v] == usize::MAX).collect();
    // Components of g - keep, ordered by minimum vertex.
    let mut components = Vec::new();
    for s in 0..n {
        if !outside[s] || new_id[s] != usize::MAX {
            continue;
        }
        let t = kept.len() + components.len();
        new_id[s] = t;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if outside[y] && new_id[y] == usize::MAX {
                    new_id[y] = t;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let total = kept.len() + components.len();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| !(outside[u] && outside[v]))
        .map(|&(u, v)| {
            let (a, b) = (new_id[u], new_id[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::new(total, edges)?;
    let terminals = (kept.len()..total).collect();
    Ok(Contraction {
        graph,
        kept,
        terminals,
        components,
    })
}

/// Witness for a vertex 2-partition: the side `V_1`. Stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexPartitionWitness {
    side_one: Vec<usize>,
}

impl VertexPartitionWitness {
    pub fn new(side_one: impl IntoIterator<Item = usize>) -> Self {
        let mut side_one: Vec<usize> = side_one.into_iter().collect();
        side_one.sort_unstable();
        side_one.dedup();
        VertexPartitionWitness { side_one }
    }

    pub fn side_one(&self) -> &[usize] {
        &self.side_one
    }

    pub fn len(&self) -> usize {
        self.side_one.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side_one.is_empty()
    }

    pub fn complement(&self, n: usize) -> Self {
        let mut inside = vec![false; n];
        for &v in &self.side_one {
            inside[v] = true;
        }
        VertexPartitionWitness {
            side_one: (0..n).filter(|&v| !inside[v]).collect(),
        }
    }

    /// Returns the witness with `|side_one| == n1`, complementing if needed.
    pub fn normalized(self, n: usize, n1: usize) -> Self {
        if self.len() == n1 {
            self
        } else {
            self.complement(n)
        }
    }
}

/// Witness for an edge 2-partition: the edge ids of `E_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePartitionWitness {
    side_one: Vec<usize>,
}

impl EdgePartitionWitness {
    pub fn new(side_one: impl IntoIterator<Item = usize>) -> Self {
        let mut side_one: Vec<usize> = side_one.into_iter().collect();
        side_one.sort_unstable();
        side_one.dedup();
        EdgePartitionWitness { side_one }
    }

    pub fn side_one(&self) -> &[usize] {
        &self.side_one
    }

    pub fn len(&self) -> usize {
        self.side_one.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side_one.is_empty()
    }

    pub fn complement(&self, m: usize) -> Self {
        let mut inside = vec![false; m];
        for &e in &self.side_one {
            inside[e] = true;
        }
        EdgePartitionWitness {
            side_one: (0..m).filter(|&e| !inside[e]).collect(),
        }
    }
}

/// How the complement side of an edge partition must be connected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum BcepSemantics {
    /// `G - E_1` must be connected on every vertex of `G`.
    #[default]
    Spanning,
    /// Each side only needs to be connected as an edge-induced subgraph.
    EdgeInduced,
}

impl fmt::Display for BcepSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BcepSemantics::Spanning => "spanning",
            BcepSemantics::EdgeInduced => "edge-induced",
        })
    }
}

impl FromStr for BcepSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spanning" => Ok(BcepSemantics::Spanning),
            "edge-induced" | "edge_induced" => Ok(BcepSemantics::EdgeInduced),
            other => Err(Error::param(format!("unknown semantics `{other}`"))),
        }
    }
}

pub fn verify_bcp2(g: &Graph, w: &VertexPartitionWitness, n1: usize) -> Result<bool> {
    let n = g.vertex_count();
    for &v in w.side_one() {
        g.check_vertex(v)?;
    }
    if w.len() != n1 || n1 == 0 || n1 >= n {
        return Ok(false);
    }
    let mut inside = vec![false; n];
    for &v in w.side_one() {
        inside[v] = true;
    }
    if g.component_count_within(&inside) != 1 {
        return Ok(false);
    }
    let outside: Vec<bool> = inside.iter().map(|&x| !x).collect();
    Ok(g.component_count_within(&outside) == 1)
}

pub fn verify_bcep2(
    g: &Graph,
    w: &EdgePartitionWitness,
    n1: usize,
    sem: BcepSemantics,
) -> Result<bool> {
    let m = g.edge_count();
    for &e in w.side_one() {
        if e >= m {
            return Err(Error::InvalidEdge { edge: e, m });
        }
    }
    if w.len() != n1 || n1 == 0 || n1 >= m {
        return Ok(false);
    }
    if !g.is_edge_set_connected(w.side_one()) {
        return Ok(false);
    }
    Ok(match sem {
        BcepSemantics::EdgeInduced => g.is_edge_set_connected(w.complement(m).side_one()),
        BcepSemantics::Spanning => {
            let mut removed = vec![false; m];
            for &e in w.side_one() {
                removed[e] = true;
            }
            g.component_count_without_edges(&removed) == 1
        }
    })
}
