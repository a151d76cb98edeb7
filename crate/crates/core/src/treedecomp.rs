//! Tree decompositions: a min-fill heuristic to build one, and conversion to
//! the nice form (with introduce-edge nodes and `{a, b}` in every bag) that the
//! partition DP runs over.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted bag per node.
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(t);
            }
        }
        ch
    }

    /// The unique parentless node, if the parent links form a tree.
    pub fn root(&self) -> Option<usize> {
        let mut roots = self.parent.iter().enumerate().filter(|(_, p)| p.is_none());
        let (r, _) = roots.next()?;
        if roots.next().is_some() {
            return None;
        }
        Some(r)
    }

    /// Checks vertex coverage, edge coverage and connected occupancy.
    pub fn validate(&self, g: &Graph) -> Vec<String> {
        let mut out = Vec::new();
        let k = self.bags.len();
        if self.parent.len() != k {
            out.push("parent list length differs from bag count".into());
            return out;
        }
        let Some(root) = self.root() else {
            out.push("parent links do not have exactly one root".into());
            return out;
        };
        // reachability from root (detects cycles in parent links)
        let children = self.children();
        let mut seen = vec![false; k];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(t) = stack.pop() {
            for &c in &children[t] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            out.push("parent links are not a tree".into());
            return out;
        }
        let n = g.vertex_count();
        let mut occ = vec![Vec::new(); n];
        let mut member = vec![BTreeSet::new(); k];
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    out.push(format!("node {t}: vertex {v} out of range"));
                    continue;
                }
                occ[v].push(t);
                member[t].insert(v);
            }
        }
        for (v, ts) in occ.iter().enumerate() {
            if ts.is_empty() {
                out.push(format!("(I1) vertex {v} is in no bag"));
                continue;
            }
            let tops = ts
                .iter()
                .filter(|&&t| self.parent[t].is_none_or(|p| !member[p].contains(&v)))
                .count();
            if tops != 1 {
                out.push(format!("(I3) bags holding vertex {v} are not connected"));
            }
        }
        for &(u, v) in g.edges() {
            if !occ[u].iter().any(|&t| member[t].contains(&v)) {
                out.push(format!("(I2) edge {{{u}, {v}}} is in no bag"));
            }
        }
        out
    }
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut fill = 0;
    for (i, &x) in nb.iter().enumerate() {
        for &y in &nb[i + 1..] {
            if !adj[x].contains(&y) {
                fill += 1;
            }
        }
    }
    fill
}

/// Min-fill elimination ordering, ties broken by smallest vertex id.
///
/// Node `i` holds the bag of the `i`-th eliminated vertex; its parent is the
/// bag of the earliest-eliminated later neighbor. Components are chained
/// together through their last bags.
pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![Vec::new()],
            parent: vec![None],
        };
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut fill: Vec<usize> = (0..n).map(|v| fill_in(&adj, v)).collect();
    let mut pos = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut later = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill[v], v))
            .expect("some vertex remains");
        alive[v] = false;
        pos[v] = step;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        later.push(nb.clone());
        let mut touched: BTreeSet<usize> = nb.iter().copied().collect();
        for (i, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[i + 1..] {
                if adj[x].insert(y) {
                    adj[y].insert(x);
                    touched.extend(adj[x].iter().copied());
                    touched.extend(adj[y].iter().copied());
                }
            }
        }
        adj[v].clear();
        for x in touched {
            if alive[x] {
                fill[x] = fill_in(&adj, x);
            }
        }
    }
    let mut parent: Vec<Option<usize>> = later
        .iter()
        .map(|nb| nb.iter().map(|&x| pos[x]).min())
        .collect();
    let roots: Vec<usize> = (0..n).filter(|&t| parent[t].is_none()).collect();
    let last = *roots.last().expect("elimination forest has a root");
    for &r in &roots[..roots.len() - 1] {
        parent[r] = Some(last);
    }
    TreeDecomposition { bags, parent }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(usize),
    /// Endpoints with the smaller id first.
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A rooted nice decomposition in which `a` and `b` sit in every bag and the
/// root and leaves have bag exactly `{a, b}`. Children always have smaller
/// ids than their parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
    pub a: usize,
    pub b: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                order.push(t);
            } else {
                stack.push((t, true));
                for &c in self.nodes[t].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Indented text rendering, one node per line, root first.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((t, depth)) = stack.pop() {
            let node = &self.nodes[t];
            let kind = match node.kind {
                NiceKind::Leaf => "leaf".to_string(),
                NiceKind::IntroduceVertex(v) => format!("introduce-vertex {v}"),
                NiceKind::IntroduceEdge(u, v) => format!("introduce-edge {u} {v}"),
                NiceKind::Forget(v) => format!("forget {v}"),
                NiceKind::Join => "join".to_string(),
            };
            let _ = writeln!(out, "{:indent$}[{t}] {kind} {:?}", "", node.bag, indent = 2 * depth);
            for &c in node.children.iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out
    }
}

struct NiceBuilder<'g> {
    g: &'g Graph,
    nodes: Vec<NiceNode>,
    introduced: Vec<bool>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// Introduces every pending edge between `w` and the rest of `cur`'s bag.
    fn introduce_edges_at(&mut self, mut cur: usize, w: usize) -> usize {
        let bag = self.nodes[cur].bag.clone();
        let mut pending: Vec<(usize, usize)> = self
            .g
            .neighbors(w)
            .iter()
            .zip(self.g.incident_edges(w))
            .filter(|&(x, &e)| !self.introduced[e] && bag.binary_search(x).is_ok())
            .map(|(&x, &e)| (e, x))
            .collect();
        pending.sort_unstable();
        for (e, x) in pending {
            self.introduced[e] = true;
            cur = self.push(
                NiceKind::IntroduceEdge(w.min(x), w.max(x)),
                bag.clone(),
                vec![cur],
            );
        }
        cur
    }

    fn forget(&mut self, cur: usize, w: usize) -> usize {
        let cur = self.introduce_edges_at(cur, w);
        let bag: Vec<usize> = self.nodes[cur].bag.iter().copied().filter(|&x| x != w).collect();
        self.push(NiceKind::Forget(w), bag, vec![cur])
    }

    fn introduce(&mut self, cur: usize, v: usize) -> usize {
        let mut bag = self.nodes[cur].bag.clone();
        let at = bag.binary_search(&v).unwrap_err();
        bag.insert(at, v);
        self.push(NiceKind::IntroduceVertex(v), bag, vec![cur])
    }

    /// Forgets then introduces until `cur`'s bag equals `target`.
    fn transition(&mut self, mut cur: usize, target: &[usize]) -> usize {
        let from = self.nodes[cur].bag.clone();
        for &w in &from {
            if target.binary_search(&w).is_err() {
                cur = self.forget(cur, w);
            }
        }
        for &v in target {
            if from.binary_search(&v).is_err() {
                cur = self.introduce(cur, v);
            }
        }
        cur
    }
}

/// Converts `td` into a nice decomposition whose bags are `B_t ∪ {a, b}`.
///
/// Each edge is introduced once, directly below the forget node of whichever
/// endpoint leaves the bags first; the edge `{a, b}`, if present, is
/// introduced at the root.
pub fn make_nice(
    td: &TreeDecomposition,
    g: &Graph,
    a: usize,
    b: usize,
) -> Result<NiceTreeDecomposition> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::param("the two anchor vertices must differ"));
    }
    let problems = td.validate(g);
    if !problems.is_empty() {
        return Err(Error::InvalidDecomposition(problems.join("; ")));
    }
    let root = td.root().expect("validated decomposition has a root");
    let children = td.children();
    let ab = {
        let mut v = vec![a, b];
        v.sort_unstable();
        v
    };
    let augmented: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|bag| {
            let mut s: Vec<usize> = bag.iter().copied().chain([a, b]).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();

    // post-order over the input tree
    let mut order = Vec::with_capacity(td.node_count());
    let mut stack = vec![(root, false)];
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            order.push(t);
        } else {
            stack.push((t, true));
            for &c in children[t].iter().rev() {
                stack.push((c, false));
            }
        }
    }

    let mut builder = NiceBuilder {
        g,
        nodes: Vec::new(),
        introduced: vec![false; g.edge_count()],
    };
    let mut top = vec![usize::MAX; td.node_count()];
    for &t in &order {
        let bag = &augmented[t];
        let mut branches = Vec::new();
        for &c in &children[t] {
            branches.push(builder.transition(top[c], bag));
        }
        let node = if branches.is_empty() {
            let leaf = builder.push(NiceKind::Leaf, ab.clone(), Vec::new());
            builder.transition(leaf, bag)
        } else {
            let mut cur = branches[0];
            for &br in &branches[1..] {
                cur = builder.push(NiceKind::Join, bag.clone(), vec![cur, br]);
            }
            cur
        };
        top[t] = node;
    }
    let mut cur = builder.transition(top[root], &ab);
    cur = builder.introduce_edges_at(cur, a);
    if let Some(e) = builder.introduced.iter().position(|&x| !x) {
        let (u, v) = g.edge(e);
        return Err(Error::InvalidDecomposition(format!(
            "edge {{{u}, {v}}} never co-occurs in a bag"
        )));
    }
    Ok(NiceTreeDecomposition {
        nodes: builder.nodes,
        root: cur,
        a,
        b,
    })
}

/// Lists every violated invariant; empty iff `ntd` is a valid nice
/// decomposition of `g` augmented with its `a` and `b`.
pub fn validate_nice(ntd: &NiceTreeDecomposition, g: &Graph) -> Vec<String> {
    let mut out = Vec::new();
    let k = ntd.nodes.len();
    let n = g.vertex_count();
    if ntd.root >= k {
        out.push(format!("root {} does not exist", ntd.root));
        return out;
    }
    let (a, b) = (ntd.a, ntd.b);
    let mut ab = vec![a, b];
    ab.sort_unstable();
    let mut parent = vec![None; k];
    for (t, node) in ntd.nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= k {
                out.push(format!("node {t}: child {c} does not exist"));
                return out;
            }
            if parent[c].replace(t).is_some() {
                out.push(format!("node {c}: more than one parent"));
                return out;
            }
        }
    }
    if parent[ntd.root].is_some() {
        out.push("root has a parent".into());
        return out;
    }
    let order = ntd.post_order();
    if order.len() != k {
        out.push(format!("{} nodes unreachable from the root", k - order.len()));
        return out;
    }
    if ntd.nodes[ntd.root].bag != ab {
        out.push(format!("root bag {:?} is not {{a, b}}", ntd.nodes[ntd.root].bag));
    }
    let mut edge_intro = vec![0usize; g.edge_count()];
    for (t, node) in ntd.nodes.iter().enumerate() {
        let bag = &node.bag;
        if bag.windows(2).any(|w| w[0] >= w[1]) {
            out.push(format!("node {t}: bag not sorted and duplicate-free"));
        }
        if bag.iter().any(|&v| v >= n) {
            out.push(format!("node {t}: bag holds a vertex outside the graph"));
        }
        if bag.binary_search(&a).is_err() || bag.binary_search(&b).is_err() {
            out.push(format!("node {t}: augmentation violated, bag lacks a or b"));
        }
        let child_bag = |i: usize| node.children.get(i).map(|&c| &ntd.nodes[c].bag);
        match node.kind {
            NiceKind::Leaf => {
                if !node.children.is_empty() {
                    out.push(format!("node {t}: leaf with children"));
                }
                if *bag != ab {
                    out.push(format!("node {t}: leaf bag is not {{a, b}}"));
                }
            }
            NiceKind::IntroduceVertex(v) => match (node.children.len(), child_bag(0)) {
                (1, Some(cb)) => {
                    let mut expect = cb.clone();
                    if expect.contains(&v) {
                        out.push(format!("node {t}: introduced vertex {v} already in child bag"));
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if *bag != expect {
                        out.push(format!("node {t}: introduce-vertex bag mismatch"));
                    }
                }
                _ => out.push(format!("node {t}: introduce-vertex needs one child")),
            },
            NiceKind::IntroduceEdge(u, v) => {
                if node.children.len() != 1 || child_bag(0) != Some(bag) {
                    out.push(format!("node {t}: introduce-edge must copy its single child's bag"));
                }
                if bag.binary_search(&u).is_err() || bag.binary_search(&v).is_err() {
                    out.push(format!("node {t}: edge endpoints not in bag"));
                }
                match g.edge_id(u, v) {
                    Some(e) if u < v => edge_intro[e] += 1,
                    _ => out.push(format!("node {t}: ({u}, {v}) is not an edge of the graph")),
                }
            }
            NiceKind::Forget(w) => match (node.children.len(), child_bag(0)) {
                (1, Some(cb)) => {
                    let expect: Vec<usize> = cb.iter().copied().filter(|&x| x != w).collect();
                    if !cb.contains(&w) || *bag != expect {
                        out.push(format!("node {t}: forget bag mismatch"));
                    }
                }
                _ => out.push(format!("node {t}: forget needs one child")),
            },
            NiceKind::Join => {
                if node.children.len() != 2
                    || child_bag(0) != Some(bag)
                    || child_bag(1) != Some(bag)
                {
                    out.push(format!("node {t}: join needs two children with equal bags"));
                }
            }
        }
    }
    for (e, &count) in edge_intro.iter().enumerate() {
        if count != 1 {
            let (u, v) = g.edge(e);
            out.push(format!("(I2) edge {{{u}, {v}}} introduced {count} times"));
        }
    }
    let mut occurs = vec![false; n];
    let mut tops = vec![0usize; n];
    for (t, node) in ntd.nodes.iter().enumerate() {
        for &v in node.bag.iter().filter(|&&v| v < n) {
            occurs[v] = true;
            let parent_has = parent[t].is_some_and(|p: usize| ntd.nodes[p].bag.binary_search(&v).is_ok());
            if !parent_has {
                tops[v] += 1;
            }
        }
    }
    for v in 0..n {
        if !occurs[v] {
            out.push(format!("(I1) vertex {v} in no bag"));
        } else if tops[v] != 1 {
            out.push(format!("(I3) bags holding vertex {v} are not connected"));
        }
    }
    out
}
