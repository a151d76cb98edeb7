//! Planarity testing: Euler bound, then path embedding (Demoucron,
//! Malgrange and Pertuiset) on each biconnected block.

use crate::graph::Graph;

pub fn is_planar(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    biconnected_blocks(g).into_iter().all(|block| {
        let mut verts: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local = |x: usize| verts.binary_search(&x).unwrap();
        let h = Graph::new(
            verts.len(),
            block.iter().map(|&(u, v)| (local(u), local(v))),
        )
        .expect("block of a simple graph is simple");
        block_is_planar(&h)
    })
}

/// Edge sets of the biconnected blocks (bridges form their own blocks).
fn biconnected_blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent edge, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(v) {
                let (w, e) = (g.neighbors(v)[*idx], g.incident_edges(v)[*idx]);
                *idx += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(g.edge(e));
                            if e == pe {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// A cycle through a non-tree edge of a BFS tree.
fn find_cycle(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([0]);
    depth[0] = 0;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let (mut u, mut v) = g
        .edges()
        .iter()
        .copied()
        .find(|&(u, v)| parent[u] != v && parent[v] != u)
        .expect("a biconnected block with three or more vertices has a cycle");
    let (mut left, mut right) = (vec![u], vec![v]);
    while u != v {
        if depth[u] >= depth[v] {
            u = parent[u];
            left.push(u);
        } else {
            v = parent[v];
            right.push(v);
        }
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

fn block_is_planar(h: &Graph) -> bool {
    let n = h.vertex_count();
    let m = h.edge_count();
    if n <= 4 || m <= n + 2 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }
    let cycle = find_cycle(h);
    let mut embedded_v = vec![false; n];
    let mut embedded_e = vec![false; m];
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded_v[u] = true;
        embedded_e[h.edge_id(u, v).expect("cycle edge")] = true;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];
    loop {
        let fragments = fragments(h, &embedded_v, &embedded_e);
        if fragments.is_empty() {
            return true;
        }
        let mut choice: Option<(usize, usize)> = None;
        for (i, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|a| faces[f].contains(a)))
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((i, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((i, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("some fragment exists");
        let path = fragment_path(h, &fragments[fi], &embedded_v);
        for w in path.windows(2) {
            embedded_e[h.edge_id(w[0], w[1]).expect("path edge")] = true;
        }
        for &v in &path {
            embedded_v[v] = true;
        }
        let f = faces.swap_remove(face);
        let (a1, a2) = (path[0], *path.last().unwrap());
        let i = f.iter().position(|&x| x == a1).expect("attachment on face");
        let j = f.iter().position(|&x| x == a2).expect("attachment on face");
        let walk = |from: usize, to: usize| {
            let mut out = vec![f[from]];
            let mut x = from;
            while x != to {
                x = (x + 1) % f.len();
                out.push(f[x]);
            }
            out
        };
        let inner = &path[1..path.len() - 1];
        let mut first = walk(i, j);
        first.extend(inner.iter().rev());
        let mut second = walk(j, i);
        second.extend(inner.iter());
        faces.push(first);
        faces.push(second);
    }
}

struct Fragment {
    /// Component vertices outside the embedding (empty for a lone edge).
    inner: Vec<usize>,
    attachments: Vec<usize>,
    /// For a lone-edge fragment, the edge.
    chord: Option<(usize, usize)>,
}

fn fragments(h: &Graph, ev: &[bool], ee: &[bool]) -> Vec<Fragment> {
    let n = h.vertex_count();
    let mut out = Vec::new();
    for (e, &(u, v)) in h.edges().iter().enumerate() {
        if !ee[e] && ev[u] && ev[v] {
            out.push(Fragment {
                inner: Vec::new(),
                attachments: vec![u, v],
                chord: Some((u, v)),
            });
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if ev[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut inner = vec![s];
        let mut attach = Vec::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in h.neighbors(x) {
                if ev[y] {
                    attach.push(y);
                } else if !seen[y] {
                    seen[y] = true;
                    inner.push(y);
                    stack.push(y);
                }
            }
        }
        attach.sort_unstable();
        attach.dedup();
        out.push(Fragment {
            inner,
            attachments: attach,
            chord: None,
        });
    }
    out
}

/// A path through the fragment joining two distinct attachments.
fn fragment_path(h: &Graph, frag: &Fragment, ev: &[bool]) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let a1 = frag.attachments[0];
    let n = h.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut in_frag = vec![false; n];
    for &x in &frag.inner {
        in_frag[x] = true;
    }
    let mut queue = std::collections::VecDeque::new();
    for &x in h.neighbors(a1) {
        if in_frag[x] && parent[x] == usize::MAX {
            parent[x] = a1;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in h.neighbors(x) {
            if ev[y] && y != a1 {
                let mut path = vec![y, x];
                let mut z = x;
                while parent[z] != a1 {
                    z = parent[z];
                    path.push(z);
                }
                path.push(a1);
                path.reverse();
                return path;
            }
            if in_frag[y] && parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragments of a biconnected block have two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn k33() -> Graph {
        Graph::new(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap()
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, e.into_iter().map(|(u, v)| (u.min(v), u.max(v)))).unwrap()
    }

    #[test]
    fn classic_cases() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&k33()));
        assert!(!is_planar(&petersen()));
        assert!(is_planar(&grid(5, 5)));
        assert!(is_planar(&cycle(9)));
        assert!(is_planar(&star(10)));
        assert!(is_planar(&Graph::empty(0)));
        // octahedron
        let oct = Graph::new(
            6,
            (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).filter(|&(u, v)| v != u + 3 || u >= 3),
        )
        .unwrap();
        assert_eq!(oct.edge_count(), 12);
        assert!(is_planar(&oct));
    }

    #[test]
    fn subdivided_k5_and_k33_in_larger_graphs() {
        // K5 with every edge subdivided, plus pendant trees
        let mut e = Vec::new();
        let mut next = 5;
        for u in 0..5 {
            for v in u + 1..5 {
                e.push((u, next));
                e.push((v, next));
                next += 1;
            }
        }
        e.push((0, next));
        let g = Graph::new(next + 1, e).unwrap();
        assert!(!is_planar(&g));
        // two planar blocks joined at a cut vertex
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 2), (3, 5), (5, 6)]).unwrap();
        assert!(is_planar(&g));
    }

    #[test]
    fn counts_planar_labelled_graphs_on_five_vertices() {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let mut nonplanar = 0;
        for mask in 0u32..1 << pairs.len() {
            let g = Graph::new(5, (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i])).unwrap();
            if !is_planar(&g) {
                nonplanar += 1;
            }
        }
        // only K5 itself
        assert_eq!(nonplanar, 1);
    }

    #[test]
    fn counts_unlabelled_connected_planar_graphs() {
        use crate::generators::connected_graphs_by_vertices;
        let want = [1, 1, 2, 6, 20, 99, 646];
        for (i, &w) in want.iter().enumerate() {
            let planar = connected_graphs_by_vertices(i + 1).iter().filter(|g| is_planar(g)).count();
            assert_eq!(planar, w, "n = {}", i + 1);
        }
    }
}
