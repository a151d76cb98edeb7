//! The co-graphic matroid of a graph, its random rank truncation over
//! GF(2^s), and representative-family reduction by minor vectors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::Graph;
use crate::util::binomial;

/// Cycle-space basis of `g` over GF(2): one fundamental cycle per non-tree
/// edge of a BFS spanning forest. Edge sets are independent in the
/// co-graphic matroid iff their columns are linearly independent.
#[derive(Clone, Debug)]
pub struct CographicRep {
    pub m: usize,
    /// Edge ids of each basis cycle, ascending.
    pub cycles: Vec<Vec<usize>>,
    /// `columns[e]` = bitset over basis rows containing edge `e`.
    columns: Vec<Vec<u64>>,
}

impl CographicRep {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn column(&self, e: usize) -> &[u64] {
        &self.columns[e]
    }

    /// GF(2) linear independence of the given columns.
    pub fn is_independent(&self, edges: &[usize]) -> bool {
        let mut basis: Vec<Vec<u64>> = Vec::new();
        for &e in edges {
            let mut v = self.columns[e].clone();
            for b in &basis {
                let lead = leading_bit(b).expect("basis rows are nonzero");
                if v[lead / 64] >> (lead % 64) & 1 == 1 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x ^= y;
                    }
                }
            }
            if leading_bit(&v).is_none() {
                return false;
            }
            basis.push(v);
            basis.sort_by_key(|b| std::cmp::Reverse(leading_bit(b)));
        }
        true
    }
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

pub fn cycle_space_basis(g: &Graph) -> CographicRep {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut parent_edge = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut tree = vec![false; m];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (&y, &e) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    parent_edge[y] = e;
                    depth[y] = depth[x] + 1;
                    tree[e] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for e in (0..m).filter(|&e| !tree[e]) {
        let (mut u, mut v) = g.edge(e);
        let mut cyc = vec![e];
        while depth[u] > depth[v] {
            cyc.push(parent_edge[u]);
            u = parent[u];
        }
        while depth[v] > depth[u] {
            cyc.push(parent_edge[v]);
            v = parent[v];
        }
        while u != v {
            cyc.push(parent_edge[u]);
            cyc.push(parent_edge[v]);
            u = parent[u];
            v = parent[v];
        }
        cyc.sort_unstable();
        cycles.push(cyc);
    }
    let words = cycles.len().div_ceil(64).max(1);
    let mut columns = vec![vec![0u64; words]; m];
    for (i, cyc) in cycles.iter().enumerate() {
        for &e in cyc {
            columns[e][i / 64] |= 1 << (i % 64);
        }
    }
    CographicRep { m, cycles, columns }
}

/// Whether deleting `edges` keeps every component of `g` connected.
pub fn is_independent_cographic(g: &Graph, edges: &[usize]) -> bool {
    let mut removed = vec![false; g.edge_count()];
    for &e in edges {
        removed[e] = true;
    }
    let none = vec![false; g.edge_count()];
    g.component_count_without_edges(&removed) == g.component_count_without_edges(&none)
}

/// `rows × m` matrix over GF(2^s): a seeded random linear image of the
/// cycle-space representation, or the representation itself when the
/// requested rank is not below the matroid's.
#[derive(Clone, Debug)]
pub struct TruncatedRep {
    pub field: Field,
    pub k: usize,
    pub seed: u64,
    /// `columns[e]` has `k` entries.
    columns: Vec<Vec<u64>>,
}

impl TruncatedRep {
    pub fn column(&self, e: usize) -> &[u64] {
        &self.columns[e]
    }

    pub fn edge_count(&self) -> usize {
        self.columns.len()
    }

    /// Independence of a set of at most `k` edges in the truncation.
    pub fn is_independent(&self, edges: &[usize]) -> bool {
        edges.len() <= self.k && minor_vector(self, edges).iter().any(|&x| x != 0)
    }
}

pub fn truncate(rep: &CographicRep, k: usize, seed: u64, field: Field) -> TruncatedRep {
    let rank = rep.rank();
    let columns: Vec<Vec<u64>> = if k >= rank {
        (0..rep.m)
            .map(|e| {
                (0..rank)
                    .map(|i| rep.columns[e][i / 64] >> (i % 64) & 1)
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..rank).map(|_| field.random(&mut rng)).collect())
            .collect();
        (0..rep.m)
            .map(|e| {
                let col = &rep.columns[e];
                (0..k)
                    .map(|row| {
                        (0..rank)
                            .filter(|&i| col[i / 64] >> (i % 64) & 1 == 1)
                            .fold(0, |acc, i| acc ^ r[row][i])
                    })
                    .collect()
            })
            .collect()
    };
    TruncatedRep {
        field,
        k: k.min(rank),
        seed,
        columns,
    }
}

/// Chance that some set of at most `k` independent edges loses independence
/// under truncation, union-bounded: `min(1, m · C(m, k) / 2^s)`.
pub fn truncation_failure_bound(m: usize, k: usize, bits: u32) -> f64 {
    let sets = binomial(m, k) as f64;
    (m as f64 * sets / 2f64.powi(bits as i32)).min(1.0)
}

/// All `p`-subsets of `0..k` in lexicographic order.
pub fn subsets(k: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    if p > k {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..p).rev().find(|&i| cur[i] < k - p + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Index of a sorted subset in the lexicographic order of [`subsets`].
fn subset_rank(set: &[usize], k: usize) -> usize {
    let p = set.len();
    let mut r = 0;
    let mut prev = 0;
    for (i, &x) in set.iter().enumerate() {
        for y in prev..x {
            r += binomial(k - y - 1, p - i - 1) as usize;
        }
        prev = x + 1;
    }
    r
}

/// Every `p × p` minor of the `k × p` matrix formed by the truncated columns
/// of `edges`, row subsets in lexicographic order.
pub fn minor_vector(trep: &TruncatedRep, edges: &[usize]) -> Vec<u64> {
    let p = edges.len();
    subsets(trep.k, p)
        .into_iter()
        .map(|rows| {
            let mut mat: Vec<Vec<u64>> = rows
                .iter()
                .map(|&r| edges.iter().map(|&e| trep.columns[e][r]).collect())
                .collect();
            trep.field.det(&mut mat)
        })
        .collect()
}

/// Minor vector of `A ∪ {e}` from that of `A`, by expanding each minor
/// along the new column (signs vanish in characteristic 2).
pub fn extend_minor_vector(trep: &TruncatedRep, minors: &[u64], p: usize, e: usize) -> Vec<u64> {
    let k = trep.k;
    let col = &trep.columns[e];
    subsets(k, p + 1)
        .into_iter()
        .map(|rows| {
            let mut acc = 0;
            let mut rest = Vec::with_capacity(p);
            for skip in 0..rows.len() {
                let c = col[rows[skip]];
                if c == 0 {
                    continue;
                }
                rest.clear();
                rest.extend(rows.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r));
                acc ^= trep.field.mul(c, minors[subset_rank(&rest, k)]);
            }
            acc
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyEntry {
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    /// Empty until computed.
    pub minors: Vec<u64>,
}

/// Edge sets of a common size `p` anchored at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFamily {
    pub anchor: usize,
    pub p: usize,
    pub entries: Vec<FamilyEntry>,
}

impl RepFamily {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Keeps a maximal subfamily whose minor vectors are linearly independent,
/// preferring earlier entries. The result `q`-represents the input in the
/// truncated matroid and has at most `C(p + q, p)` entries.
pub fn reduce_to_representative(
    fam: &RepFamily,
    p: usize,
    q: usize,
    trep: &TruncatedRep,
) -> Result<RepFamily> {
    if p + q != trep.k {
        return Err(Error::param(format!(
            "p + q = {} but the truncation has rank {}",
            p + q,
            trep.k
        )));
    }
    let dim = binomial(trep.k, p) as usize;
    let f = &trep.field;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut kept = Vec::new();
    for entry in &fam.entries {
        if entry.edges.len() != p {
            return Err(Error::param(format!(
                "family entry {:?} does not have {p} edges",
                entry.edges
            )));
        }
        let minors = if entry.minors.len() == dim {
            entry.minors.clone()
        } else {
            minor_vector(trep, &entry.edges)
        };
        if minors.iter().all(|&x| x == 0) {
            return Err(Error::param(format!(
                "family entry {:?} is dependent in the truncation",
                entry.edges
            )));
        }
        let mut v = minors.clone();
        for (pivot, b) in &basis {
            let c = v[*pivot];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x ^= f.mul(c, y);
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = f.inv(v[pivot]).expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            for (_, b) in basis.iter_mut() {
                let c = b[pivot];
                if c != 0 {
                    for (x, &y) in b.iter_mut().zip(&v) {
                        *x ^= f.mul(c, y);
                    }
                }
            }
            basis.push((pivot, v));
            kept.push(FamilyEntry {
                edges: entry.edges.clone(),
                minors,
            });
            if kept.len() == dim {
                break;
            }
        }
    }
    Ok(RepFamily {
        anchor: fam.anchor,
        p,
        entries: kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_BITS;
    use crate::graph::fixtures::*;
    use rand::Rng;

    fn field() -> Field {
        Field::new(DEFAULT_BITS).unwrap()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
        let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut edges = Vec::new();
        while edges.len() < m.min(all.len()) {
            let i = rng.gen_range(0..all.len());
            edges.push(all.swap_remove(i));
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn basis_examples() {
        let t = star(4);
        let rep = cycle_space_basis(&t);
        assert_eq!(rep.rank(), 0);
        assert!(!rep.is_independent(&[0]));
        let c4 = cycle(4);
        let rep = cycle_space_basis(&c4);
        assert_eq!(rep.rank(), 1);
        assert!((0..4).all(|e| rep.is_independent(&[e])));
        assert!(!rep.is_independent(&[0, 1]));
        assert_eq!(cycle_space_basis(&complete(4)).rank(), 3);
        let two = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(cycle_space_basis(&two).rank(), 2);
    }

    #[test]
    fn cographic_examples() {
        let c5 = cycle(5);
        assert!(is_independent_cographic(&c5, &[2]));
        assert!(!is_independent_cographic(&c5, &[0, 3]));
        let k4 = complete(4);
        let star_edges: Vec<usize> = k4.incident_edges(0).to_vec();
        assert!(!is_independent_cographic(&k4, &star_edges));
    }

    /// GF(2) independence of basis columns agrees with deletion connectivity.
    #[test]
    fn representation_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let n = rng.gen_range(2..7);
            let m = rng.gen_range(1..=10.min(n * (n - 1) / 2));
            let g = random_graph(&mut rng, n, m);
            let rep = cycle_space_basis(&g);
            let comps = crate::graph::connected_components(&g).len();
            assert_eq!(rep.rank(), g.edge_count() + comps - n);
            for mask in 0u32..1 << g.edge_count() {
                let set: Vec<usize> = (0..g.edge_count()).filter(|e| mask >> e & 1 == 1).collect();
                assert_eq!(rep.is_independent(&set), is_independent_cographic(&g, &set), "{set:?}");
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let f = field();
        let c4 = cycle(4);
        let t = truncate(&cycle_space_basis(&c4), 1, 0, f);
        assert!((0..4).all(|e| t.column(e).iter().any(|&x| x != 0)));
        let tree = path(5);
        let t = truncate(&cycle_space_basis(&tree), 2, 0, f);
        assert!((0..4).all(|e| t.column(e).iter().all(|&x| x == 0)));
        let k5 = complete(5);
        let rep = cycle_space_basis(&k5);
        let a = truncate(&rep, 3, 77, f);
        let b = truncate(&rep, 3, 77, f);
        assert_eq!(a.columns, b.columns);
    }

    #[test]
    fn truncation_keeps_small_independent_sets() {
        let f = field();
        let g = complete(5);
        let rep = cycle_space_basis(&g);
        let mut failures = 0;
        for seed in 0..100 {
            let t = truncate(&rep, 3, seed, f);
            for set in subsets(g.edge_count(), 3) {
                let truth = is_independent_cographic(&g, &set);
                let got = t.is_independent(&set);
                assert!(!got || truth, "truncation created independence");
                failures += usize::from(truth && !got);
            }
        }
        assert_eq!(failures, 0);
        let c6 = cycle(6);
        let rep = cycle_space_basis(&c6);
        for seed in 0..100 {
            let t = truncate(&rep, 3, seed, f);
            for e in 0..6 {
                assert!(t.is_independent(&[e]));
            }
        }
        assert!(truncation_failure_bound(10, 3, 32) < 1e-6);
        assert_eq!(truncation_failure_bound(100, 50, 8), 1.0);
    }

    #[test]
    fn subset_ranking() {
        for k in 0..7 {
            for p in 0..=k {
                let all = subsets(k, p);
                assert_eq!(all.len() as u128, binomial(k, p));
                for (i, s) in all.iter().enumerate() {
                    assert_eq!(subset_rank(s, k), i);
                }
            }
        }
    }

    #[test]
    fn incremental_minors_match_elimination() {
        let f = field();
        let g = complete(6);
        let rep = cycle_space_basis(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for k in 1..6 {
            let t = truncate(&rep, k, rng.gen(), f);
            for _ in 0..30 {
                let p = rng.gen_range(1..=k);
                let mut edges: Vec<usize> = Vec::new();
                while edges.len() < p {
                    let e = rng.gen_range(0..g.edge_count());
                    if !edges.contains(&e) {
                        edges.push(e);
                    }
                }
                let mut minors = vec![1u64];
                for (i, &e) in edges.iter().enumerate() {
                    minors = extend_minor_vector(&t, &minors, i, e);
                }
                assert_eq!(minors, minor_vector(&t, &edges));
            }
        }
    }

    fn family(anchor: usize, sets: Vec<Vec<usize>>, p: usize) -> RepFamily {
        RepFamily {
            anchor,
            p,
            entries: sets
                .into_iter()
                .map(|edges| FamilyEntry {
                    edges,
                    minors: Vec::new(),
                })
                .collect(),
        }
    }

    #[test]
    fn reduce_examples() {
        let f = field();
        let g = complete(4);
        let t = truncate(&cycle_space_basis(&g), 3, 5, f);
        let one = family(0, vec![vec![0]], 1);
        let r = reduce_to_representative(&one, 1, 2, &t).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].edges, vec![0]);
        let all: Vec<Vec<usize>> = (0..6).map(|e| vec![e]).collect();
        let r = reduce_to_representative(&family(0, all, 1), 1, 2, &t).unwrap();
        assert!(r.len() <= 3);
        assert!(reduce_to_representative(&one, 1, 1, &t).is_err());
        assert!(reduce_to_representative(&family(0, vec![vec![0, 1]], 1), 1, 2, &t).is_err());
        let t4 = truncate(&cycle_space_basis(&complete(5)), 4, 1, f);
        let pairs = subsets(10, 2)
            .into_iter()
            .filter(|s| t4.is_independent(s))
            .collect();
        let r = reduce_to_representative(&family(0, pairs, 2), 2, 2, &t4).unwrap();
        assert!(r.len() <= 6);
    }

    #[test]
    fn reduce_rejects_dependent_entry() {
        let f = field();
        let c4 = cycle(4);
        let t = truncate(&cycle_space_basis(&c4), 1, 0, f);
        let tree = path(3);
        let tt = truncate(&cycle_space_basis(&tree), 1, 0, f);
        assert_eq!(tt.k, 0);
        let fam = family(0, vec![vec![0, 1]], 2);
        assert!(reduce_to_representative(&fam, 2, 0, &t).is_err());
    }

    /// For every q-set fitting a discarded entry, a retained entry fits it too.
    fn check_representative(g: &Graph, t: &TruncatedRep, input: &RepFamily, output: &RepFamily, q: usize) {
        let fits = |a: &[usize], b: &[usize]| {
            if a.iter().any(|e| b.contains(e)) {
                return false;
            }
            let union: Vec<usize> = a.iter().chain(b).copied().collect();
            t.is_independent(&union)
        };
        for b in subsets(g.edge_count(), q) {
            let wanted = input.entries.iter().any(|a| fits(&a.edges, &b));
            let have = output.entries.iter().any(|a| fits(&a.edges, &b));
            assert_eq!(wanted, have, "B = {b:?}");
        }
    }

    fn anchored_independent(g: &Graph, t: &TruncatedRep, v: usize, p: usize) -> Vec<Vec<usize>> {
        subsets(g.edge_count(), p)
            .into_iter()
            .filter(|s| s.iter().any(|&e| g.incident_edges(v).contains(&e)) && t.is_independent(s))
            .collect()
    }

    #[test]
    fn c6_has_no_independent_pairs() {
        let g = cycle(6);
        let rep = cycle_space_basis(&g);
        assert_eq!(rep.rank(), 1);
        let t = truncate(&rep, 3, 4, field());
        for v in 0..6 {
            assert!(anchored_independent(&g, &t, v, 2).is_empty());
        }
    }

    #[test]
    fn anchored_pairs_represent_singletons() {
        let wheel = Graph::new(
            6,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)],
        )
        .unwrap();
        for g in [complete(4), wheel] {
            let t = truncate(&cycle_space_basis(&g), 3, 4, field());
            for v in 0..g.vertex_count() {
                let fam = family(v, anchored_independent(&g, &t, v, 2), 2);
                assert!(!fam.is_empty());
                let red = reduce_to_representative(&fam, 2, 1, &t).unwrap();
                assert!(red.len() <= 3);
                check_representative(&g, &t, &fam, &red, 1);
            }
        }
    }

    #[test]
    fn representative_property_exhaustive() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut checked = 0;
        while checked < 25 {
            let n = rng.gen_range(3..7);
            let m = rng.gen_range(n..=10.min(n * (n - 1) / 2));
            let g = random_graph(&mut rng, n, m);
            let rep = cycle_space_basis(&g);
            for k in 1..=4.min(rep.rank()) {
                let t = truncate(&rep, k, rng.gen(), f);
                for p in 1..=k {
                    let sets: Vec<Vec<usize>> = subsets(g.edge_count(), p)
                        .into_iter()
                        .filter(|s| t.is_independent(s))
                        .collect();
                    let fam = family(0, sets, p);
                    let red = reduce_to_representative(&fam, p, k - p, &t).unwrap();
                    assert!(red.len() as u128 <= binomial(k, p));
                    check_representative(&g, &t, &fam, &red, k - p);
                }
            }
            checked += 1;
        }
    }
}
