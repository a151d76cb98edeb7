//! Dynamic program for BCP₂ over a nice tree decomposition.
//!
//! A signature at node `t` assigns each bag vertex a side (U holds `a`, W
//! holds `b`) and a block of the partition of that side's bag vertices into
//! the components they will belong to. Each signature carries the set of
//! reachable U-counts `n_u` over `V_t` as a bitset.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use std::sync::Mutex;

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{connected_components, verify_bcp2, Graph, VertexPartitionWitness};
use crate::stats::Stats;
use crate::treedecomp::{make_nice, min_fill_decomposition, NiceKind, NiceTreeDecomposition};

/// Largest bag the signature encoding accepts.
pub const MAX_BAG: usize = 64;
/// Distinct signatures allowed at one node before the run is abandoned.
pub const STATE_LIMIT: usize = 4_000_000;

const SIDE_U: u8 = 0x80;
const FRESH: u8 = 0x7f;

/// Transition at introduce-edge nodes when both endpoints share a side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeRule {
    /// Always merge the endpoints' blocks. The unmerged successor is
    /// dominated: every check downstream is monotone under coarsening.
    #[default]
    Merge,
    /// Keep both the unmerged and the merged successor.
    Literal,
}

/// One label per bag position: the side bit plus a block id, canonical by
/// first occurrence.
type Key = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Counts(Vec<u64>);

impl Counts {
    fn empty(words: usize) -> Self {
        Counts(vec![0; words])
    }

    fn single(c: usize, words: usize) -> Self {
        let mut s = Self::empty(words);
        s.0[c / 64] |= 1 << (c % 64);
        s
    }

    fn contains(&self, c: usize) -> bool {
        self.0.get(c / 64).is_some_and(|w| w >> (c % 64) & 1 == 1)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// `self |= src` shifted by `shift` bit positions.
    fn or_shifted(&mut self, src: &Counts, shift: isize) {
        let len = self.0.len();
        if shift >= 0 {
            let (ws, bs) = (shift as usize / 64, shift as usize % 64);
            for (i, &w) in src.0.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let t = i + ws;
                if t < len {
                    self.0[t] |= w << bs;
                }
                if bs > 0 && t + 1 < len {
                    self.0[t + 1] |= w >> (64 - bs);
                }
            }
        } else {
            let s = shift.unsigned_abs();
            let (ws, bs) = (s / 64, s % 64);
            for i in 0..len {
                let j = i + ws;
                if j >= src.0.len() {
                    break;
                }
                let mut w = src.0[j] >> bs;
                if bs > 0 && j + 1 < src.0.len() {
                    w |= src.0[j + 1] << (64 - bs);
                }
                self.0[i] |= w;
            }
        }
    }

    /// Clears every count outside `lo..=hi`.
    fn clamp(&mut self, lo: usize, hi: usize) {
        for (i, w) in self.0.iter_mut().enumerate() {
            let base = i * 64;
            if base + 63 < lo || base > hi {
                *w = 0;
                continue;
            }
            if lo > base {
                *w &= !0u64 << (lo - base);
            }
            if hi < base + 63 {
                *w &= !0u64 >> (63 - (hi - base));
            }
        }
    }
}

fn canonicalize(labels: &mut [u8]) {
    let mut map = [u8::MAX; 128];
    let mut next = 0u8;
    for l in labels.iter_mut() {
        let id = (*l & !SIDE_U) as usize;
        if map[id] == u8::MAX {
            map[id] = next;
            next += 1;
        }
        *l = (*l & SIDE_U) | map[id];
    }
}

fn side_mask(key: &[u8]) -> u64 {
    key.iter()
        .enumerate()
        .filter(|(_, &l)| l & SIDE_U != 0)
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Successor signatures of `key` across the unary node `node`, each with the
/// U-count increment it causes.
fn unary_step(
    node: &NiceNode<'_>,
    key: &[u8],
    forbidden: &[bool],
    rule: EdgeRule,
    out: &mut Vec<(Key, usize)>,
) {
    out.clear();
    match node.kind {
        NiceKind::IntroduceVertex(v) => {
            let p = node.bag.binary_search(v).expect("introduced vertex in bag");
            for (side, delta) in [(SIDE_U, 1), (0, 0)] {
                if side == SIDE_U && forbidden[*v] {
                    continue;
                }
                let mut k = Vec::with_capacity(key.len() + 1);
                k.extend_from_slice(&key[..p]);
                k.push(side | FRESH);
                k.extend_from_slice(&key[p..]);
                canonicalize(&mut k);
                out.push((k, delta));
            }
        }
        NiceKind::IntroduceEdge(u, v) => {
            let pu = node.bag.binary_search(u).expect("edge endpoint in bag");
            let pv = node.bag.binary_search(v).expect("edge endpoint in bag");
            let (lu, lv) = (key[pu], key[pv]);
            let merge = lu != lv && lu & SIDE_U == lv & SIDE_U;
            if !merge || rule == EdgeRule::Literal {
                out.push((key.to_vec(), 0));
            }
            if merge {
                let mut k: Key = key.iter().map(|&l| if l == lv { lu } else { l }).collect();
                canonicalize(&mut k);
                out.push((k, 0));
            }
        }
        NiceKind::Forget(w) => {
            let p = node.child_bag.binary_search(w).expect("forgotten vertex in child bag");
            let l = key[p];
            if key.iter().filter(|&&x| x == l).count() > 1 {
                let mut k = key.to_vec();
                k.remove(p);
                canonicalize(&mut k);
                out.push((k, 0));
            }
        }
        NiceKind::Leaf | NiceKind::Join => unreachable!("not a unary node"),
    }
}

fn join_key(k1: &[u8], k2: &[u8]) -> Key {
    let len = k1.len();
    let mut d = Dsu::new(len);
    let mut first1 = [usize::MAX; 128];
    let mut first2 = [usize::MAX; 128];
    for i in 0..len {
        for (first, l) in [(&mut first1, k1[i]), (&mut first2, k2[i])] {
            let id = (l & !SIDE_U) as usize;
            if first[id] == usize::MAX {
                first[id] = i;
            } else {
                d.union(first[id], i);
            }
        }
    }
    let mut k: Key = (0..len)
        .map(|i| (k1[i] & SIDE_U) | d.find(i) as u8)
        .collect();
    canonicalize(&mut k);
    k
}

struct NiceNode<'a> {
    kind: &'a NiceKind,
    bag: &'a [usize],
    child_bag: &'a [usize],
}

/// Outcome of one DP run.
#[derive(Clone, Debug, Default)]
pub struct DpRun {
    /// The target reached and a U side realizing it.
    pub found: Option<(usize, VertexPartitionWitness)>,
    /// Sum over nodes of (signature, count) pairs stored.
    pub states: u64,
    /// Largest number of (signature, count) pairs at one node.
    pub max_states: u64,
    /// Largest number of distinct signatures at one node, counts ignored.
    pub max_signatures: u64,
}

/// Partition of a block structure over an explicit ground set.
pub type Partition = Vec<Vec<usize>>;

/// Connected components of the union of the two partitions' block graphs,
/// in canonical form: elements sorted, blocks ordered by minimum element.
pub fn merge_partitions(p1: &[Vec<usize>], p2: &[Vec<usize>]) -> Result<Partition> {
    let ground = |p: &[Vec<usize>]| {
        let mut g: Vec<usize> = p.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    };
    let g1 = ground(p1);
    if g1.windows(2).any(|w| w[0] == w[1]) || p1.iter().chain(p2).any(|b| b.is_empty()) {
        return Err(Error::param("partition blocks must be nonempty and disjoint"));
    }
    if g1 != ground(p2) {
        return Err(Error::param("partitions are over different ground sets"));
    }
    let pos = |v: usize| g1.binary_search(&v).expect("ground element");
    let mut d = Dsu::new(g1.len());
    for block in p1.iter().chain(p2) {
        for w in block.windows(2) {
            d.union(pos(w[0]), pos(w[1]));
        }
    }
    let mut blocks: FxHashMap<usize, Vec<usize>> = FxHashMap::default();
    for (i, &v) in g1.iter().enumerate() {
        blocks.entry(d.find(i)).or_default().push(v);
    }
    let mut out: Partition = blocks.into_values().collect();
    out.sort_unstable();
    Ok(out)
}

/// Runs the DP accepting any of `targets` as the final U-count.
fn run_targets(
    ntd: &NiceTreeDecomposition,
    g: &Graph,
    targets: &[usize],
    forbidden: &[bool],
    rule: EdgeRule,
) -> Result<DpRun> {
    let n = g.vertex_count();
    let (a, b) = (ntd.a, ntd.b);
    let tmin = *targets.iter().min().expect("at least one target");
    let tmax = *targets.iter().max().expect("at least one target");
    if a == b || tmin == 0 || tmax >= n {
        return Err(Error::param(format!("target outside 1..={}", n.saturating_sub(1))));
    }
    if forbidden[a] {
        return Err(Error::param("vertex a is forbidden from its own side"));
    }
    if ntd.width() + 1 > MAX_BAG {
        return Err(Error::Limit(format!(
            "bag of {} vertices exceeds the {MAX_BAG}-vertex signature limit",
            ntd.width() + 1
        )));
    }
    let words = tmax / 64 + 1;
    let order = ntd.post_order();
    let k = ntd.nodes.len();
    let mut vt = vec![0usize; k];
    let mut tables: Vec<FxHashMap<Key, Counts>> = (0..k).map(|_| FxHashMap::default()).collect();
    let mut run = DpRun::default();
    let mut scratch = Vec::new();
    for &t in &order {
        let node = &ntd.nodes[t];
        let mut table: FxHashMap<Key, Counts> = FxHashMap::default();
        match node.kind {
            NiceKind::Leaf => {
                vt[t] = 2;
                let mut key: Key = node
                    .bag
                    .iter()
                    .map(|&x| if x == a { SIDE_U } else { 1 })
                    .collect();
                canonicalize(&mut key);
                table.insert(key, Counts::single(1, words));
            }
            NiceKind::Join => {
                let (c1, c2) = (node.children[0], node.children[1]);
                vt[t] = vt[c1] + vt[c2] - node.bag.len();
                let mut by_mask: FxHashMap<u64, Vec<(&Key, &Counts)>> = FxHashMap::default();
                for (k2, s2) in &tables[c2] {
                    by_mask.entry(side_mask(k2)).or_default().push((k2, s2));
                }
                for (k1, s1) in &tables[c1] {
                    let mask = side_mask(k1);
                    let Some(partners) = by_mask.get(&mask) else {
                        continue;
                    };
                    let shared = mask.count_ones() as isize;
                    for &(k2, s2) in partners {
                        let key = join_key(k1, k2);
                        let entry = table.entry(key).or_insert_with(|| Counts::empty(words));
                        for c in s1.iter() {
                            entry.or_shifted(s2, c as isize - shared);
                        }
                    }
                }
            }
            _ => {
                let c = node.children[0];
                vt[t] = vt[c] + usize::from(matches!(node.kind, NiceKind::IntroduceVertex(_)));
                let view = NiceNode {
                    kind: &node.kind,
                    bag: &node.bag,
                    child_bag: &ntd.nodes[c].bag,
                };
                for (key, counts) in &tables[c] {
                    unary_step(&view, key, forbidden, rule, &mut scratch);
                    for (k2, delta) in scratch.drain(..) {
                        table
                            .entry(k2)
                            .or_insert_with(|| Counts::empty(words))
                            .or_shifted(counts, delta as isize);
                    }
                }
            }
        }
        let lo = vt[t].saturating_sub(n - tmin).max(1);
        table.retain(|_, s| {
            s.clamp(lo, tmax);
            !s.is_empty()
        });
        if table.len() > STATE_LIMIT {
            return Err(Error::Limit(format!(
                "{} signatures at one node exceed the limit of {STATE_LIMIT}",
                table.len()
            )));
        }
        let pairs: u64 = table.values().map(|s| s.len() as u64).sum();
        run.states += pairs;
        run.max_states = run.max_states.max(pairs);
        run.max_signatures = run.max_signatures.max(table.len() as u64);
        tables[t] = table;
    }
    let root = &tables[ntd.root];
    for &target in targets {
        let hit = root
            .iter()
            .filter(|(_, s)| s.contains(target))
            .map(|(k, _)| k.clone())
            .min();
        if let Some(key) = hit {
            let side_u = backtrace(ntd, &tables, forbidden, rule, key, target);
            let w = VertexPartitionWitness::new(side_u);
            debug_assert_eq!(w.len(), target);
            run.found = Some((target, w));
            break;
        }
    }
    Ok(run)
}

/// Recovers one U side by re-deriving, top-down, a child state that
/// produces each required (signature, count).
fn backtrace(
    ntd: &NiceTreeDecomposition,
    tables: &[FxHashMap<Key, Counts>],
    forbidden: &[bool],
    rule: EdgeRule,
    key: Key,
    count: usize,
) -> Vec<usize> {
    let mut in_u = Vec::new();
    let mut stack = vec![(ntd.root, key, count)];
    let mut scratch = Vec::new();
    while let Some((t, key, c)) = stack.pop() {
        let node = &ntd.nodes[t];
        for (i, &v) in node.bag.iter().enumerate() {
            if key[i] & SIDE_U != 0 {
                in_u.push(v);
            }
        }
        match node.kind {
            NiceKind::Leaf => {}
            NiceKind::Join => {
                let (c1, c2) = (node.children[0], node.children[1]);
                let shared = side_mask(&key).count_ones() as usize;
                let mut sorted2: Vec<(&Key, &Counts)> = tables[c2].iter().collect();
                sorted2.sort_unstable_by(|x, y| x.0.cmp(y.0));
                let mut sorted1: Vec<(&Key, &Counts)> = tables[c1].iter().collect();
                sorted1.sort_unstable_by(|x, y| x.0.cmp(y.0));
                let found = sorted1.iter().find_map(|&(k1, s1)| {
                    let m1 = side_mask(k1);
                    sorted2.iter().find_map(|&(k2, s2)| {
                        if side_mask(k2) != m1 || join_key(k1, k2) != key {
                            return None;
                        }
                        s1.iter().find_map(|x| {
                            let y = (c + shared).checked_sub(x)?;
                            s2.contains(y).then(|| (k1.clone(), x, k2.clone(), y))
                        })
                    })
                });
                let (k1, x, k2, y) = found.expect("join state has a producing pair");
                stack.push((c1, k1, x));
                stack.push((c2, k2, y));
            }
            _ => {
                let ch = node.children[0];
                let view = NiceNode {
                    kind: &node.kind,
                    bag: &node.bag,
                    child_bag: &ntd.nodes[ch].bag,
                };
                let mut sorted: Vec<(&Key, &Counts)> = tables[ch].iter().collect();
                sorted.sort_unstable_by(|x, y| x.0.cmp(y.0));
                let found = sorted.iter().find_map(|&(ck, cs)| {
                    unary_step(&view, ck, forbidden, rule, &mut scratch);
                    scratch.iter().find_map(|(k2, delta)| {
                        let prev = c.checked_sub(*delta)?;
                        (*k2 == key && cs.contains(prev)).then(|| (ck.clone(), prev))
                    })
                });
                let (ck, prev) = found.expect("unary state has a producing child state");
                stack.push((ch, ck, prev));
            }
        }
    }
    in_u.sort_unstable();
    in_u.dedup();
    in_u
}

/// Finds `S` with `a ∈ S`, `b ∉ S`, `|S| = target`, both `g[S]` and
/// `g[V∖S]` connected and `S` disjoint from `forbidden_u`.
pub fn run_dp(
    ntd: &NiceTreeDecomposition,
    g: &Graph,
    target: usize,
    forbidden_u: &[usize],
) -> Result<Option<VertexPartitionWitness>> {
    Ok(run_dp_detailed(ntd, g, &[target], forbidden_u, EdgeRule::Merge)?
        .found
        .map(|(_, w)| w))
}

/// As [`run_dp`], accepting whichever of `targets` is reachable first in
/// the given order, and returning the run's state counters.
pub fn run_dp_detailed(
    ntd: &NiceTreeDecomposition,
    g: &Graph,
    targets: &[usize],
    forbidden_u: &[usize],
    rule: EdgeRule,
) -> Result<DpRun> {
    let n = g.vertex_count();
    g.check_vertex(ntd.a)?;
    g.check_vertex(ntd.b)?;
    if targets.is_empty() {
        return Err(Error::param("no target given"));
    }
    let mut forbidden = vec![false; n];
    for &v in forbidden_u {
        g.check_vertex(v)?;
        forbidden[v] = true;
    }
    run_targets(ntd, g, targets, &forbidden, rule)
}

fn component_rule(g: &Graph, n1: usize) -> Option<VertexPartitionWitness> {
    let comps = connected_components(g);
    if comps.len() != 2 {
        return None;
    }
    let n = g.vertex_count();
    comps
        .into_iter()
        .find(|c| c.len() == n1 || c.len() == n - n1)
        .map(|c| VertexPartitionWitness::new(c).normalized(n, n1))
}

pub(crate) fn check_n1(n: usize, n1: usize) -> Result<()> {
    if n1 == 0 || n1 >= n {
        return Err(Error::param(format!(
            "n1 = {n1} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Decides BCP₂ with the treewidth DP. The witness has exactly `n1` vertices.
pub fn solve_bcp2_tw(g: &Graph, n1: usize) -> Result<Option<VertexPartitionWitness>> {
    Ok(solve_bcp2_tw_with(g, n1, 1)?.0)
}

/// As [`solve_bcp2_tw`], running the per-`b` DPs on up to `jobs` threads.
/// The answer and stats do not depend on `jobs`.
pub fn solve_bcp2_tw_with(
    g: &Graph,
    n1: usize,
    jobs: usize,
) -> Result<(Option<VertexPartitionWitness>, Stats)> {
    let n = g.vertex_count();
    check_n1(n, n1)?;
    let mut stats = Stats::new();
    if !crate::graph::is_connected(g) {
        stats.set("rule", "components");
        return Ok((component_rule(g, n1), stats));
    }
    let td = min_fill_decomposition(g);
    stats.set("width", td.width() as u64);
    let a = 0;
    let mut targets = vec![n1, n - n1];
    targets.dedup();
    let attempt = |b: usize| -> Result<(Option<VertexPartitionWitness>, DpRun)> {
        let ntd = make_nice(&td, g, a, b)?;
        let run = run_targets(&ntd, g, &targets, &vec![false; n], EdgeRule::Merge)?;
        let w = run.found.as_ref().map(|(t, w)| {
            if *t == n1 {
                w.clone()
            } else {
                w.complement(n)
            }
        });
        Ok((w, run))
    };
    let bs: Vec<usize> = (1..n).collect();
    let mut runs: Vec<DpRun> = Vec::new();
    let mut answer = None;
    if jobs <= 1 {
        for &b in &bs {
            let (w, run) = attempt(b)?;
            runs.push(run);
            if w.is_some() {
                answer = w;
                break;
            }
        }
    } else {
        let slots: Mutex<Vec<Option<Result<DpRun>>>> = Mutex::new(vec![None; bs.len()]);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::param(e.to_string()))?;
        let winner = pool.install(|| {
            bs.par_iter().enumerate().find_map_first(|(i, &b)| match attempt(b) {
                Ok((w, run)) => {
                    slots.lock().unwrap()[i] = Some(Ok(run));
                    w.map(|w| (i, Ok(w)))
                }
                Err(e) => {
                    slots.lock().unwrap()[i] = Some(Err(e.clone()));
                    Some((i, Err(e)))
                }
            })
        });
        let last = winner.as_ref().map_or(bs.len() - 1, |(i, _)| *i);
        for slot in slots.into_inner().unwrap().into_iter().take(last + 1) {
            runs.push(slot.expect("earlier runs completed")?);
        }
        if let Some((_, w)) = winner {
            answer = Some(w?);
        }
    }
    stats.set("dp_runs", runs.len() as u64);
    stats.set("states", runs.iter().map(|r| r.states).sum::<u64>());
    stats.set("max_states", runs.iter().map(|r| r.max_states).max().unwrap_or(0));
    stats.set(
        "max_signatures",
        runs.iter().map(|r| r.max_signatures).max().unwrap_or(0),
    );
    if let Some(w) = &answer {
        if !verify_bcp2(g, w, n1)? {
            return Err(Error::param("treewidth engine produced an invalid witness"));
        }
    }
    Ok((answer, stats))
}

/// Bell numbers `B_0..`, saturating.
pub fn bell(k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap().saturating_add(x));
        }
        row = next;
    }
    row[0]
}
