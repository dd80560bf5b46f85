//! Color refinement: iterated partitioning of vertices by the multiset of
//! neighbor colors, starting from the uniform coloring.
//!
//! Two engines are provided. The synchronous engine ([`refine_history`],
//! [`refine_stable`]) computes one coloring per round with canonical color
//! ids (classes sorted by parent color and neighbor signature), which is
//! what the unfolding-tree machinery needs. The worklist engine
//! ([`stable_colors_fast`], [`distinguishes_1wl`]) splits classes
//! Hopcroft-style, always re-queuing the smaller halves, and reaches the
//! stable partition in O((n + m) log n); it powers the large-scale
//! comparison path and the benchmark command.
//!
//! Depth-d unfolding trees ("the tree of all walks of length d") connect
//! refinement to tree homomorphism counts: two vertices get the same
//! round-d color exactly when their depth-d unfoldings are isomorphic.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::graph::Graph;
use crate::trees::RootedTreeCode;
use crate::{Error, Result};

/// Upper bound on the total bytes of rendered unfolding codes; unfolding
/// trees grow exponentially with depth, so rendering is budgeted.
const RENDER_BUDGET: u128 = 1 << 24;

/// A vertex coloring after some number of refinement rounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    /// Color id per vertex; ids are dense in `0..classes.len()`.
    pub color: Vec<u32>,
    /// Members of each color class, sorted.
    pub classes: Vec<Vec<u32>>,
    /// Refinement round this coloring belongs to.
    pub round: usize,
}

impl Coloring {
    fn from_colors(color: Vec<u32>, n_classes: usize, round: usize) -> Coloring {
        let mut classes = vec![Vec::new(); n_classes];
        for (v, &c) in color.iter().enumerate() {
            classes[c as usize].push(v as u32);
        }
        Coloring { color, classes, round }
    }

    /// True when both colorings induce the same partition (ids may differ).
    pub fn same_partition(&self, other: &Coloring) -> bool {
        if self.color.len() != other.color.len()
            || self.classes.len() != other.classes.len()
        {
            return false;
        }
        let mut map = vec![u32::MAX; self.classes.len()];
        for (v, &c) in self.color.iter().enumerate() {
            let d = other.color[v];
            if map[c as usize] == u32::MAX {
                map[c as usize] = d;
            } else if map[c as usize] != d {
                return false;
            }
        }
        true
    }
}

/// Colorings of two graphs over one shared color dictionary, obtained by
/// refining their disjoint union.
#[derive(Clone, Debug)]
pub struct JointColoring {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub n_classes: usize,
    pub round: usize,
}

impl JointColoring {
    /// Multisets of colors on the two sides, as count vectors per class.
    pub fn side_counts(&self) -> (Vec<usize>, Vec<usize>) {
        let mut l = vec![0usize; self.n_classes];
        let mut r = vec![0usize; self.n_classes];
        for &c in &self.left {
            l[c as usize] += 1;
        }
        for &c in &self.right {
            r[c as usize] += 1;
        }
        (l, r)
    }
}

fn signature_round(adj: &[Vec<u32>], color: &[u32]) -> (Vec<u32>, usize) {
    let n = adj.len();
    let mut keys: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
    for v in 0..n {
        let mut nbrs: Vec<u32> = adj[v].iter().map(|&u| color[u as usize]).collect();
        nbrs.sort_unstable();
        keys.push((color[v], nbrs));
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
    let mut next = vec![0u32; n];
    let mut n_classes = 0usize;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[v as usize] != keys[order[i - 1] as usize] {
            n_classes += 1;
        }
        next[v as usize] = n_classes as u32;
    }
    (next, n_classes + 1)
}

fn history_of_adj(adj: &[Vec<u32>]) -> Vec<(Vec<u32>, usize)> {
    let n = adj.len();
    let mut rounds = vec![(vec![0u32; n], if n == 0 { 0 } else { 1 })];
    loop {
        let (color, n_classes) = rounds.last().unwrap().clone();
        let (next, next_classes) = signature_round(adj, &color);
        if next_classes == n_classes {
            return rounds;
        }
        rounds.push((next, next_classes));
    }
}

/// Synchronous refinement: the coloring of every round from the uniform
/// round 0 up to the first stable round. Color ids are canonical per round:
/// classes are numbered by sorted (parent color, neighbor-color multiset).
pub fn refine_history(g: &Graph) -> Vec<Coloring> {
    let adj: Vec<Vec<u32>> = (0..g.n() as u32).map(|v| g.adj(v).to_vec()).collect();
    history_of_adj(&adj)
        .into_iter()
        .enumerate()
        .map(|(i, (color, k))| Coloring::from_colors(color, k, i))
        .collect()
}

/// The coarsest stable coloring, with `round` the first stable round.
/// At most n - 1 refinement rounds are executed.
pub fn refine_stable(g: &Graph) -> Coloring {
    refine_history(g).pop().unwrap()
}

fn union_adj(g: &Graph, h: &Graph) -> Vec<Vec<u32>> {
    let shift = g.n() as u32;
    let mut adj: Vec<Vec<u32>> = (0..g.n() as u32).map(|v| g.adj(v).to_vec()).collect();
    adj.extend(
        (0..h.n() as u32).map(|v| h.adj(v).iter().map(|&u| u + shift).collect::<Vec<_>>()),
    );
    adj
}

/// Synchronous refinement of the disjoint union of two graphs, reported
/// per side over the shared dictionary.
pub fn joint_refine_history(g: &Graph, h: &Graph) -> Vec<JointColoring> {
    let adj = union_adj(g, h);
    history_of_adj(&adj)
        .into_iter()
        .enumerate()
        .map(|(i, (color, k))| JointColoring {
            left: color[..g.n()].to_vec(),
            right: color[g.n()..].to_vec(),
            n_classes: k,
            round: i,
        })
        .collect()
}

/// Flat compressed adjacency: the neighbors of `v` are
/// `nbr[off[v]..off[v + 1]]`. One allocation for the whole graph keeps the
/// hot refinement loop off the per-vertex heap blocks.
struct Csr {
    off: Vec<usize>,
    nbr: Vec<u32>,
}

impl Csr {
    fn of(g: &Graph) -> Csr {
        let mut off = Vec::with_capacity(g.n() + 1);
        let mut nbr = Vec::with_capacity(2 * g.m());
        off.push(0);
        for v in 0..g.n() as u32 {
            nbr.extend_from_slice(g.adj(v));
            off.push(nbr.len());
        }
        Csr { off, nbr }
    }

    /// Disjoint union, right-side vertices shifted past the left ones.
    fn of_union(g: &Graph, h: &Graph) -> Csr {
        let shift = g.n() as u32;
        let mut off = Vec::with_capacity(g.n() + h.n() + 1);
        let mut nbr = Vec::with_capacity(2 * (g.m() + h.m()));
        off.push(0);
        for v in 0..g.n() as u32 {
            nbr.extend_from_slice(g.adj(v));
            off.push(nbr.len());
        }
        for v in 0..h.n() as u32 {
            nbr.extend(h.adj(v).iter().map(|&u| u + shift));
            off.push(nbr.len());
        }
        Csr { off, nbr }
    }

    fn n(&self) -> usize {
        self.off.len() - 1
    }

    fn adj(&self, v: u32) -> &[u32] {
        &self.nbr[self.off[v as usize]..self.off[v as usize + 1]]
    }
}

/// Worklist engine: stable partition of one graph in O((n + m) log n).
/// Color ids are deterministic but engine-internal; only the partition is
/// meaningful.
pub fn stable_colors_fast(g: &Graph) -> Vec<u32> {
    worklist_partition(&Csr::of(g))
}

fn worklist_partition(adj: &Csr) -> Vec<u32> {
    let n = adj.n();
    if n == 0 {
        return Vec::new();
    }
    // The partition lives in one permutation array: every class is a
    // contiguous range of `elems` addressed by `begin`/`end` per class id,
    // with `pos` the inverse permutation. Splitting moves only the touched
    // vertices of a class, so untouched members cost nothing — that keeps
    // the total work within the O((n + m) log n) bound.
    let mut elems: Vec<u32> = (0..n as u32).collect();
    let mut pos: Vec<u32> = (0..n as u32).collect();
    // per-vertex [count, color], interleaved so the count update and the
    // color read of a touched vertex share one cache line
    let mut vc: Vec<[u32; 2]> = vec![[0, 0]; n];
    let mut begin: Vec<usize> = vec![0];
    let mut end: Vec<usize> = vec![n];
    let mut queue: VecDeque<u32> = VecDeque::from([0]);
    let mut in_queue = vec![true];
    let mut members: Vec<u32> = Vec::new();
    // touched vertices as (class, count, vertex) triples; sorting them is
    // what orders classes, count groups, and members deterministically
    let mut scratch: Vec<(u32, u32, u32)> = Vec::new();
    // count-group segments of one class as (start, len, count)
    let mut segs: Vec<(usize, usize, u32)> = Vec::new();
    while let Some(r) = queue.pop_front() {
        in_queue[r as usize] = false;
        // the refiner's members are copied out because the splits below may
        // rearrange its range
        members.clear();
        members.extend_from_slice(&elems[begin[r as usize]..end[r as usize]]);
        // count, for every vertex, its neighbors inside the refiner class
        scratch.clear();
        for &x in &members {
            for &u in adj.adj(x) {
                let slot = &mut vc[u as usize];
                if slot[0] == 0 {
                    scratch.push((slot[1], 0, u));
                }
                slot[0] += 1;
            }
        }
        for t in scratch.iter_mut() {
            t.1 = vc[t.2 as usize][0];
        }
        scratch.sort_unstable();
        let mut i = 0usize;
        while i < scratch.len() {
            // one run of equal class
            let c = scratch[i].0 as usize;
            let mut j = i;
            while j < scratch.len() && scratch[j].0 as usize == c {
                j += 1;
            }
            let (b, e) = (begin[c], end[c]);
            let size = e - b;
            let run = j - i;
            if run == size && scratch[i].1 == scratch[j - 1].1 {
                // a single count group covering the whole class: no split
                i = j;
                continue;
            }
            // move the touched members to the front of the range in their
            // sorted (count, vertex) order; the untouched count-0 members
            // slide to the back
            for (k, t) in scratch[i..j].iter().enumerate() {
                let v = t.2 as usize;
                let dst = b + k;
                let src = pos[v] as usize;
                if src != dst {
                    let w = elems[dst];
                    elems.swap(src, dst);
                    pos[w as usize] = src as u32;
                    pos[v] = dst as u32;
                }
            }
            // carve the range into count groups, listed in ascending count
            // order so new ids are assigned by count
            segs.clear();
            if run < size {
                segs.push((b + run, size - run, 0));
            }
            let mut s = i;
            while s < j {
                let mut t = s;
                while t < j && scratch[t].1 == scratch[s].1 {
                    t += 1;
                }
                segs.push((b + (s - i), t - s, scratch[s].1));
                s = t;
            }
            // the largest group keeps the old id — that is what caps how
            // often a vertex can sit inside a refiner — with ties broken
            // toward the smaller count
            let keeper = segs
                .iter()
                .enumerate()
                .max_by_key(|&(_, &(_, len, key))| (len, u32::MAX - key))
                .map(|(idx, _)| idx)
                .unwrap();
            for (idx, &(start, len, _)) in segs.iter().enumerate() {
                if idx == keeper {
                    begin[c] = start;
                    end[c] = start + len;
                    continue;
                }
                let id = begin.len() as u32;
                begin.push(start);
                end.push(start + len);
                for p in start..start + len {
                    vc[elems[p] as usize][1] = id;
                }
                in_queue.push(true);
                queue.push_back(id);
            }
            i = j;
        }
        for t in &scratch {
            vc[t.2 as usize][0] = 0;
        }
    }
    vc.into_iter().map(|slot| slot[1]).collect()
}

/// Worklist refinement of the disjoint union; returns per-side colors.
pub fn joint_stable_colors_fast(g: &Graph, h: &Graph) -> (Vec<u32>, Vec<u32>) {
    let color = worklist_partition(&Csr::of_union(g, h));
    (color[..g.n()].to_vec(), color[g.n()..].to_vec())
}

/// Does color refinement tell the two graphs apart? Refines the disjoint
/// union to stability and compares, per class, how many members come from
/// each side.
pub fn distinguishes_1wl(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() {
        return true;
    }
    let (l, r) = joint_stable_colors_fast(g, h);
    // color ids are dense, so the per-class side balance fits a vector
    let classes = l.iter().chain(&r).copied().max().map_or(0, |c| c as usize + 1);
    let mut balance = vec![0i64; classes];
    for &c in &l {
        balance[c as usize] += 1;
    }
    for &c in &r {
        balance[c as usize] -= 1;
    }
    balance.iter().any(|&b| b != 0)
}

/// First round at which the color multisets of the two graphs differ, or
/// `None` when refinement never tells them apart.
pub fn distinguishes_1wl_round(g: &Graph, h: &Graph) -> Option<usize> {
    if g.n() != h.n() {
        return Some(0);
    }
    for jc in joint_refine_history(g, h) {
        let (l, r) = jc.side_counts();
        if l != r {
            return Some(jc.round);
        }
    }
    None
}

/// Interner for unfolding codes: a node is a sorted multiset of
/// (child id, multiplicity) pairs, so deep unfoldings stay DAG-sized.
#[derive(Default)]
pub(crate) struct CodeInterner {
    nodes: Vec<Vec<(u32, u32)>>,
    map: HashMap<Vec<(u32, u32)>, u32>,
}

impl CodeInterner {
    fn intern(&mut self, key: Vec<(u32, u32)>) -> u32 {
        if let Some(&id) = self.map.get(&key) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(key.clone());
        self.map.insert(key, id);
        id
    }

    /// Rendered length of a code in bytes (saturating).
    fn rendered_size(&self, id: u32, memo: &mut HashMap<u32, u128>) -> u128 {
        if let Some(&s) = memo.get(&id) {
            return s;
        }
        let mut size = 2u128;
        for &(child, mult) in &self.nodes[id as usize] {
            let c = self.rendered_size(child, memo);
            size = size.saturating_add(c.saturating_mul(mult as u128));
        }
        memo.insert(id, size);
        size
    }

    fn render(&self, id: u32, memo: &mut HashMap<u32, String>) -> String {
        if let Some(s) = memo.get(&id) {
            return s.clone();
        }
        let mut parts: Vec<String> = Vec::new();
        for &(child, mult) in &self.nodes[id as usize] {
            let c = self.render(child, memo);
            for _ in 0..mult {
                parts.push(c.clone());
            }
        }
        parts.sort();
        let s = format!("({})", parts.concat());
        memo.insert(id, s.clone());
        s
    }
}

/// Per-vertex interned codes of the depth-`d` unfoldings, refined level by
/// level. The same interner can be shared across graphs to make ids
/// comparable.
pub(crate) fn level_codes(g: &Graph, d: usize, interner: &mut CodeInterner) -> Vec<u32> {
    let leaf = interner.intern(Vec::new());
    let mut codes = vec![leaf; g.n()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(g.n());
        for v in 0..g.n() as u32 {
            let mut children: Vec<u32> =
                g.adj(v).iter().map(|&u| codes[u as usize]).collect();
            children.sort_unstable();
            let mut key: Vec<(u32, u32)> = Vec::new();
            for c in children {
                match key.last_mut() {
                    Some((prev, mult)) if *prev == c => *mult += 1,
                    _ => key.push((c, 1)),
                }
            }
            next.push(interner.intern(key));
        }
        codes = next;
    }
    codes
}

/// The depth-`d` unfolding tree of `g` at `v`, i.e. the tree of all
/// length-`d` walks out of `v`, as a canonical code.
///
/// # Errors
///
/// Fails with a capacity error when the rendered code would exceed the
/// internal budget (unfolding trees grow exponentially with depth).
pub fn unfold(g: &Graph, v: u32, d: usize) -> Result<RootedTreeCode> {
    if v as usize >= g.n() {
        return Err(Error::Input(format!("vertex {v} out of range")));
    }
    let mut interner = CodeInterner::default();
    let codes = level_codes(g, d, &mut interner);
    let id = codes[v as usize];
    let mut sizes = HashMap::new();
    let size = interner.rendered_size(id, &mut sizes);
    if size > RENDER_BUDGET {
        return Err(Error::Capacity {
            what: format!("unfolding of vertex {v} at depth {d}"),
            needed: size,
            budget: RENDER_BUDGET,
        });
    }
    let mut memo = HashMap::new();
    Ok(RootedTreeCode::parse(&interner.render(id, &mut memo)).unwrap())
}

/// How many vertices of `g` have `t` as their depth-d unfolding, where d is
/// the depth of `t`. Zero when the leaves of `t` sit at mixed depths or no
/// vertex unfolds to it.
pub fn cr_count(t: &RootedTreeCode, g: &Graph) -> Result<usize> {
    let d = t.depth();
    if t.uniform_leaf_depth() != Some(d) {
        return Ok(0);
    }
    Ok(cr_vector(g, d)?.get(t).copied().unwrap_or(0))
}

/// The multiset of depth-`d` unfoldings over all vertices of `g`.
/// For d >= 1, isolated vertices have no depth-d unfolding and are skipped.
pub fn cr_vector(g: &Graph, d: usize) -> Result<BTreeMap<RootedTreeCode, usize>> {
    let mut interner = CodeInterner::default();
    let codes = level_codes(g, d, &mut interner);
    let mut by_id: BTreeMap<u32, usize> = BTreeMap::new();
    for v in 0..g.n() {
        if d >= 1 && g.degree(v as u32) == 0 {
            continue;
        }
        *by_id.entry(codes[v]).or_insert(0) += 1;
    }
    let mut sizes = HashMap::new();
    let total: u128 = by_id
        .keys()
        .map(|&id| interner.rendered_size(id, &mut sizes))
        .fold(0u128, |a, b| a.saturating_add(b));
    if total > RENDER_BUDGET {
        return Err(Error::Capacity {
            what: format!("cr vector of depth {d}"),
            needed: total,
            budget: RENDER_BUDGET,
        });
    }
    let mut memo = HashMap::new();
    let mut out = BTreeMap::new();
    for (id, count) in by_id {
        let code = RootedTreeCode::parse(&interner.render(id, &mut memo)).unwrap();
        out.insert(code, count);
    }
    Ok(out)
}

/// Compares the depth-`d` unfolding multisets of two graphs without
/// rendering any codes (shared interner, id comparison only).
pub fn cr_equal_at_depth(g: &Graph, h: &Graph, d: usize) -> bool {
    let mut interner = CodeInterner::default();
    let gc = level_codes(g, d, &mut interner);
    let hc = level_codes(h, d, &mut interner);
    let count = |codes: &[u32], graph: &Graph| -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for (v, &id) in codes.iter().enumerate() {
            if d >= 1 && graph.degree(v as u32) == 0 {
                continue;
            }
            *m.entry(id).or_insert(0) += 1;
        }
        m
    };
    count(&gc, g) == count(&hc, h)
}
