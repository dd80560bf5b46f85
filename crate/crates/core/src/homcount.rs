//! Exact homomorphism counting.
//!
//! Polynomial-time counters for tree patterns (bottom-up DP), walks and
//! closed walks (vector-matrix products), and bounded-treewidth patterns
//! (DP over a nice decomposition), together with brute-force enumeration
//! oracles (hom / inj / sub / strhom / ind, the depth-respecting rooted-tree
//! counts, and bag-wise isomorphic counts along a path decomposition) used
//! to cross-check the fast paths. All counts are arbitrary-precision
//! integers; nothing here rounds.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::decomp::{PathDecomposition, TreeDecomposition};
use crate::graph::Graph;
use crate::trees::RootedTree;
use crate::{Error, Result};

/// Exact nonnegative homomorphism count.
pub type HomCount = BigUint;

/// Budget on the number of maps a brute-force enumeration may touch.
pub const MAP_ENUM_BUDGET: u128 = 100_000_000;

fn check_map_budget(base: usize, exp: usize, what: &str) -> Result<()> {
    let mut maps: u128 = 1;
    for _ in 0..exp {
        maps = maps.saturating_mul(base.max(1) as u128);
        if maps > MAP_ENUM_BUDGET {
            return Err(Error::Capacity {
                what: what.to_string(),
                needed: maps,
                budget: MAP_ENUM_BUDGET,
            });
        }
    }
    Ok(())
}

/// Counts homomorphisms from `f` into `g` with the cheapest applicable
/// routine — tree DP, then width-2 DP when a decomposition exists, then
/// the brute-force enumerator — and names the routine used.
pub fn hom_auto(f: &Graph, g: &Graph) -> Result<(HomCount, &'static str)> {
    match hom_tree(f, g) {
        Ok(count) => return Ok((count, "tree-dp")),
        Err(Error::Input(_)) => {}
        Err(e) => return Err(e),
    }
    if let Some(td) = crate::decomp::tw2_decomposition(f) {
        return Ok((hom_treewidth(f, &td, g)?, "width2-dp"));
    }
    Ok((hom_bruteforce(f, g)?, "bruteforce"))
}

/// Number of homomorphisms from the tree `t` into `g`, by bottom-up DP:
/// the count at a tree vertex and target vertex multiplies, over the
/// children, the sums of child counts over the target's neighbors.
pub fn hom_tree(t: &Graph, g: &Graph) -> Result<HomCount> {
    if !t.is_tree() {
        return Err(Error::Input("pattern is not a tree".to_string()));
    }
    let n_t = t.n();
    let n_g = g.n();
    // BFS orientation from vertex 0
    let mut parent = vec![u32::MAX; n_t];
    let mut order = vec![0u32];
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n_t];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in t.adj(v) {
            if u != parent[v as usize] && (u != 0 || v == 0) && parent[u as usize] == u32::MAX {
                parent[u as usize] = v;
                children[v as usize].push(u);
                order.push(u);
            }
        }
    }
    let mut table: Vec<Vec<BigUint>> = vec![Vec::new(); n_t];
    for &v in order.iter().rev() {
        let mut row = vec![BigUint::one(); n_g];
        for &c in &children[v as usize] {
            for (u, entry) in row.iter_mut().enumerate() {
                let mut s = BigUint::zero();
                for &u2 in g.adj(u as u32) {
                    s += &table[c as usize][u2 as usize];
                }
                *entry *= s;
            }
        }
        table[v as usize] = row;
    }
    Ok(table[0].iter().sum())
}

/// Number of walks with `len` edges: the all-ones vector pushed `len`
/// times through the adjacency matrix, then summed.
pub fn walk_count(g: &Graph, len: usize) -> HomCount {
    let n = g.n();
    let mut cur = vec![BigUint::one(); n];
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); n];
        for (v, entry) in next.iter_mut().enumerate() {
            for &u in g.adj(v as u32) {
                *entry += &cur[u as usize];
            }
        }
        cur = next;
    }
    cur.iter().sum()
}

/// Number of closed walks with `len` edges (the trace of the `len`-th
/// adjacency power), by one vector iteration per start vertex.
pub fn closed_walk_count(g: &Graph, len: usize) -> HomCount {
    let n = g.n();
    let mut total = BigUint::zero();
    for s in 0..n {
        let mut cur = vec![BigUint::zero(); n];
        cur[s] = BigUint::one();
        for _ in 0..len {
            let mut next = vec![BigUint::zero(); n];
            for (v, entry) in next.iter_mut().enumerate() {
                for &u in g.adj(v as u32) {
                    *entry += &cur[u as usize];
                }
            }
            cur = next;
        }
        total += &cur[s];
    }
    total
}

// ---------------------------------------------------------------------
// bounded-treewidth DP
// ---------------------------------------------------------------------

enum NiceOp {
    Leaf,
    Introduce { v: u32, child: usize },
    Forget { v: u32, child: usize },
    Join { left: usize, right: usize },
}

struct NiceNode {
    bag: Vec<u32>,
    op: NiceOp,
}

struct NiceBuilder<'a> {
    td: &'a TreeDecomposition,
    adj: Vec<Vec<usize>>,
    nodes: Vec<NiceNode>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, bag: Vec<u32>, op: NiceOp) -> usize {
        self.nodes.push(NiceNode { bag, op });
        self.nodes.len() - 1
    }

    /// Morphs the nice node `idx` (bag `from`) into bag `to` by forgetting
    /// the extras one at a time and then introducing what is missing.
    fn morph(&mut self, mut idx: usize, to: &[u32]) -> usize {
        let extra: Vec<u32> = self.nodes[idx]
            .bag
            .iter()
            .copied()
            .filter(|v| to.binary_search(v).is_err())
            .collect();
        for v in extra {
            let mut bag = self.nodes[idx].bag.clone();
            bag.retain(|&u| u != v);
            idx = self.push(bag, NiceOp::Forget { v, child: idx });
        }
        let missing: Vec<u32> = to
            .iter()
            .copied()
            .filter(|v| self.nodes[idx].bag.binary_search(v).is_err())
            .collect();
        for v in missing {
            let mut bag = self.nodes[idx].bag.clone();
            bag.push(v);
            bag.sort_unstable();
            idx = self.push(bag, NiceOp::Introduce { v, child: idx });
        }
        idx
    }

    fn build(&mut self, node: usize, parent: usize) -> usize {
        let bag = self.td.bags[node].clone();
        let mut parts = Vec::new();
        for i in 0..self.adj[node].len() {
            let c = self.adj[node][i];
            if c == parent {
                continue;
            }
            let sub = self.build(c, node);
            parts.push(self.morph(sub, &bag));
        }
        if parts.is_empty() {
            let leaf = self.push(Vec::new(), NiceOp::Leaf);
            return self.morph(leaf, &bag);
        }
        let mut acc = parts[0];
        for &p in &parts[1..] {
            debug_assert_eq!(self.nodes[acc].bag, self.nodes[p].bag);
            acc = self.push(bag.clone(), NiceOp::Join { left: acc, right: p });
        }
        acc
    }
}

/// Number of homomorphisms from `f` into `g` via DP over a nice form of
/// the given tree decomposition: tables are indexed by assignments of the
/// current bag, introduce steps check bag-internal edges, forget steps sum
/// out, join steps multiply.
pub fn hom_treewidth(f: &Graph, td: &TreeDecomposition, g: &Graph) -> Result<HomCount> {
    td.validate(f)?;
    let n_g = g.n();
    let max_bag = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    check_map_budget(n_g, max_bag, "decomposition table")?;

    let mut adj = vec![Vec::new(); td.bags.len()];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut builder = NiceBuilder { td, adj, nodes: Vec::new() };
    let top = builder.build(0, usize::MAX);
    let root = builder.morph(top, &[]);
    let nodes = builder.nodes;

    let pow = |k: usize| n_g.pow(k as u32);
    let digit = |idx: usize, j: usize| (idx / pow(j)) % n_g.max(1);
    let mut tables: Vec<Vec<BigUint>> = Vec::with_capacity(nodes.len());
    for node in &nodes {
        let table = match &node.op {
            NiceOp::Leaf => vec![BigUint::one()],
            NiceOp::Introduce { v, child } => {
                let old_bag: Vec<u32> =
                    node.bag.iter().copied().filter(|u| u != v).collect();
                let p = node.bag.binary_search(v).unwrap();
                let mut table = vec![BigUint::zero(); pow(node.bag.len())];
                for (idx, count) in tables[*child].iter().enumerate() {
                    if count.is_zero() {
                        continue;
                    }
                    let low = idx % pow(p);
                    let high = idx / pow(p);
                    'image: for x in 0..n_g {
                        for (j, &u) in old_bag.iter().enumerate() {
                            if f.has_edge(*v, u)
                                && !g.has_edge(x as u32, digit(idx, j) as u32)
                            {
                                continue 'image;
                            }
                        }
                        table[low + x * pow(p) + high * pow(p + 1)] += count;
                    }
                }
                table
            }
            NiceOp::Forget { v, child } => {
                let child_bag = &nodes[*child].bag;
                let p = child_bag.binary_search(v).unwrap();
                let mut table = vec![BigUint::zero(); pow(node.bag.len())];
                for (idx, count) in tables[*child].iter().enumerate() {
                    let low = idx % pow(p);
                    let high = idx / pow(p + 1);
                    table[low + high * pow(p)] += count;
                }
                table
            }
            NiceOp::Join { left, right } => tables[*left]
                .iter()
                .zip(tables[*right].iter())
                .map(|(a, b)| a * b)
                .collect(),
        };
        tables.push(table);
    }
    Ok(tables[root].iter().sum())
}

// ---------------------------------------------------------------------
// brute-force oracles over all maps V(f) -> V(g)
// ---------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum MapKind {
    Hom,
    Inj,
    Strong,
}

fn count_maps(f: &Graph, g: &Graph, kind: MapKind) -> Result<HomCount> {
    check_map_budget(g.n(), f.n(), "map enumeration")?;
    let mut map = vec![0u32; f.n()];
    let mut used = vec![false; g.n()];
    let count = enumerate(f, g, kind, 0, &mut map, &mut used);
    Ok(BigUint::from(count))
}

fn enumerate(
    f: &Graph,
    g: &Graph,
    kind: MapKind,
    v: usize,
    map: &mut Vec<u32>,
    used: &mut Vec<bool>,
) -> u128 {
    if v == f.n() {
        return 1;
    }
    let mut count = 0;
    'image: for x in 0..g.n() as u32 {
        if kind == MapKind::Inj && used[x as usize] {
            continue;
        }
        for u in 0..v as u32 {
            let fe = f.has_edge(v as u32, u);
            let ge = g.has_edge(x, map[u as usize]);
            if (fe && !ge) || (kind == MapKind::Strong && !fe && ge) {
                continue 'image;
            }
        }
        map[v] = x;
        if kind == MapKind::Inj {
            used[x as usize] = true;
        }
        count += enumerate(f, g, kind, v + 1, map, used);
        if kind == MapKind::Inj {
            used[x as usize] = false;
        }
    }
    count
}

/// Homomorphism count by enumeration (edges map to edges).
pub fn hom_bruteforce(f: &Graph, g: &Graph) -> Result<HomCount> {
    count_maps(f, g, MapKind::Hom)
}

/// Injective homomorphism count by enumeration.
pub fn inj_bruteforce(f: &Graph, g: &Graph) -> Result<HomCount> {
    count_maps(f, g, MapKind::Inj)
}

/// Strong homomorphism count by enumeration (edges to edges, non-edges to
/// non-edges; images of distinct vertices may coincide).
pub fn strhom_bruteforce(f: &Graph, g: &Graph) -> Result<HomCount> {
    count_maps(f, g, MapKind::Strong)
}

/// Automorphism count, as injective homomorphisms of `f` into itself.
pub fn aut_count(f: &Graph) -> Result<HomCount> {
    inj_bruteforce(f, f)
}

/// Subgraph-copy count: injective homomorphisms divided by automorphisms.
pub fn sub_bruteforce(f: &Graph, g: &Graph) -> Result<HomCount> {
    let inj = inj_bruteforce(f, g)?;
    let aut = aut_count(f)?;
    debug_assert!((&inj % &aut).is_zero());
    Ok(inj / aut)
}

fn is_isomorphic(f: &Graph, g: &Graph) -> Result<bool> {
    if f.n() != g.n() || f.m() != g.m() {
        return Ok(false);
    }
    // an injective strong homomorphism on equal vertex counts is an isomorphism
    check_map_budget(g.n(), f.n(), "isomorphism search")?;
    let mut map = vec![0u32; f.n()];
    let mut used = vec![false; g.n()];
    Ok(iso_search(f, g, 0, &mut map, &mut used))
}

fn iso_search(f: &Graph, g: &Graph, v: usize, map: &mut Vec<u32>, used: &mut Vec<bool>) -> bool {
    if v == f.n() {
        return true;
    }
    'image: for x in 0..g.n() as u32 {
        if used[x as usize] {
            continue;
        }
        for u in 0..v as u32 {
            if f.has_edge(v as u32, u) != g.has_edge(x, map[u as usize]) {
                continue 'image;
            }
        }
        map[v] = x;
        used[x as usize] = true;
        if iso_search(f, g, v + 1, map, used) {
            used[x as usize] = false;
            return true;
        }
        used[x as usize] = false;
    }
    false
}

/// Induced-copy count: vertex subsets of `g` whose induced subgraph is
/// isomorphic to `f`.
pub fn ind_bruteforce(f: &Graph, g: &Graph) -> Result<HomCount> {
    let k = f.n();
    if k > g.n() {
        return Ok(BigUint::zero());
    }
    check_map_budget(g.n(), k, "induced subset enumeration")?;
    let mut count: u128 = 0;
    let mut result = Ok(());
    let mut subset = Vec::with_capacity(k);
    subsets_from(0, g.n(), k, &mut subset, &mut |subset| {
        match is_isomorphic(f, &g.induced(subset)) {
            Ok(true) => count += 1,
            Ok(false) => {}
            Err(e) => result = Err(e),
        }
    });
    result?;
    Ok(BigUint::from(count))
}

// ---------------------------------------------------------------------
// depth-respecting counts on rooted trees
// ---------------------------------------------------------------------

const TREE_ENUM_BUDGET: u128 = 10_000_000;

struct DepthHomEnum<'a> {
    t: &'a RootedTree,
    t2: &'a RootedTree,
    map: Vec<u32>,
    steps: u128,
}

impl DepthHomEnum<'_> {
    /// Enumerates depth-preserving homomorphisms (root to root; the image
    /// of each vertex is a child of its parent's image) and hands each
    /// completed map to `sink`.
    fn run(&mut self, v: usize, sink: &mut impl FnMut(&[u32])) -> Result<()> {
        self.steps += 1;
        if self.steps > TREE_ENUM_BUDGET {
            return Err(Error::Capacity {
                what: "rooted-tree map enumeration".to_string(),
                needed: self.steps,
                budget: TREE_ENUM_BUDGET,
            });
        }
        if v == self.t.size() {
            sink(&self.map);
            return Ok(());
        }
        let parent_img = self.map[self.t.parent[v].unwrap() as usize];
        for i in 0..self.t2.children[parent_img as usize].len() {
            self.map[v] = self.t2.children[parent_img as usize][i];
            self.run(v + 1, sink)?;
        }
        Ok(())
    }
}

fn depth_preserving_homs(
    t: &RootedTree,
    t2: &RootedTree,
    sink: &mut impl FnMut(&[u32]),
) -> Result<()> {
    let mut e = DepthHomEnum { t, t2, map: vec![0; t.size()], steps: 0 };
    // vertex 0 is the root on both sides and vertex ids respect parents
    e.run(1, sink)
}

/// Depth-preserving, depth-surjective homomorphism count between rooted
/// trees (zero exactly when the depths differ).
pub fn dhom_oracle(t: &RootedTree, t2: &RootedTree) -> Result<HomCount> {
    let d2 = t2.depth_max();
    let mut count: u128 = 0;
    depth_preserving_homs(t, t2, &mut |map| {
        let mut depth_hit = vec![false; d2 + 1];
        for &x in map {
            depth_hit[t2.depth[x as usize]] = true;
        }
        if depth_hit.iter().all(|&b| b) {
            count += 1;
        }
    })?;
    Ok(BigUint::from(count))
}

/// Depth-preserving, vertex-surjective homomorphism count between rooted
/// trees; on the diagonal this is the rooted automorphism count.
pub fn dsurj_oracle(t: &RootedTree, t2: &RootedTree) -> Result<HomCount> {
    let n2 = t2.size();
    let mut count: u128 = 0;
    depth_preserving_homs(t, t2, &mut |map| {
        let mut hit = vec![false; n2];
        for &x in map {
            hit[x as usize] = true;
        }
        if hit.iter().all(|&b| b) {
            count += 1;
        }
    })?;
    Ok(BigUint::from(count))
}

/// Number of subgraphs of `t2` that are isomorphic to `t` by a
/// root-preserving isomorphism; zero when the depths differ. Since
/// induced subgraphs of a tree are forests, these subgraphs are exactly
/// the connected root-containing vertex subsets inducing a copy of `t`.
pub fn dsub_oracle(t: &RootedTree, t2: &RootedTree) -> Result<HomCount> {
    if t.depth_max() != t2.depth_max() {
        return Ok(BigUint::zero());
    }
    let k = t.size();
    let n2 = t2.size();
    if k > n2 {
        return Ok(BigUint::zero());
    }
    let mut binom: u128 = 1;
    for i in 0..k.saturating_sub(1) {
        binom = binom.saturating_mul((n2 - 1 - i) as u128) / (i as u128 + 1);
    }
    if binom > TREE_ENUM_BUDGET {
        return Err(Error::Capacity {
            what: "rooted-tree subset enumeration".to_string(),
            needed: binom,
            budget: TREE_ENUM_BUDGET,
        });
    }
    let want = t.code();
    let mut count: u128 = 0;
    let mut subset = vec![0u32]; // always contains the root
    subsets_from(1, n2, k, &mut subset, &mut |subset| {
        let mut in_set = vec![false; n2];
        for &v in subset {
            in_set[v as usize] = true;
        }
        // connected subset of a tree: edge count must be |S| - 1
        let edges = subset
            .iter()
            .filter(|&&v| v != 0 && in_set[t2.parent[v as usize].unwrap() as usize])
            .count();
        if edges == k - 1 && subset_code(t2, 0, &in_set) == want.as_str() {
            count += 1;
        }
    });
    Ok(BigUint::from(count))
}

fn subsets_from(start: usize, n: usize, k: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for v in start..n {
        cur.push(v as u32);
        subsets_from(v + 1, n, k, cur, f);
        cur.pop();
    }
}

/// Canonical code of the subtree of `t` induced by `in_set`, rooted at `v`.
fn subset_code(t: &RootedTree, v: u32, in_set: &[bool]) -> String {
    let mut parts: Vec<String> = t.children[v as usize]
        .iter()
        .filter(|&&c| in_set[c as usize])
        .map(|&c| subset_code(t, c, in_set))
        .collect();
    parts.sort();
    format!("({})", parts.concat())
}

// ---------------------------------------------------------------------
// bag-wise isomorphic counts along a path decomposition
// ---------------------------------------------------------------------

/// Counts of bag-wise isomorphic homomorphisms from `f` (with alternating
/// path decomposition `p`) into `g`, grouped by the image tuple of the
/// first bag (in sorted first-bag order). Tuples with count zero are
/// omitted.
pub fn biso_profile(
    f: &Graph,
    p: &PathDecomposition,
    g: &Graph,
    ) -> Result<BTreeMap<Vec<u32>, HomCount>> {
    p.validate(f)?;
    check_map_budget(g.n(), f.n(), "bag-wise map enumeration")?;
    let n_f = f.n();
    let mut profile: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
    let mut map = vec![0u32; n_f];
    biso_enumerate(f, p, g, 0, &mut map, &mut profile);
    Ok(profile
        .into_iter()
        .map(|(tup, c)| (tup, BigUint::from(c)))
        .collect())
}

fn biso_enumerate(
    f: &Graph,
    p: &PathDecomposition,
    g: &Graph,
    v: usize,
    map: &mut Vec<u32>,
    profile: &mut BTreeMap<Vec<u32>, u128>,
) {
    if v == f.n() {
        let key: Vec<u32> = p.first_bag().iter().map(|&u| map[u as usize]).collect();
        *profile.entry(key).or_insert(0) += 1;
        return;
    }
    'image: for x in 0..g.n() as u32 {
        // plain homomorphism condition against assigned vertices
        for u in 0..v as u32 {
            if f.has_edge(v as u32, u) && !g.has_edge(x, map[u as usize]) {
                continue 'image;
            }
        }
        // bag-wise isomorphism condition for every bag containing v whose
        // other members are all assigned: injective on the bag and
        // edge/non-edge exact within the bag
        for bag in &p.bags {
            if bag.binary_search(&(v as u32)).is_err() {
                continue;
            }
            for &u in bag.iter() {
                if u as usize >= v {
                    continue;
                }
                if x == map[u as usize] {
                    continue 'image;
                }
                if f.has_edge(v as u32, u) != g.has_edge(x, map[u as usize]) {
                    continue 'image;
                }
            }
        }
        map[v] = x;
        biso_enumerate(f, p, g, v + 1, map, profile);
    }
}

/// Number of bag-wise isomorphic homomorphisms from `f` to `g` that pin
/// the `i`-th smallest vertex of the first bag to `pins[i]`.
pub fn biso_conditional(
    f: &Graph,
    p: &PathDecomposition,
    g: &Graph,
    pins: &[u32],
) -> Result<HomCount> {
    if pins.len() != p.first_bag().len() {
        return Err(Error::Input(format!(
            "expected {} pinned images, got {}",
            p.first_bag().len(),
            pins.len()
        )));
    }
    let profile = biso_profile(f, p, g)?;
    Ok(profile.get(pins).cloned().unwrap_or_else(BigUint::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{alternating_path_decomposition, min_path_decomposition, tw2_decomposition};
    use crate::graph::{complete, cycle, disjoint_union, parse_graph6, path, spider, star};
    use crate::refine::cr_vector;
    use crate::trees::{rooted_tree_codes, RootedTree};

    fn walk_twins() -> (Graph, Graph) {
        (spider(3, 2), disjoint_union(&cycle(6).unwrap(), &path(0)))
    }

    fn spectral_twins() -> (Graph, Graph) {
        (star(4), disjoint_union(&cycle(4).unwrap(), &path(0)))
    }

    #[test]
    fn tree_pattern_basics() {
        let g = cycle(5).unwrap();
        assert_eq!(hom_tree(&path(0), &g).unwrap(), BigUint::from(5u32));
        assert_eq!(hom_tree(&path(1), &g).unwrap(), BigUint::from(10u32));
        // two-edge path into the 4-star: sum of squared degrees
        assert_eq!(hom_tree(&path(2), &star(4)).unwrap(), BigUint::from(20u32));
        assert!(hom_tree(&cycle(3).unwrap(), &g).is_err());
    }

    #[test]
    fn tree_dp_matches_bruteforce() {
        let targets = [cycle(4).unwrap(), star(3), path(3), complete(4)];
        let patterns = [path(2), path(4), star(3), spider(3, 1)];
        for t in &patterns {
            for g in &targets {
                assert_eq!(
                    hom_tree(t, g).unwrap(),
                    hom_bruteforce(t, g).unwrap(),
                    "tree {t:?} target {g:?}"
                );
            }
        }
    }

    #[test]
    fn walk_counts() {
        let (l, r) = spectral_twins();
        assert_eq!(walk_count(&l, 0), BigUint::from(5u32));
        assert_eq!(walk_count(&l, 2), BigUint::from(20u32));
        assert_eq!(walk_count(&r, 2), BigUint::from(16u32));
        for len in 0..=5 {
            assert_eq!(walk_count(&l, len), hom_tree(&path(len), &l).unwrap());
        }
    }

    #[test]
    fn walk_equal_pair_stays_equal() {
        let (l, r) = walk_twins();
        for len in 0..=8 {
            assert_eq!(walk_count(&l, len), walk_count(&r, len), "length {len}");
        }
    }

    #[test]
    fn closed_walks() {
        let c6 = cycle(6).unwrap();
        let cc3 = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap());
        assert_eq!(closed_walk_count(&c6, 0), BigUint::from(6u32));
        assert_eq!(closed_walk_count(&c6, 2), BigUint::from(12u32));
        assert_eq!(closed_walk_count(&c6, 3), BigUint::zero());
        assert_eq!(closed_walk_count(&cc3, 3), BigUint::from(12u32));
    }

    #[test]
    fn closed_walks_match_matrix_trace() {
        use crate::graph::AdjacencyMatrix;
        for g in [cycle(5).unwrap(), star(3), complete(4)] {
            let a = AdjacencyMatrix::from_graph(&g);
            let mut power = AdjacencyMatrix::identity(g.n());
            for len in 0..=6 {
                assert_eq!(
                    closed_walk_count(&g, len).to_string(),
                    power.trace().to_string(),
                    "length {len}"
                );
                power = power.mul(&a);
            }
        }
    }

    #[test]
    fn treewidth_dp_known_values() {
        let c4 = cycle(4).unwrap();
        let td = tw2_decomposition(&c4).unwrap();
        assert_eq!(hom_treewidth(&c4, &td, &c4).unwrap(), BigUint::from(32u32));
        // triangle pattern: six times the triangle count
        let k3 = complete(3);
        let td3 = tw2_decomposition(&k3).unwrap();
        assert_eq!(hom_treewidth(&k3, &td3, &complete(4)).unwrap(), BigUint::from(24u32));
        assert_eq!(hom_treewidth(&k3, &td3, &c4).unwrap(), BigUint::zero());
    }

    #[test]
    fn treewidth_dp_matches_bruteforce_and_tree_dp() {
        let targets = [cycle(4).unwrap(), complete(4), star(3)];
        let patterns = [cycle(3).unwrap(), cycle(4).unwrap(), path(3), complete(3)];
        for f in &patterns {
            let td = tw2_decomposition(f).unwrap();
            for g in &targets {
                assert_eq!(
                    hom_treewidth(f, &td, g).unwrap(),
                    hom_bruteforce(f, g).unwrap(),
                    "pattern {f:?} target {g:?}"
                );
            }
        }
        // a tree pattern through its path decomposition agrees with the tree DP
        let t = spider(3, 1);
        let (_, td) = min_path_decomposition(&t).unwrap();
        for g in &targets {
            assert_eq!(hom_treewidth(&t, &td, g).unwrap(), hom_tree(&t, g).unwrap());
        }
    }

    #[test]
    fn treewidth_dp_rejects_bad_decomposition() {
        let c4 = cycle(4).unwrap();
        let td = tw2_decomposition(&cycle(3).unwrap()).unwrap();
        assert!(hom_treewidth(&c4, &td, &c4).is_err());
    }

    #[test]
    fn bruteforce_small_counts() {
        let k2 = path(1);
        assert_eq!(hom_bruteforce(&k2, &k2).unwrap(), BigUint::from(2u32));
        assert_eq!(inj_bruteforce(&k2, &k2).unwrap(), BigUint::from(2u32));
        assert_eq!(sub_bruteforce(&k2, &k2).unwrap(), BigUint::one());
        let g = cycle(5).unwrap();
        assert_eq!(strhom_bruteforce(&k2, &g).unwrap(), BigUint::from(10u32));
        // pattern of two isolated vertices: strong maps avoid edges
        let two = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(
            strhom_bruteforce(&two, &g).unwrap(),
            BigUint::from(5u32 * 5 - 10)
        );
    }

    #[test]
    fn induced_counts_are_dominated() {
        let patterns = [path(2), path(3), cycle(4).unwrap(), complete(3)];
        let targets = [cycle(5).unwrap(), complete(4), star(4)];
        for f in &patterns {
            for g in &targets {
                let ind = ind_bruteforce(f, g).unwrap();
                let sub = sub_bruteforce(f, g).unwrap();
                let inj = inj_bruteforce(f, g).unwrap();
                assert!(ind <= sub, "{f:?} {g:?}");
                assert!(sub <= inj, "{f:?} {g:?}");
            }
        }
        // C4 has exactly one induced and one subgraph copy of itself
        let c4 = cycle(4).unwrap();
        assert_eq!(ind_bruteforce(&c4, &c4).unwrap(), BigUint::one());
        assert_eq!(ind_bruteforce(&path(2), &complete(3)).unwrap(), BigUint::zero());
        assert_eq!(sub_bruteforce(&path(2), &complete(3)).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn extension_identity_small() {
        // hom(h, g) equals the sum of strong-hom counts over all
        // supergraphs of h on the same vertex set
        let graphs: Vec<Graph> = ["C~", "Cr", "Cl", "CF", "CU"]
            .iter()
            .map(|s| parse_graph6(s).unwrap())
            .collect();
        for h in &graphs {
            for g in &graphs {
                let mut non_edges = Vec::new();
                for u in 0..h.n() as u32 {
                    for v in u + 1..h.n() as u32 {
                        if !h.has_edge(u, v) {
                            non_edges.push((u, v));
                        }
                    }
                }
                let mut total = BigUint::zero();
                for mask in 0u32..(1 << non_edges.len()) {
                    let mut edges: Vec<(u32, u32)> = h.edges();
                    for (i, &e) in non_edges.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            edges.push(e);
                        }
                    }
                    let sup = Graph::from_edges(h.n(), &edges).unwrap();
                    total += strhom_bruteforce(&sup, g).unwrap();
                }
                assert_eq!(total, hom_bruteforce(h, g).unwrap(), "{h:?} -> {g:?}");
            }
        }
    }

    fn rooted_codes_up_to(n: usize) -> Vec<crate::trees::RootedTreeCode> {
        (1..=n).flat_map(rooted_tree_codes).collect()
    }

    #[test]
    fn depth_counts_on_diagonal() {
        for code in rooted_codes_up_to(4) {
            let t = RootedTree::from_paren_str(code.as_str()).unwrap();
            let aut = rooted_aut_count(&t);
            assert_eq!(dsurj_oracle(&t, &t).unwrap(), BigUint::from(aut), "{code:?}");
            assert!(dhom_oracle(&t, &t).unwrap() >= BigUint::from(aut));
            assert_eq!(dsub_oracle(&t, &t).unwrap(), BigUint::one());
        }
    }

    /// Independent rooted-automorphism count: permutations fixing the root
    /// that preserve adjacency exactly.
    fn rooted_aut_count(t: &RootedTree) -> u128 {
        let g = t.to_graph();
        let n = g.n();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut count = 0;
        permutations(&mut perm, 1, &mut |perm| {
            let ok = (0..n as u32).all(|u| {
                (0..n as u32).all(|v| g.has_edge(u, v) == g.has_edge(perm[u as usize], perm[v as usize]))
            });
            if ok {
                count += 1;
            }
        });
        count
    }

    fn permutations(items: &mut Vec<u32>, start: usize, f: &mut impl FnMut(&[u32])) {
        if start == items.len() {
            f(items);
            return;
        }
        for i in start..items.len() {
            items.swap(start, i);
            permutations(items, start + 1, f);
            items.swap(start, i);
        }
    }

    #[test]
    fn dhom_zero_exactly_on_depth_mismatch() {
        let codes = rooted_codes_up_to(4);
        for a in &codes {
            let ta = RootedTree::from_paren_str(a.as_str()).unwrap();
            for b in &codes {
                let tb = RootedTree::from_paren_str(b.as_str()).unwrap();
                let d = dhom_oracle(&ta, &tb).unwrap();
                assert_eq!(
                    d.is_zero(),
                    ta.depth_max() != tb.depth_max(),
                    "{a:?} -> {b:?}"
                );
            }
        }
    }

    #[test]
    fn lu_identity_small() {
        // dhom(T,T') = sum over T'' of dsurj(T,T'') * dsub(T'',T')
        let codes = rooted_codes_up_to(4);
        let trees: Vec<RootedTree> = codes
            .iter()
            .map(|c| RootedTree::from_paren_str(c.as_str()).unwrap())
            .collect();
        for t in &trees {
            // dsurj vanishes beyond |T| vertices, so the sum is finite
            let mids = rooted_codes_up_to(t.size());
            for t2 in &trees {
                let mut sum = BigUint::zero();
                for mid in &mids {
                    let tm = RootedTree::from_paren_str(mid.as_str()).unwrap();
                    sum += dsurj_oracle(t, &tm).unwrap() * dsub_oracle(&tm, t2).unwrap();
                }
                assert_eq!(sum, dhom_oracle(t, t2).unwrap());
            }
        }
    }

    #[test]
    fn unfolding_expansion_small() {
        // hom of a rooted tree's underlying tree equals the sum over depth-d
        // unfolding classes of (depth-respecting hom count) * (class size)
        let targets = [path(3), cycle(5).unwrap(), star(3), disjoint_union(&path(1), &path(0))];
        for code in rooted_codes_up_to(4) {
            let t = RootedTree::from_paren_str(code.as_str()).unwrap();
            let d = t.depth_max();
            for g in &targets {
                let direct = hom_tree(&t.to_graph(), g).unwrap();
                let mut via_classes = BigUint::zero();
                for (unf_code, cr) in cr_vector(g, d).unwrap() {
                    let t2 = RootedTree::from_paren_str(unf_code.as_str()).unwrap();
                    via_classes += dhom_oracle(&t, &t2).unwrap() * BigUint::from(cr);
                }
                assert_eq!(direct, via_classes, "tree {code:?} target {g:?}");
            }
        }
    }

    #[test]
    fn biso_single_bag_base_case() {
        let k2 = path(1);
        let pd = alternating_path_decomposition(&k2, 2).unwrap().unwrap();
        let g = path(2); // edges (0,1), (1,2)
        assert_eq!(
            biso_conditional(&k2, &pd, &g, &[0, 1]).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            biso_conditional(&k2, &pd, &g, &[0, 2]).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            biso_conditional(&k2, &pd, &g, &[0, 0]).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn biso_profile_matches_direct_definition() {
        let f = path(3);
        let pd = alternating_path_decomposition(&f, 2).unwrap().unwrap();
        let g = cycle(4).unwrap();
        let profile = biso_profile(&f, &pd, &g).unwrap();
        // definitional re-count: all maps, checked bag by bag
        let n_f = f.n();
        let mut expect: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
        let total = (g.n() as u64).pow(n_f as u32);
        for mut code in 0..total {
            let mut map = Vec::with_capacity(n_f);
            for _ in 0..n_f {
                map.push((code % g.n() as u64) as u32);
                code /= g.n() as u64;
            }
            let hom_ok = f
                .edges()
                .iter()
                .all(|&(u, v)| g.has_edge(map[u as usize], map[v as usize]));
            let bags_ok = pd.bags.iter().all(|bag| {
                bag.iter().enumerate().all(|(i, &u)| {
                    bag.iter().skip(i + 1).all(|&v| {
                        map[u as usize] != map[v as usize]
                            && (f.has_edge(u, v)
                                == g.has_edge(map[u as usize], map[v as usize]))
                    })
                })
            });
            if hom_ok && bags_ok {
                let key: Vec<u32> = pd.first_bag().iter().map(|&u| map[u as usize]).collect();
                *expect.entry(key).or_insert(0) += 1;
            }
        }
        let expect: BTreeMap<Vec<u32>, BigUint> = expect
            .into_iter()
            .map(|(k, c)| (k, BigUint::from(c)))
            .collect();
        assert_eq!(profile, expect);
    }

    #[test]
    fn budget_is_enforced() {
        let big = complete(12);
        assert!(matches!(
            hom_bruteforce(&big, &big),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn auto_dispatch_matches_bruteforce_and_names_its_routine() {
        let two_triangles = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap());
        let patterns = [path(3), cycle(4).unwrap(), two_triangles, complete(4)];
        let targets = [cycle(5).unwrap(), star(3)];
        for f in &patterns {
            for g in &targets {
                let (count, routine) = hom_auto(f, g).unwrap();
                assert_eq!(count, hom_bruteforce(f, g).unwrap(), "routine {routine}");
            }
        }
        assert_eq!(hom_auto(&path(2), &star(4)).unwrap().1, "tree-dp");
        assert_eq!(hom_auto(&cycle(4).unwrap(), &star(4)).unwrap().1, "width2-dp");
        // the complete graph on four vertices has treewidth three
        assert_eq!(hom_auto(&complete(4), &star(4)).unwrap().1, "bruteforce");
    }
}
