//! The k-dimensional refinement algorithm on vertex tuples.
//!
//! Where [`crate::refine`] colors vertices, this module colors k-tuples of
//! vertices. Each tuple starts from its *atomic type* — the complete
//! description of equalities and adjacencies among its entries — and each
//! round appends, for every vertex `w`, the atomic type of the extended
//! tuple together with the current colors of the k tuples obtained by
//! substituting `w` into each position. Rounds repeat until the partition
//! of tuples stops changing.
//!
//! The two-graph test runs the refinement jointly over both tuple spaces
//! with one shared color dictionary and compares the color multisets; the
//! graphs are *distinguished* when the multisets differ. Dimension 1
//! induces exactly the vertex partition of plain color refinement, and
//! each dimension is at least as strong as the one below it.
//!
//! The refinement loop is the naive one from the definition,
//! `O(rounds · n^{k+1} · k)` signature work, guarded by a work budget;
//! tuples are flat base-n indices and color ids are canonicalized by
//! sorted signature order every round, so colorings are deterministic and
//! comparable across graphs.

use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::{Error, Result};

/// Default ceiling on `Σ n^{k+1}` across the refined tuple spaces, the
/// per-round signature work.
pub const KWL_WORK_BUDGET: u128 = 20_000_000;

/// The atomic type of a vertex tuple: a symmetric matrix over `{0, 1, 2}`
/// recording, for each position pair, whether the vertices are equal (2),
/// adjacent (1), or neither (0). The diagonal is always 2.
///
/// Two tuples (possibly from different graphs) have equal atomic types
/// exactly when pairing them position-by-position yields a partial
/// isomorphism; repeated vertices must therefore read as "equal", not
/// merely as "non-adjacent", and the matrix marks every coincidence —
/// on or off the diagonal — with a 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicType {
    k: usize,
    /// Row-major `k × k` entries.
    entries: Vec<u8>,
}

impl AtomicType {
    /// The tuple length this type describes.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The entry for position pair `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.k + j]
    }
}

/// The atomic type of `tuple` in `g`. Entries may repeat; every index must
/// be a vertex of `g`.
pub fn atp(g: &Graph, tuple: &[u32]) -> AtomicType {
    let k = tuple.len();
    let mut entries = vec![0u8; k * k];
    for i in 0..k {
        for j in 0..k {
            entries[i * k + j] = if tuple[i] == tuple[j] {
                2
            } else if g.has_edge(tuple[i], tuple[j]) {
                1
            } else {
                0
            };
        }
    }
    AtomicType { k, entries }
}

/// A stable coloring of the k-tuples of one graph. Tuples are indexed in
/// base `n`: the tuple `(v_1, …, v_k)` lives at `Σ_j v_{j+1} · n^j`.
#[derive(Clone, Debug)]
pub struct TupleColoring {
    k: usize,
    n: usize,
    /// Color of each tuple, indexed as above; ids are dense from 0.
    colors: Vec<u32>,
    /// Number of refinement rounds performed before the partition
    /// stabilized (0 when the atomic types were already stable).
    rounds: usize,
}

impl TupleColoring {
    /// The tuple length.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Rounds executed before stability.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// The stable color of a tuple.
    pub fn color_of(&self, tuple: &[u32]) -> u32 {
        assert_eq!(tuple.len(), self.k, "tuple length must match the coloring dimension");
        let mut idx = 0usize;
        for &v in tuple.iter().rev() {
            assert!((v as usize) < self.n, "vertex {v} out of range");
            idx = idx * self.n + v as usize;
        }
        self.colors[idx]
    }

    /// All tuple colors, as a flat slice in tuple-index order.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Number of color classes.
    pub fn class_count(&self) -> usize {
        self.colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
    }
}

/// One tuple space being refined: a graph plus the current coloring of its
/// `n^k` tuples.
struct Space<'a> {
    g: &'a Graph,
    colors: Vec<u32>,
}

fn tuple_count(n: usize, k: usize) -> u128 {
    (n as u128).pow(k as u32)
}

fn check_budget(spaces: &[&Graph], k: usize, budget: u128) -> Result<()> {
    let mut work: u128 = 0;
    for g in spaces {
        let per_round = tuple_count(g.n(), k).saturating_mul(g.n() as u128);
        work = work.saturating_add(per_round);
    }
    if work > budget {
        return Err(Error::Capacity {
            what: "tuple refinement work per round".to_string(),
            needed: work,
            budget,
        });
    }
    Ok(())
}

/// Decodes tuple index `idx` into `out` (little-endian base-n digits:
/// `out[j]` is position `j+1` of the tuple).
fn decode(mut idx: usize, n: usize, out: &mut [u32]) {
    for digit in out.iter_mut() {
        *digit = (idx % n) as u32;
        idx /= n;
    }
}

/// Assigns the joint initial coloring (canonical atomic-type ids shared
/// across all spaces) and returns the class count.
fn initial_colors(spaces: &mut [Space<'_>], k: usize) -> usize {
    let mut types: Vec<Vec<AtomicType>> = Vec::with_capacity(spaces.len());
    let mut dict: BTreeMap<AtomicType, u32> = BTreeMap::new();
    for space in spaces.iter() {
        let n = space.g.n();
        let mut tuple = vec![0u32; k];
        let mut per_space = Vec::with_capacity(space.colors.len());
        for idx in 0..space.colors.len() {
            decode(idx, n, &mut tuple);
            let t = atp(space.g, &tuple);
            dict.insert(t.clone(), 0);
            per_space.push(t);
        }
        types.push(per_space);
    }
    for (next, (_, id)) in dict.iter_mut().enumerate() {
        *id = next as u32;
    }
    for (space, per_space) in spaces.iter_mut().zip(&types) {
        for (slot, t) in space.colors.iter_mut().zip(per_space) {
            *slot = dict[t];
        }
    }
    dict.len()
}

/// The per-tuple refinement signature: previous color plus the sorted
/// multiset, over all `w`, of the extended tuple's atomic type and the
/// colors of the k substituted tuples (substituting the last position
/// first, down to the first).
type Signature = (u32, Vec<(AtomicType, Vec<u32>)>);

/// Runs one refinement round jointly over all spaces, reassigning
/// canonical ids, and returns the new class count.
fn refine_round(spaces: &mut [Space<'_>], k: usize) -> usize {
    let mut signatures: Vec<Vec<Signature>> = Vec::with_capacity(spaces.len());
    let mut dict: BTreeMap<Signature, u32> = BTreeMap::new();
    for space in spaces.iter() {
        let n = space.g.n();
        let mut pow = Vec::with_capacity(k);
        let mut p = 1usize;
        for _ in 0..k {
            pow.push(p);
            p *= n.max(1);
        }
        let mut tuple = vec![0u32; k];
        let mut extended = vec![0u32; k + 1];
        let mut per_space = Vec::with_capacity(space.colors.len());
        for idx in 0..space.colors.len() {
            decode(idx, n, &mut tuple);
            extended[..k].copy_from_slice(&tuple);
            let mut entries = Vec::with_capacity(n);
            for w in 0..n as u32 {
                extended[k] = w;
                let ext_type = atp(space.g, &extended);
                // Substituted colors, last position first.
                let mut subs = Vec::with_capacity(k);
                for pos in (0..k).rev() {
                    let sub_idx =
                        idx + (w as usize) * pow[pos] - (tuple[pos] as usize) * pow[pos];
                    subs.push(space.colors[sub_idx]);
                }
                entries.push((ext_type, subs));
            }
            entries.sort_unstable();
            let sig = (space.colors[idx], entries);
            dict.insert(sig.clone(), 0);
            per_space.push(sig);
        }
        signatures.push(per_space);
    }
    for (next, (_, id)) in dict.iter_mut().enumerate() {
        *id = next as u32;
    }
    for (space, per_space) in spaces.iter_mut().zip(&signatures) {
        for (slot, sig) in space.colors.iter_mut().zip(per_space) {
            *slot = dict[sig];
        }
    }
    dict.len()
}

/// Refines spaces jointly until the partition stabilizes; returns the
/// number of rounds performed (excluding the final no-op round that
/// detects stability). Each round properly refines the previous coloring
/// (the old color is part of the signature), so an unchanged class count
/// means an unchanged partition.
fn refine_to_stable(spaces: &mut [Space<'_>], k: usize) -> usize {
    let mut classes = initial_colors(spaces, k);
    let mut rounds = 0;
    loop {
        let previous: Vec<Vec<u32>> = spaces.iter().map(|s| s.colors.clone()).collect();
        let next_classes = refine_round(spaces, k);
        if next_classes == classes {
            // Same class count under a refining step: identical partition.
            // Keep the stable coloring (ids from the last effective round).
            for (space, old) in spaces.iter_mut().zip(previous) {
                space.colors = old;
            }
            return rounds;
        }
        classes = next_classes;
        rounds += 1;
    }
}

/// The stable k-tuple coloring of a single graph. Requires `k ≥ 1` and a
/// non-empty graph; fails with a capacity error when the per-round
/// signature work `n^{k+1}` exceeds the budget.
pub fn kwl_stable(g: &Graph, k: usize) -> Result<TupleColoring> {
    kwl_stable_with_budget(g, k, KWL_WORK_BUDGET)
}

/// [`kwl_stable`] with an explicit work budget.
pub fn kwl_stable_with_budget(g: &Graph, k: usize, budget: u128) -> Result<TupleColoring> {
    if k == 0 {
        return Err(Error::Input("refinement dimension must be at least 1".to_string()));
    }
    if g.n() == 0 {
        return Err(Error::Input("refinement needs at least one vertex".to_string()));
    }
    check_budget(&[g], k, budget)?;
    let mut spaces = [Space { g, colors: vec![0; tuple_count(g.n(), k) as usize] }];
    let rounds = refine_to_stable(&mut spaces, k);
    let [space] = spaces;
    Ok(TupleColoring { k, n: g.n(), colors: space.colors, rounds })
}

/// Whether k-dimensional refinement separates `g` from `h`: the joint
/// stable coloring of both tuple spaces (one shared dictionary) yields
/// different color multisets. Requires `k ≥ 1`.
pub fn distinguishes_kwl(g: &Graph, h: &Graph, k: usize) -> Result<bool> {
    distinguishes_kwl_with_budget(g, h, k, KWL_WORK_BUDGET)
}

/// [`distinguishes_kwl`] with an explicit work budget.
pub fn distinguishes_kwl_with_budget(
    g: &Graph,
    h: &Graph,
    k: usize,
    budget: u128,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::Input("refinement dimension must be at least 1".to_string()));
    }
    check_budget(&[g, h], k, budget)?;
    let mut spaces = [
        Space { g, colors: vec![0; tuple_count(g.n(), k) as usize] },
        Space { g: h, colors: vec![0; tuple_count(h.n(), k) as usize] },
    ];
    refine_to_stable(&mut spaces, k);

    let mut counts: BTreeMap<u32, (i64, i64)> = BTreeMap::new();
    for &c in &spaces[0].colors {
        counts.entry(c).or_default().0 += 1;
    }
    for &c in &spaces[1].colors {
        counts.entry(c).or_default().1 += 1;
    }
    Ok(counts.values().any(|&(a, b)| a != b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, disjoint_union, parse_graph6, path, Graph};
    use crate::refine::{distinguishes_1wl, refine_stable};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn k1() -> Graph {
        Graph::from_edges(1, &[]).unwrap()
    }

    fn two_k1() -> Graph {
        disjoint_union(&k1(), &k1())
    }

    fn refine_twins() -> (Graph, Graph) {
        (cycle(6).unwrap(), disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap()))
    }

    fn atlas(n: usize) -> Vec<Graph> {
        let text = match n {
            3 => include_str!("../data/atlas_n3.g6"),
            4 => include_str!("../data/atlas_n4.g6"),
            5 => include_str!("../data/atlas_n5.g6"),
            _ => panic!("no bundled corpus for n = {n}"),
        };
        text.lines().map(|line| parse_graph6(line.trim()).unwrap()).collect()
    }

    #[test]
    fn atomic_types_on_pairs() {
        let edge = path(1);
        // Repeated vertex: every entry 2.
        let t = atp(&edge, &[0, 0]);
        assert_eq!(t.k(), 2);
        assert_eq!((t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1)), (2, 2, 2, 2));
        // An edge.
        let t = atp(&edge, &[0, 1]);
        assert_eq!((t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1)), (2, 1, 1, 2));
        // A non-edge.
        let t = atp(&two_k1(), &[0, 1]);
        assert_eq!((t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1)), (2, 0, 0, 2));
    }

    #[test]
    fn atomic_type_equality_is_partial_isomorphism() {
        use crate::linsys::PartialMap;
        // Exhaustively on two small graphs and k = 3 with repeats.
        let g = path(2);
        let h = cycle(3).unwrap();
        let mut tuples_g = Vec::new();
        let mut tuples_h = Vec::new();
        for a in 0..3u32 {
            for b in 0..3u32 {
                for c in 0..3u32 {
                    tuples_g.push([a, b, c]);
                    tuples_h.push([a, b, c]);
                }
            }
        }
        for tg in &tuples_g {
            for th in &tuples_h {
                let same_type = atp(&g, tg) == atp(&h, th);
                let pairing = PartialMap::new(tg.iter().copied().zip(th.iter().copied()).collect());
                // The pairing must also be consistent as a map: a repeated
                // left vertex must pair with a repeated right vertex, which
                // is exactly what the type's 2-entries encode.
                let consistent = (0..3).all(|i| {
                    (0..3).all(|j| (tg[i] == tg[j]) == (th[i] == th[j]))
                });
                let is_pi = consistent && pairing.is_partial_isomorphism(&g, &h);
                assert_eq!(same_type, is_pi, "tuples {tg:?} vs {th:?}");
            }
        }
    }

    #[test]
    fn dimension_one_matches_vertex_refinement() {
        for g in
            [cycle(6).unwrap(), path(4), complete(4), disjoint_union(&cycle(3).unwrap(), &path(2))]
        {
            let tuples = kwl_stable(&g, 1).unwrap();
            let vertex = refine_stable(&g);
            // Same partition of vertices, allowing different id labels.
            let mut seen = std::collections::HashMap::new();
            for v in 0..g.n() as u32 {
                let pair = (tuples.color_of(&[v]), vertex.color[v as usize]);
                for (a, b) in seen.iter() {
                    let same_t = *a == pair.0;
                    let same_v = *b == pair.1;
                    assert_eq!(same_t, same_v, "partitions disagree on {g:?}");
                }
                seen.insert(pair.0, pair.1);
            }
        }
    }

    #[test]
    fn self_pairs_are_never_distinguished() {
        for g in [cycle(6).unwrap(), path(3), complete(4)] {
            for k in 1..=2 {
                assert!(!distinguishes_kwl(&g, &g, k).unwrap());
            }
        }
    }

    #[test]
    fn dimension_two_separates_the_cycle_pair() {
        let (g, h) = refine_twins();
        assert!(!distinguishes_kwl(&g, &h, 1).unwrap());
        assert!(distinguishes_kwl(&g, &h, 2).unwrap());
    }

    #[test]
    fn dimension_one_agrees_with_the_fast_engine_on_the_corpus() {
        let graphs = atlas(4);
        for (i, g) in graphs.iter().enumerate() {
            for h in &graphs[i..] {
                assert_eq!(
                    distinguishes_kwl(g, h, 1).unwrap(),
                    distinguishes_1wl(g, h),
                    "dimension-1 disagreement"
                );
            }
        }
    }

    #[test]
    fn higher_dimension_is_monotone_on_small_graphs() {
        let graphs = atlas(4);
        for (i, g) in graphs.iter().enumerate() {
            for h in &graphs[i..] {
                if distinguishes_kwl(g, h, 1).unwrap() {
                    assert!(
                        distinguishes_kwl(g, h, 2).unwrap(),
                        "dimension 2 must refine dimension 1"
                    );
                }
            }
        }
    }

    #[test]
    fn stable_colorings_are_idempotent() {
        let (g, h) = refine_twins();
        for (graph, k) in [(&g, 2), (&h, 2), (&g, 1)] {
            let stable = kwl_stable(graph, k).unwrap();
            let mut spaces =
                [Space { g: graph, colors: stable.colors().to_vec() }];
            let classes = stable.class_count();
            assert_eq!(refine_round(&mut spaces, k), classes);
        }
    }

    #[test]
    fn random_relabelings_are_never_distinguished() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for g in [cycle(6).unwrap(), path(4), disjoint_union(&cycle(3).unwrap(), &path(1))] {
            for _ in 0..3 {
                let mut perm: Vec<u32> = (0..g.n() as u32).collect();
                perm.shuffle(&mut rng);
                let edges: Vec<(u32, u32)> = g
                    .edges()
                    .into_iter()
                    .map(|(u, v)| (perm[u as usize], perm[v as usize]))
                    .collect();
                let relabeled = Graph::from_edges(g.n(), &edges).unwrap();
                assert!(!distinguishes_kwl(&g, &relabeled, 1).unwrap());
                assert!(!distinguishes_kwl(&g, &relabeled, 2).unwrap());
            }
        }
    }

    #[test]
    fn budget_and_preconditions_are_enforced() {
        let g = complete(40);
        match kwl_stable_with_budget(&g, 3, 1000) {
            Err(Error::Capacity { needed, budget, .. }) => {
                assert_eq!(needed, 40u128.pow(4));
                assert_eq!(budget, 1000);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
        assert!(matches!(kwl_stable(&g, 0), Err(Error::Input(_))));
        assert!(matches!(distinguishes_kwl(&g, &g, 0), Err(Error::Input(_))));
    }

    #[test]
    fn rounds_counter_reports_effective_work() {
        // A vertex-transitive graph is stable immediately at dimension 1.
        let c6 = cycle(6).unwrap();
        assert_eq!(kwl_stable(&c6, 1).unwrap().rounds(), 0);
        // A path needs at least one round to separate ends from middles —
        // and the initial coloring is already finer than one class.
        let p4 = path(4);
        assert!(kwl_stable(&p4, 1).unwrap().rounds() >= 1);
    }
}
