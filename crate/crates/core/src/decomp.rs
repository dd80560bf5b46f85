//! Tree and path decompositions of small pattern graphs.
//!
//! Provides validation (every vertex covered, every edge inside a bag,
//! bags containing a vertex form a connected subtree), a greedy
//! elimination-based constructor for width <= 2, brute-force minimum-width
//! path decompositions via vertex layouts, and the alternating bag shape
//! (k, k+1, k, ..., k) used by bag-wise isomorphic homomorphism counts.

use crate::graph::Graph;
use crate::{Error, Result};

/// Bags attached to the nodes of an (unrooted) tree.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    /// Bag per node; each bag is sorted and duplicate-free.
    pub bags: Vec<Vec<u32>>,
    /// Edges between decomposition nodes.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<u32>>, edges: Vec<(usize, usize)>) -> TreeDecomposition {
        for bag in bags.iter_mut() {
            bag.sort_unstable();
            bag.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Checks that this is a tree decomposition of `f`; errors name the
    /// violated condition.
    pub fn validate(&self, f: &Graph) -> Result<()> {
        let t = self.bags.len();
        if t == 0 {
            return Err(Error::Decomposition("no decomposition nodes".to_string()));
        }
        if self.edges.len() != t - 1 {
            return Err(Error::Decomposition(format!(
                "{} nodes need {} tree edges, found {}",
                t,
                t - 1,
                self.edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); t];
        for &(a, b) in &self.edges {
            if a >= t || b >= t || a == b {
                return Err(Error::Decomposition(format!("bad tree edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        // connectivity of the node tree
        let mut seen = vec![false; t];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached != t {
            return Err(Error::Decomposition("decomposition nodes are not a tree".to_string()));
        }
        // vertex coverage
        let mut covered = vec![false; f.n()];
        for bag in &self.bags {
            for &v in bag {
                if v as usize >= f.n() {
                    return Err(Error::Decomposition(format!(
                        "bag vertex {v} out of range"
                    )));
                }
                covered[v as usize] = true;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::Decomposition(format!("vertex {v} is in no bag")));
        }
        // edge coverage
        'edge: for (u, v) in f.edges() {
            for bag in &self.bags {
                if bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok() {
                    continue 'edge;
                }
            }
            return Err(Error::Decomposition(format!("edge ({u},{v}) is in no bag")));
        }
        // bags containing each vertex form a connected subtree
        for v in 0..f.n() as u32 {
            let holders: Vec<usize> = (0..t)
                .filter(|&i| self.bags[i].binary_search(&v).is_ok())
                .collect();
            let mut seen = vec![false; t];
            let mut stack = vec![holders[0]];
            seen[holders[0]] = true;
            let mut reached = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] && self.bags[y].binary_search(&v).is_ok() {
                        seen[y] = true;
                        reached += 1;
                        stack.push(y);
                    }
                }
            }
            if reached != holders.len() {
                return Err(Error::Decomposition(format!(
                    "bags containing vertex {v} are disconnected"
                )));
            }
        }
        Ok(())
    }
}

/// Tree decomposition of width <= 2 by greedy elimination of vertices of
/// degree <= 2 (with a fill edge for degree-2 vertices), or `None` when the
/// graph has treewidth > 2.
pub fn tw2_decomposition(f: &Graph) -> Option<TreeDecomposition> {
    let n = f.n();
    if n == 0 {
        return None;
    }
    let mut nbrs: Vec<Vec<u32>> = (0..n as u32).map(|v| f.adj(v).to_vec()).collect();
    let mut alive = vec![true; n];
    let mut bags: Vec<Vec<u32>> = Vec::new();
    let mut elim_pos = vec![usize::MAX; n];
    let mut elim_vertex = Vec::new();
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v] && nbrs[v].len() <= 2)
            .min_by_key(|&v| (nbrs[v].len(), v))? as u32;
        let current: Vec<u32> = nbrs[v as usize].clone();
        let mut bag = current.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        elim_pos[v as usize] = step;
        elim_vertex.push(v);
        alive[v as usize] = false;
        for &u in &current {
            nbrs[u as usize].retain(|&x| x != v);
        }
        if let [a, b] = current[..] {
            if !nbrs[a as usize].contains(&b) {
                nbrs[a as usize].push(b);
                nbrs[b as usize].push(a);
            }
        }
    }
    // attach each node to the node of its first-eliminated remaining neighbor
    let mut edges = Vec::new();
    for step in 0..n {
        let bag = &bags[step];
        let next = bag
            .iter()
            .filter(|&&u| u != elim_vertex[step])
            .map(|&u| elim_pos[u as usize])
            .min();
        match next {
            Some(p) => edges.push((step, p)),
            None => {
                if step + 1 < n {
                    edges.push((step, step + 1));
                }
            }
        }
    }
    let td = TreeDecomposition::new(bags, edges);
    debug_assert!(td.validate(f).is_ok());
    Some(td)
}

const LAYOUT_LIMIT: usize = 9;

fn layout_decomposition(f: &Graph, order: &[u32]) -> TreeDecomposition {
    let n = f.n();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let last_needed: Vec<usize> = (0..n as u32)
        .map(|v| {
            f.adj(v)
                .iter()
                .map(|&u| pos[u as usize])
                .max()
                .unwrap_or(pos[v as usize])
                .max(pos[v as usize])
        })
        .collect();
    let mut bags = Vec::with_capacity(n);
    for i in 0..n {
        let mut bag: Vec<u32> = order[..=i]
            .iter()
            .copied()
            .filter(|&u| last_needed[u as usize] >= i)
            .collect();
        bag.sort_unstable();
        bags.push(bag);
    }
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    TreeDecomposition::new(bags, edges)
}

/// Minimum-width path decomposition (bags along a path), found by trying
/// every vertex layout. Only for small graphs.
pub fn min_path_decomposition(f: &Graph) -> Result<(usize, TreeDecomposition)> {
    let n = f.n();
    if n == 0 {
        return Err(Error::Input("empty graph has no decomposition".to_string()));
    }
    if n > LAYOUT_LIMIT {
        return Err(Error::Capacity {
            what: "pathwidth layout search".to_string(),
            needed: n as u128,
            budget: LAYOUT_LIMIT as u128,
        });
    }
    let mut best: Option<(usize, TreeDecomposition)> = None;
    let mut order: Vec<u32> = (0..n as u32).collect();
    permute(&mut order, 0, &mut |order| {
        let td = layout_decomposition(f, order);
        let w = td.width();
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, td));
        }
    });
    let (w, td) = best.unwrap();
    debug_assert!(td.validate(f).is_ok());
    Ok((w, td))
}

fn permute<F: FnMut(&[u32])>(items: &mut Vec<u32>, start: usize, f: &mut F) {
    if start == items.len() {
        f(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, f);
        items.swap(start, i);
    }
}

/// Pathwidth of a small graph (brute force over layouts).
pub fn pathwidth(f: &Graph) -> Result<usize> {
    Ok(min_path_decomposition(f)?.0)
}

/// A path decomposition with the strict alternating shape
/// X_1, Y_1, X_2, ..., Y_{l-1}, X_l where |X_i| = k and |Y_i| = k + 1;
/// consecutive bags differ by one introduced / one forgotten vertex.
#[derive(Clone, Debug)]
pub struct PathDecomposition {
    /// Bags in path order; even positions are the small bags X_i.
    pub bags: Vec<Vec<u32>>,
    /// Small-bag size.
    pub k: usize,
}

impl PathDecomposition {
    /// The first small bag X_1, whose vertices get pinned in conditional
    /// counts (in sorted order).
    pub fn first_bag(&self) -> &[u32] {
        &self.bags[0]
    }

    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let edges = (1..self.bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(self.bags.clone(), edges)
    }

    /// Full validation: alternating shape plus the decomposition conditions.
    pub fn validate(&self, f: &Graph) -> Result<()> {
        if self.bags.len() % 2 == 0 {
            return Err(Error::Decomposition(
                "alternating path decomposition must start and end with a small bag"
                    .to_string(),
            ));
        }
        for (i, bag) in self.bags.iter().enumerate() {
            let want = if i % 2 == 0 { self.k } else { self.k + 1 };
            if bag.len() != want {
                return Err(Error::Decomposition(format!(
                    "bag {i} has size {}, expected {want}",
                    bag.len()
                )));
            }
        }
        for i in 1..self.bags.len() {
            let (small, big) = if i % 2 == 1 {
                (&self.bags[i - 1], &self.bags[i])
            } else {
                (&self.bags[i], &self.bags[i - 1])
            };
            if !small.iter().all(|v| big.binary_search(v).is_ok()) {
                return Err(Error::Decomposition(format!(
                    "bag {} is not contained in its neighbor bag",
                    if i % 2 == 1 { i - 1 } else { i }
                )));
            }
        }
        self.as_tree_decomposition().validate(f)
    }
}

/// Searches for an alternating path decomposition with small bags of size
/// exactly `k`. Returns the first one found in a fixed search order, or
/// `None` if none exists (in particular when the pathwidth exceeds `k`).
/// Brute force; errors out instead of guessing on graphs beyond the budget.
pub fn alternating_path_decomposition(
    f: &Graph,
    k: usize,
) -> Result<Option<PathDecomposition>> {
    let n = f.n();
    if n > LAYOUT_LIMIT {
        return Err(Error::Capacity {
            what: "alternating path decomposition search".to_string(),
            needed: n as u128,
            budget: LAYOUT_LIMIT as u128,
        });
    }
    if n < k || k == 0 {
        return Ok(None);
    }
    // choose X_1, then repeatedly introduce one vertex and forget one
    let mut x1 = Vec::new();
    Ok(subsets(n, k, 0, &mut x1, &mut |x1| {
        search_alternating(f, k, x1).map(|mut bags| {
            bags.insert(0, x1.to_vec());
            PathDecomposition { bags, k }
        })
    }))
}

fn subsets<T>(
    n: usize,
    k: usize,
    start: usize,
    cur: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]) -> Option<T>,
) -> Option<T> {
    if cur.len() == k {
        return f(cur);
    }
    for v in start..n {
        cur.push(v as u32);
        if let Some(t) = subsets(n, k, v + 1, cur, f) {
            return Some(t);
        }
        cur.pop();
    }
    None
}

fn search_alternating(f: &Graph, k: usize, x1: &[u32]) -> Option<Vec<Vec<u32>>> {
    let n = f.n();
    let mut introduced = vec![false; n];
    for &v in x1 {
        introduced[v as usize] = true;
    }
    let mut current = x1.to_vec();
    rec_alternating(f, k, &mut introduced, &mut current)
}

fn rec_alternating(
    f: &Graph,
    k: usize,
    introduced: &mut Vec<bool>,
    current: &mut Vec<u32>,
) -> Option<Vec<Vec<u32>>> {
    if introduced.iter().all(|&b| b) {
        // all edges with both endpoints never co-bagged were pruned earlier
        return Some(Vec::new());
    }
    for u in 0..f.n() as u32 {
        if introduced[u as usize] {
            continue;
        }
        let mut big = current.clone();
        big.push(u);
        big.sort_unstable();
        introduced[u as usize] = true;
        for drop_idx in 0..big.len() {
            let w = big[drop_idx];
            // forgetting w is only sound if all its edges are covered:
            // every neighbor of w must already be introduced
            if f.adj(w).iter().any(|&x| !introduced[x as usize]) {
                continue;
            }
            let mut small: Vec<u32> = big.clone();
            small.remove(drop_idx);
            let saved = std::mem::replace(current, small);
            if let Some(mut rest) = rec_alternating(f, k, introduced, current) {
                rest.insert(0, current.clone());
                rest.insert(0, big);
                *current = saved;
                introduced[u as usize] = false;
                return Some(rest);
            }
            *current = saved;
        }
        introduced[u as usize] = false;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, disjoint_union, path, star};

    #[test]
    fn tw2_succeeds_on_series_parallel() {
        for g in [path(4), cycle(5).unwrap(), star(4), complete(3)] {
            let td = tw2_decomposition(&g).unwrap();
            td.validate(&g).unwrap();
            assert!(td.width() <= 2, "{g:?}");
        }
        // K4 minus an edge is still treewidth 2
        let k4e = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let td = tw2_decomposition(&k4e).unwrap();
        td.validate(&k4e).unwrap();
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn tw2_rejects_k4() {
        assert!(tw2_decomposition(&complete(4)).is_none());
    }

    #[test]
    fn trees_get_width_one() {
        let td = tw2_decomposition(&star(5)).unwrap();
        td.validate(&star(5)).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn validate_catches_missing_edge() {
        let c3 = cycle(3).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let err = td.validate(&c3).unwrap_err();
        assert!(err.to_string().contains("edge (0,2)"), "{err}");
    }

    #[test]
    fn validate_catches_disconnected_holder_bags() {
        let p2 = path(2);
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![0]],
            vec![(0, 1), (1, 2)],
        );
        let err = td.validate(&p2).unwrap_err();
        assert!(err.to_string().contains("vertex 0"), "{err}");
    }

    #[test]
    fn pathwidth_of_known_graphs() {
        assert_eq!(pathwidth(&path(4)).unwrap(), 1);
        assert_eq!(pathwidth(&star(4)).unwrap(), 1);
        assert_eq!(pathwidth(&cycle(5).unwrap()).unwrap(), 2);
        assert_eq!(pathwidth(&complete(4)).unwrap(), 3);
        assert_eq!(pathwidth(&path(0)).unwrap(), 0);
    }

    #[test]
    fn min_path_decomposition_validates() {
        for g in [path(5), cycle(6).unwrap(), complete(4), disjoint_union(&cycle(3).unwrap(), &path(1))] {
            let (w, td) = min_path_decomposition(&g).unwrap();
            td.validate(&g).unwrap();
            assert_eq!(td.width(), w);
        }
    }

    #[test]
    fn alternating_shape_for_small_patterns() {
        let p3 = path(3);
        let pd = alternating_path_decomposition(&p3, 2).unwrap().unwrap();
        pd.validate(&p3).unwrap();
        assert_eq!(pd.bags.len(), 5);
        let c5 = cycle(5).unwrap();
        let pd = alternating_path_decomposition(&c5, 2).unwrap().unwrap();
        pd.validate(&c5).unwrap();
    }

    #[test]
    fn alternating_rejects_k4_at_k2() {
        assert!(alternating_path_decomposition(&complete(4), 2).unwrap().is_none());
    }

    #[test]
    fn alternating_handles_exact_size() {
        // n = k: a single bag
        let k2 = path(1);
        let pd = alternating_path_decomposition(&k2, 2).unwrap().unwrap();
        assert_eq!(pd.bags.len(), 1);
        pd.validate(&k2).unwrap();
    }
}
