//! Rooted trees: canonical codes, explicit tree structure, and exhaustive
//! enumeration of rooted and free trees up to a size bound.
//!
//! The canonical code of a rooted tree is a balanced-parenthesis string:
//! a leaf is `()`, an inner node wraps the concatenation of its children's
//! codes sorted lexicographically. Two rooted trees are isomorphic exactly
//! when their codes are equal.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{Graph, RootedGraph};
use crate::{Error, Result};

/// Canonical balanced-parenthesis code of a rooted tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTreeCode(String);

impl RootedTreeCode {
    /// Parses a balanced-parenthesis string and canonicalizes it (children
    /// are re-sorted, so any valid paren tree is accepted).
    pub fn parse(s: &str) -> Result<RootedTreeCode> {
        let tree = RootedTree::from_paren_str(s)?;
        Ok(tree.code())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.0.len() / 2
    }

    /// Depth of the deepest leaf.
    pub fn depth(&self) -> usize {
        let mut depth = 0usize;
        let mut max = 0usize;
        for c in self.0.chars() {
            if c == '(' {
                depth += 1;
                max = max.max(depth);
            } else {
                depth -= 1;
            }
        }
        max.saturating_sub(1)
    }

    /// Depth shared by all leaves, or `None` if leaves sit at mixed depths.
    pub fn uniform_leaf_depth(&self) -> Option<usize> {
        let mut depth = 0usize;
        let mut leaf_depth: Option<usize> = None;
        let bytes = self.0.as_bytes();
        for i in 0..bytes.len() {
            if bytes[i] == b'(' {
                depth += 1;
                if bytes.get(i + 1) == Some(&b')') {
                    let d = depth - 1;
                    match leaf_depth {
                        None => leaf_depth = Some(d),
                        Some(prev) if prev != d => return None,
                        _ => {}
                    }
                }
            } else {
                depth -= 1;
            }
        }
        leaf_depth
    }
}

impl fmt::Display for RootedTreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for RootedTreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedTreeCode({})", self.0)
    }
}

/// A rooted tree with explicit structure. Node 0 is the root; `children`
/// lists are in preorder construction order, `depth[0] = 0`.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub children: Vec<Vec<u32>>,
    pub parent: Vec<Option<u32>>,
    pub depth: Vec<usize>,
}

impl RootedTree {
    pub fn size(&self) -> usize {
        self.children.len()
    }

    pub fn depth_max(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Builds the tree described by a balanced-parenthesis string.
    pub fn from_paren_str(s: &str) -> Result<RootedTree> {
        let bytes = s.trim().as_bytes();
        if bytes.is_empty() {
            return Err(Error::Parse { offset: 0, what: "empty tree code".to_string() });
        }
        let mut children: Vec<Vec<u32>> = Vec::new();
        let mut parent: Vec<Option<u32>> = Vec::new();
        let mut depth: Vec<usize> = Vec::new();
        let mut stack: Vec<u32> = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => {
                    let id = children.len() as u32;
                    children.push(Vec::new());
                    if let Some(&top) = stack.last() {
                        children[top as usize].push(id);
                        parent.push(Some(top));
                        depth.push(depth[top as usize] + 1);
                    } else {
                        if id != 0 {
                            return Err(Error::Parse {
                                offset: i,
                                what: "multiple roots in tree code".to_string(),
                            });
                        }
                        parent.push(None);
                        depth.push(0);
                    }
                    stack.push(id);
                }
                b')' => {
                    if stack.pop().is_none() {
                        return Err(Error::Parse {
                            offset: i,
                            what: "unbalanced ')'".to_string(),
                        });
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        offset: i,
                        what: format!("unexpected byte {:?} in tree code", b as char),
                    })
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse {
                offset: bytes.len(),
                what: "unbalanced '('".to_string(),
            });
        }
        Ok(RootedTree { children, parent, depth })
    }

    /// Builds the tree structure of a rooted graph, which must be a tree.
    pub fn from_rooted_graph(rg: &RootedGraph) -> Result<RootedTree> {
        if !rg.graph.is_tree() {
            return Err(Error::Input("rooted graph is not a tree".to_string()));
        }
        let n = rg.graph.n();
        let mut children = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut order = vec![rg.root];
        let mut seen = vec![false; n];
        seen[rg.root as usize] = true;
        // renumber so the root is node 0, BFS order
        let mut relabel = vec![u32::MAX; n];
        relabel[rg.root as usize] = 0;
        let mut next = 1u32;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &u in rg.graph.adj(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    relabel[u as usize] = next;
                    children[relabel[v as usize] as usize].push(next);
                    parent[next as usize] = Some(relabel[v as usize]);
                    depth[next as usize] = depth[relabel[v as usize] as usize] + 1;
                    next += 1;
                    order.push(u);
                }
            }
        }
        Ok(RootedTree { children, parent, depth })
    }

    /// Canonical code: children codes sorted lexicographically and wrapped.
    pub fn code(&self) -> RootedTreeCode {
        fn rec(t: &RootedTree, v: u32) -> String {
            let mut parts: Vec<String> =
                t.children[v as usize].iter().map(|&c| rec(t, c)).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
        RootedTreeCode(rec(self, 0))
    }

    /// The underlying plain graph; the root is vertex 0.
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<(u32, u32)> = (1..self.size() as u32)
            .map(|v| (self.parent[v as usize].unwrap(), v))
            .collect();
        Graph::from_edges(self.size(), &edges).unwrap()
    }
}

/// Canonical code of a tree graph rooted at `root`.
pub fn tree_code_at(g: &Graph, root: u32) -> Result<RootedTreeCode> {
    let rt = RootedTree::from_rooted_graph(&RootedGraph::new(g.clone(), root)?)?;
    Ok(rt.code())
}

/// All rooted trees with exactly `n` nodes, as sorted canonical codes.
pub fn rooted_tree_codes(n: usize) -> Vec<RootedTreeCode> {
    let mut by_size: Vec<Vec<String>> = vec![Vec::new(); n + 1];
    if n == 0 {
        return Vec::new();
    }
    by_size[1] = vec!["()".to_string()];
    for size in 2..=n {
        // choices: all codes of size < `size`, in a fixed descending order
        let mut choices: Vec<(usize, String)> = Vec::new();
        for s in 1..size {
            for c in &by_size[s] {
                choices.push((s, c.clone()));
            }
        }
        choices.sort_by(|a, b| b.1.cmp(&a.1));
        let mut out = Vec::new();
        let mut picked: Vec<usize> = Vec::new();
        fn rec(
            choices: &[(usize, String)],
            start: usize,
            left: usize,
            picked: &mut Vec<usize>,
            out: &mut Vec<String>,
        ) {
            if left == 0 {
                let mut parts: Vec<&str> =
                    picked.iter().map(|&i| choices[i].1.as_str()).collect();
                parts.sort();
                out.push(format!("({})", parts.concat()));
                return;
            }
            for i in start..choices.len() {
                if choices[i].0 <= left {
                    picked.push(i);
                    rec(choices, i, left - choices[i].0, picked, out);
                    picked.pop();
                }
            }
        }
        rec(&choices, 0, size - 1, &mut picked, &mut out);
        out.sort();
        out.dedup();
        by_size[size] = out;
    }
    by_size[n].iter().map(|s| RootedTreeCode(s.clone())).collect()
}

/// Canonical code of a free tree: the minimum over all rootings.
pub fn free_tree_code(g: &Graph) -> Result<RootedTreeCode> {
    if !g.is_tree() {
        return Err(Error::Input("not a tree".to_string()));
    }
    (0..g.n() as u32)
        .map(|v| tree_code_at(g, v))
        .collect::<Result<Vec<_>>>()
        .map(|codes| codes.into_iter().min().unwrap())
}

/// All free (unrooted) trees with exactly `n` vertices, one canonical
/// representative graph each, sorted by canonical code.
pub fn free_trees(n: usize) -> Vec<Graph> {
    let mut codes = BTreeSet::new();
    for code in rooted_tree_codes(n) {
        let tree = RootedTree::from_paren_str(code.as_str()).unwrap();
        codes.insert(free_tree_code(&tree.to_graph()).unwrap());
    }
    codes
        .into_iter()
        .map(|c| RootedTree::from_paren_str(c.as_str()).unwrap().to_graph())
        .collect()
}
