//! Simple undirected graphs: construction, graph6 and edge-list I/O, and
//! the small generator zoo used throughout the crate.
//!
//! Graphs are immutable once built. Vertices are `0..n`, loops are rejected,
//! parallel edges collapse. Adjacency is kept both as sorted neighbor lists
//! and, for small graphs, as row bitsets so `has_edge` is O(1).

use std::fmt;

use num_bigint::BigInt;

use crate::{Error, Result};

/// Row bitsets are only materialized up to this vertex count; beyond it
/// `has_edge` falls back to binary search on the sorted neighbor lists.
const ROW_BITSET_LIMIT: usize = 4096;

/// An immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    rows: Option<Vec<u64>>,
    row_words: usize,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Indices must be `< n`; loops are an
    /// error; duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Input(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("loop at vertex {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for row in adj.iter_mut() {
            row.sort_unstable();
            row.dedup();
        }
        let m = adj.iter().map(|r| r.len()).sum::<usize>() / 2;
        let (rows, row_words) = if n <= ROW_BITSET_LIMIT {
            let words = n.div_ceil(64);
            let mut bits = vec![0u64; words * n];
            for (v, row) in adj.iter().enumerate() {
                for &u in row {
                    bits[v * words + u as usize / 64] |= 1 << (u % 64);
                }
            }
            (Some(bits), words)
        } else {
            (None, 0)
        };
        Ok(Graph { adj, rows, row_words, m })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbors of `v`.
    pub fn adj(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match &self.rows {
            Some(bits) => {
                bits[u as usize * self.row_words + v as usize / 64] >> (v % 64) & 1 == 1
            }
            None => self.adj[u as usize].binary_search(&v).is_ok(),
        }
    }

    /// Edges as pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, row) in self.adj.iter().enumerate() {
            for &v in row {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    /// Subgraph induced by `verts` (sorted, duplicate-free), with vertices
    /// renumbered to 0..verts.len() in the given order.
    pub fn induced(&self, verts: &[u32]) -> Graph {
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        let mut edges = Vec::new();
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Graph::from_edges(verts.len(), &edges).expect("induced subgraph is well-formed")
    }

    /// True when the graph is connected and `m = n - 1`, i.e. a tree.
    pub fn is_tree(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        if self.m != n - 1 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in self.adj(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, {})", self.n(), self.m(), write_graph6(self))
    }
}

/// A graph with a distinguished root vertex.
#[derive(Clone, Debug)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: u32,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: u32) -> Result<RootedGraph> {
        if root as usize >= graph.n() {
            return Err(Error::Input(format!(
                "root {root} out of range for {} vertices",
                graph.n()
            )));
        }
        Ok(RootedGraph { graph, root })
    }
}

/// Dense adjacency matrix with arbitrary-precision integer entries.
///
/// Only needed where exact matrix algebra is: walk-count oracles and the
/// characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl AdjacencyMatrix {
    pub fn from_graph(g: &Graph) -> AdjacencyMatrix {
        let n = g.n();
        let mut data = vec![BigInt::from(0); n * n];
        for (u, v) in g.edges() {
            data[u as usize * n + v as usize] = BigInt::from(1);
            data[v as usize * n + u as usize] = BigInt::from(1);
        }
        AdjacencyMatrix { n, data }
    }

    pub fn identity(n: usize) -> AdjacencyMatrix {
        let mut data = vec![BigInt::from(0); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::from(1);
        }
        AdjacencyMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &AdjacencyMatrix) -> AdjacencyMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![BigInt::from(0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a == &BigInt::from(0) {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if b != &BigInt::from(0) {
                        data[i * n + j] += a * b;
                    }
                }
            }
        }
        AdjacencyMatrix { n, data }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| &self.data[i * self.n + i]).sum()
    }

    pub fn sum_all(&self) -> BigInt {
        self.data.iter().sum()
    }
}

/// Parses one graph6 line (optionally prefixed by `>>graph6<<`).
///
/// # Errors
///
/// Malformed input produces a parse error naming the byte offset.
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.trim_end_matches(['\r', '\n']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let err = |offset: usize, what: &str| Error::Parse { offset, what: what.to_string() };
    let valid = |offset: usize| -> Result<u64> {
        let b = *bytes.get(offset).ok_or_else(|| err(offset, "unexpected end of input"))?;
        if !(63..=126).contains(&b) {
            return Err(err(offset, "byte outside graph6 range 63..=126"));
        }
        Ok((b - 63) as u64)
    };
    if bytes.is_empty() {
        return Err(err(0, "empty graph6 string"));
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() > 1 && bytes[1] == 126 {
            let mut n = 0u64;
            for i in 0..6 {
                n = n << 6 | valid(2 + i)?;
            }
            (n, 8)
        } else {
            let mut n = 0u64;
            for i in 0..3 {
                n = n << 6 | valid(1 + i)?;
            }
            (n, 4)
        }
    } else {
        (valid(0)?, 1)
    };
    if n > 1_000_000 {
        return Err(Error::Capacity {
            what: format!("graph6 vertex count {n}"),
            needed: n as u128,
            budget: 1_000_000,
        });
    }
    let n = n as usize;
    let nbits = n * (n.saturating_sub(1)) / 2;
    let nbytes = nbits.div_ceil(6);
    let mut edges = Vec::new();
    let mut bit = 0usize;
    let mut pairs = Vec::with_capacity(nbits);
    for j in 1..n as u32 {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    for _ in 0..nbytes {
        let chunk = valid(pos)?;
        pos += 1;
        for t in (0..6).rev() {
            let b = chunk >> t & 1;
            if bit < nbits {
                if b == 1 {
                    edges.push(pairs[bit]);
                }
            } else if b != 0 {
                return Err(err(pos - 1, "nonzero padding bits"));
            }
            bit += 1;
        }
    }
    if pos != bytes.len() {
        return Err(err(pos, "trailing bytes after graph6 data"));
    }
    Graph::from_edges(n, &edges)
}

/// Writes a graph as a single graph6 line (no header, no newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258047 {
        out.push(126);
        for t in (0..3).rev() {
            out.push((n >> (6 * t) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for t in (0..6).rev() {
            out.push((n >> (6 * t) & 63) as u8 + 63);
        }
    }
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n as u32 {
        for i in 0..j {
            chunk = chunk << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(chunk + 63);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    String::from_utf8(out).unwrap()
}

/// Parses an edge-list file: first line is the vertex count, each following
/// nonempty line is one `u v` pair. Duplicates collapse; loops are an error.
pub fn parse_edgelist(s: &str) -> Result<Graph> {
    let mut offset = 0usize;
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for line in s.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            let field_offset = offset + (line.len() - line.trim_start().len());
            match n {
                None => {
                    n = Some(trimmed.parse().map_err(|_| Error::Parse {
                        offset: field_offset,
                        what: format!("expected vertex count, found {trimmed:?}"),
                    })?);
                }
                Some(nv) => {
                    let mut it = trimmed.split_whitespace();
                    let (u, v) = match (it.next(), it.next(), it.next()) {
                        (Some(u), Some(v), None) => (u, v),
                        _ => {
                            return Err(Error::Parse {
                                offset: field_offset,
                                what: format!("expected `u v` pair, found {trimmed:?}"),
                            })
                        }
                    };
                    let parse = |t: &str| -> Result<u32> {
                        t.parse().map_err(|_| Error::Parse {
                            offset: field_offset,
                            what: format!("expected vertex index, found {t:?}"),
                        })
                    };
                    let (u, v) = (parse(u)?, parse(v)?);
                    if u as usize >= nv || v as usize >= nv {
                        return Err(Error::Parse {
                            offset: field_offset,
                            what: format!("edge ({u},{v}) out of range for {nv} vertices"),
                        });
                    }
                    if u == v {
                        return Err(Error::Parse {
                            offset: field_offset,
                            what: format!("loop at vertex {u}"),
                        });
                    }
                    edges.push((u, v));
                }
            }
        }
        offset += line.len();
    }
    match n {
        Some(nv) => Graph::from_edges(nv, &edges),
        None => Err(Error::Parse { offset: 0, what: "empty edge-list input".to_string() }),
    }
}

/// Disjoint union; vertices of `h` are shifted up by `g.n()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let shift = g.n() as u32;
    let mut edges = g.edges();
    edges.extend(h.edges().iter().map(|&(u, v)| (u + shift, v + shift)));
    Graph::from_edges(g.n() + h.n(), &edges).unwrap()
}

/// Path with `len` edges on `len + 1` vertices; `path(0)` is a single vertex.
pub fn path(len: usize) -> Graph {
    let edges: Vec<_> = (0..len as u32).map(|i| (i, i + 1)).collect();
    Graph::from_edges(len + 1, &edges).unwrap()
}

/// Cycle with `len` vertices. `cycle(0)` degenerates to a single vertex;
/// lengths 1 and 2 are rejected.
pub fn cycle(len: usize) -> Result<Graph> {
    match len {
        0 => Ok(path(0)),
        1 | 2 => Err(Error::Input(format!("cycle length {len} is not a simple graph"))),
        _ => {
            let mut edges: Vec<_> = (0..len as u32 - 1).map(|i| (i, i + 1)).collect();
            edges.push((len as u32 - 1, 0));
            Graph::from_edges(len, &edges)
        }
    }
}

/// Star with `k` leaves around center 0.
pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (1..=k as u32).map(|v| (0, v)).collect();
    Graph::from_edges(k + 1, &edges).unwrap()
}

/// Spider: `legs` paths of `leglen` edges each, glued at center 0.
pub fn spider(legs: usize, leglen: usize) -> Graph {
    let mut edges = Vec::new();
    let mut next = 1u32;
    for _ in 0..legs {
        let mut prev = 0u32;
        for _ in 0..leglen {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::from_edges(next as usize, &edges).unwrap()
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n as u32 {
        for i in 0..j {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_loops_and_range() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.adj(0), &[1]);
    }

    #[test]
    fn graph6_known_strings() {
        let k1 = parse_graph6("@").unwrap();
        assert_eq!((k1.n(), k1.m()), (1, 0));
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!((k2.n(), k2.m()), (2, 1));
        assert!(k2.has_edge(0, 1));
        let e2 = parse_graph6("A?").unwrap();
        assert_eq!((e2.n(), e2.m()), (2, 0));
        // "D?{" is the 5-vertex star with center 4.
        let s = parse_graph6("D?{").unwrap();
        assert_eq!((s.n(), s.m()), (5, 4));
        for i in 0..4 {
            assert!(s.has_edge(i, 4));
        }
        assert!(!s.has_edge(0, 1));
        assert_eq!(write_graph6(&s), "D?{");
    }

    #[test]
    fn graph6_bit_order_c4() {
        // C4's upper-triangle bits in column-major order are 101101 = 'l'.
        let c4 = cycle(4).unwrap();
        assert_eq!(write_graph6(&c4), "Cl");
        assert_eq!(parse_graph6("Cl").unwrap(), c4);
    }

    #[test]
    fn graph6_rejects_malformed() {
        match parse_graph6("A") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        // 'A' + byte 0x20 (below 63)
        assert!(parse_graph6("A ").is_err());
        // K2 with nonzero padding bits
        assert!(parse_graph6("A~").is_err());
        // trailing garbage
        assert!(parse_graph6("A_?").is_err());
    }

    #[test]
    fn graph6_long_form_header() {
        let g = path(99);
        let s = write_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn edgelist_round_trip_and_errors() {
        let g = parse_edgelist("4\n0 1\n1 2\n1 2\n2 3\n").unwrap();
        assert_eq!((g.n(), g.m()), (4, 3));
        assert!(parse_edgelist("3\n0 0\n").is_err());
        assert!(parse_edgelist("3\n0 5\n").is_err());
        match parse_edgelist("3\n0\n") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn generators_shapes() {
        assert_eq!((path(0).n(), path(0).m()), (1, 0));
        assert_eq!((path(5).n(), path(5).m()), (6, 5));
        assert_eq!((cycle(0).unwrap().n(), cycle(0).unwrap().m()), (1, 0));
        assert!(cycle(1).is_err());
        assert!(cycle(2).is_err());
        assert_eq!((cycle(6).unwrap().n(), cycle(6).unwrap().m()), (6, 6));
        assert_eq!((star(4).n(), star(4).m()), (5, 4));
        let sp = spider(3, 2);
        assert_eq!((sp.n(), sp.m()), (7, 6));
        assert_eq!(sp.degree(0), 3);
        assert_eq!((complete(4).n(), complete(4).m()), (4, 6));
        // spider(k, 1) is the star on k leaves
        assert_eq!(write_graph6(&spider(4, 1)), write_graph6(&star(4)));
    }

    #[test]
    fn fixture_graph6_strings() {
        // Cross-checked against an independent graph6 encoder.
        assert_eq!(write_graph6(&spider(3, 2)), "FkE?G");
        let c6k1 = disjoint_union(&cycle(6).unwrap(), &path(0));
        assert_eq!(write_graph6(&c6k1), "FhEG?");
        assert_eq!(write_graph6(&star(4)), "Ds_");
        let c4k1 = disjoint_union(&cycle(4).unwrap(), &path(0));
        assert_eq!(write_graph6(&c4k1), "Dl?");
        assert_eq!(write_graph6(&cycle(6).unwrap()), "EhEG");
        let cc = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap());
        assert_eq!(write_graph6(&cc), "EwCW");
    }

    #[test]
    fn disjoint_union_shifts() {
        let g = disjoint_union(&complete(3), &path(1));
        assert_eq!((g.n(), g.m()), (5, 4));
        assert!(g.has_edge(3, 4));
        assert!(!g.has_edge(2, 3));
    }

    #[test]
    fn adjacency_matrix_walks() {
        let c4 = cycle(4).unwrap();
        let a = AdjacencyMatrix::from_graph(&c4);
        let a2 = a.mul(&a);
        assert_eq!(a2.trace(), BigInt::from(8));
        assert_eq!(a2.sum_all(), BigInt::from(16));
    }

    #[test]
    fn is_tree_detects() {
        assert!(path(3).is_tree());
        assert!(star(4).is_tree());
        assert!(!cycle(4).unwrap().is_tree());
        assert!(!disjoint_union(&path(1), &path(1)).is_tree());
    }
}
