//! Immutable simple graphs with bitset adjacency rows.
//!
//! Every vertex owns one word-packed row; neighbourhood intersections are
//! plain word-wise ANDs. Densities are returned as exact rationals.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Exact density value `numerator / denominator`.
pub type Density = Ratio<u64>;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A set of vertices drawn from `0..capacity`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    capacity: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            words: vec![0; words_for(capacity)],
        }
    }

    /// The set `{0, …, capacity-1}`.
    pub fn full(capacity: usize) -> Self {
        let mut set = Self::new(capacity);
        for (i, word) in set.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(capacity);
            *word = if hi - lo == WORD {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        set
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(capacity: usize, vertices: I) -> Self {
        let mut set = Self::new(capacity);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// `{v : lo <= v < hi}`.
    pub fn range(capacity: usize, lo: Vertex, hi: Vertex) -> Self {
        Self::from_vertices(capacity, lo..hi.min(capacity))
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) {
        assert!(
            v < self.capacity,
            "vertex {v} outside capacity {}",
            self.capacity
        );
        self.words[v / WORD] |= 1 << (v % WORD);
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) {
        if v < self.capacity {
            self.words[v / WORD] &= !(1 << (v % WORD));
        }
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        v < self.capacity && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<Vertex> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.capacity, other.capacity);
        Self {
            capacity: self.capacity,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Simple undirected graph on vertices `0..n`. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse to one.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut rows = vec![VertexSet::new(n); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        Ok(Self { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: vec![VertexSet::new(n); n],
        }
    }

    /// The cycle `0-1-…-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, &edges).expect("complete graph edges are valid")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, &edges).expect("Petersen edges are valid")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbours(&self, v: Vertex) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rows[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.rows[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// A new graph with the given edges removed. Absent edges are ignored.
    pub fn without_edges(&self, removed: &[(Vertex, Vertex)]) -> Self {
        let mut rows = self.rows.clone();
        for &(u, v) in removed {
            if u < self.n && v < self.n {
                rows[u].remove(v);
                rows[v].remove(u);
            }
        }
        Self { n: self.n, rows }
    }

    /// A new graph with the given edges added.
    pub fn with_edges(&self, added: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut edges = self.edges();
        edges.extend_from_slice(added);
        Self::new(self.n, &edges)
    }

    /// A new graph with `extra` isolated vertices appended.
    pub fn with_extra_vertices(&self, extra: usize) -> Self {
        Self::new(self.n + extra, &self.edges()).expect("existing edges stay valid")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, graph has {} vertices",
                perm.len(),
                self.n
            )));
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        Self::new(self.n, &edges)
    }

    /// `e(S, T)` for disjoint `S`, `T`.
    pub fn edges_between(&self, s: &VertexSet, t: &VertexSet) -> u64 {
        s.iter()
            .map(|v| self.rows[v].intersection_len(t) as u64)
            .sum()
    }

    /// `ρ(S, T) = e(S, T) / (|S||T|)`.
    pub fn density(&self, s: &VertexSet, t: &VertexSet) -> Result<Density> {
        if s.is_empty() || t.is_empty() {
            return Err(Error::EmptySet);
        }
        if !s.is_disjoint(t) {
            return Err(Error::OverlappingSets);
        }
        let pairs = (s.len() * t.len()) as u64;
        Ok(Ratio::new(self.edges_between(s, t), pairs))
    }

    /// `ρ(v, T) = |N(v) ∩ T| / |T|`. `T` may contain `v`.
    pub fn vertex_density(&self, v: Vertex, t: &VertexSet) -> Result<Density> {
        if t.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Ratio::new(
            self.rows[v].intersection_len(t) as u64,
            t.len() as u64,
        ))
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn bfs(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut unvisited = self.vertices();
        unvisited.remove(source);
        let mut frontier = VecDeque::from([source]);
        while let Some(u) = frontier.pop_front() {
            let d = dist[u].unwrap();
            let next = self.rows[u].intersection(&unvisited);
            for w in &next {
                dist[w] = Some(d + 1);
                frontier.push_back(w);
            }
            unvisited.subtract(&next);
        }
        dist
    }

    /// Shortest-path length, or `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        self.bfs(u)[v]
    }

    /// Vertices at distance exactly `d` from `source`.
    pub fn sphere(&self, source: Vertex, d: usize) -> VertexSet {
        let dist = self.bfs(source);
        VertexSet::from_vertices(self.n, (0..self.n).filter(|&w| dist[w] == Some(d)))
    }

    /// True when the set spans no edge.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.rows[v].is_disjoint(s))
    }

    /// Checks symmetry and irreflexivity of the adjacency rows.
    pub fn check_invariants(&self) -> bool {
        (0..self.n).all(|v| {
            !self.rows[v].contains(v) && self.rows[v].iter().all(|u| self.rows[u].contains(v))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Parses the edge-list text format: first non-comment line is the vertex
/// count, each further nonempty line is `u v`. `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("`{s}`: {e}"),
            })
        };
        match (n, fields.as_slice()) {
            (None, [count]) => n = Some(parse(count)?),
            (None, _) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected the vertex count on its own line".into(),
                })
            }
            (Some(_), [u, v]) => edges.push((parse(u)?, parse(v)?)),
            (Some(_), _) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v`, found `{line}`"),
                })
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing vertex count".into(),
    })?;
    Graph::new(n, &edges)
}

/// Writes a graph in the edge-list text format.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    #[test]
    fn build_examples() {
        let tri = Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.edge_count(), 3);
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5, Graph::cycle(5));
        let dup = Graph::new(4, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn density_examples() {
        let k23 = Graph::new(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let s = set(5, &[0, 1]);
        let t = set(5, &[2, 3, 4]);
        assert_eq!(k23.density(&s, &t).unwrap(), Ratio::from_integer(1));

        let empty = Graph::empty(4);
        assert_eq!(
            empty.density(&set(4, &[0]), &set(4, &[1, 2])).unwrap(),
            Ratio::from_integer(0)
        );

        let c5 = Graph::cycle(5);
        assert_eq!(
            c5.density(&set(5, &[0]), &set(5, &[1, 2])).unwrap(),
            Ratio::new(1, 2)
        );
    }

    #[test]
    fn density_rejects_bad_sets() {
        let c5 = Graph::cycle(5);
        assert_eq!(
            c5.density(&set(5, &[]), &set(5, &[1])),
            Err(Error::EmptySet)
        );
        assert_eq!(
            c5.density(&set(5, &[0, 1]), &set(5, &[1, 2])),
            Err(Error::OverlappingSets)
        );
        assert_eq!(c5.vertex_density(0, &set(5, &[])), Err(Error::EmptySet));
    }

    #[test]
    fn vertex_density_examples() {
        let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            star.vertex_density(0, &set(4, &[1, 2, 3])).unwrap(),
            Ratio::from_integer(1)
        );
        let iso = Graph::new(3, &[(1, 2)]).unwrap();
        assert_eq!(
            iso.vertex_density(0, &set(3, &[0, 1, 2])).unwrap(),
            Ratio::from_integer(0)
        );
        let c5 = Graph::cycle(5);
        assert_eq!(
            c5.vertex_density(0, &set(5, &[1, 2, 3, 4])).unwrap(),
            Ratio::new(1, 2)
        );
    }

    #[test]
    fn distance_examples() {
        let c7 = Graph::cycle(7);
        assert_eq!(c7.distance(0, 3), Some(3));
        assert_eq!(c7.distance(4, 4), Some(0));
        let two = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.distance(0, 3), None);
    }

    #[test]
    fn vertex_set_ops() {
        let a = set(130, &[0, 5, 64, 129]);
        let b = set(130, &[5, 64, 100]);
        assert_eq!(a.intersection(&b).to_vec(), vec![5, 64]);
        assert_eq!(a.union(&b).len(), 5);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 129]);
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(VertexSet::full(130).len(), 130);
        assert_eq!(VertexSet::full(64).len(), 64);
        assert!(!a.contains(200));
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# pentagon\n5\n0 1\n1 2 # inline\n\n2 3\n3 4\n4 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, Graph::cycle(5));
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_edge_list("3\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3\n0 1 2\n"),
            Err(Error::Parse { .. })
        ));
        assert_eq!(
            parse_edge_list("3\n0 5\n"),
            Err(Error::VertexOutOfRange { vertex: 5, n: 3 })
        );
    }
}
