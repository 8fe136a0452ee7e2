//! Exact counting, enumeration and detection of fixed-length cycles.
//!
//! Every cycle is generated exactly once: it is rooted at its minimal vertex
//! and oriented so that the second vertex is smaller than the last. Candidate
//! sets are bitset intersections, and a branch is cut as soon as the current
//! vertex is farther from the root than the remaining number of steps.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// A cycle in canonical form: minimal vertex first, and the smaller of its
/// two cycle neighbours second.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleWitness(Vec<Vertex>);

impl CycleWitness {
    /// Validates that `vertices` trace a cycle in `g` and canonicalizes it.
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::InvalidArgument(format!(
                "a cycle needs at least 3 vertices, got {k}"
            )));
        }
        let mut seen = VertexSet::new(g.vertex_count());
        for &v in &vertices {
            if v >= g.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: g.vertex_count(),
                });
            }
            if seen.contains(v) {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} repeats in the cycle"
                )));
            }
            seen.insert(v);
        }
        for i in 0..k {
            let (u, v) = (vertices[i], vertices[(i + 1) % k]);
            if !g.has_edge(u, v) {
                return Err(Error::InvalidArgument(format!("{u}-{v} is not an edge")));
            }
        }
        Ok(Self::canonical(vertices))
    }

    fn canonical(mut vertices: Vec<Vertex>) -> Self {
        let k = vertices.len();
        let start = (0..k).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(start);
        if vertices[1] > vertices[k - 1] {
            vertices[1..].reverse();
        }
        Self(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The cycle's vertex at position `i` (taken modulo the length).
    pub fn at(&self, i: isize) -> Vertex {
        let k = self.0.len() as isize;
        self.0[i.rem_euclid(k) as usize]
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.0.iter().copied())
    }

    /// Edges of the cycle as `(min, max)` pairs.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let k = self.0.len();
        (0..k)
            .map(|i| {
                let (u, v) = (self.0[i], self.0[(i + 1) % k]);
                (u.min(v), u.max(v))
            })
            .collect()
    }
}

fn check_length(len: usize) -> Result<()> {
    if len < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be at least 3, got {len}"
        )));
    }
    Ok(())
}

/// Per-root search state.
struct Rooted<'g> {
    g: &'g Graph,
    len: usize,
    root: Vertex,
    /// Vertices strictly above the root, minus those on the current path.
    free: VertexSet,
    /// Distance to the root inside the subgraph on `root..n`.
    dist: Vec<usize>,
    path: Vec<Vertex>,
}

impl<'g> Rooted<'g> {
    fn new(g: &'g Graph, len: usize, root: Vertex) -> Self {
        let n = g.vertex_count();
        let free = VertexSet::range(n, root + 1, n);
        let mut dist = vec![usize::MAX; n];
        dist[root] = 0;
        let mut frontier = vec![root];
        let mut reach = free.clone();
        let mut d = 0;
        while !frontier.is_empty() && d < len {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                let step = g.neighbours(u).intersection(&reach);
                for w in &step {
                    dist[w] = d;
                    next.push(w);
                }
                reach.subtract(&step);
            }
            frontier = next;
        }
        let mut path = Vec::with_capacity(len);
        path.push(root);
        Self {
            g,
            len,
            root,
            free,
            dist,
            path,
        }
    }

    /// Vertices that can extend the path to position `depth + 1`.
    fn candidates(&self) -> VertexSet {
        let cur = *self.path.last().unwrap();
        let mut c = self.g.neighbours(cur).intersection(&self.free);
        let remaining = self.len - self.path.len();
        for w in c.to_vec() {
            if self.dist[w] > remaining {
                c.remove(w);
            }
        }
        c
    }

    /// Counts completions of the current path.
    fn count(&mut self) -> u128 {
        let depth = self.path.len();
        if depth == self.len - 1 {
            // Closing vertex: adjacent to both ends and above the second vertex.
            let cur = *self.path.last().unwrap();
            let second = self.path[1];
            let mut last = self
                .g
                .neighbours(cur)
                .intersection(self.g.neighbours(self.root));
            last.intersect_with(&self.free);
            return last.iter().filter(|&w| w > second).count() as u128;
        }
        let mut total = 0;
        for w in &self.candidates() {
            self.push(w);
            total += self.count();
            self.pop();
        }
        total
    }

    fn walk(&mut self, visit: &mut dyn FnMut(&[Vertex]) -> ControlFlow<()>) -> ControlFlow<()> {
        let depth = self.path.len();
        if depth == self.len - 1 {
            let cur = *self.path.last().unwrap();
            let second = self.path[1];
            let mut last = self
                .g
                .neighbours(cur)
                .intersection(self.g.neighbours(self.root));
            last.intersect_with(&self.free);
            for w in last.iter().filter(|&w| w > second) {
                self.path.push(w);
                let flow = visit(&self.path);
                self.path.pop();
                flow?;
            }
            return ControlFlow::Continue(());
        }
        for w in &self.candidates() {
            self.push(w);
            let flow = self.walk(visit);
            self.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn push(&mut self, w: Vertex) {
        self.path.push(w);
        self.free.remove(w);
    }

    fn pop(&mut self) {
        let w = self.path.pop().unwrap();
        self.free.insert(w);
    }
}

fn count_rooted(g: &Graph, len: usize, root: Vertex) -> u128 {
    if g.vertex_count() - root < len {
        return 0;
    }
    Rooted::new(g, len, root).count()
}

/// Number of distinct cycles of length `len`, counted in parallel by root.
pub fn count_cycles(g: &Graph, len: usize) -> Result<BigUint> {
    check_length(len)?;
    let total: u128 = (0..g.vertex_count())
        .into_par_iter()
        .map(|r| count_rooted(g, len, r))
        .sum();
    Ok(BigUint::from(total))
}

/// Single-threaded variant of [`count_cycles`].
pub fn count_cycles_sequential(g: &Graph, len: usize) -> Result<BigUint> {
    check_length(len)?;
    let total: u128 = (0..g.vertex_count()).map(|r| count_rooted(g, len, r)).sum();
    Ok(BigUint::from(total))
}

/// Visits every cycle of length `len` in canonical order until `visit`
/// breaks. Returns `true` if the walk ran to completion.
pub fn for_each_cycle(
    g: &Graph,
    len: usize,
    mut visit: impl FnMut(&[Vertex]) -> ControlFlow<()>,
) -> Result<bool> {
    check_length(len)?;
    for root in 0..g.vertex_count() {
        if g.vertex_count() - root < len {
            break;
        }
        if Rooted::new(g, len, root).walk(&mut visit).is_break() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All (or the first `limit`) cycles of length `len`, canonical and sorted.
pub fn enumerate_cycles(g: &Graph, len: usize, limit: Option<usize>) -> Result<Vec<CycleWitness>> {
    let mut out = Vec::new();
    if limit == Some(0) {
        check_length(len)?;
        return Ok(out);
    }
    for_each_cycle(g, len, |path| {
        out.push(CycleWitness(path.to_vec()));
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// Parallel enumeration; the result is sorted into canonical order.
pub fn enumerate_cycles_parallel(g: &Graph, len: usize) -> Result<Vec<CycleWitness>> {
    check_length(len)?;
    let mut out: Vec<CycleWitness> = (0..g.vertex_count())
        .into_par_iter()
        .flat_map_iter(|root| {
            let mut found = Vec::new();
            if g.vertex_count() - root >= len {
                let _ = Rooted::new(g, len, root).walk(&mut |p: &[Vertex]| {
                    found.push(CycleWitness(p.to_vec()));
                    ControlFlow::Continue(())
                });
            }
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

/// True iff `g` has a cycle of length `len`; stops at the first witness.
pub fn has_cycle_of_length(g: &Graph, len: usize) -> Result<bool> {
    Ok(find_cycle(g, len)?.is_some())
}

/// The canonically first cycle of length `len`, if any.
pub fn find_cycle(g: &Graph, len: usize) -> Result<Option<CycleWitness>> {
    Ok(enumerate_cycles(g, len, Some(1))?.pop())
}

/// Length of the shortest odd cycle, or `None` for bipartite graphs.
///
/// Runs a BFS from every vertex: an edge joining two vertices on the same
/// layer `d` closes an odd closed walk of length `2d + 1`, and the minimum
/// over all roots is attained by a genuine cycle.
pub fn shortest_odd_cycle(g: &Graph) -> Option<usize> {
    (0..g.vertex_count())
        .into_par_iter()
        .filter_map(|root| {
            let dist = g.bfs(root);
            let mut best: Option<usize> = None;
            for (u, v) in g.edges() {
                if let (Some(du), Some(dv)) = (dist[u], dist[v]) {
                    if du == dv {
                        let len = 2 * du + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
            best
        })
        .min()
}
