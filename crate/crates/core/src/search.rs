//! Exhaustive search for the maximum number of `k`-cycles in a `C_ℓ`-free
//! graph on at most eight vertices.
//!
//! Edges are decided one at a time in lexicographic order. Adding an edge
//! that closes a `C_ℓ` kills the whole subtree below it, since every
//! completion contains that cycle. The first [`SPLIT_DEPTH`] levels are
//! expanded sequentially and the surviving subtrees are searched in
//! parallel, so the counters match a purely sequential run.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_SEARCH_VERTICES: usize = 8;
pub const SPLIT_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub max_count: BigUint,
    /// Least edge mask (bit `e` = `e`-th pair in lexicographic order) among
    /// the maximizers.
    pub witness_mask: u32,
    pub witness: Graph,
    /// Complete `C_ℓ`-free graphs whose `k`-cycles were counted.
    pub graphs_examined: u64,
    /// Subtrees cut because a decided edge closed a `C_ℓ`.
    pub pruned: u64,
}

/// Small graph with one byte of adjacency per vertex.
#[derive(Clone, Copy)]
struct Small {
    n: usize,
    adj: [u8; MAX_SEARCH_VERTICES],
}

impl Small {
    fn empty(n: usize) -> Self {
        Self {
            n,
            adj: [0; MAX_SEARCH_VERTICES],
        }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Simple `u`–`v` path with exactly `edges` edges.
    fn has_path(&self, u: usize, v: usize, edges: usize) -> bool {
        fn go(g: &Small, cur: usize, target: usize, left: usize, used: u8) -> bool {
            if left == 1 {
                return g.adj[cur] >> target & 1 == 1;
            }
            let mut next = g.adj[cur] & !used & !(1 << target);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                if go(g, w, target, left - 1, used | 1 << w) {
                    return true;
                }
            }
            false
        }
        edges > 0 && go(self, u, v, edges, 1 << u)
    }

    fn count_cycles(&self, len: usize) -> u64 {
        fn go(g: &Small, root: usize, second: usize, cur: usize, left: usize, used: u8) -> u64 {
            if left == 1 {
                // Close back to the root through a vertex above `second`.
                let above = !((1u16 << (second + 1)) - 1) as u8;
                let last = g.adj[cur] & g.adj[root] & !used & above;
                return u64::from(last.count_ones());
            }
            let mut total = 0;
            let mut next = g.adj[cur] & !used;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                total += go(g, root, second, w, left - 1, used | 1 << w);
            }
            total
        }
        let mut total = 0;
        for root in 0..self.n {
            let below_and_root = ((1u16 << (root + 1)) - 1) as u8;
            let mut seconds = self.adj[root] & !below_and_root;
            while seconds != 0 {
                let s = seconds.trailing_zeros() as usize;
                seconds &= seconds - 1;
                let used = below_and_root | 1 << s;
                total += go(self, root, s, s, len - 2, used);
            }
        }
        total
    }
}

#[derive(Clone, Copy, Default)]
struct Best {
    count: u64,
    mask: u32,
    examined: u64,
    pruned: u64,
}

impl Best {
    fn merge(self, other: Best) -> Best {
        let (count, mask) =
            if other.count > self.count || (other.count == self.count && other.mask < self.mask) {
                (other.count, other.mask)
            } else {
                (self.count, self.mask)
            };
        Best {
            count,
            mask,
            examined: self.examined + other.examined,
            pruned: self.pruned + other.pruned,
        }
    }
}

struct Searcher {
    pairs: Vec<(usize, usize)>,
    k: usize,
    ell: usize,
}

impl Searcher {
    fn leaf(&self, g: &Small, mask: u32, acc: &mut Best) {
        let count = if self.k <= g.n {
            g.count_cycles(self.k)
        } else {
            0
        };
        acc.examined += 1;
        *acc = acc.merge(Best {
            count,
            mask,
            examined: 0,
            pruned: 0,
        });
    }

    fn dfs(&self, g: &mut Small, depth: usize, mask: u32, acc: &mut Best) {
        if depth == self.pairs.len() {
            self.leaf(g, mask, acc);
            return;
        }
        let (u, v) = self.pairs[depth];
        self.dfs(g, depth + 1, mask, acc);
        if g.has_path(u, v, self.ell - 1) {
            acc.pruned += 1;
        } else {
            g.add(u, v);
            self.dfs(g, depth + 1, mask | 1 << depth, acc);
            g.remove(u, v);
        }
    }

    /// Expands the first `split` levels, returning surviving prefixes.
    fn prefixes(
        &self,
        g: &mut Small,
        depth: usize,
        split: usize,
        mask: u32,
        out: &mut Vec<(Small, u32)>,
        pruned: &mut u64,
    ) {
        if depth == split {
            out.push((*g, mask));
            return;
        }
        let (u, v) = self.pairs[depth];
        self.prefixes(g, depth + 1, split, mask, out, pruned);
        if g.has_path(u, v, self.ell - 1) {
            *pruned += 1;
        } else {
            g.add(u, v);
            self.prefixes(g, depth + 1, split, mask | 1 << depth, out, pruned);
            g.remove(u, v);
        }
    }
}

fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u32) -> Graph {
    let edges: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|(e, _)| mask >> e & 1 == 1)
        .map(|(_, &p)| p)
        .collect();
    Graph::new(n, &edges).expect("mask edges are valid")
}

/// Exact maximum number of `k`-cycles over all labeled `C_ℓ`-free graphs on
/// `n ≤ 8` vertices.
pub fn exhaustive_max(n: usize, k: usize, ell: usize) -> Result<SearchResult> {
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "exhaustive search is limited to n <= {MAX_SEARCH_VERTICES}, got {n}"
        )));
    }
    if ell < 3 || ell.is_multiple_of(2) || k.is_multiple_of(2) || k <= ell {
        return Err(Error::InvalidArgument(format!(
            "need odd 3 <= ell < k (k={k}, ell={ell})"
        )));
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    let searcher = Searcher { pairs, k, ell };
    let split = SPLIT_DEPTH.min(searcher.pairs.len());
    let mut prefixes = Vec::new();
    let mut pruned = 0;
    searcher.prefixes(
        &mut Small::empty(n),
        0,
        split,
        0,
        &mut prefixes,
        &mut pruned,
    );

    let init = Best {
        count: 0,
        mask: u32::MAX,
        examined: 0,
        pruned: 0,
    };
    let best = prefixes
        .into_par_iter()
        .map(|(mut g, mask)| {
            let mut acc = init;
            searcher.dfs(&mut g, split, mask, &mut acc);
            acc
        })
        .reduce(|| init, Best::merge);
    let witness = graph_from_mask(n, &searcher.pairs, best.mask);
    Ok(SearchResult {
        n,
        k,
        ell,
        max_count: BigUint::from(best.count),
        witness_mask: best.mask,
        witness,
        graphs_examined: best.examined,
        pruned: best.pruned + pruned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::count_cycles;

    fn small_from(g: &Graph) -> Small {
        let mut s = Small::empty(g.vertex_count());
        for (u, v) in g.edges() {
            s.add(u, v);
        }
        s
    }

    #[test]
    fn small_counter_matches_general_counter() {
        for g in [Graph::complete(8), Graph::cycle(7), Graph::complete(6)] {
            let s = small_from(&g);
            for len in 3..=g.vertex_count() {
                let expected: u64 = count_cycles(&g, len).unwrap().try_into().unwrap();
                assert_eq!(s.count_cycles(len), expected, "len {len}");
            }
        }
    }

    #[test]
    fn small_paths() {
        let s = small_from(&Graph::cycle(6));
        assert!(s.has_path(0, 3, 3));
        assert!(!s.has_path(0, 3, 2));
        assert!(s.has_path(0, 1, 5));
    }

    #[test]
    fn pentagon_in_triangle_free_graphs() {
        let r = exhaustive_max(5, 5, 3).unwrap();
        assert_eq!(r.max_count, BigUint::from(1u32));
        assert_eq!(count_cycles(&r.witness, 5).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn too_few_vertices() {
        let r = exhaustive_max(6, 7, 5).unwrap();
        assert_eq!(r.max_count, BigUint::from(0u32));
        assert_eq!(r.witness_mask, 0);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            exhaustive_max(9, 7, 5),
            Err(Error::ResourceLimit(_))
        ));
        assert!(exhaustive_max(6, 5, 5).is_err());
        assert!(exhaustive_max(6, 6, 3).is_err());
    }
}
