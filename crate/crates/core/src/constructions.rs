//! Explicit constructions: balanced blow-ups, the `(k-1)`-cycle family that
//! beats the balanced blow-up at small `n`, and seeded random instances.

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::BlowupSpec;
use crate::cycles::{count_cycles, has_cycle_of_length};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Balanced blow-up of `C_k` on `n` vertices, larger parts first.
pub fn balanced_blowup_spec(k: usize, n: usize) -> Result<BlowupSpec> {
    BlowupSpec::balanced(k, n)
}

/// Largest `n` accepted by [`proposition_graph`]: `3(k-1)/2`.
pub fn proposition_max_n(k: usize) -> usize {
    3 * (k - 1) / 2
}

/// The `(k-1)`-cycle `v_1 … v_{k-1}` plus `w_1 … w_{n-k+1}`, where `w_i` is
/// adjacent to `v_{2i-1}, v_{2i}, v_{2i+1}` (indices mod `k-1`).
///
/// Vertex `v_i` is index `i-1`; `w_i` is index `k-2+i`.
pub fn proposition_graph(k: usize, n: usize) -> Result<Graph> {
    if k < 7 || k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "k must be odd and at least 7, got {k}"
        )));
    }
    if n < k || n > proposition_max_n(k) {
        return Err(Error::InvalidArgument(format!(
            "n must lie in [{k}, {}] for k = {k}, got {n}",
            proposition_max_n(k)
        )));
    }
    let cycle_len = k - 1;
    // 1-based cycle index (taken mod k-1) to vertex index.
    let v = |i: usize| (i - 1) % cycle_len;
    let mut edges: Vec<(Vertex, Vertex)> =
        (0..cycle_len).map(|i| (i, (i + 1) % cycle_len)).collect();
    for i in 1..=n - k + 1 {
        let w = cycle_len + i - 1;
        for j in [2 * i - 1, 2 * i, 2 * i + 1] {
            edges.push((w, v(j)));
        }
    }
    Graph::new(n, &edges)
}

/// One row of the small-`n` comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropositionRow {
    pub n: usize,
    pub blowup_count: BigUint,
    pub counterexample_count: BigUint,
    /// The counterexample has no `(k-2)`-cycle.
    pub ck2_free: bool,
    /// `(n-k+1) 2^{n-k+1} > (n/k)^k`; only evaluated for `n ≤ k + 10`.
    pub beats_power_bound: Option<bool>,
}

/// Counts `k`-cycles in the balanced blow-up and in the counterexample for
/// every `k ≤ n ≤ 3(k-1)/2`, checking them against `2^{n-k}` and
/// `(n-k+1) 2^{n-k+1}`. Any mismatch is a verification error.
pub fn verify_proposition(k: usize) -> Result<Vec<PropositionRow>> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for n in k..=proposition_max_n(k) {
        let blowup = balanced_blowup_spec(k, n)?.materialize();
        let blowup_count = count_cycles(&blowup, k)?;
        let g = proposition_graph(k, n)?;
        let counterexample_count = count_cycles(&g, k)?;
        let ck2_free = !has_cycle_of_length(&g, k - 2)?;

        let expected_blowup = BigUint::one() << (n - k);
        let expected_counter = BigUint::from(n - k + 1) << (n - k + 1);
        if blowup_count != expected_blowup {
            failures.push(format!(
                "n={n}: blow-up has {blowup_count} k-cycles, expected {expected_blowup}"
            ));
        }
        if counterexample_count != expected_counter {
            failures.push(format!(
                "n={n}: counterexample has {counterexample_count} k-cycles, expected {expected_counter}"
            ));
        }
        if !ck2_free {
            failures.push(format!("n={n}: counterexample contains C_{}", k - 2));
        }
        let beats_power_bound = (n <= k + 10).then(|| {
            // (n-k+1) 2^{n-k+1} k^k > n^k, exactly.
            let lhs = &expected_counter * BigUint::from(k).pow(k as u32);
            lhs > BigUint::from(n).pow(k as u32)
        });
        if beats_power_bound == Some(false) {
            failures.push(format!("n={n}: (n-k+1)2^(n-k+1) does not exceed (n/k)^k"));
        }
        rows.push(PropositionRow {
            n,
            blowup_count,
            counterexample_count,
            ck2_free,
            beats_power_bound,
        });
    }
    if failures.is_empty() {
        Ok(rows)
    } else {
        Err(Error::Verification(failures.join("; ")))
    }
}

/// A blow-up of `C_k` with each cross edge deleted independently with
/// probability `deletion`. Returns the graph and every vertex's true part.
pub fn planted_blowup(spec: &BlowupSpec, deletion: f64, seed: u64) -> (Graph, Vec<usize>) {
    let full = spec.materialize();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let removed: Vec<_> = full
        .edges()
        .into_iter()
        .filter(|_| rng.gen_bool(deletion))
        .collect();
    (full.without_edges(&removed), spec.labels())
}

/// A random subgraph keeping each edge with probability `keep`.
pub fn random_subgraph(g: &Graph, keep: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let removed: Vec<_> = g
        .edges()
        .into_iter()
        .filter(|_| !rng.gen_bool(keep))
        .collect();
    g.without_edges(&removed)
}

/// Random `C_k`-free graph: edges of a random ordering are offered one at a
/// time and kept only if no `k`-cycle appears. At most `max_edges` edges.
pub fn random_ck_free(n: usize, k: usize, max_edges: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs.shuffle(&mut rng);
    let mut g = Graph::empty(n);
    let mut added = 0;
    for (u, v) in pairs {
        if added == max_edges {
            break;
        }
        if path_of_length_exists(&g, u, v, k - 1) {
            continue;
        }
        g = g.with_edges(&[(u, v)])?;
        added += 1;
    }
    Ok(g)
}

/// Is there a simple path from `u` to `v` with exactly `edges` edges?
pub fn path_of_length_exists(g: &Graph, u: Vertex, v: Vertex, edges: usize) -> bool {
    fn go(g: &Graph, cur: Vertex, target: Vertex, left: usize, used: &mut Vec<bool>) -> bool {
        if left == 1 {
            return g.has_edge(cur, target);
        }
        for w in g.neighbours(cur) {
            if w == target || used[w] {
                continue;
            }
            used[w] = true;
            let found = go(g, w, target, left - 1, used);
            used[w] = false;
            if found {
                return true;
            }
        }
        false
    }
    if u == v || edges == 0 {
        return false;
    }
    let mut used = vec![false; g.vertex_count()];
    used[u] = true;
    go(g, u, v, edges, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_spec_examples() {
        assert_eq!(balanced_blowup_spec(7, 14).unwrap().part_sizes(), &[2; 7]);
        assert_eq!(
            balanced_blowup_spec(7, 9).unwrap().part_sizes(),
            &[2, 2, 1, 1, 1, 1, 1]
        );
        let s = balanced_blowup_spec(5, 3).unwrap();
        assert_eq!(s.part_sizes(), &[1, 1, 1, 0, 0]);
        let path = s.materialize();
        assert_eq!(path.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn proposition_graph_examples() {
        let g = proposition_graph(7, 7).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 9));
        let g = proposition_graph(7, 9).unwrap();
        // w_1 = 6 → v_1 v_2 v_3, w_2 = 7 → v_3 v_4 v_5, w_3 = 8 → v_5 v_6 v_1.
        assert_eq!(g.neighbours(6).to_vec(), vec![0, 1, 2]);
        assert_eq!(g.neighbours(7).to_vec(), vec![2, 3, 4]);
        assert_eq!(g.neighbours(8).to_vec(), vec![0, 4, 5]);
        assert!(proposition_graph(7, 10).is_err());
        assert!(proposition_graph(7, 6).is_err());
        assert!(proposition_graph(8, 8).is_err());
    }

    #[test]
    fn proposition_graph_cycles() {
        let g = proposition_graph(7, 7).unwrap();
        assert!(!has_cycle_of_length(&g, 5).unwrap());
        // w_1, v_1, v_2 form a triangle.
        assert!(has_cycle_of_length(&g, 3).unwrap());
        assert_eq!(count_cycles(&g, 7).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn verify_proposition_rows() {
        let rows = verify_proposition(7).unwrap();
        let summary: Vec<(usize, u64, u64, bool)> = rows
            .iter()
            .map(|r| {
                (
                    r.n,
                    r.blowup_count.clone().try_into().unwrap(),
                    r.counterexample_count.clone().try_into().unwrap(),
                    r.ck2_free,
                )
            })
            .collect();
        assert_eq!(
            summary,
            vec![(7, 1, 2, true), (8, 2, 8, true), (9, 4, 24, true)]
        );
        let rows9 = verify_proposition(9).unwrap();
        let last = rows9.last().unwrap();
        assert_eq!(last.n, 12);
        assert_eq!(last.blowup_count, BigUint::from(8u32));
        assert_eq!(last.counterexample_count, BigUint::from(64u32));
    }

    #[test]
    fn planted_blowup_is_seeded() {
        let spec = BlowupSpec::new(7, vec![3; 7]).unwrap();
        let (a, labels) = planted_blowup(&spec, 0.1, 5);
        let (b, _) = planted_blowup(&spec, 0.1, 5);
        assert_eq!(a, b);
        assert_eq!(labels.len(), 21);
        assert!(a.edge_count() < spec.materialize().edge_count());
    }

    #[test]
    fn random_ck_free_has_no_ck() {
        for seed in 0..5 {
            let g = random_ck_free(12, 5, 30, seed).unwrap();
            assert!(!has_cycle_of_length(&g, 5).unwrap());
        }
    }

    #[test]
    fn path_lengths() {
        let c6 = Graph::cycle(6);
        assert!(path_of_length_exists(&c6, 0, 3, 3));
        assert!(!path_of_length_exists(&c6, 0, 3, 2));
        assert!(path_of_length_exists(&c6, 0, 1, 5));
    }
}
