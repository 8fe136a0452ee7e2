use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::One;
use proptest::prelude::*;

use turan_cycles::blowup::{exact_blowup_cycle_count, leading_coefficient, BlowupSpec};
use turan_cycles::certificate::{
    contribution_audit, lemma26_bound, m_value, max_per_cycle_bound, sum_of_good_weights, u_set,
    DEFAULT_M_BUDGET,
};
use turan_cycles::constructions::{proposition_graph, random_ck_free, random_subgraph};
use turan_cycles::cycles::{
    count_cycles, count_cycles_sequential, enumerate_cycles, enumerate_cycles_parallel,
    shortest_odd_cycle,
};
use turan_cycles::repro::walk_bound;
use turan_cycles::search::exhaustive_max;
use turan_cycles::stability::{greedy_odd_cycle_removal, recover_partition, ToleranceConfig};
use turan_cycles::weights::{optimize_coefficient, OptimizerConfig};
use turan_cycles::{Graph, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            prop::collection::vec(prop::bool::weighted(0.4), pairs),
        )
            .prop_map(|(n, bits)| {
                let mut edges = Vec::new();
                let mut e = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[e] {
                            edges.push((u, v));
                        }
                        e += 1;
                    }
                }
                Graph::new(n, &edges).unwrap()
            })
    })
}

fn spec(bases: &'static [usize], max_part: usize) -> impl Strategy<Value = BlowupSpec> {
    prop::sample::select(bases).prop_flat_map(move |m| {
        prop::collection::vec(0..=max_part, m)
            .prop_map(move |parts| BlowupSpec::new(m, parts).unwrap())
    })
}

fn split(g: &Graph, mask: &[bool]) -> (VertexSet, VertexSet) {
    let n = g.vertex_count();
    let s = VertexSet::from_vertices(n, (0..n).filter(|&v| mask[v]));
    (s.clone(), g.vertices().difference(&s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_symmetric_and_sums(g in graph(12), mask in prop::collection::vec(any::<bool>(), 12)) {
        let (s, t) = split(&g, &mask);
        prop_assume!(!s.is_empty() && !t.is_empty());
        prop_assert_eq!(g.density(&s, &t).unwrap(), g.density(&t, &s).unwrap());
        let total: Ratio<u64> = s.iter().map(|v| g.vertex_density(v, &t).unwrap() * t.len() as u64).sum();
        prop_assert_eq!(total, Ratio::from_integer(g.edges_between(&s, &t)));
    }

    #[test]
    fn distances_satisfy_triangle_inequality(g in graph(12)) {
        let n = g.vertex_count();
        let d: Vec<_> = (0..n).map(|v| g.bfs(v)).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if let (Some(ab), Some(bc)) = (d[a][b], d[b][c]) {
                        prop_assert!(d[a][c].unwrap() <= ab + bc);
                    }
                }
            }
        }
    }

    #[test]
    fn count_matches_enumeration(g in graph(10), len in 3usize..=10) {
        prop_assume!(len <= g.vertex_count());
        let count = count_cycles(&g, len).unwrap();
        prop_assert_eq!(count.clone(), BigUint::from(enumerate_cycles(&g, len, None).unwrap().len()));
        prop_assert_eq!(count, count_cycles_sequential(&g, len).unwrap());
        let mut seq = enumerate_cycles(&g, len, None).unwrap();
        seq.sort_by(|a, b| a.vertices().cmp(b.vertices()));
        prop_assert_eq!(seq, enumerate_cycles_parallel(&g, len).unwrap());
    }

    #[test]
    fn odd_blowup_has_product_many_base_cycles(s in spec(&[3, 5, 7, 9], 3)) {
        let expected: BigUint = s.part_sizes().iter().map(|&p| BigUint::from(p)).product();
        let k = s.base_length();
        prop_assert_eq!(count_cycles(&s.materialize(), k).unwrap(), expected.clone());
        prop_assert_eq!(exact_blowup_cycle_count(&s, k).unwrap(), expected);
    }

    #[test]
    fn transfer_count_matches_brute_force(s in spec(&[5, 7], 3), k in (1usize..=5).prop_map(|i| 2 * i + 1)) {
        prop_assert_eq!(exact_blowup_cycle_count(&s, k).unwrap(), count_cycles(&s.materialize(), k).unwrap());
    }

    #[test]
    fn coefficient_is_dihedrally_invariant(
        raw in prop::collection::vec(0.01f64..1.0, 5..=9),
        shift in 0usize..9,
        k in (1usize..=7).prop_map(|i| 2 * i + 1),
    ) {
        let m = raw.len();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let base = leading_coefficient(m, &w, k).unwrap();
        let rotated: Vec<f64> = (0..m).map(|i| w[(i + shift) % m]).collect();
        let reflected: Vec<f64> = w.iter().rev().copied().collect();
        for other in [rotated, reflected] {
            let c = leading_coefficient(m, &other, k).unwrap();
            prop_assert!((c - base).abs() <= 1e-12 * base.abs().max(1e-300));
        }
    }

    #[test]
    fn greedy_removal_reaches_odd_girth(g in graph(10), k in prop::sample::select(vec![3usize, 5, 7])) {
        let r = greedy_odd_cycle_removal(&g, k).unwrap();
        prop_assert!(shortest_odd_cycle(&r.graph).is_none_or(|l| l >= k));
        prop_assert_eq!(r.graph.edge_count() + r.removed.len(), g.edge_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificate_bounds_hold_on_blowup_subgraphs(
        parts in prop::collection::vec(1usize..=2, 7),
        keep in 0.5f64..1.0,
        seed in any::<u64>(),
    ) {
        let spec = BlowupSpec::new(7, parts).unwrap();
        let g = random_subgraph(&spec.materialize(), keep, seed);
        let k = 7;
        let count = count_cycles(&g, k).unwrap();
        prop_assert!(sum_of_good_weights(&g, k).unwrap() <= BigRational::one());
        if let Some(bound) = max_per_cycle_bound(&g, k).unwrap() {
            prop_assert!(bound >= BigRational::from_integer(count.clone().into()));
            let m = m_value(&g, k, DEFAULT_M_BUDGET).unwrap();
            prop_assert!(m.exhaustive);
            let ratio = *m.m_value.numer() as f64 / *m.m_value.denom() as f64;
            let b = lemma26_bound(g.vertex_count(), k, ratio).unwrap();
            prop_assert!(b >= count.to_string().parse::<f64>().unwrap());
        }
        let n = g.vertex_count() as u64;
        for c in enumerate_cycles(&g, k, None).unwrap() {
            let audit = contribution_audit(&g, &c).unwrap();
            let cap = Ratio::from_integer(n * (k as u64 - 2) + u_set(&g, &c).len() as u64);
            prop_assert!(audit.total() <= cap);
        }
    }

    #[test]
    fn walk_bound_holds_on_ck_free_graphs(
        n in 6usize..=20,
        k in prop::sample::select(vec![5usize, 7, 9]),
        seed in any::<u64>(),
    ) {
        let g = random_ck_free(n, k, 2 * n, seed).unwrap();
        for ell in (3..k).step_by(2) {
            prop_assert!(count_cycles(&g, ell).unwrap() <= walk_bound(n, k, ell));
        }
    }

    #[test]
    fn optimizer_never_loses_to_balanced(m in prop::sample::select(vec![3usize, 5, 7]), k in (2usize..=8).prop_map(|i| 2 * i + 1), seed in any::<u64>()) {
        prop_assume!(k >= m);
        let cfg = OptimizerConfig { seed, iterations: 500, ..OptimizerConfig::default() };
        let r = optimize_coefficient(m, k, &cfg).unwrap();
        prop_assert!(r.coefficient >= r.balanced_coefficient);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn refined_classes_are_independent_and_dense(
        k in prop::sample::select(vec![7usize, 9]),
        sizes in prop::collection::vec(8usize..=12, 9),
        seed in any::<u64>(),
    ) {
        let spec = BlowupSpec::new(k, sizes[..k].to_vec()).unwrap();
        let (g, _) = turan_cycles::constructions::planted_blowup(&spec, 0.05, seed);
        let cfg = ToleranceConfig::default();
        let r = recover_partition(&g, k, &cfg, 20_000).unwrap();
        let w = &r.refined.classes;
        for i in 0..k {
            prop_assert!(g.is_independent(&w[i]));
            for v in &w[i] {
                for j in [(i + 1) % k, (i + k - 1) % k] {
                    let d = g.vertex_density(v, &w[j]).unwrap();
                    prop_assert!(*d.numer() as f64 > (1.0 - cfg.eps4) * *d.denom() as f64);
                }
            }
        }
        for c in &r.final_partition().classes {
            prop_assert!(g.is_independent(c));
        }
    }
}

#[test]
fn search_dominates_constructions() {
    for n in 5..=8 {
        for ell in [3, 5] {
            for k in (ell + 2..=n).step_by(2) {
                let r = exhaustive_max(n, k, ell).unwrap();
                let blowup = BlowupSpec::balanced(k, n).unwrap().materialize();
                assert!(
                    r.max_count >= count_cycles(&blowup, k).unwrap(),
                    "n={n} k={k} l={ell}"
                );
                if k >= 7 && n <= 3 * (k - 1) / 2 && ell == k - 2 {
                    let g = proposition_graph(k, n).unwrap();
                    assert!(r.max_count >= count_cycles(&g, k).unwrap());
                }
                // The witness realizes the maximum under any relabeling.
                let perm: Vec<usize> = (0..n).rev().collect();
                let relabeled = r.witness.relabel(&perm).unwrap();
                assert_eq!(count_cycles(&relabeled, k).unwrap(), r.max_count);
                assert_eq!(exhaustive_max(n, k, ell).unwrap(), r);
            }
        }
    }
}
