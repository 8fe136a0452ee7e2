//! Structure extraction for graphs close to a blow-up of `C_k`.
//!
//! Starting from a `k`-cycle `v_0 … v_{k-1}`, vertices whose cycle
//! neighbourhood is exactly `{v_{i-1}, v_{i+1}}` form class `U_i`. Classes
//! are then trimmed to vertices dense towards both neighbouring classes
//! (`W_i`), leftover vertices dense towards `W_{i±1}` are pulled back in
//! (`B_i`), and whatever remains outside is classified by its neighbour
//! pattern.

use std::ops::ControlFlow;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{m_value, DEFAULT_M_BUDGET};
use crate::cycles::{enumerate_cycles, for_each_cycle, shortest_odd_cycle, CycleWitness};
use crate::error::{Error, Result};
use crate::graph::{Density, Graph, Vertex, VertexSet};

/// Tolerances for the extraction steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    /// Minimum-degree slack for the `W_i` refinement.
    pub eps4: f64,
    pub eps5: f64,
    pub delta: f64,
    /// Fraction of `W_{i±1}` a leftover vertex must see to join `B_i`.
    pub reclassify_threshold: Ratio<u64>,
}

/// Fixed upper density for the sparse side of an outside vertex.
pub const OUTSIDE_THRESHOLD: Ratio<u64> = Ratio::new_raw(3, 4);

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps0: 0.1,
            eps1: 0.1,
            eps2: 0.01,
            eps3: 0.05,
            eps4: 0.3,
            eps5: 0.05,
            delta: 0.01,
            reclassify_threshold: Ratio::new_raw(2, 3),
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("eps0", self.eps0),
            ("eps1", self.eps1),
            ("eps2", self.eps2),
            ("eps3", self.eps3),
            ("eps4", self.eps4),
            ("eps5", self.eps5),
            ("delta", self.delta),
        ];
        for (name, value) in named {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in (0, 1), got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// `e(v, Y) > (1 - eps) |Y|`, i.e. `ρ(v, Y) > 1 - eps`.
fn dense_towards(g: &Graph, v: Vertex, y: &VertexSet, eps: f64) -> bool {
    let e = g.neighbours(v).intersection_len(y) as f64;
    e > (1.0 - eps) * y.len() as f64
}

/// `X' = {v ∈ X : ρ(v, Y) > 1 - eps0}`.
pub fn dense_side(g: &Graph, x: &VertexSet, y: &VertexSet, eps0: f64) -> Result<VertexSet> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    if !x.is_disjoint(y) {
        return Err(Error::OverlappingSets);
    }
    Ok(VertexSet::from_vertices(
        g.vertex_count(),
        x.iter().filter(|&v| dense_towards(g, v, y, eps0)),
    ))
}

/// Premise and conclusion of the dense-side guarantee for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSideCheck {
    pub density: Density,
    /// `ρ(X, Y) > 1 - eps0²`.
    pub premise: bool,
    pub dense_size: usize,
    /// `|X'| > (1 - eps0)|X|`.
    pub conclusion: bool,
}

pub fn dense_side_check(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    eps0: f64,
) -> Result<DenseSideCheck> {
    let dense = dense_side(g, x, y, eps0)?;
    let density = g.density(x, y)?;
    let as_f64 = *density.numer() as f64 / *density.denom() as f64;
    Ok(DenseSideCheck {
        premise: as_f64 > 1.0 - eps0 * eps0,
        dense_size: dense.len(),
        conclusion: dense.len() as f64 > (1.0 - eps0) * x.len() as f64,
        density,
    })
}

/// Classes indexed by cycle position, leftover vertices, and densities
/// between classes.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionResult {
    pub classes: Vec<VertexSet>,
    pub leftover: VertexSet,
    /// `ρ(class_i, class_j)` for `i ≠ j`; `None` on the diagonal or when a
    /// class is empty.
    pub density_matrix: Vec<Vec<Option<Density>>>,
}

impl PartitionResult {
    pub fn new(g: &Graph, classes: Vec<VertexSet>) -> Self {
        let mut covered = VertexSet::new(g.vertex_count());
        for c in &classes {
            covered.union_with(c);
        }
        let leftover = g.vertices().difference(&covered);
        let k = classes.len();
        let density_matrix = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            None
                        } else {
                            g.density(&classes[i], &classes[j]).ok()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            classes,
            leftover,
            density_matrix,
        }
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// Class of every vertex, `None` for leftover.
    pub fn labels(&self, n: usize) -> Vec<Option<usize>> {
        let mut labels = vec![None; n];
        for (i, c) in self.classes.iter().enumerate() {
            for v in c {
                labels[v] = Some(i);
            }
        }
        labels
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.k()
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.k() - 1) % self.k()
    }
}

/// `U_i = {w : N(w) ∩ C = {v_{i-1}, v_{i+1}}}` for the given cycle.
pub fn extract_partition(g: &Graph, c: &CycleWitness) -> PartitionResult {
    let n = g.vertex_count();
    let k = c.len();
    let on_cycle = c.vertex_set(n);
    let position: Vec<Option<usize>> = {
        let mut p = vec![None; n];
        for (i, &v) in c.vertices().iter().enumerate() {
            p[v] = Some(i);
        }
        p
    };
    let mut classes = vec![VertexSet::new(n); k];
    for w in 0..n {
        let hits: Vec<usize> = g
            .neighbours(w)
            .intersection(&on_cycle)
            .iter()
            .filter_map(|v| position[v])
            .collect();
        if let [a, b] = hits[..] {
            // Two cycle neighbours two apart determine the middle position.
            let (lo, hi) = (a.min(b), a.max(b));
            if hi - lo == 2 {
                classes[lo + 1].insert(w);
            } else if lo + k - hi == 2 {
                classes[(hi + 1) % k].insert(w);
            }
        }
    }
    PartitionResult::new(g, classes)
}

/// `W_i = {v ∈ U_i : ρ(v, U_{i+1}) > 1 - eps4 and ρ(v, U_{i-1}) > 1 - eps4}`;
/// demoted vertices join the leftover set.
pub fn refine_min_degree(g: &Graph, p: &PartitionResult, eps4: f64) -> Result<PartitionResult> {
    let k = p.k();
    let mut classes = Vec::with_capacity(k);
    for i in 0..k {
        let (up, down) = (&p.classes[p.next(i)], &p.classes[p.prev(i)]);
        if up.is_empty() || down.is_empty() || p.classes[i].is_empty() {
            return Err(Error::EmptyClass(i));
        }
        let kept = VertexSet::from_vertices(
            g.vertex_count(),
            p.classes[i]
                .iter()
                .filter(|&v| dense_towards(g, v, up, eps4) && dense_towards(g, v, down, eps4)),
        );
        if kept.is_empty() {
            return Err(Error::EmptyClass(i));
        }
        classes.push(kept);
    }
    Ok(PartitionResult::new(g, classes))
}

/// Verdict for one vertex outside the classes.
#[derive(Clone, Debug, PartialEq)]
pub enum OutsideVerdict {
    /// All neighbours lie in classes `j-1` and `j+1`.
    Pattern {
        j: usize,
        density_prev: Density,
        density_next: Density,
        prev_sparse: bool,
        next_sparse: bool,
    },
    /// Neighbours in two classes that are not two apart.
    Violation { classes: (usize, usize) },
}

impl OutsideVerdict {
    /// At least one side has density at most 3/4.
    pub fn satisfies_sparse_side(&self) -> bool {
        matches!(self, Self::Pattern { prev_sparse, next_sparse, .. } if *prev_sparse || *next_sparse)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutsideEntry {
    pub vertex: Vertex,
    pub verdict: OutsideVerdict,
}

/// Result of reclassification plus per-vertex verdicts for what remains.
#[derive(Clone, Debug, PartialEq)]
pub struct OutsideReport {
    /// Classes `B_i` after pulling qualifying leftover vertices back in.
    pub partition: PartitionResult,
    pub reclassified: Vec<(Vertex, usize)>,
    /// Vertices that qualified for more than one class; each went to the
    /// lowest index.
    pub ambiguous: usize,
    pub entries: Vec<OutsideEntry>,
}

/// Pulls leftover vertices with `|N(v) ∩ W_{i±1}| > t |W_{i±1}|` into `B_i`
/// (lowest qualifying `i`), then classifies every vertex still outside.
pub fn classify_outside(g: &Graph, p: &PartitionResult, cfg: &ToleranceConfig) -> OutsideReport {
    let k = p.k();
    let t = cfg.reclassify_threshold;
    let above = |v: Vertex, set: &VertexSet| -> bool {
        !set.is_empty()
            && Ratio::new(
                g.neighbours(v).intersection_len(set) as u64,
                set.len() as u64,
            ) > t
    };
    let mut classes = p.classes.clone();
    let mut reclassified = Vec::new();
    let mut ambiguous = 0;
    for v in &p.leftover {
        let qualifying: Vec<usize> = (0..k)
            .filter(|&i| above(v, &p.classes[p.next(i)]) && above(v, &p.classes[p.prev(i)]))
            .collect();
        if let Some(&i) = qualifying.first() {
            if qualifying.len() > 1 {
                ambiguous += 1;
            }
            classes[i].insert(v);
            reclassified.push((v, i));
        }
    }
    let partition = PartitionResult::new(g, classes);
    let entries = partition
        .leftover
        .iter()
        .map(|v| OutsideEntry {
            vertex: v,
            verdict: outside_verdict(g, &partition, v),
        })
        .collect();
    OutsideReport {
        partition,
        reclassified,
        ambiguous,
        entries,
    }
}

fn outside_verdict(g: &Graph, p: &PartitionResult, v: Vertex) -> OutsideVerdict {
    let k = p.k();
    let touched: Vec<usize> = (0..k)
        .filter(|&i| !g.neighbours(v).is_disjoint(&p.classes[i]))
        .collect();
    let fits = |j: usize| touched.iter().all(|&i| i == p.prev(j) || i == p.next(j));
    match (0..k).find(|&j| fits(j)) {
        Some(j) => {
            let density = |i: usize| {
                g.vertex_density(v, &p.classes[i])
                    .unwrap_or(Ratio::from_integer(0))
            };
            let (dp, dn) = (density(p.prev(j)), density(p.next(j)));
            OutsideVerdict::Pattern {
                j,
                prev_sparse: dp <= OUTSIDE_THRESHOLD,
                next_sparse: dn <= OUTSIDE_THRESHOLD,
                density_prev: dp,
                density_next: dn,
            }
        }
        None => {
            let pair = offending_pair(&touched, k);
            OutsideVerdict::Violation { classes: pair }
        }
    }
}

/// First pair of touched classes that are not exactly two apart.
fn offending_pair(touched: &[usize], k: usize) -> (usize, usize) {
    for (x, &a) in touched.iter().enumerate() {
        for &b in &touched[x + 1..] {
            let gap = (b + k - a) % k;
            if gap != 2 && gap != k - 2 {
                return (a, b);
            }
        }
    }
    // Three or more classes pairwise two apart (only possible for tiny k).
    (touched[0], touched[1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternViolation {
    /// A vertex with neighbours in two classes that are not two apart.
    Neighbours {
        vertex: Vertex,
        classes: (usize, usize),
    },
    /// An edge inside a class.
    Internal {
        edge: (Vertex, Vertex),
        class: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternReport {
    pub holds: bool,
    pub violations: Vec<PatternViolation>,
}

/// Every vertex's neighbouring classes must fit in `{i-1, i+1}` for some
/// `i`, and every class must be independent.
pub fn neighbour_pattern_check(g: &Graph, p: &PartitionResult) -> PatternReport {
    let k = p.k();
    let mut violations = Vec::new();
    for (class, set) in p.classes.iter().enumerate() {
        for u in set {
            for v in g.neighbours(u).intersection(set).iter().filter(|&v| v > u) {
                violations.push(PatternViolation::Internal {
                    edge: (u, v),
                    class,
                });
            }
        }
    }
    for v in 0..g.vertex_count() {
        let touched: Vec<usize> = (0..k)
            .filter(|&i| !g.neighbours(v).is_disjoint(&p.classes[i]))
            .collect();
        let fits = (0..k).any(|j| touched.iter().all(|&i| i == p.prev(j) || i == p.next(j)));
        if !fits {
            violations.push(PatternViolation::Neighbours {
                vertex: v,
                classes: offending_pair(&touched, k),
            });
        }
    }
    PatternReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// Output of [`greedy_odd_cycle_removal`].
#[derive(Clone, Debug, PartialEq)]
pub struct CleanResult {
    pub graph: Graph,
    pub removed: Vec<(Vertex, Vertex)>,
}

/// Number of shortest odd cycles sampled per removal round.
pub const REMOVAL_SAMPLE: usize = 100;

/// Deletes edges until no odd cycle shorter than `k` remains. Each round
/// takes the first [`REMOVAL_SAMPLE`] shortest odd cycles in canonical
/// order and deletes the edge lying on most of them (lexicographically
/// least on ties).
pub fn greedy_odd_cycle_removal(g: &Graph, k: usize) -> Result<CleanResult> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("k must be odd, got {k}")));
    }
    let mut current = g.clone();
    let mut removed = Vec::new();
    while let Some(girth) = shortest_odd_cycle(&current).filter(|&len| len < k) {
        let sample = enumerate_cycles(&current, girth, Some(REMOVAL_SAMPLE))?;
        let mut tally: std::collections::BTreeMap<(Vertex, Vertex), usize> = Default::default();
        for c in &sample {
            for e in c.edges() {
                *tally.entry(e).or_default() += 1;
            }
        }
        let top = tally.values().copied().max().ok_or_else(|| {
            Error::Internal(format!(
                "odd girth {girth} reported but no cycle enumerated"
            ))
        })?;
        let edge = *tally.iter().find(|(_, &c)| c == top).unwrap().0;
        current = current.without_edges(&[edge]);
        removed.push(edge);
    }
    Ok(CleanResult {
        graph: current,
        removed,
    })
}

/// Full pipeline on a graph that is close to a blow-up of `C_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    pub cycle: CycleWitness,
    pub extracted: PartitionResult,
    pub refined: PartitionResult,
    pub outside: OutsideReport,
    /// Outside vertices whose neighbours span exactly `B_{j-1}` and
    /// `B_{j+1}`, placed into class `j`.
    pub placed: Vec<(Vertex, usize)>,
    pub placed_partition: PartitionResult,
}

impl Recovery {
    pub fn final_partition(&self) -> &PartitionResult {
        &self.placed_partition
    }
}

/// Moves each outside vertex whose neighbour classes are exactly
/// `{j-1, j+1}` into class `j`. Such a vertex has no neighbour in class `j`,
/// so classes stay independent.
pub fn place_by_pattern(
    g: &Graph,
    report: &OutsideReport,
) -> (PartitionResult, Vec<(Vertex, usize)>) {
    let p = &report.partition;
    let mut classes = p.classes.clone();
    let mut placed = Vec::new();
    for entry in &report.entries {
        if let OutsideVerdict::Pattern {
            j,
            density_prev,
            density_next,
            ..
        } = entry.verdict
        {
            if *density_prev.numer() > 0 && *density_next.numer() > 0 {
                classes[j].insert(entry.vertex);
                placed.push((entry.vertex, j));
            }
        }
    }
    (PartitionResult::new(g, classes), placed)
}

/// Picks the cycle with the largest `|U(C)|` (within `budget` cycles),
/// extracts `U_i`, refines to `W_i`, reclassifies leftovers into `B_i` and
/// finally places pattern-compliant outside vertices.
pub fn recover_partition(
    g: &Graph,
    k: usize,
    cfg: &ToleranceConfig,
    budget: usize,
) -> Result<Recovery> {
    cfg.validate()?;
    let m = m_value(g, k, budget)?;
    let extracted = extract_partition(g, &m.best_cycle);
    let refined = refine_min_degree(g, &extracted, cfg.eps4)?;
    let outside = classify_outside(g, &refined, cfg);
    let (placed_partition, placed) = place_by_pattern(g, &outside);
    Ok(Recovery {
        cycle: m.best_cycle,
        extracted,
        refined,
        outside,
        placed,
        placed_partition,
    })
}

/// [`recover_partition`] with the default cycle budget.
pub fn recover_partition_default(g: &Graph, k: usize, cfg: &ToleranceConfig) -> Result<Recovery> {
    recover_partition(g, k, cfg, DEFAULT_M_BUDGET)
}

/// Fraction of vertices whose class matches their true part, up to the
/// rotation/reflection that maps cycle positions onto parts. Leftover
/// vertices count as misclassified.
pub fn recovery_accuracy(p: &PartitionResult, truth: &[usize]) -> f64 {
    let k = p.k();
    let labels = p.labels(truth.len());
    let mut best = 0;
    for shift in 0..k {
        for reflect in [false, true] {
            let map = |i: usize| {
                if reflect {
                    (shift + k - i) % k
                } else {
                    (shift + i) % k
                }
            };
            let hits = labels
                .iter()
                .zip(truth)
                .filter(|(l, &t)| l.is_some_and(|i| map(i) == t))
                .count();
            best = best.max(hits);
        }
    }
    best as f64 / truth.len().max(1) as f64
}

/// Random bipartite instance for the dense-side guarantee: `X = 0..x`,
/// `Y = x..x+y`, each pair an edge with probability `p`.
pub fn random_bipartite(x: usize, y: usize, p: f64, seed: u64) -> (Graph, VertexSet, VertexSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x + y;
    let mut edges = Vec::new();
    for u in 0..x {
        for v in x..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::new(n, &edges).expect("bipartite edges are valid");
    (g, VertexSet::range(n, 0, x), VertexSet::range(n, x, n))
}

/// First `k`-cycle whose vertices all lie in `allowed`, if any.
pub fn cycle_within(g: &Graph, k: usize, allowed: &VertexSet) -> Result<Option<CycleWitness>> {
    let mut found = None;
    for_each_cycle(g, k, |path| {
        if path.iter().all(|&v| allowed.contains(v)) {
            found = Some(CycleWitness::new(g, path.to_vec()).expect("enumerated cycles are valid"));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}
