//! Good sequences and the weight certificate bounding `k`-cycle counts in
//! graphs with no odd cycle shorter than `k`.
//!
//! A sequence `D = (z_0, …, z_{k-1})` is good when `z_0 z_1 z_3 z_2 z_4 … z_{k-1}`
//! is a cycle. Its extension sets `A_i(D)` depend only on `z_0, …, z_{i-1}`,
//! and `w(D) = Π |A_i(D)|^{-1}` is the probability that the random extension
//! process produces `D`. All weights are exact rationals.

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::cycles::{for_each_cycle, shortest_odd_cycle, CycleWitness};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// Largest graph accepted by [`sum_of_good_weights`].
pub const MAX_GOOD_WEIGHT_VERTICES: usize = 20;
/// Default number of cycles [`m_value`] examines.
pub const DEFAULT_M_BUDGET: usize = 1_000_000;

fn check_k(k: usize) -> Result<()> {
    if k < 7 || k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "k must be odd and at least 7, got {k}"
        )));
    }
    Ok(())
}

/// True iff `g` has no odd cycle shorter than `k`.
pub fn assert_odd_girth_at_least(g: &Graph, k: usize) -> bool {
    shortest_odd_cycle(g).is_none_or(|girth| girth >= k)
}

fn require_odd_girth(g: &Graph, k: usize) -> Result<()> {
    match shortest_odd_cycle(g) {
        Some(found) if found < k => Err(Error::OddGirthTooSmall { found, required: k }),
        _ => Ok(()),
    }
}

/// A sequence whose cycle order `z_0 z_1 z_3 z_2 z_4 … z_{k-1}` is a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoodSequence(Vec<Vertex>);

impl GoodSequence {
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self> {
        check_k(vertices.len())?;
        let order = swap_middle(&vertices);
        CycleWitness::new(g, order).map_err(|e| Error::NotGood(e.to_string()))?;
        Ok(Self(vertices))
    }

    /// `D_j = (v_j, v_{j+1}, v_{j+3}, v_{j+2}, v_{j+4}, …, v_{j+k-1})` for a
    /// cycle `v_0 … v_{k-1}`, read backwards when `reversed`.
    pub fn from_cycle(cycle: &CycleWitness, j: usize, reversed: bool) -> Self {
        let k = cycle.len() as isize;
        let sign = if reversed { -1 } else { 1 };
        let order: Vec<Vertex> = (0..k).map(|i| cycle.at(j as isize + sign * i)).collect();
        Self(swap_middle(&order))
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

    /// `z_0 z_1 z_3 z_2 z_4 … z_{k-1}`.
    pub fn cycle_order(&self) -> Vec<Vertex> {
        swap_middle(&self.0)
    }
}

fn swap_middle(v: &[Vertex]) -> Vec<Vertex> {
    let mut out = v.to_vec();
    if out.len() > 3 {
        out.swap(2, 3);
    }
    out
}

/// The extension sets `A_0(D), …, A_{k-1}(D)`.
pub fn compute_a_sets(g: &Graph, d: &GoodSequence) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let z = d.vertices();
    let k = z.len();
    let path = d.cycle_order();
    let mut sets = Vec::with_capacity(k);
    sets.push(VertexSet::full(n));
    sets.push(g.neighbours(z[0]).clone());
    sets.push(g.sphere(z[1], 2).difference(g.neighbours(z[0])));
    sets.push(g.neighbours(z[1]).intersection(g.neighbours(z[2])));
    // For i >= 4 the prefix z_0..z_{i-1} is exactly path[..i].
    for i in 4..k {
        let prefix = &path[..i];
        let last = prefix[i - 1];
        let mut set = g.neighbours(last).clone();
        let inner = if i == k - 1 {
            set.intersect_with(g.neighbours(prefix[0]));
            &prefix[1..i - 1]
        } else {
            &prefix[..i - 1]
        };
        for &x in inner {
            set.subtract(g.neighbours(x));
        }
        for &x in prefix {
            set.remove(x);
        }
        sets.push(set);
    }
    sets
}

/// `w(D) = Π |A_i|^{-1}`; an empty set means the sequence is not realizable.
pub fn sequence_weight(a_sets: &[VertexSet]) -> Result<BigRational> {
    let mut denominator = BigInt::one();
    for (index, set) in a_sets.iter().enumerate() {
        let size = set.len();
        if size == 0 {
            return Err(Error::EmptyExtension { index });
        }
        denominator *= size;
    }
    Ok(BigRational::new(BigInt::one(), denominator))
}

/// A-sets of `d`, checked so that each `z_i` is a member of `A_i(D)`.
fn realizable_a_sets(g: &Graph, d: &GoodSequence) -> Result<Vec<VertexSet>> {
    let sets = compute_a_sets(g, d);
    for (index, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptyExtension { index });
        }
        if !set.contains(d.vertices()[index]) {
            return Err(Error::Infeasible { index });
        }
    }
    Ok(sets)
}

/// Weight of a single good sequence.
pub fn good_sequence_weight(g: &Graph, d: &GoodSequence) -> Result<BigRational> {
    sequence_weight(&realizable_a_sets(g, d)?)
}

/// Weight data for the `k` same-orientation good sequences of one cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub cycle: CycleWitness,
    /// `a_sizes[i][j] = |A_i(D_j)|`.
    pub a_sizes: Vec<Vec<usize>>,
    pub weights: Vec<BigRational>,
    pub u_size: usize,
    /// `(2 Σ_j w(D_j))^{-1}`, exact.
    pub per_cycle_bound_exact: BigRational,
    pub per_cycle_bound: f64,
}

/// `(2 Σ_j w(D_j))^{-1}` for the cycle `c`, with the full size table.
pub fn per_cycle_bound(g: &Graph, c: &CycleWitness) -> Result<CertificateReport> {
    check_k(c.len())?;
    require_odd_girth(g, c.len())?;
    per_cycle_bound_unchecked(g, c)
}

fn per_cycle_bound_unchecked(g: &Graph, c: &CycleWitness) -> Result<CertificateReport> {
    let k = c.len();
    let mut a_sizes = vec![vec![0; k]; k];
    let mut weights = Vec::with_capacity(k);
    for j in 0..k {
        let d = GoodSequence::from_cycle(c, j, false);
        let sets = realizable_a_sets(g, &d)?;
        for (i, set) in sets.iter().enumerate() {
            a_sizes[i][j] = set.len();
        }
        weights.push(sequence_weight(&sets)?);
    }
    let total: BigRational = weights.iter().sum();
    let exact = (total * BigInt::from(2)).recip();
    Ok(CertificateReport {
        cycle: c.clone(),
        a_sizes,
        weights,
        u_size: u_set(g, c).len(),
        per_cycle_bound: exact.to_f64().unwrap_or(f64::INFINITY),
        per_cycle_bound_exact: exact,
    })
}

/// Maximum of the per-cycle bound over all `k`-cycles; `None` when `g`
/// has no `k`-cycle. Upper-bounds the number of `k`-cycles.
pub fn max_per_cycle_bound(g: &Graph, k: usize) -> Result<Option<BigRational>> {
    check_k(k)?;
    require_odd_girth(g, k)?;
    let mut best: Option<BigRational> = None;
    let mut failure = None;
    for_each_cycle(g, k, |path| {
        let c = CycleWitness::new(g, path.to_vec()).expect("enumerated cycles are valid");
        match per_cycle_bound_unchecked(g, &c) {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.per_cycle_bound_exact > *b) {
                    best = Some(r.per_cycle_bound_exact);
                }
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Sum of `w(D)` over every good sequence (both orientations, all rotations).
pub fn sum_of_good_weights(g: &Graph, k: usize) -> Result<BigRational> {
    check_k(k)?;
    if g.vertex_count() > MAX_GOOD_WEIGHT_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "good-sequence enumeration is limited to {MAX_GOOD_WEIGHT_VERTICES} vertices, got {}",
            g.vertex_count()
        )));
    }
    require_odd_girth(g, k)?;
    let mut total = BigRational::zero();
    let mut failure = None;
    for_each_cycle(g, k, |path| {
        let c = CycleWitness::new(g, path.to_vec()).expect("enumerated cycles are valid");
        for reversed in [false, true] {
            for j in 0..k {
                match good_sequence_weight(g, &GoodSequence::from_cycle(&c, j, reversed)) {
                    Ok(w) => total += w,
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// `U(C)`: vertices with exactly two neighbours on the cycle.
pub fn u_set(g: &Graph, c: &CycleWitness) -> VertexSet {
    let n = g.vertex_count();
    let on_cycle = c.vertex_set(n);
    VertexSet::from_vertices(
        n,
        (0..n).filter(|&w| g.neighbours(w).intersection_len(&on_cycle) == 2),
    )
}

/// Largest `|U(C)|/n` found among the examined `k`-cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct MReport {
    pub best_cycle: CycleWitness,
    pub u_size: usize,
    pub m_value: Ratio<u64>,
    pub cycles_examined: usize,
    /// All `k`-cycles were examined, so `m_value` is the true maximum.
    pub exhaustive: bool,
}

/// `M = max |U(C)|/n` over `k`-cycles, examining at most `budget` cycles in
/// canonical order. Ties go to the canonically first cycle.
pub fn m_value(g: &Graph, k: usize, budget: usize) -> Result<MReport> {
    check_k(k)?;
    require_odd_girth(g, k)?;
    let n = g.vertex_count();
    let mut best: Option<(usize, CycleWitness)> = None;
    let mut examined = 0;
    let complete = for_each_cycle(g, k, |path| {
        if examined == budget {
            return ControlFlow::Break(());
        }
        examined += 1;
        let c = CycleWitness::new(g, path.to_vec()).expect("enumerated cycles are valid");
        let size = u_set(g, &c).len();
        if best.as_ref().is_none_or(|(b, _)| size > *b) {
            best = Some((size, c));
        }
        if size == n {
            // Nothing can beat M = 1.
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let (u_size, best_cycle) = best.ok_or(Error::NoCycle(k))?;
    Ok(MReport {
        best_cycle,
        u_size,
        m_value: Ratio::new(u_size as u64, n as u64),
        cycles_examined: examined,
        exhaustive: complete || u_size == n,
    })
}

/// A vertex breaking property (⋆) for a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarViolation {
    pub vertex: Vertex,
    /// Cycle vertices at distance exactly two from `vertex`.
    pub at_distance_two: Vec<Vertex>,
    pub adjacent_pair: Option<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport {
    pub holds: bool,
    pub violations: Vec<StarViolation>,
}

/// Checks that every vertex has at most three cycle vertices at distance
/// exactly two, no two of them adjacent. Runs on any graph.
pub fn star_property_check(g: &Graph, c: &CycleWitness) -> StarReport {
    let n = g.vertex_count();
    let distances: Vec<Vec<Option<usize>>> = c.vertices().iter().map(|&v| g.bfs(v)).collect();
    let mut violations = Vec::new();
    for w in 0..n {
        let far: Vec<Vertex> = c
            .vertices()
            .iter()
            .zip(&distances)
            .filter(|(_, d)| d[w] == Some(2))
            .map(|(&v, _)| v)
            .collect();
        let adjacent_pair = far
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| far[i + 1..].iter().map(move |&b| (a, b)))
            .find(|&(a, b)| g.has_edge(a, b));
        if far.len() > 3 || adjacent_pair.is_some() {
            violations.push(StarViolation {
                vertex: w,
                at_distance_two: far,
                adjacent_pair,
            });
        }
    }
    StarReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// A vertex whose contribution exceeds its cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapViolation {
    pub vertex: Vertex,
    pub in_u: bool,
    /// Contribution in half units (A_1 memberships count 1, others 2).
    pub contribution_halves: u64,
    pub cap_halves: u64,
}

impl fmt::Display for CapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertex {} ({} U(C)) contributes {}/2 > cap {}/2",
            self.vertex,
            if self.in_u { "in" } else { "outside" },
            self.contribution_halves,
            self.cap_halves
        )
    }
}

/// Per-vertex accounting of `Σ_j (n_{1,j}/2 + Σ_{i≥2} n_{i,j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContributionAudit {
    pub cycle: CycleWitness,
    /// Contribution of every vertex, in half units.
    pub contributions_halves: Vec<u64>,
    pub u: VertexSet,
    pub total_halves: u64,
    /// `2 (n(k-2) + |U(C)|)`.
    pub bound_halves: u64,
}

impl ContributionAudit {
    pub fn contribution(&self, v: Vertex) -> Ratio<u64> {
        Ratio::new(self.contributions_halves[v], 2)
    }

    pub fn total(&self) -> Ratio<u64> {
        Ratio::new(self.total_halves, 2)
    }

    pub fn bound(&self) -> Ratio<u64> {
        Ratio::new(self.bound_halves, 2)
    }
}

/// Audits the contribution of every vertex to the sum bounded by
/// `n(k-2) + |U(C)|`: at most `k-1` for vertices in `U(C)`, at most `k-2`
/// otherwise. Any cap violation is returned as an error carrying every
/// offending vertex.
pub fn contribution_audit(g: &Graph, c: &CycleWitness) -> Result<ContributionAudit> {
    let k = c.len();
    check_k(k)?;
    require_odd_girth(g, k)?;
    let n = g.vertex_count();
    let mut halves = vec![0u64; n];
    for j in 0..k {
        let d = GoodSequence::from_cycle(c, j, false);
        let sets = realizable_a_sets(g, &d)?;
        for (i, set) in sets.iter().enumerate().skip(1) {
            let unit = if i == 1 { 1 } else { 2 };
            for w in set {
                halves[w] += unit;
            }
        }
    }
    let u = u_set(g, c);
    let violations: Vec<CapViolation> = (0..n)
        .filter_map(|w| {
            let in_u = u.contains(w);
            let cap = 2 * (if in_u { k - 1 } else { k - 2 }) as u64;
            (halves[w] > cap).then_some(CapViolation {
                vertex: w,
                in_u,
                contribution_halves: halves[w],
                cap_halves: cap,
            })
        })
        .collect();
    if !violations.is_empty() {
        return Err(Error::CapViolation(violations));
    }
    let total_halves = halves.iter().sum();
    let bound_halves = 2 * (n * (k - 2) + u.len()) as u64;
    if total_halves > bound_halves {
        return Err(Error::Verification(format!(
            "contribution total {total_halves}/2 exceeds n(k-2)+|U(C)| = {bound_halves}/2"
        )));
    }
    Ok(ContributionAudit {
        cycle: c.clone(),
        contributions_halves: halves,
        u,
        total_halves,
        bound_halves,
    })
}

/// `(1 - (1-M)/(k-1))^{k-1} n^k / k^k`.
pub fn lemma26_bound(n: usize, k: usize, m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "M must lie in [0, 1], got {m}"
        )));
    }
    let k1 = (k - 1) as f64;
    let factor = (1.0 - (1.0 - m) / k1).powi(k as i32 - 1);
    Ok(factor * (n as f64 / k as f64).powi(k as i32))
}

/// Everything the `certify` command reports.
#[derive(Clone, Debug, PartialEq)]
pub struct Certification {
    pub m: MReport,
    pub certificate: CertificateReport,
    pub lemma26_bound: f64,
    /// False when `M` came from a truncated search: a lower bound on `M`
    /// does not give an upper bound on the cycle count.
    pub bound_certified: bool,
}

pub fn certify(g: &Graph, k: usize, budget: usize) -> Result<Certification> {
    let m = m_value(g, k, budget)?;
    let certificate = per_cycle_bound_unchecked(g, &m.best_cycle)?;
    let ratio = *m.m_value.numer() as f64 / *m.m_value.denom() as f64;
    let bound = lemma26_bound(g.vertex_count(), k, ratio)?;
    Ok(Certification {
        bound_certified: m.exhaustive,
        lemma26_bound: bound,
        certificate,
        m,
    })
}
