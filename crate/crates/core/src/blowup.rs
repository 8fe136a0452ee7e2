//! Blow-ups of cycles and analytic cycle counts inside them.
//!
//! A `k`-cycle in a blow-up of `C_m` projects onto a closed `k`-walk in
//! `C_m`. Conversely a rooted, oriented closed walk with visit profile
//! `(c_0, …, c_{m-1})` lifts to exactly `Π (n_i)_{c_i}` rooted, oriented
//! cycles (falling factorials: distinct vertices per part). Every cycle has
//! `2k` rooted orientations, so the cycle count is the weighted walk total
//! divided by `2k`.

use std::collections::HashMap;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Largest cycle length accepted by [`exact_blowup_cycle_count`].
pub const MAX_WALK_LENGTH: usize = 25;
/// Largest base cycle accepted by [`exact_blowup_cycle_count`].
pub const MAX_DP_BASE: usize = 13;
/// Largest base cycle accepted by [`leading_coefficient`].
pub const MAX_COEFF_BASE: usize = 64;

/// A blow-up of the cycle `C_m` with the given part sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupSpec {
    base_length: usize,
    part_sizes: Vec<usize>,
}

impl BlowupSpec {
    pub fn new(base_length: usize, part_sizes: Vec<usize>) -> Result<Self> {
        if base_length < 3 {
            return Err(Error::InvalidArgument(format!(
                "base cycle length must be at least 3, got {base_length}"
            )));
        }
        if part_sizes.len() != base_length {
            return Err(Error::InvalidArgument(format!(
                "expected {base_length} part sizes, got {}",
                part_sizes.len()
            )));
        }
        Ok(Self {
            base_length,
            part_sizes,
        })
    }

    /// Balanced blow-up of `C_m` on `n` vertices; the larger parts come first.
    pub fn balanced(base_length: usize, n: usize) -> Result<Self> {
        if base_length < 3 {
            return Self::new(base_length, Vec::new());
        }
        let (q, r) = (n / base_length, n % base_length);
        Self::new(
            base_length,
            (0..base_length).map(|i| q + usize::from(i < r)).collect(),
        )
    }

    pub fn base_length(&self) -> usize {
        self.base_length
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn total(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    pub fn is_balanced(&self) -> bool {
        let max = self.part_sizes.iter().max().copied().unwrap_or(0);
        let min = self.part_sizes.iter().min().copied().unwrap_or(0);
        max - min <= 1
    }

    /// Contiguous vertex range occupied by part `i` in [`materialize`](Self::materialize).
    pub fn part_range(&self, i: usize) -> Range<Vertex> {
        let start: usize = self.part_sizes[..i].iter().sum();
        start..start + self.part_sizes[i]
    }

    /// Part label of every vertex of the materialized graph.
    pub fn labels(&self) -> Vec<usize> {
        self.part_sizes
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect()
    }

    /// Independent parts in index order, complete bipartite graphs between
    /// cyclically adjacent parts.
    pub fn materialize(&self) -> Graph {
        let m = self.base_length;
        let mut edges = Vec::new();
        for i in 0..m {
            let j = (i + 1) % m;
            for u in self.part_range(i) {
                for v in self.part_range(j) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.total(), &edges).expect("blow-up edges are valid")
    }
}

/// `n (n-1) … (n-c+1)`.
pub fn falling_factorial(n: usize, c: usize) -> BigUint {
    if c > n {
        return BigUint::zero();
    }
    (n - c + 1..=n).fold(BigUint::one(), |acc, x| acc * x)
}

/// Rooted, oriented closed `k`-walks in `C_m` grouped by visit profile.
/// Profiles that visit some part more often than its size are dropped.
pub fn walk_profiles(spec: &BlowupSpec, k: usize) -> HashMap<Vec<u8>, u64> {
    let m = spec.base_length;
    let caps: Vec<usize> = spec.part_sizes.iter().map(|&s| s.min(k)).collect();
    let mut profiles: HashMap<Vec<u8>, u64> = HashMap::new();
    for start in 0..m {
        if caps[start] == 0 {
            continue;
        }
        let mut visits = vec![0u8; m];
        visits[start] = 1;
        let mut layer: HashMap<(usize, Vec<u8>), u64> = HashMap::from([((start, visits), 1)]);
        for _ in 1..k {
            let mut next: HashMap<(usize, Vec<u8>), u64> = HashMap::with_capacity(layer.len() * 2);
            for ((cur, visits), count) in layer {
                for step in [1, m - 1] {
                    let to = (cur + step) % m;
                    if (visits[to] as usize) < caps[to] {
                        let mut v = visits.clone();
                        v[to] += 1;
                        *next.entry((to, v)).or_insert(0) += count;
                    }
                }
            }
            layer = next;
        }
        for ((cur, visits), count) in layer {
            if cur == (start + 1) % m || cur == (start + m - 1) % m {
                *profiles.entry(visits).or_insert(0) += count;
            }
        }
    }
    profiles
}

/// Exact number of `k`-cycles in the blow-up, computed without
/// materializing it.
pub fn exact_blowup_cycle_count(spec: &BlowupSpec, k: usize) -> Result<BigUint> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be odd and at least 3, got {k}"
        )));
    }
    if k > MAX_WALK_LENGTH || spec.base_length > MAX_DP_BASE {
        return Err(Error::ResourceLimit(format!(
            "walk-profile DP supports k <= {MAX_WALK_LENGTH} and base <= {MAX_DP_BASE} (got k={k}, base={})",
            spec.base_length
        )));
    }
    let mut total = BigUint::zero();
    for (profile, walks) in walk_profiles(spec, k) {
        let lifts = profile
            .iter()
            .zip(&spec.part_sizes)
            .fold(BigUint::one(), |acc, (&c, &n)| {
                acc * falling_factorial(n, c as usize)
            });
        total += lifts * walks;
    }
    let orientations = BigUint::from(2 * k);
    if !(&total % &orientations).is_zero() {
        return Err(Error::Internal(format!(
            "rooted lift total {total} is not divisible by 2k = {}",
            2 * k
        )));
    }
    Ok(total / orientations)
}

/// Dense row-major square matrix, enough for small trace computations.
#[derive(Clone, Debug, PartialEq)]
struct Square {
    m: usize,
    data: Vec<f64>,
}

impl Square {
    fn identity(m: usize) -> Self {
        let mut data = vec![0.0; m * m];
        for i in 0..m {
            data[i * m + i] = 1.0;
        }
        Self { m, data }
    }

    fn mul(&self, other: &Self) -> Self {
        let m = self.m;
        let mut data = vec![0.0; m * m];
        for i in 0..m {
            for l in 0..m {
                let a = self.data[i * m + l];
                if a == 0.0 {
                    continue;
                }
                for j in 0..m {
                    data[i * m + j] += a * other.data[l * m + j];
                }
            }
        }
        Self { m, data }
    }

    fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn trace(&self) -> f64 {
        (0..self.m).map(|i| self.data[i * self.m + i]).sum()
    }
}

/// `D_w A` for the cycle `C_m`: row `i` has `w_i` at columns `i ± 1`.
fn weighted_cycle(w: &[f64]) -> Square {
    let m = w.len();
    let mut data = vec![0.0; m * m];
    for i in 0..m {
        data[i * m + (i + 1) % m] += w[i];
        data[i * m + (i + m - 1) % m] += w[i];
    }
    Square { m, data }
}

fn check_coefficient_input(m: usize, w: &[f64], k: usize) -> Result<()> {
    if !(3..=MAX_COEFF_BASE).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "base length must be in 3..={MAX_COEFF_BASE}, got {m}"
        )));
    }
    if w.len() != m {
        return Err(Error::InvalidArgument(format!(
            "expected {m} weights, got {}",
            w.len()
        )));
    }
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be at least 3, got {k}"
        )));
    }
    Ok(())
}

/// `c(w) = tr((D_w A)^k) / (2k)`: the limit of (number of `k`-cycles) / n^k
/// in blow-ups of `C_m` with part fractions `w`.
pub fn leading_coefficient(m: usize, w: &[f64], k: usize) -> Result<f64> {
    check_coefficient_input(m, w, k)?;
    Ok(weighted_cycle(w).pow(k).trace() / (2 * k) as f64)
}

/// `c(w)` together with its gradient `∂c/∂w_i = (A (D_w A)^{k-1})_{ii} / 2`.
pub fn leading_coefficient_with_gradient(m: usize, w: &[f64], k: usize) -> Result<(f64, Vec<f64>)> {
    check_coefficient_input(m, w, k)?;
    let base = weighted_cycle(w);
    let power = base.pow(k - 1);
    let value = power.mul(&base).trace() / (2 * k) as f64;
    // (A P)_{ii} = P_{i+1,i} + P_{i-1,i}
    let grad = (0..m)
        .map(|i| {
            let up = (i + 1) % m;
            let down = (i + m - 1) % m;
            (power.data[up * m + i] + power.data[down * m + i]) / 2.0
        })
        .collect();
    Ok((value, grad))
}

/// Lower bound on `k`-cycles in a blow-up of `C_{ℓ+2}` with part fractions
/// `w`, counting only cycles with one vertex in each of the first `ℓ` parts
/// and `(k-ℓ)/2` in each of the last two: `w_0⋯w_{ℓ-1} (w_ℓ w_{ℓ+1})^{(k-ℓ)/2} n^k`.
pub fn lower_bound_count(w: &[f64], ell: usize, k: usize, n: f64) -> Result<f64> {
    if w.len() != ell + 2 {
        return Err(Error::InvalidArgument(format!(
            "expected {} weights, got {}",
            ell + 2,
            w.len()
        )));
    }
    if k < ell || !(k - ell).is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "k - ell must be even and nonnegative (k={k}, ell={ell})"
        )));
    }
    let head: f64 = w[..ell].iter().product();
    let tail = (w[ell] * w[ell + 1]).powi(((k - ell) / 2) as i32);
    Ok(head * tail * n.powi(k as i32))
}

/// Walk bound for the balanced blow-up of `C_{ℓ+2}`:
/// `(n/(ℓ+2) + 1) (2n/(ℓ+2) + 2)^{k-1}`.
pub fn walk_upper_bound(n: f64, ell: usize, k: usize) -> f64 {
    let part = n / (ell + 2) as f64;
    (part + 1.0) * (2.0 * part + 2.0).powi(k as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::count_cycles;

    fn spec(m: usize, parts: &[usize]) -> BlowupSpec {
        BlowupSpec::new(m, parts.to_vec()).unwrap()
    }

    fn exact(m: usize, parts: &[usize], k: usize) -> u64 {
        exact_blowup_cycle_count(&spec(m, parts), k)
            .unwrap()
            .try_into()
            .unwrap()
    }

    #[test]
    fn materialize_examples() {
        assert_eq!(spec(5, &[1; 5]).materialize(), Graph::cycle(5));
        let g = spec(5, &[2, 1, 1, 1, 1]).materialize();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
        let g = spec(7, &[2; 7]).materialize();
        assert_eq!((g.vertex_count(), g.edge_count()), (14, 28));
    }

    #[test]
    fn parts_are_independent_and_contiguous() {
        let s = spec(5, &[3, 0, 2, 1, 4]);
        let g = s.materialize();
        for i in 0..5 {
            let part = crate::VertexSet::from_vertices(g.vertex_count(), s.part_range(i));
            assert!(g.is_independent(&part));
        }
        assert_eq!(s.labels(), vec![0, 0, 0, 2, 2, 3, 4, 4, 4, 4]);
    }

    #[test]
    fn exact_count_examples() {
        assert_eq!(exact(5, &[2; 5], 5), 32);
        assert_eq!(exact(5, &[2, 1, 1, 1, 1], 5), 2);
        assert_eq!(exact(7, &[1; 7], 9), 0);
        // Brute-force oracle on the 7-vertex graph.
        let g = spec(5, &[2, 2, 1, 1, 1]).materialize();
        assert_eq!(count_cycles(&g, 7).unwrap(), BigUint::from(4u32));
        assert_eq!(exact(5, &[2, 2, 1, 1, 1], 7), 4);
    }

    #[test]
    fn exact_count_rejects_even_and_oversized() {
        assert!(matches!(
            exact_blowup_cycle_count(&spec(5, &[1; 5]), 6),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            exact_blowup_cycle_count(&spec(5, &[1; 5]), 27),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            exact_blowup_cycle_count(&spec(15, &[1; 15]), 15),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn balanced_spec() {
        assert_eq!(
            BlowupSpec::balanced(7, 9).unwrap().part_sizes(),
            &[2, 2, 1, 1, 1, 1, 1]
        );
        assert!(BlowupSpec::balanced(7, 9).unwrap().is_balanced());
        assert!(!spec(5, &[3, 1, 1, 1, 1]).is_balanced());
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 2), BigUint::from(20u32));
        assert_eq!(falling_factorial(3, 4), BigUint::zero());
        assert_eq!(falling_factorial(4, 0), BigUint::one());
    }

    #[test]
    fn coefficient_examples() {
        for k in [5usize, 7, 9] {
            let w = vec![1.0 / k as f64; k];
            let c = leading_coefficient(k, &w, k).unwrap();
            let expected = (k as f64).powi(-(k as i32));
            assert!(
                (c - expected).abs() <= 1e-12 * expected,
                "k={k}: {c} vs {expected}"
            );
        }
        let c = leading_coefficient(5, &[1.0, 0.0, 0.0, 0.0, 0.0], 7).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn coefficient_matches_exact_count_asymptotically() {
        let w = vec![0.2; 5];
        let c = leading_coefficient(5, &w, 7).unwrap();
        let t = 200usize;
        let count = exact_blowup_cycle_count(&spec(5, &[t; 5]), 7).unwrap();
        let ratio = count.to_string().parse::<f64>().unwrap() / ((5 * t) as f64).powi(7);
        assert!(
            (ratio - c).abs() <= 0.05 * c,
            "ratio {ratio} vs coefficient {c}"
        );
    }

    #[test]
    fn gradient_returns_same_value() {
        let w = [0.1, 0.3, 0.2, 0.25, 0.15];
        let (v, g) = leading_coefficient_with_gradient(5, &w, 9).unwrap();
        assert_eq!(g.len(), 5);
        let direct = leading_coefficient(5, &w, 9).unwrap();
        assert!((v - direct).abs() <= 1e-15 * direct.abs().max(1e-300));
    }

    #[test]
    fn bound_examples() {
        let lb = lower_bound_count(&[0.2; 5], 3, 5, 5.0).unwrap();
        assert!((lb - 1.0).abs() < 1e-12);
        let w = [1.0 / 30.0, 1.0 / 30.0, 1.0 / 30.0, 0.45, 0.45];
        let lb = lower_bound_count(&w, 3, 7, 1.0).unwrap();
        let expected = (1.0f64 / 30.0).powi(3) * (81.0f64 / 400.0).powi(2);
        assert!((lb - expected).abs() <= 1e-15 * expected);
        assert_eq!(
            lower_bound_count(&[0.0, 0.25, 0.25, 0.25, 0.25], 3, 7, 10.0).unwrap(),
            0.0
        );
        assert!(lower_bound_count(&[0.25; 4], 3, 7, 1.0).is_err());

        assert_eq!(walk_upper_bound(25.0, 3, 7), 17_915_904.0);
        assert_eq!(walk_upper_bound(0.0, 3, 7), 64.0);
        let g = BlowupSpec::balanced(5, 25).unwrap().materialize();
        let c7: f64 = count_cycles(&g, 7).unwrap().to_string().parse().unwrap();
        assert!(walk_upper_bound(25.0, 3, 7) > c7);
    }
}
