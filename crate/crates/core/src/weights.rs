//! Weighted blow-ups of `C_{ℓ+2}` and the threshold function
//! `f(k, ℓ) = (k-ℓ) log((k-ℓ)/2) - k log(2k/(ℓ+2))`.
//!
//! Products of weights are evaluated in log-space: for `k` in the hundreds
//! the raw products underflow doubles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::{leading_coefficient, leading_coefficient_with_gradient};
use crate::error::{Error, Result};

/// Tolerance on `Σ w_i = 1` for floating-point weights.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("weight vector is empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weight {w} is not a nonnegative real"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self(weights))
    }

    pub fn balanced(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Weights as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactWeights(Vec<BigRational>);

impl ExactWeights {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidArgument("negative weight".into()));
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self(weights))
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn sum(&self) -> BigRational {
        self.0.iter().sum()
    }

    pub fn to_weight_vector(&self) -> WeightVector {
        WeightVector(
            self.0
                .iter()
                .map(|w| w.to_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_odd_pair(k: usize, ell: usize) -> Result<()> {
    if ell < 3 || ell.is_multiple_of(2) || k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "need odd k and odd ell >= 3 (k={k}, ell={ell})"
        )));
    }
    if k <= ell {
        return Err(Error::InvalidArgument(format!(
            "need k > ell (k={k}, ell={ell})"
        )));
    }
    Ok(())
}

/// `f(k, ℓ)` in natural logarithms; positive exactly when the optimal
/// unbalanced blow-up of `C_{ℓ+2}` beats the balanced one.
pub fn f_value(k: usize, ell: usize) -> Result<f64> {
    check_odd_pair(k, ell)?;
    let (k, ell) = (k as f64, ell as f64);
    Ok((k - ell) * ((k - ell) / 2.0).ln() - k * (2.0 * k / (ell + 2.0)).ln())
}

/// The maximizer of `w_0⋯w_{ℓ-1} (w_ℓ w_{ℓ+1})^{(k-ℓ)/2}`:
/// `1/k` on the first `ℓ` parts and `(k-ℓ)/(2k)` on the last two.
pub fn optimal_paper_weights(k: usize, ell: usize) -> Result<ExactWeights> {
    check_odd_pair(k, ell)?;
    let (ki, li) = (k as i64, ell as i64);
    let mut w = vec![ratio(1, ki); ell];
    w.push(ratio(ki - li, 2 * ki));
    w.push(ratio(ki - li, 2 * ki));
    ExactWeights::new(w)
}

/// `(ℓ-2)/(2ℓ(ℓ+2))` on the first `ℓ` parts and `1/4 + 1/(ℓ+2)` on the last two.
pub fn example_paper_weights(ell: usize) -> Result<ExactWeights> {
    if ell < 3 || ell.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "ell must be odd and at least 3, got {ell}"
        )));
    }
    let l = ell as i64;
    let mut w = vec![ratio(l - 2, 2 * l * (l + 2)); ell];
    let big = ratio(1, 4) + ratio(1, l + 2);
    w.push(big.clone());
    w.push(big);
    ExactWeights::new(w)
}

/// Outcome of comparing `w_0⋯w_{ℓ-1}(w_ℓ w_{ℓ+1})^{(k-ℓ)/2}` with `(2/(ℓ+2))^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub holds: bool,
    /// `log LHS - log RHS`; `-inf` when some weight is zero.
    pub log_margin: f64,
}

pub fn check_weight_inequality(w: &[f64], k: usize, ell: usize) -> Result<InequalityCheck> {
    check_odd_pair(k, ell)?;
    if w.len() != ell + 2 {
        return Err(Error::InvalidArgument(format!(
            "expected {} weights, got {}",
            ell + 2,
            w.len()
        )));
    }
    let lhs = if w.iter().any(|&x| x <= 0.0) {
        f64::NEG_INFINITY
    } else {
        let head: f64 = w[..ell].iter().map(|x| x.ln()).sum();
        head + (k - ell) as f64 / 2.0 * (w[ell].ln() + w[ell + 1].ln())
    };
    let rhs = k as f64 * (2.0 / (ell + 2) as f64).ln();
    let log_margin = lhs - rhs;
    Ok(InequalityCheck {
        holds: log_margin > 0.0,
        log_margin,
    })
}

/// Result of scanning odd `k` for the first positive `f(k, ℓ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub ell: usize,
    pub k_max: usize,
    /// Smallest odd `k` in `(ℓ, k_max]` with `f(k, ℓ) > 0`.
    pub k0: Option<usize>,
    pub f_values: Vec<(usize, f64)>,
    /// `⌈ℓ + 4 + 8/(ℓ-2)⌉`: beyond this `f` is increasing in `k`.
    pub monotone_from: usize,
    /// Every tabulated odd `k ≥ k0` has `f > 0`.
    pub positive_after_k0: bool,
    /// `(k0 - ℓ) log ℓ / ℓ`, the constant `C` in `k0 = ℓ + C ℓ / log ℓ`.
    pub empirical_constant: Option<f64>,
}

pub fn monotone_threshold(ell: usize) -> usize {
    // ℓ + 4 + 8/(ℓ-2), rounded up
    ell + 4 + 8usize.div_ceil(ell - 2)
}

pub fn k0_search(ell: usize, k_max: usize) -> Result<ThresholdReport> {
    if ell < 3 || ell.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "ell must be odd and at least 3, got {ell}"
        )));
    }
    let f_values: Vec<(usize, f64)> = (ell + 2..=k_max)
        .step_by(2)
        .map(|k| f_value(k, ell).map(|f| (k, f)))
        .collect::<Result<_>>()?;
    // f exactly zero counts as not positive.
    let k0 = f_values.iter().find(|(_, f)| *f > 0.0).map(|&(k, _)| k);
    let positive_after_k0 = k0.is_none_or(|k0| {
        f_values
            .iter()
            .filter(|(k, _)| *k >= k0)
            .all(|(_, f)| *f > 0.0)
    });
    let empirical_constant = k0.map(|k0| (k0 - ell) as f64 * (ell as f64).ln() / ell as f64);
    Ok(ThresholdReport {
        ell,
        k_max,
        k0,
        f_values,
        monotone_from: monotone_threshold(ell),
        positive_after_k0,
        empirical_constant,
    })
}

/// Smallest odd `ℓ` in `[3, ell_max]` for which `f(k, ℓ) > 0` at
/// `k = ℓ + ⌈2ℓ/log ℓ⌉` rounded up to odd.
pub fn empirical_ell0(ell_max: usize) -> Option<usize> {
    (3..=ell_max).step_by(2).find(|&ell| {
        let mut k = ell + (2.0 * ell as f64 / (ell as f64).ln()).ceil() as usize;
        if k.is_multiple_of(2) {
            k += 1;
        }
        f_value(k, ell).is_ok_and(|f| f > 0.0)
    })
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Settings for [`optimize_coefficient`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    /// Projected-gradient norm below which a run counts as converged.
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            iterations: 5000,
            restarts: 8,
            seed: 0,
            initial_step: 0.05,
            tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult {
    pub weights: WeightVector,
    pub coefficient: f64,
    pub balanced_coefficient: f64,
    /// Index of the winning start; 0 is the balanced start.
    pub best_start: usize,
    pub converged: bool,
    /// Norm of the projected gradient step of `log c` at the returned point.
    pub gradient_norm: f64,
    pub iterations_used: usize,
}

/// Gradient of `log c(w)`; `None` where `c(w) = 0`.
fn log_objective(m: usize, w: &[f64], k: usize) -> Result<Option<(f64, Vec<f64>)>> {
    let (c, grad) = leading_coefficient_with_gradient(m, w, k)?;
    if c <= 0.0 || !c.is_finite() {
        return Ok(None);
    }
    Ok(Some((c.ln(), grad.into_iter().map(|g| g / c).collect())))
}

fn projected_step_norm(w: &[f64], grad: &[f64]) -> f64 {
    let moved: Vec<f64> = w.iter().zip(grad).map(|(x, g)| x + g).collect();
    project_to_simplex(&moved)
        .iter()
        .zip(w)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

struct RunOutcome {
    w: Vec<f64>,
    log_value: f64,
    converged: bool,
    gradient_norm: f64,
    iterations: usize,
}

/// Projected gradient ascent of `log c` with backtracking.
fn ascend(m: usize, k: usize, start: Vec<f64>, cfg: &OptimizerConfig) -> Result<RunOutcome> {
    let mut w = start;
    let Some((mut value, mut grad)) = log_objective(m, &w, k)? else {
        return Ok(RunOutcome {
            w,
            log_value: f64::NEG_INFINITY,
            converged: false,
            gradient_norm: f64::INFINITY,
            iterations: 0,
        });
    };
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    for _ in 0..cfg.iterations {
        iterations += 1;
        if projected_step_norm(&w, &grad) < cfg.tolerance {
            break;
        }
        let mut accepted = false;
        while step > 1e-16 {
            let trial: Vec<f64> = w.iter().zip(&grad).map(|(x, g)| x + step * g).collect();
            let trial = project_to_simplex(&trial);
            if trial == w {
                break;
            }
            if let Some((v, g)) = log_objective(m, &trial, k)? {
                if v >= value {
                    w = trial;
                    value = v;
                    grad = g;
                    accepted = true;
                    step *= 1.5;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let gradient_norm = projected_step_norm(&w, &grad);
    Ok(RunOutcome {
        w,
        log_value: value,
        converged: gradient_norm < cfg.tolerance,
        gradient_norm,
        iterations,
    })
}

/// Maximizes the leading coefficient `c(w)` over the simplex from the
/// balanced start plus `restarts` seeded random starts.
pub fn optimize_coefficient(
    m: usize,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if m < 3 || k < m || k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "need m >= 3 and odd k >= m (m={m}, k={k})"
        )));
    }
    let balanced = vec![1.0 / m as f64; m];
    let balanced_coefficient = leading_coefficient(m, &balanced, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = vec![balanced];
    for _ in 0..cfg.restarts {
        // Uniform point on the simplex via normalized exponentials.
        let raw: Vec<f64> = (0..m)
            .map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|x| x / total).collect());
    }

    let mut best: Option<(usize, RunOutcome)> = None;
    for (idx, start) in starts.into_iter().enumerate() {
        let run = ascend(m, k, start, cfg)?;
        // A restart must beat the incumbent by more than rounding noise.
        let better = match &best {
            None => true,
            Some((_, b)) => run.log_value > b.log_value + 1e-12,
        };
        if better {
            best = Some((idx, run));
        }
    }
    let (best_start, run) = best.expect("at least the balanced start runs");
    let coefficient = leading_coefficient(m, &run.w, k)?;
    let sum: f64 = run.w.iter().sum();
    let weights = WeightVector(run.w.iter().map(|x| x / sum).collect());
    Ok(OptimizationResult {
        weights,
        coefficient,
        balanced_coefficient,
        best_start,
        converged: run.converged,
        gradient_norm: run.gradient_norm,
        iterations_used: run.iterations,
    })
}

/// Exact-rational sum check used by tests and reports.
pub fn sums_to_one(w: &ExactWeights) -> bool {
    w.sum().is_one()
}

/// `w_ℓ w_{ℓ+1} > (2/(ℓ+2))^2`, evaluated exactly.
pub fn tail_product_exceeds_balanced(w: &ExactWeights, ell: usize) -> bool {
    let s = w.as_slice();
    if s.len() != ell + 2 {
        return false;
    }
    let bound = ratio(2, ell as i64 + 2);
    &s[ell] * &s[ell + 1] > &bound * &bound
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_examples() {
        let f = f_value(5, 3).unwrap();
        assert!((f + 5.0 * 2f64.ln()).abs() < 1e-12);
        // k - ℓ = 2 kills the first term.
        for ell in [3usize, 7, 21] {
            let f = f_value(ell + 2, ell).unwrap();
            let second = (ell + 2) as f64 * (2.0 * (ell + 2) as f64 / (ell + 2) as f64).ln();
            assert!((f + second).abs() < 1e-9);
        }
        assert!(f_value(3, 3).is_err());
        assert!(f_value(4, 3).is_err());
    }

    #[test]
    fn optimal_weights_examples() {
        let w = optimal_paper_weights(7, 3).unwrap();
        let expected: Vec<BigRational> = [(1, 7), (1, 7), (1, 7), (2, 7), (2, 7)]
            .iter()
            .map(|&(a, b)| ratio(a, b))
            .collect();
        assert_eq!(w.as_slice(), expected.as_slice());
        for (k, ell) in [(9, 3), (101, 7), (1001, 999)] {
            assert!(sums_to_one(&optimal_paper_weights(k, ell).unwrap()));
        }
        let far = optimal_paper_weights(100_001, 3).unwrap();
        assert!((far.as_slice()[3].to_f64().unwrap() - 0.5).abs() < 1e-4);
    }

    #[test]
    fn example_weights() {
        let w = example_paper_weights(3).unwrap();
        let expected: Vec<BigRational> = [(1, 30), (1, 30), (1, 30), (9, 20), (9, 20)]
            .iter()
            .map(|&(a, b)| ratio(a, b))
            .collect();
        assert_eq!(w.as_slice(), expected.as_slice());
        assert!(tail_product_exceeds_balanced(&w, 3));
        assert!(example_paper_weights(4).is_err());
    }

    #[test]
    fn inequality_examples() {
        let balanced = vec![0.2; 5];
        let check = check_weight_inequality(&balanced, 5, 3).unwrap();
        assert!(!check.holds);
        // LHS = 5^-5, RHS = (2/5)^5, margin = -5 log 2.
        assert!((check.log_margin + 5.0 * 2f64.ln()).abs() < 1e-12);

        let zero = [0.0, 0.25, 0.25, 0.25, 0.25];
        let check = check_weight_inequality(&zero, 7, 3).unwrap();
        assert!(!check.holds);
        assert_eq!(check.log_margin, f64::NEG_INFINITY);

        let w = optimal_paper_weights(101, 3).unwrap().to_weight_vector();
        let check = check_weight_inequality(w.as_slice(), 101, 3).unwrap();
        assert!((check.log_margin - f_value(101, 3).unwrap()).abs() < 1e-9);
        assert!(check.holds);
    }

    #[test]
    fn k0_brackets() {
        assert!(f_value(25, 3).unwrap() < 0.0);
        assert!(f_value(101, 3).unwrap() > 0.0);
        let report = k0_search(3, 201).unwrap();
        let k0 = report.k0.unwrap();
        assert!(k0 > 25 && k0 <= 101);
        assert!(f_value(k0 - 2, 3).unwrap() <= 0.0);
        assert!(report.positive_after_k0);
        assert_eq!(report.monotone_from, 15);
        assert_eq!(k0_search(3, 25).unwrap().k0, None);
    }

    #[test]
    fn simplex_projection() {
        let p = project_to_simplex(&[0.5, 0.5, 0.5]);
        for x in &p {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
        let p = project_to_simplex(&[2.0, 0.0, -1.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = project_to_simplex(&[0.2, 0.3, 0.5]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![-0.5, 1.5]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }
}
