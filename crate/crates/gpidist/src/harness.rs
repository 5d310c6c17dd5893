//! Sweep tables for the bound-comparison figures and a Monte-Carlo check
//! that measured distances never exceed the composition bounds.
//!
//! The sweeps evaluate every bound on the equal-error list `[eps; m]` for
//! `m = 1..=m_max`, incrementally, so ten-thousand-row tables cost linear
//! time. The Monte-Carlo harness draws Haar-random unitaries, perturbs each
//! by a known GPI distance, composes both sides by brute-force matrix
//! arithmetic, and counts bound violations (which the composition bounds
//! guarantee must be zero, up to a 1e-10 float slack).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::compose::{
    mult_bound_approx1, mult_bound_approx2, mult_bound_exact, sum_bound, tensor_bound,
    ComposeError,
};
use crate::distance::{dist_gpi, DistanceError};
use crate::matrix::{perturb_unitary, random_unitary, CMatrix, MatrixError, Unitary};

/// Errors from the sweep and validation drivers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    /// A per-gate error was outside `[0, 1)` (sweeps require `(0, 1)`).
    #[error("eps value {value} out of range")]
    EpsRange {
        /// The offending value.
        value: f64,
    },
    /// A sweep or trial length was zero.
    #[error("length must be at least 1")]
    ZeroLength,
    /// The error list does not cover the declared factor count.
    #[error("eps_list has {eps} entries but m = {m}")]
    LengthMismatch {
        /// Entries supplied.
        eps: usize,
        /// Factors declared.
        m: u64,
    },
    /// Brute-force composition would exceed the matrix size cap.
    #[error("composed dimension {dim} exceeds the brute-force cap {max}")]
    DimTooLarge {
        /// Requested dimension.
        dim: u64,
        /// Supported maximum.
        max: u64,
    },
    /// Product trials cap the factor width.
    #[error("product trials support n_qubits <= {max}, got {n_qubits}")]
    TooManyQubits {
        /// Requested width.
        n_qubits: u32,
        /// Supported maximum.
        max: u32,
    },
    /// Product trials cap the factor count.
    #[error("product trials support m <= {max}, got {m}")]
    TooManyFactors {
        /// Requested count.
        m: u64,
        /// Supported maximum.
        max: u64,
    },
    /// The trial count was zero.
    #[error("trial count must be at least 1")]
    ZeroTrials,
    /// A matrix operation failed.
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    /// A bound evaluation failed.
    #[error(transparent)]
    Compose(#[from] ComposeError),
    /// A distance evaluation failed.
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// Equal-error sweep settings: every factor gets the same `eps` and the
/// composition length runs from 1 to `m_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// Common per-factor error, in `(0, 1)`.
    pub eps: f64,
    /// Longest composition evaluated.
    pub m_max: u64,
}

fn check_sweep(cfg: &SweepConfig) -> Result<(), HarnessError> {
    if !cfg.eps.is_finite() || cfg.eps <= 0.0 || cfg.eps >= 1.0 {
        return Err(HarnessError::EpsRange { value: cfg.eps });
    }
    if cfg.m_max == 0 {
        return Err(HarnessError::ZeroLength);
    }
    Ok(())
}

/// One row of the product-bound comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProductRow {
    /// Composition length.
    pub m: u64,
    /// Iterated pair bound.
    pub exact: f64,
    /// Prefix-sum approximation.
    pub approx1: f64,
    /// Raw error sum.
    pub sum: f64,
}

/// Incremental state of the iterated pair bound at a fixed per-step error.
struct ExactState {
    eps: f64,
    b: f64,
}

impl ExactState {
    fn new(eps: f64) -> Self {
        Self { eps, b: eps }
    }

    fn value(&self) -> f64 {
        self.b
    }

    fn step(&mut self) {
        self.b = crate::compose::pair_step(self.b, self.eps);
    }
}

/// Incremental state of the prefix-sum approximation: the radicand gains
/// `eps^2 + 2 eps P sqrt(max(0, 1 - eps^2 - P^2))` per step, where `P` is
/// the error mass before the step.
struct Approx1State {
    eps: f64,
    radicand: f64,
    prefix: f64,
}

impl Approx1State {
    fn new(eps: f64) -> Self {
        Self {
            eps,
            radicand: eps * eps,
            prefix: eps,
        }
    }

    fn value(&self) -> f64 {
        self.radicand.max(0.0).sqrt().min(1.0)
    }

    fn step(&mut self) {
        let e = self.eps;
        let p = self.prefix;
        self.radicand += e * e + 2.0 * e * p * (1.0 - e * e - p * p).max(0.0).sqrt();
        self.prefix += e;
    }
}

/// Tabulates the exact fold, the prefix-sum approximation, and the raw sum
/// on `[eps; m]` for `m = 1..=m_max`.
pub fn sweep_product(cfg: &SweepConfig) -> Result<Vec<ProductRow>, HarnessError> {
    check_sweep(cfg)?;
    let mut exact = ExactState::new(cfg.eps);
    let mut approx1 = Approx1State::new(cfg.eps);
    let mut rows = Vec::with_capacity(cfg.m_max as usize);
    for m in 1..=cfg.m_max {
        if m > 1 {
            exact.step();
            approx1.step();
        }
        rows.push(ProductRow {
            m,
            exact: exact.value(),
            approx1: approx1.value(),
            sum: m as f64 * cfg.eps,
        });
    }
    Ok(rows)
}

/// One row of the scaled-tensor-bound comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Approx2Row {
    /// Composition length.
    pub m: u64,
    /// Iterated pair bound.
    pub exact: f64,
    /// Scaled tensor bound `min{1, c * tensor}`.
    pub approx2: f64,
    /// `exact - approx2` (negative where the scaled bound overshoots).
    pub difference: f64,
    /// Raw error sum.
    pub sum: f64,
}

/// Tabulates the exact fold against the scaled tensor bound with constant
/// `c` on `[eps; m]` for `m = 1..=m_max`.
pub fn sweep_approx2(cfg: &SweepConfig, c: f64) -> Result<Vec<Approx2Row>, HarnessError> {
    check_sweep(cfg)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(ComposeError::BadC { c }.into());
    }
    let mut exact = ExactState::new(cfg.eps);
    let mut complement = 0.0_f64;
    let mut rows = Vec::with_capacity(cfg.m_max as usize);
    for m in 1..=cfg.m_max {
        if m > 1 {
            exact.step();
        }
        complement += (1.0 - complement) * cfg.eps * cfg.eps;
        let approx2 = (c * complement.min(1.0).sqrt()).min(1.0);
        let e = exact.value();
        rows.push(Approx2Row {
            m,
            exact: e,
            approx2,
            difference: e - approx2,
            sum: m as f64 * cfg.eps,
        });
    }
    Ok(rows)
}

/// One row of the tensor-bound table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TensorRow {
    /// Factor count.
    pub m: u64,
    /// Tensor-product bound.
    pub tensor: f64,
    /// Raw error sum.
    pub sum: f64,
}

/// Tabulates the tensor bound and the raw sum on `[eps; m]` for
/// `m = 1..=m_max`.
pub fn sweep_tensor(cfg: &SweepConfig) -> Result<Vec<TensorRow>, HarnessError> {
    check_sweep(cfg)?;
    let mut complement = 0.0_f64;
    let mut rows = Vec::with_capacity(cfg.m_max as usize);
    for m in 1..=cfg.m_max {
        complement += (1.0 - complement) * cfg.eps * cfg.eps;
        rows.push(TensorRow {
            m,
            tensor: complement.min(1.0).sqrt(),
            sum: m as f64 * cfg.eps,
        });
    }
    Ok(rows)
}

/// How the trial unitaries combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CompositionKind {
    /// Operator product of `m` factors on the same `n_qubits` register.
    Product,
    /// Tensor product of `m` factors of `n_qubits` each.
    Tensor,
}

/// Monte-Carlo validation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateConfig {
    /// Qubits per factor.
    pub n_qubits: u32,
    /// Factor count; `eps_list` must have exactly this many entries.
    pub m: u64,
    /// Per-factor perturbation distances, each in `[0, 1)`.
    pub eps_list: Vec<f64>,
    /// Number of independent trials.
    pub trials: u64,
    /// Master seed; every trial derives its own stream from it.
    pub seed: u64,
    /// Product or tensor composition.
    pub kind: CompositionKind,
}

/// One validated trial.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrialRecord {
    /// Trial index, also the seed-derivation index.
    pub trial_id: u64,
    /// Qubits per factor.
    pub n_qubits: u32,
    /// Factor count.
    pub m: u64,
    /// Perturbation distances used.
    pub eps_list: Vec<f64>,
    /// Brute-force GPI distance between the composed sides.
    pub measured_dp: f64,
    /// Every applicable bound on `eps_list`, keyed by method name.
    pub bound_values: BTreeMap<String, f64>,
    /// True when the measured distance beat the exact (or tensor) bound
    /// by more than 1e-10.
    pub violation: bool,
}

/// Aggregated validation outcome.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ValidateOutcome {
    /// Per-trial records, ordered by trial id.
    pub records: Vec<TrialRecord>,
    /// How many trials violated their bound.
    pub violations: u64,
    /// Largest measured/bound ratio seen (0 when every bound was 0).
    pub max_ratio: f64,
}

const BRUTE_FORCE_DIM_CAP: u64 = 32;
const PRODUCT_MAX_QUBITS: u32 = 3;
const PRODUCT_MAX_FACTORS: u64 = 10;
const VIOLATION_SLACK: f64 = 1e-10;

/// Deterministic per-index seed stream: a splitmix-style finalizer over the
/// master seed and the index, so trials can run in any order (or in
/// parallel) and still see identical randomness.
pub(crate) fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn check_validate(cfg: &ValidateConfig) -> Result<(), HarnessError> {
    if cfg.m == 0 {
        return Err(HarnessError::ZeroLength);
    }
    if cfg.trials == 0 {
        return Err(HarnessError::ZeroTrials);
    }
    if cfg.eps_list.len() as u64 != cfg.m {
        return Err(HarnessError::LengthMismatch {
            eps: cfg.eps_list.len(),
            m: cfg.m,
        });
    }
    for &e in &cfg.eps_list {
        if !(0.0..1.0).contains(&e) || !e.is_finite() {
            return Err(HarnessError::EpsRange { value: e });
        }
    }
    match cfg.kind {
        CompositionKind::Product => {
            if cfg.n_qubits > PRODUCT_MAX_QUBITS {
                return Err(HarnessError::TooManyQubits {
                    n_qubits: cfg.n_qubits,
                    max: PRODUCT_MAX_QUBITS,
                });
            }
            if cfg.m > PRODUCT_MAX_FACTORS {
                return Err(HarnessError::TooManyFactors {
                    m: cfg.m,
                    max: PRODUCT_MAX_FACTORS,
                });
            }
        }
        CompositionKind::Tensor => {
            let total_qubits = u64::from(cfg.n_qubits) * cfg.m;
            if total_qubits >= 64 || (1u64 << total_qubits) > BRUTE_FORCE_DIM_CAP {
                return Err(HarnessError::DimTooLarge {
                    dim: 1u64.checked_shl(total_qubits as u32).unwrap_or(u64::MAX),
                    max: BRUTE_FORCE_DIM_CAP,
                });
            }
        }
    }
    Ok(())
}

fn compose_product(mats: &[CMatrix]) -> Result<CMatrix, MatrixError> {
    let mut acc = mats[0].clone();
    for m in &mats[1..] {
        acc = m.matmul(&acc)?;
    }
    Ok(acc)
}

fn compose_tensor(mats: &[CMatrix]) -> CMatrix {
    let mut acc = mats[0].clone();
    for m in &mats[1..] {
        acc = acc.kron(m);
    }
    acc
}

/// Runs the Monte-Carlo soundness check: per trial, draws Haar-random
/// ideals `V_i`, perturbs each to `U_i` at GPI distance `eps_list[i]`,
/// composes both sides per `cfg.kind`, measures the composed GPI distance,
/// and compares it against every applicable bound.
///
/// The exact (product) or tensor bound defines a violation; the others are
/// recorded for inspection. Identical configs produce bitwise-identical
/// outcomes.
pub fn monte_carlo_validate(cfg: &ValidateConfig) -> Result<ValidateOutcome, HarnessError> {
    check_validate(cfg)?;

    let mut bounds = BTreeMap::new();
    let defining = match cfg.kind {
        CompositionKind::Product => {
            bounds.insert(String::from("exact"), mult_bound_exact(&cfg.eps_list)?);
            bounds.insert(String::from("approx1"), mult_bound_approx1(&cfg.eps_list)?);
            bounds.insert(
                String::from("approx2"),
                mult_bound_approx2(&cfg.eps_list, 7.5)?,
            );
            bounds.insert(String::from("sum"), sum_bound(&cfg.eps_list));
            bounds["exact"]
        }
        CompositionKind::Tensor => {
            bounds.insert(String::from("tensor"), tensor_bound(&cfg.eps_list)?);
            bounds.insert(String::from("sum"), sum_bound(&cfg.eps_list));
            bounds["tensor"]
        }
    };

    let mut records = Vec::with_capacity(cfg.trials as usize);
    let mut violations = 0u64;
    let mut max_ratio = 0.0f64;
    for trial_id in 0..cfg.trials {
        let trial_seed = derive_seed(cfg.seed, trial_id);
        let mut ideals = Vec::with_capacity(cfg.eps_list.len());
        let mut perturbed = Vec::with_capacity(cfg.eps_list.len());
        for (i, &eps) in cfg.eps_list.iter().enumerate() {
            let v = random_unitary(cfg.n_qubits, derive_seed(trial_seed, 2 * i as u64))?;
            let u = perturb_unitary(&v, eps, derive_seed(trial_seed, 2 * i as u64 + 1))?;
            ideals.push(v.into_matrix());
            perturbed.push(u.into_matrix());
        }
        let (ideal, actual) = match cfg.kind {
            CompositionKind::Product => (
                compose_product(&ideals)?,
                compose_product(&perturbed)?,
            ),
            CompositionKind::Tensor => (compose_tensor(&ideals), compose_tensor(&perturbed)),
        };
        let measured_dp = dist_gpi(&Unitary::new(actual)?, &Unitary::new(ideal)?)?;
        let violation = measured_dp > defining + VIOLATION_SLACK;
        if violation {
            violations += 1;
        }
        if defining > 0.0 {
            max_ratio = max_ratio.max(measured_dp / defining);
        }
        records.push(TrialRecord {
            trial_id,
            n_qubits: cfg.n_qubits,
            m: cfg.m,
            eps_list: cfg.eps_list.clone(),
            measured_dp,
            bound_values: bounds.clone(),
            violation,
        });
    }

    Ok(ValidateOutcome {
        records,
        violations,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sweep_rows_match_direct_evaluation() {
        let cfg = SweepConfig {
            eps: 0.1,
            m_max: 50,
        };
        let rows = sweep_product(&cfg).unwrap();
        assert_eq!(rows.len(), 50);
        for &m in &[1usize, 2, 7, 50] {
            let list = vec![0.1; m];
            let row = rows[m - 1];
            assert_eq!(row.m, m as u64);
            assert!((row.exact - mult_bound_exact(&list).unwrap()).abs() < 1e-15);
            assert!((row.approx1 - mult_bound_approx1(&list).unwrap()).abs() < 1e-13);
            assert!((row.sum - sum_bound(&list)).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_reference_tails() {
        for (eps, m_max, exact, approx1) in [
            (0.1, 11, 0.99304498, 0.86595652),
            (0.01, 101, 0.92631114, 0.82223671),
            (1e-3, 1001, 0.91948545, 0.81709727),
            (1e-4, 10001, 0.91880139, 0.81655745),
        ] {
            let rows = sweep_product(&SweepConfig { eps, m_max }).unwrap();
            let last = rows.last().unwrap();
            assert!((last.exact - exact).abs() < 1e-8, "exact tail at {eps}");
            assert!(
                (last.approx1 - approx1).abs() < 1e-8,
                "approx1 tail at {eps}"
            );
        }
    }

    #[test]
    fn sweep_sum_dominates_exact() {
        let rows = sweep_product(&SweepConfig {
            eps: 0.01,
            m_max: 101,
        })
        .unwrap();
        for row in rows {
            assert!(row.sum >= row.exact);
        }
    }

    #[test]
    fn approx2_sweep_shape() {
        let cfg = SweepConfig {
            eps: 0.01,
            m_max: 101,
        };
        let rows = sweep_approx2(&cfg, 7.5).unwrap();
        assert!((rows[0].approx2 - 7.5 * 0.01).abs() < 1e-12);
        for row in &rows {
            assert!((row.difference - (row.exact - row.approx2)).abs() < 1e-15);
            let direct = mult_bound_approx2(&vec![0.01; row.m as usize], 7.5).unwrap();
            assert!((row.approx2 - direct).abs() < 1e-13);
        }
        // The scaled bound overshoots the exact fold below m ~ c^2.
        assert!(rows[1].difference < 0.0);
        assert!(rows[10].difference < 0.0);
    }

    #[test]
    fn approx2_tiny_eps_difference_stays_small() {
        let rows = sweep_approx2(
            &SweepConfig {
                eps: 1e-8,
                m_max: 101,
            },
            7.5,
        )
        .unwrap();
        let max_diff = rows
            .iter()
            .map(|r| r.difference.abs())
            .fold(0.0f64, f64::max);
        assert!(max_diff <= 1e-5);
    }

    #[test]
    fn tensor_sweep_values() {
        let rows = sweep_tensor(&SweepConfig {
            eps: 0.1,
            m_max: 2,
        })
        .unwrap();
        assert!((rows[0].tensor - rows[0].sum).abs() < 1e-15);
        assert!((rows[1].tensor - 0.14106735979665884).abs() < 1e-15);
        assert!((rows[1].sum - 0.2).abs() < 1e-15);

        let long = sweep_tensor(&SweepConfig {
            eps: 1e-4,
            m_max: 10001,
        })
        .unwrap();
        assert!(long.last().unwrap().tensor < 1.0);
        for &m in &[1usize, 2, 100, 10001] {
            let direct = tensor_bound(&vec![1e-4; m]).unwrap();
            assert!((long[m - 1].tensor - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn sweep_validation() {
        assert!(matches!(
            sweep_product(&SweepConfig { eps: 0.0, m_max: 5 }),
            Err(HarnessError::EpsRange { .. })
        ));
        assert!(matches!(
            sweep_product(&SweepConfig {
                eps: 0.1,
                m_max: 0
            }),
            Err(HarnessError::ZeroLength)
        ));
        assert!(matches!(
            sweep_approx2(&SweepConfig { eps: 0.1, m_max: 5 }, -1.0),
            Err(HarnessError::Compose(ComposeError::BadC { .. }))
        ));
    }

    fn product_cfg(trials: u64, seed: u64) -> ValidateConfig {
        ValidateConfig {
            n_qubits: 1,
            m: 3,
            eps_list: vec![0.05; 3],
            trials,
            seed,
            kind: CompositionKind::Product,
        }
    }

    #[test]
    fn product_trials_sound() {
        let out = monte_carlo_validate(&product_cfg(50, 11)).unwrap();
        assert_eq!(out.violations, 0);
        assert_eq!(out.records.len(), 50);
        assert!(out.max_ratio <= 1.0 + 1e-9);
        assert!(out.max_ratio > 0.0);
        for r in &out.records {
            assert!(!r.violation);
            assert!(r.bound_values.contains_key("exact"));
            assert!(r.bound_values.contains_key("approx1"));
            assert!(r.bound_values.contains_key("approx2"));
            assert!(r.bound_values.contains_key("sum"));
        }
    }

    #[test]
    fn tensor_trials_sound() {
        let cfg = ValidateConfig {
            n_qubits: 1,
            m: 3,
            eps_list: vec![0.05; 3],
            trials: 50,
            seed: 11,
            kind: CompositionKind::Tensor,
        };
        let out = monte_carlo_validate(&cfg).unwrap();
        assert_eq!(out.violations, 0);
        for r in &out.records {
            assert!(r.bound_values.contains_key("tensor"));
            assert!(r.measured_dp <= r.bound_values["tensor"] + 1e-10);
        }
    }

    #[test]
    fn deterministic_by_seed() {
        let a = monte_carlo_validate(&product_cfg(20, 42)).unwrap();
        let b = monte_carlo_validate(&product_cfg(20, 42)).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_validate(&product_cfg(20, 43)).unwrap();
        assert_ne!(a.records[0].measured_dp, c.records[0].measured_dp);
    }

    #[test]
    fn zero_eps_measures_zero() {
        let cfg = ValidateConfig {
            n_qubits: 2,
            m: 2,
            eps_list: vec![0.0, 0.0],
            trials: 5,
            seed: 3,
            kind: CompositionKind::Product,
        };
        let out = monte_carlo_validate(&cfg).unwrap();
        assert_eq!(out.violations, 0);
        assert_eq!(out.max_ratio, 0.0);
        for r in &out.records {
            assert!(r.measured_dp < 1e-12);
        }
    }

    #[test]
    fn validate_guards() {
        let mut cfg = product_cfg(5, 0);
        cfg.n_qubits = 4;
        assert!(matches!(
            monte_carlo_validate(&cfg),
            Err(HarnessError::TooManyQubits { .. })
        ));

        let mut cfg = product_cfg(5, 0);
        cfg.m = 11;
        cfg.eps_list = vec![0.01; 11];
        assert!(matches!(
            monte_carlo_validate(&cfg),
            Err(HarnessError::TooManyFactors { .. })
        ));

        let cfg = ValidateConfig {
            n_qubits: 2,
            m: 3,
            eps_list: vec![0.01; 3],
            trials: 5,
            seed: 0,
            kind: CompositionKind::Tensor,
        };
        assert!(matches!(
            monte_carlo_validate(&cfg),
            Err(HarnessError::DimTooLarge { dim: 64, max: 32 })
        ));

        let mut cfg = product_cfg(5, 0);
        cfg.eps_list = vec![0.01; 2];
        assert!(matches!(
            monte_carlo_validate(&cfg),
            Err(HarnessError::LengthMismatch { eps: 2, m: 3 })
        ));

        let mut cfg = product_cfg(0, 0);
        cfg.trials = 0;
        assert!(matches!(
            monte_carlo_validate(&cfg),
            Err(HarnessError::ZeroTrials)
        ));
    }

    #[test]
    fn seed_stream_spreads() {
        let a = derive_seed(0, 0);
        let b = derive_seed(0, 1);
        let c = derive_seed(1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(0, 0));
    }
}
