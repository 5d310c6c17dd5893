//! Resource estimators for the quantum Fourier transform, its rotation-pruned
//! approximation, and phase estimation built on top of it.
//!
//! An `n`-qubit QFT contains `n(n-1)/2` controlled phase rotations `cR_k`
//! with angles `theta_k = 2*pi/2^k`; [`qft_rotation_census`] counts them per
//! `k`. Pruning the small-angle rotations trades T-count for a known error:
//! [`prune_error_gpi`] and [`prune_error_opnorm`] give the per-gate cost of
//! dropping one `cR_k`, [`aqft_pruning_error`] accumulates a whole
//! [`PruningPlan`], and [`aqft_tcount`] budgets the remaining error across
//! the kept rotations to produce a total T-count. [`qpe_tcount`] does the
//! same for phase estimation, whose inverse QFT width comes from
//! [`qpe_bits`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::budget::{equal_split_gpi, equal_split_opnorm, BudgetError, CostModel};
use crate::compose::{mult_bound_approx1, ComposeError};
use crate::distance::DistanceKind;

/// Errors from the circuit estimators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    /// The QFT needs at least two qubits.
    #[error("qubit count {n} must be at least 2")]
    TooFewQubits {
        /// The offending count.
        n: u32,
    },
    /// A pruning-plan entry was outside the circuit's rotation range.
    #[error("plan entry k = {k} outside the rotation range 2..={n}")]
    BadPlanKey {
        /// The offending entry.
        k: u32,
        /// The circuit size defining the range.
        n: u32,
    },
    /// The plan was built for a different circuit size.
    #[error("plan covers n = {plan_n} but the circuit has n = {n}")]
    PlanMismatch {
        /// Size the plan was built for.
        plan_n: u32,
        /// Size requested.
        n: u32,
    },
    /// Only the GPI and operator-norm distances have composition rules here.
    #[error("no accumulation rule for the {0:?} distance")]
    UnsupportedDistance(DistanceKind),
    /// The rotation decomposition needs at least one approximable leaf.
    #[error("rz_per_crk must be at least 1")]
    ZeroRzPerCrk,
    /// Pruning alone already exceeds the error budget.
    #[error("pruning error {pruning} exhausts the budget {budget}")]
    BudgetExhausted {
        /// Accumulated pruning error.
        pruning: f64,
        /// The budget it must stay below.
        budget: f64,
    },
    /// Phase estimation reserved the whole budget for phase error.
    #[error("phase error {eps_qpe} leaves no synthesis budget out of {eps_total}")]
    EmptySynthesisBudget {
        /// Reserved phase-approximation error.
        eps_qpe: f64,
        /// Total budget.
        eps_total: f64,
    },
    /// Phase estimation needs at least one accuracy bit.
    #[error("accuracy bit count must be at least 1")]
    BadAccuracyBits,
    /// Success probability must lie in `[0, 1)`.
    #[error("success probability {p} must lie in [0, 1)")]
    BadProbability {
        /// The offending value.
        p: f64,
    },
    /// Phase estimation costs at least one controlled-power rotation.
    #[error("target_rotations must be at least 1")]
    ZeroTargetRotations,
    /// A budget-solver precondition failed.
    #[error(transparent)]
    Budget(#[from] BudgetError),
    /// A composition-bound precondition failed.
    #[error(transparent)]
    Compose(#[from] ComposeError),
}

/// Controlled-rotation counts of an `n`-qubit QFT.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RotationCensus {
    /// All controlled rotations, `n(n-1)/2`.
    pub total: u64,
    /// Count per angle index: `per_k[k] = n - k + 1` for `k in 2..=n`.
    pub per_k: BTreeMap<u32, u64>,
}

/// Counts the controlled rotations of an `n`-qubit QFT by angle index.
pub fn qft_rotation_census(n: u32) -> Result<RotationCensus, CircuitError> {
    if n < 2 {
        return Err(CircuitError::TooFewQubits { n });
    }
    let per_k: BTreeMap<u32, u64> = (2..=n).map(|k| (k, u64::from(n - k + 1))).collect();
    let total = per_k.values().sum();
    debug_assert_eq!(total, u64::from(n) * u64::from(n - 1) / 2);
    Ok(RotationCensus { total, per_k })
}

fn theta_k(k: u32) -> f64 {
    core::f64::consts::TAU / 2f64.powi(k as i32)
}

/// GPI distance between a kept and a pruned `cR_k`:
/// `sqrt(1 - sqrt(1 + 3 cos^2(theta_k/2))/2)` with `theta_k = 2*pi/2^k`.
///
/// Evaluated through the identity `1 + 3 cos^2 = 4 - 3 sin^2` with the
/// outer difference rationalized, which avoids the catastrophic
/// cancellation the literal form hits at large `k`. Angle indices below 2
/// do not occur in a QFT but evaluate fine.
pub fn prune_error_gpi(k: u32) -> f64 {
    let s = (theta_k(k) / 2.0).sin();
    let root = (4.0 - 3.0 * s * s).sqrt() / 2.0;
    (0.75 * s * s / (1.0 + root)).sqrt()
}

/// Operator-norm distance for the same pruning, `2 sin(theta_k/2)`.
///
/// Dominates [`prune_error_gpi`] at every `k`.
pub fn prune_error_opnorm(k: u32) -> f64 {
    2.0 * (theta_k(k) / 2.0).sin()
}

/// Which rotations of an `n`-qubit QFT are kept and which are pruned.
///
/// The angle indices `2..=n` are partitioned into a kept set and its
/// complement; every `cR_k` with `k` in the pruned set is dropped from all
/// of its `n - k + 1` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PruningPlan {
    n: u32,
    kept: BTreeSet<u32>,
    pruned: BTreeSet<u32>,
}

impl PruningPlan {
    /// Keeps every rotation with `k <= k_max`, the standard AQFT truncation.
    ///
    /// `k_max` below 2 prunes everything; `k_max >= n` prunes nothing.
    pub fn keep_up_to(n: u32, k_max: u32) -> Result<Self, CircuitError> {
        if n < 2 {
            return Err(CircuitError::TooFewQubits { n });
        }
        Ok(Self {
            n,
            kept: (2..=n.min(k_max)).collect(),
            pruned: (k_max.max(1).saturating_add(1)..=n).collect(),
        })
    }

    /// Builds a plan from an explicit kept set, which must lie in `2..=n`.
    pub fn new(n: u32, kept: BTreeSet<u32>) -> Result<Self, CircuitError> {
        if n < 2 {
            return Err(CircuitError::TooFewQubits { n });
        }
        if let Some(&k) = kept.iter().find(|&&k| k < 2 || k > n) {
            return Err(CircuitError::BadPlanKey { k, n });
        }
        let pruned = (2..=n).filter(|k| !kept.contains(k)).collect();
        Ok(Self { n, kept, pruned })
    }

    /// Circuit size this plan partitions.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Angle indices whose rotations stay in the circuit.
    pub fn kept(&self) -> &BTreeSet<u32> {
        &self.kept
    }

    /// Angle indices whose rotations are dropped.
    pub fn pruned(&self) -> &BTreeSet<u32> {
        &self.pruned
    }
}

/// Accumulated error of pruning per `plan`, under the chosen distance.
///
/// For the GPI distance the pruned per-gate errors (each `cR_k` contributing
/// `prune_error_gpi(k)` once per occurrence, in ascending `k`) combine
/// through [`mult_bound_approx1`]; for the operator norm they add up.
/// The GPI value never exceeds the operator-norm value.
pub fn aqft_pruning_error(
    n: u32,
    plan: &PruningPlan,
    dist: DistanceKind,
) -> Result<f64, CircuitError> {
    if plan.n != n {
        return Err(CircuitError::PlanMismatch { plan_n: plan.n, n });
    }
    let census = qft_rotation_census(n)?;
    if plan.pruned.is_empty() {
        return Ok(0.0);
    }
    match dist {
        DistanceKind::Gpi => {
            let mut errors = Vec::new();
            for &k in &plan.pruned {
                let e = prune_error_gpi(k);
                for _ in 0..census.per_k[&k] {
                    errors.push(e);
                }
            }
            Ok(mult_bound_approx1(&errors)?)
        }
        DistanceKind::OperatorNorm => Ok(plan
            .pruned
            .iter()
            .map(|&k| census.per_k[&k] as f64 * prune_error_opnorm(k))
            .sum()),
        other => Err(CircuitError::UnsupportedDistance(other)),
    }
}

/// Rotation decomposition model for QFT cost estimates.
///
/// Every kept `cR_k` contributes `rz_per_crk` approximable `R_z` leaves that
/// share the synthesis budget, plus `fixed_tcount_per_crk` exact T gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QftSpec {
    /// Qubit count, at least 2.
    pub n: u32,
    /// Approximable `R_z` leaves per kept controlled rotation.
    pub rz_per_crk: u64,
    /// Exact T-gate overhead per kept controlled rotation.
    pub fixed_tcount_per_crk: u64,
}

impl QftSpec {
    /// The default decomposition: 3 `R_z` leaves and 7 fixed T gates per
    /// controlled rotation.
    pub fn new(n: u32) -> Self {
        Self {
            n,
            rz_per_crk: 3,
            fixed_tcount_per_crk: 7,
        }
    }
}

/// Cost and error breakdown of an approximate QFT.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AqftReport {
    /// GPI pruning error of one `cR_k`, for every `k` in the circuit.
    pub per_k_error_gpi: BTreeMap<u32, f64>,
    /// Operator-norm pruning error of one `cR_k`, for every `k`.
    pub per_k_error_opnorm: BTreeMap<u32, f64>,
    /// Occurrences of each `cR_k`.
    pub per_k_count: BTreeMap<u32, u64>,
    /// Accumulated GPI pruning error of the plan.
    pub eps_qft_gpi: f64,
    /// Accumulated operator-norm pruning error of the plan.
    pub eps_qft_opnorm: f64,
    /// Budget left for synthesis after subtracting the pruning error
    /// (in quadrature under GPI, linearly under the operator norm).
    pub remaining_budget: f64,
    /// Synthesis cost of all kept leaves plus the fixed overhead.
    pub total_tcount: f64,
}

/// Budgets an approximate QFT: subtracts the pruning error from
/// `eps_budget`, splits the rest equally across the kept `R_z` leaves, and
/// totals synthesis plus fixed T-count.
///
/// Under [`DistanceKind::Gpi`] the pruning error comes off in quadrature
/// (`remaining^2 = eps_budget^2 - eps_qft^2`) and the split solves the GPI
/// constraint with the given `delta` and `c`; under
/// [`DistanceKind::OperatorNorm`] both steps are linear and `delta`/`c` are
/// ignored. A plan that keeps nothing yields a zero total.
pub fn aqft_tcount(
    spec: &QftSpec,
    plan: &PruningPlan,
    eps_budget: f64,
    model: CostModel,
    dist: DistanceKind,
    delta: f64,
    c: f64,
) -> Result<AqftReport, CircuitError> {
    if spec.n < 2 {
        return Err(CircuitError::TooFewQubits { n: spec.n });
    }
    if spec.rz_per_crk == 0 {
        return Err(CircuitError::ZeroRzPerCrk);
    }
    if !eps_budget.is_finite() || eps_budget <= 0.0 || eps_budget >= 1.0 {
        return Err(BudgetError::EpsRange { eps: eps_budget }.into());
    }
    let census = qft_rotation_census(spec.n)?;
    let eps_qft_gpi = aqft_pruning_error(spec.n, plan, DistanceKind::Gpi)?;
    let eps_qft_opnorm = aqft_pruning_error(spec.n, plan, DistanceKind::OperatorNorm)?;

    let pruning = match dist {
        DistanceKind::Gpi => eps_qft_gpi,
        DistanceKind::OperatorNorm => eps_qft_opnorm,
        other => return Err(CircuitError::UnsupportedDistance(other)),
    };
    if pruning >= eps_budget {
        return Err(CircuitError::BudgetExhausted {
            pruning,
            budget: eps_budget,
        });
    }
    let remaining_budget = match dist {
        DistanceKind::Gpi => (eps_budget * eps_budget - pruning * pruning).sqrt(),
        _ => eps_budget - pruning,
    };

    let kept_crk: u64 = plan.kept.iter().map(|k| census.per_k[k]).sum();
    let leaves = kept_crk * spec.rz_per_crk;
    let fixed = kept_crk * spec.fixed_tcount_per_crk;

    let total_tcount = if leaves == 0 {
        fixed as f64
    } else {
        let split = match dist {
            DistanceKind::Gpi => equal_split_gpi(leaves, remaining_budget, delta, c, model)?,
            _ => equal_split_opnorm(leaves, remaining_budget, model)?,
        };
        split.total_tcount + fixed as f64
    };

    Ok(AqftReport {
        per_k_error_gpi: census.per_k.keys().map(|&k| (k, prune_error_gpi(k))).collect(),
        per_k_error_opnorm: census
            .per_k
            .keys()
            .map(|&k| (k, prune_error_opnorm(k)))
            .collect(),
        per_k_count: census.per_k,
        eps_qft_gpi,
        eps_qft_opnorm,
        remaining_budget,
        total_tcount,
    })
}

/// Phase-estimation sizing: accuracy bits, success probability, and the
/// error reserved for the phase approximation itself.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QpeSpec {
    /// Desired accuracy bits of the estimated phase, at least 1.
    pub n: u32,
    /// Success probability, in `[0, 1)`.
    pub p: f64,
    /// Error reserved for phase approximation, subtracted from the budget.
    pub eps_qpe: f64,
}

/// Register width for phase estimation:
/// `t = n + ceil(log2(2 + 1/(2(1-p))))`.
pub fn qpe_bits(n: u32, p: f64) -> Result<u32, CircuitError> {
    if n < 1 {
        return Err(CircuitError::BadAccuracyBits);
    }
    if !p.is_finite() || !(0.0..1.0).contains(&p) {
        return Err(CircuitError::BadProbability { p });
    }
    let extra = (2.0 + 1.0 / (2.0 * (1.0 - p))).log2().ceil();
    Ok(n + extra as u32)
}

/// Cost breakdown of a phase-estimation circuit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QpeReport {
    /// Phase-register width from [`qpe_bits`].
    pub t: u32,
    /// Controlled rotations in the inverse QFT on `t` qubits.
    pub qft_rotations: u64,
    /// All approximable `R_z` leaves sharing the synthesis budget.
    pub approximable_leaves: u64,
    /// Exact T-gate overhead of the inverse QFT.
    pub fixed_tcount: u64,
    /// Budget left after reserving the phase-approximation error.
    pub synthesis_budget: f64,
    /// Per-leaf error of the equal split.
    pub per_gate_eps: f64,
    /// Synthesis cost of one leaf.
    pub per_gate_tcount: f64,
    /// Synthesis total plus fixed overhead.
    pub total_tcount: f64,
}

/// Budgets a phase-estimation circuit: an unpruned inverse QFT on `t`
/// qubits (default rotation decomposition) plus `target_rotations`
/// controlled powers of the target rotation, all sharing the synthesis
/// budget `eps_total - eps_qpe` in one equal split.
pub fn qpe_tcount(
    spec: &QpeSpec,
    eps_total: f64,
    model: CostModel,
    dist: DistanceKind,
    target_rotations: u64,
    delta: f64,
    c: f64,
) -> Result<QpeReport, CircuitError> {
    if target_rotations == 0 {
        return Err(CircuitError::ZeroTargetRotations);
    }
    if !eps_total.is_finite() || eps_total <= 0.0 || eps_total >= 1.0 {
        return Err(BudgetError::EpsRange { eps: eps_total }.into());
    }
    if !spec.eps_qpe.is_finite() || spec.eps_qpe < 0.0 {
        return Err(BudgetError::DeltaRange {
            delta: spec.eps_qpe,
            eps: eps_total,
        }
        .into());
    }
    if spec.eps_qpe >= eps_total {
        return Err(CircuitError::EmptySynthesisBudget {
            eps_qpe: spec.eps_qpe,
            eps_total,
        });
    }
    let t = qpe_bits(spec.n, spec.p)?;
    let qft = QftSpec::new(t);
    let census = qft_rotation_census(t)?;
    let approximable_leaves = census.total * qft.rz_per_crk + target_rotations;
    let fixed_tcount = census.total * qft.fixed_tcount_per_crk;
    let synthesis_budget = eps_total - spec.eps_qpe;

    let split = match dist {
        DistanceKind::Gpi => {
            equal_split_gpi(approximable_leaves, synthesis_budget, delta, c, model)?
        }
        DistanceKind::OperatorNorm => {
            equal_split_opnorm(approximable_leaves, synthesis_budget, model)?
        }
        other => return Err(CircuitError::UnsupportedDistance(other)),
    };

    Ok(QpeReport {
        t,
        qft_rotations: census.total,
        approximable_leaves,
        fixed_tcount,
        synthesis_budget,
        per_gate_eps: split.per_gate_eps,
        per_gate_tcount: split.per_gate_tcount,
        total_tcount: split.total_tcount + fixed_tcount as f64,
    })
}
