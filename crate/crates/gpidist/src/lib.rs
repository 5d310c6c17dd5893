//! Global-phase-invariant (GPI) distance calculus for quantum-circuit
//! resource estimation.
//!
//! The crate provides, in dependency order:
//!
//! - [`matrix`]: dense complex matrices, Pauli strings, Haar-random unitary
//!   generation and controlled unitary perturbation, sized for brute-force
//!   verification at up to five qubits;
//! - [`distance`]: the GPI distance `sqrt(1 - |Tr(U^dag V)| / N)`, the
//!   Frobenius and operator-norm distances, and the relation margin between
//!   them;
//! - [`compose`]: worst-case error bounds for tensor and operator products of
//!   approximated unitaries, plus a mixed product/tensor tree evaluator;
//! - [`budget`]: equal-split error-budget solvers that minimize total T-count
//!   under a composed-error constraint, three `Rz`-synthesis cost models, and
//!   the GPI-vs-operator-norm cost comparison;
//! - [`circuits`]: QFT rotation census, rotation-pruning errors, approximate
//!   QFT and phase-estimation T-count estimators;
//! - [`harness`]: deterministic sweep generators for the bound-comparison
//!   tables and a seeded Monte-Carlo validator that checks every bound
//!   against brute-force matrix computation.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only switches the float math from `libm` to the platform
//! intrinsics and enables `std::error::Error` impls.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod budget;
pub mod circuits;
pub mod compose;
pub mod distance;
pub mod harness;
pub mod matrix;

pub use budget::{
    cost_delta, cost_delta_selinger, equal_split_gpi, equal_split_opnorm, tcount_rz,
    verify_equal_split_optimality, BudgetError, BudgetSolution, CostModel, CostModelKind,
    OptimalityReport, Regime,
};
pub use circuits::{
    aqft_pruning_error, aqft_tcount, prune_error_gpi, prune_error_opnorm, qft_rotation_census,
    qpe_bits, qpe_tcount, AqftReport, CircuitError, PruningPlan, QftSpec, QpeReport, QpeSpec,
    RotationCensus,
};
pub use compose::{
    compose_tree_bound, compose_tree_breakdown, mult_bound_approx1, mult_bound_approx2,
    mult_bound_exact, mult_bound_pair, sum_bound, tensor_bound, validate_tree, BoundMethod,
    ComposeError, CompositionTree, NodeBound, TreeError, TreeErrorKind,
};
pub use distance::{
    dist_frobenius, dist_gpi, dist_operator, frobenius_relation_margin, operator_norm,
    DistanceError, DistanceKind,
};
pub use harness::{
    monte_carlo_validate, sweep_approx2, sweep_product, sweep_tensor, Approx2Row, CompositionKind,
    HarnessError, ProductRow, SweepConfig, TensorRow, TrialRecord, ValidateConfig, ValidateOutcome,
};
pub use matrix::{
    pauli_string, perturb_unitary, random_unitary, CMatrix, MatrixError, Unitary, C64,
};
