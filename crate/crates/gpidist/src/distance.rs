//! Distance and norm functions on unitaries: the global-phase-invariant
//! (GPI) distance, the Frobenius distance, the operator (spectral) norm, and
//! the margin of the inequality `D_P <= D_F / sqrt(2N)` relating them.

use num_complex::Complex64 as C64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::matrix::{CMatrix, Unitary};

/// Relative tolerance for the power-iteration eigenvalue estimate.
const POWER_ITERATION_RTOL: f64 = 1e-12;

/// Iteration cap for power iteration.
const POWER_ITERATION_CAP: u32 = 10_000;

/// Which distance/norm regime an estimator runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DistanceKind {
    /// Global-phase-invariant distance `sqrt(1 - |Tr(U^dag V)| / N)`.
    Gpi,
    /// Spectral-norm distance `||V - U||_2`.
    OperatorNorm,
    /// Frobenius distance `||V - U||_F`.
    Frobenius,
}

/// Errors from the distance functions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistanceError {
    /// The two operands have different dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch {
        /// Dimension of the left operand.
        left: usize,
        /// Dimension of the right operand.
        right: usize,
    },
    /// Power iteration hit its cap before the estimate stabilized.
    #[error(
        "power iteration did not converge after {iterations} iterations; \
         last estimate {last_estimate:e}"
    )]
    NoConvergence {
        /// Number of iterations performed.
        iterations: u32,
        /// The singular-value estimate at the cap.
        last_estimate: f64,
    },
}

fn check_dims(u: &Unitary, v: &Unitary) -> Result<usize, DistanceError> {
    if u.dim() != v.dim() {
        return Err(DistanceError::DimMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(u.dim())
}

/// Global-phase-invariant distance `sqrt(1 - |Tr(U^dag V)| / N)`.
///
/// Symmetric, invariant under a global phase on either argument, and always
/// in `[0, 1]`. Radicands that round to tiny negatives (>= -1e-15) clamp to
/// zero, and identical operands return exactly 0 (the trace route would
/// amplify rounding noise to ~1e-8 through the square root).
pub fn dist_gpi(u: &Unitary, v: &Unitary) -> Result<f64, DistanceError> {
    let n = check_dims(u, v)?;
    if u.as_matrix() == v.as_matrix() {
        return Ok(0.0);
    }
    // Tr(U^dag V) = sum_ij conj(U_ij) V_ij, no product formed.
    let mut t = C64::new(0.0, 0.0);
    for (a, b) in u
        .as_matrix()
        .entries()
        .iter()
        .zip(v.as_matrix().entries())
    {
        t += a.conj() * b;
    }
    let radicand = 1.0 - t.norm() / n as f64;
    if radicand < 0.0 {
        debug_assert!(radicand >= -1e-15, "radicand {radicand} below clamp range");
        return Ok(0.0);
    }
    Ok(radicand.sqrt())
}

/// Frobenius distance `||V - U||_F = sqrt(Tr((V-U)^dag (V-U)))`.
///
/// Ranges over `[0, 2 sqrt(N)]` for unitaries.
pub fn dist_frobenius(u: &Unitary, v: &Unitary) -> Result<f64, DistanceError> {
    check_dims(u, v)?;
    let diff = v
        .as_matrix()
        .sub(u.as_matrix())
        .expect("dims checked above");
    Ok(diff.frobenius_norm())
}

/// Largest eigenvalue of a 2x2 Hermitian PSD matrix, in closed form.
fn gram2_max_eigenvalue(g: &CMatrix) -> f64 {
    let tr = g.get(0, 0).re + g.get(1, 1).re;
    let det = g.get(0, 0).re * g.get(1, 1).re - g.get(0, 1).norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0);
    (tr + disc.sqrt()) / 2.0
}

/// Largest singular value of `a`.
///
/// Computed by power iteration on the Gram matrix `A^dag A` with the all-ones
/// normalized start vector, relative tolerance 1e-12, and a 10000-iteration
/// cap. A 2x2 Gram matrix uses the closed form instead. If the start vector
/// lies in the kernel of the Gram matrix, the iteration deterministically
/// falls back to basis vectors.
pub fn operator_norm(a: &CMatrix) -> Result<f64, DistanceError> {
    let g = a.dagger().matmul(a).expect("dagger dims always compatible");
    let c = g.rows();
    if c == 2 {
        return Ok(gram2_max_eigenvalue(&g).max(0.0).sqrt());
    }

    let mut start_index = 0usize; // 0 = all-ones, then e_0, e_1, ...
    'outer: loop {
        let mut v: alloc::vec::Vec<C64> = if start_index == 0 {
            let s = 1.0 / (c as f64).sqrt();
            alloc::vec![C64::new(s, 0.0); c]
        } else if start_index <= c {
            let mut e = alloc::vec![C64::new(0.0, 0.0); c];
            e[start_index - 1] = C64::new(1.0, 0.0);
            e
        } else {
            // Every basis vector is annihilated, so the matrix is zero.
            return Ok(0.0);
        };

        let mut lambda_prev = f64::NAN;
        for iteration in 1..=POWER_ITERATION_CAP {
            let mut w = alloc::vec![C64::new(0.0, 0.0); c];
            for i in 0..c {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..c {
                    acc += g.get(i, j) * v[j];
                }
                w[i] = acc;
            }
            let w_norm = w
                .iter()
                .map(|z| z.norm_sqr())
                .fold(0.0, |acc, x| acc + x)
                .sqrt();
            if w_norm == 0.0 {
                start_index += 1;
                continue 'outer;
            }
            // Rayleigh quotient; real because the Gram matrix is Hermitian.
            let lambda = v
                .iter()
                .zip(w.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .fold(0.0, |acc, x| acc + x);
            for z in w.iter_mut() {
                *z /= w_norm;
            }
            v = w;
            if !lambda_prev.is_nan()
                && (lambda - lambda_prev).abs() <= POWER_ITERATION_RTOL * lambda.abs().max(1e-300)
            {
                return Ok(lambda.max(0.0).sqrt());
            }
            lambda_prev = lambda;
            if iteration == POWER_ITERATION_CAP {
                return Err(DistanceError::NoConvergence {
                    iterations: POWER_ITERATION_CAP,
                    last_estimate: lambda.max(0.0).sqrt(),
                });
            }
        }
    }
}

/// Spectral-norm distance `||V - U||_2`. Unlike the GPI distance this does
/// not ignore a global phase.
pub fn dist_operator(u: &Unitary, v: &Unitary) -> Result<f64, DistanceError> {
    check_dims(u, v)?;
    let diff = v
        .as_matrix()
        .sub(u.as_matrix())
        .expect("dims checked above");
    operator_norm(&diff)
}

/// Margin of the inequality `D_P <= D_F / sqrt(2N)`.
///
/// Returns `D_F / sqrt(2N) - D_P`, which is `>= 0` up to rounding (never
/// below -1e-12) and zero exactly when `Tr(V^dag U)` is real nonnegative.
pub fn frobenius_relation_margin(u: &Unitary, v: &Unitary) -> Result<f64, DistanceError> {
    let n = check_dims(u, v)?;
    let df = dist_frobenius(u, v)?;
    let dp = dist_gpi(u, v)?;
    Ok(df / (2.0 * n as f64).sqrt() - dp)
}
