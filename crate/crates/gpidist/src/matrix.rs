//! Dense complex matrices and controlled random-unitary generation.
//!
//! Everything here is sized for brute-force verification: matrices are dense,
//! row-major, double-precision, and no larger than 32x32 (five qubits).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// Double-precision complex scalar used for every matrix entry.
pub type C64 = Complex64;

/// Largest supported qubit count for generated unitaries.
pub const MAX_QUBITS: u32 = 5;

/// Maximum max-entry deviation of `U^dag U` from the identity accepted by
/// [`Unitary::new`]. Well above QR rounding noise, well below any bound under
/// test.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Errors from matrix construction and the random-unitary generators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    /// Inner dimensions do not agree for a product.
    #[error("dimension mismatch: {left_rows}x{left_cols} * {right_rows}x{right_cols}")]
    DimMismatch {
        /// Rows of the left operand.
        left_rows: usize,
        /// Columns of the left operand.
        left_cols: usize,
        /// Rows of the right operand.
        right_rows: usize,
        /// Columns of the right operand.
        right_cols: usize,
    },
    /// Operation requires a square matrix.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare {
        /// Row count.
        rows: usize,
        /// Column count.
        cols: usize,
    },
    /// Entry buffer length does not match the stated shape.
    #[error("entry count {got} does not match shape {rows}x{cols}")]
    BadLength {
        /// Declared rows.
        rows: usize,
        /// Declared columns.
        cols: usize,
        /// Actual buffer length.
        got: usize,
    },
    /// A NaN or infinite component was found.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite {
        /// Row of the offending entry.
        row: usize,
        /// Column of the offending entry.
        col: usize,
    },
    /// Pauli index outside `0..=3`.
    #[error("pauli index {index} outside 0..=3")]
    BadPauliIndex {
        /// The offending index.
        index: u8,
    },
    /// Empty Pauli index list.
    #[error("pauli index list is empty")]
    EmptyPauli,
    /// Qubit count outside the supported range.
    #[error("qubit count {n} outside 1..={MAX_QUBITS}")]
    QubitCount {
        /// Requested qubit count.
        n: u32,
    },
    /// Matrix failed the unitarity check.
    #[error("matrix is not unitary: max |U^dag U - I| entry is {max_dev:e}")]
    NotUnitary {
        /// Largest deviation of `U^dag U` from the identity.
        max_dev: f64,
    },
    /// Dimension is not a power of two `>= 2`.
    #[error("dimension {dim} is not 2^n for a qubit count n >= 1")]
    BadDim {
        /// The offending dimension.
        dim: usize,
    },
    /// Perturbation distance outside `[0, 1)`.
    #[error("perturbation eps {eps} outside [0, 1)")]
    EpsRange {
        /// The offending value.
        eps: f64,
    },
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries, checking length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::BadLength {
                rows,
                cols,
                got: data.len(),
            });
        }
        for (idx, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(MatrixError::NonFinite {
                    row: idx / cols,
                    col: idx % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, z) in diag.iter().enumerate() {
            m.data[i * n + i] = *z;
        }
        m
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(i, j)`. Panics when out of range, like slice indexing.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j]
    }

    /// Sets the entry at `(i, j)`. Panics when out of range.
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j] = z;
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Standard matrix product.
    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: `kron(a, b)[i*b.rows + k, j*b.cols + l] = a[i,j] * b[k,l]`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + (j * rhs.cols + l)] =
                            a * rhs.data[k * rhs.cols + l];
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Sum of the diagonal. Errors on non-square input.
    pub fn trace(&self) -> Result<C64, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut t = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            t += self.data[i * self.cols + i];
        }
        Ok(t)
    }

    /// Entrywise difference `self - rhs`.
    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Entrywise sum `self + rhs`.
    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    fn zip_with(
        &self,
        rhs: &CMatrix,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<CMatrix, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::DimMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(rhs.data.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise scaling.
    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    /// Frobenius norm `sqrt(sum |a_ij|^2)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0, |acc, x| acc + x)
            .sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another matrix of the same shape.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> Result<f64, MatrixError> {
        Ok(self.sub(rhs)?.max_abs_entry())
    }
}

/// Single-qubit Pauli matrix for an index in `0..=3` (I, X, Y, Z).
fn pauli_1q(index: u8) -> Result<CMatrix, MatrixError> {
    let (a, b, c, d) = match index {
        0 => (
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ),
        1 => (
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ),
        2 => (
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ),
        3 => (
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
        ),
        _ => return Err(MatrixError::BadPauliIndex { index }),
    };
    CMatrix::new(2, 2, vec![a, b, c, d])
}

/// Kronecker product of single-qubit Paulis, `indices[0]` acting on the first
/// (most significant) qubit. The result is traceless iff any index is nonzero.
pub fn pauli_string(indices: &[u8]) -> Result<CMatrix, MatrixError> {
    let (first, rest) = indices.split_first().ok_or(MatrixError::EmptyPauli)?;
    let mut acc = pauli_1q(*first)?;
    for &idx in rest {
        acc = acc.kron(&pauli_1q(idx)?);
    }
    Ok(acc)
}

/// Square matrix checked to be unitary (`|U^dag U - I| <= 1e-10` entrywise)
/// with dimension `2^n` for a qubit count `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    mat: CMatrix,
}

impl Unitary {
    /// Validates and wraps a matrix.
    pub fn new(mat: CMatrix) -> Result<Self, MatrixError> {
        if !mat.is_square() {
            return Err(MatrixError::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let dim = mat.rows();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(MatrixError::BadDim { dim });
        }
        let gram = mat.dagger().matmul(&mat)?;
        let max_dev = gram.max_abs_diff(&CMatrix::identity(dim))?;
        if max_dev > UNITARITY_TOL {
            return Err(MatrixError::NotUnitary { max_dev });
        }
        Ok(Self { mat })
    }

    /// Matrix dimension `N = 2^n`.
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Qubit count `n = log2(N)`.
    pub fn qubits(&self) -> u32 {
        self.mat.rows().trailing_zeros()
    }

    /// Borrows the underlying matrix.
    pub fn as_matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Unwraps into the underlying matrix.
    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-distributed random unitary on `n_qubits` qubits, deterministic in the
/// seed.
///
/// Construction: QR-factorize an `N x N` matrix of independent standard
/// complex Gaussians via modified Gram-Schmidt (with one reorthogonalization
/// pass), then rescale each column of `Q` by the phase of the corresponding
/// diagonal entry of `R`.
pub fn random_unitary(n_qubits: u32, seed: u64) -> Result<Unitary, MatrixError> {
    if n_qubits < 1 || n_qubits > MAX_QUBITS {
        return Err(MatrixError::QubitCount { n: n_qubits });
    }
    let n = 1usize << n_qubits;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    // Columns of the Gaussian sample, orthonormalized in place.
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..n).map(|_| complex_gaussian(&mut rng)).collect())
        .collect();

    for j in 0..n {
        // Two Gram-Schmidt passes keep orthogonality at machine precision.
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..n {
                    proj += cols[k][i].conj() * cols[j][i];
                }
                for i in 0..n {
                    let corr = proj * cols[k][i];
                    cols[j][i] -= corr;
                }
            }
        }
        // The diagonal of R from Gram-Schmidt is this positive real norm, so
        // the R-phase rescale of the Haar construction is the identity here
        // and normalization completes the column.
        let r_jj: f64 = cols[j]
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0, |a, x| a + x)
            .sqrt();
        for z in cols[j].iter_mut() {
            *z /= r_jj;
        }
    }

    let mut data = vec![C64::new(0.0, 0.0); n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            data[i * n + j] = *z;
        }
    }
    Unitary::new(CMatrix::new(n, n, data)?)
}

/// Perturbs `v` to a unitary at GPI distance exactly `eps`.
///
/// Returns `U = V (cos(theta) I + i sin(theta) P)` with
/// `theta = arccos(1 - eps^2)` and `P` a uniformly random nonidentity Pauli
/// string on the same qubits. Since `P` is traceless,
/// `Tr(V^dag U) = N cos(theta)`, which makes the GPI distance `eps` exactly.
pub fn perturb_unitary(v: &Unitary, eps: f64, seed: u64) -> Result<Unitary, MatrixError> {
    if !(0.0..1.0).contains(&eps) || !eps.is_finite() {
        return Err(MatrixError::EpsRange { eps });
    }
    if eps == 0.0 {
        return Ok(v.clone());
    }
    let n_qubits = v.qubits();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    // Uniform nonidentity Pauli string: index in 1..4^n, base-4 digits.
    let total = 4u64.pow(n_qubits);
    let mut code = rng.random_range(1..total);
    let mut indices = vec![0u8; n_qubits as usize];
    for slot in indices.iter_mut().rev() {
        *slot = (code % 4) as u8;
        code /= 4;
    }
    let pauli = pauli_string(&indices)?;

    let theta = (1.0 - eps * eps).acos();
    let n = v.dim();
    let rotation = CMatrix::identity(n)
        .scale(C64::new(theta.cos(), 0.0))
        .add(&pauli.scale(C64::new(0.0, theta.sin())))?;
    Unitary::new(v.as_matrix().matmul(&rotation)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn hadamard() -> CMatrix {
        let h = 1.0 / 2.0f64.sqrt();
        CMatrix::new(2, 2, vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]).unwrap()
    }

    #[test]
    fn matmul_identity_and_involutions() {
        let x = pauli_string(&[1]).unwrap();
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.matmul(&x).unwrap(), x);
        assert!(x.matmul(&x).unwrap().max_abs_diff(&i2).unwrap() < 1e-15);
        let h = hadamard();
        assert!(h.matmul(&h).unwrap().max_abs_diff(&i2).unwrap() < 1e-15);
    }

    #[test]
    fn matmul_dim_mismatch() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(MatrixError::DimMismatch { .. })
        ));
    }

    #[test]
    fn kron_z_z_is_diag() {
        let z = pauli_1q(3).unwrap();
        let zz = z.kron(&z);
        let want = CMatrix::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(zz.max_abs_diff(&want).unwrap() < 1e-15);
        assert_eq!(zz, pauli_string(&[3, 3]).unwrap());
    }

    #[test]
    fn kron_dims_and_identity() {
        let a = CMatrix::zeros(2, 2);
        let b = CMatrix::zeros(4, 4);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (8, 8));
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_associativity() {
        let a = hadamard();
        let b = pauli_1q(2).unwrap();
        let cmat = pauli_1q(1).unwrap();
        let left = a.kron(&b).kron(&cmat);
        let right = a.kron(&b.kron(&cmat));
        assert!(left.max_abs_diff(&right).unwrap() < 1e-14);
    }

    #[test]
    fn dagger_cases() {
        let s = CMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let want = CMatrix::from_diag(&[c(1.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(s.dagger(), want);
        let h = hadamard();
        assert_eq!(h.dagger(), h);
        let a = CMatrix::new(2, 2, vec![c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0)])
            .unwrap();
        assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn trace_cases() {
        assert_eq!(CMatrix::identity(4).trace().unwrap(), c(4.0, 0.0));
        assert_eq!(pauli_1q(3).unwrap().trace().unwrap(), c(0.0, 0.0));
        let cr2 = CMatrix::from_diag(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(cr2.trace().unwrap(), c(3.0, 1.0));
        assert!(matches!(
            CMatrix::zeros(2, 3).trace(),
            Err(MatrixError::NotSquare { .. })
        ));
    }

    #[test]
    fn trace_multiplicative_under_kron() {
        let a = hadamard();
        let b = CMatrix::new(2, 2, vec![c(0.3, 0.1), c(0.0, 0.2), c(1.0, -0.4), c(0.5, 0.0)])
            .unwrap();
        let lhs = a.kron(&b).trace().unwrap();
        let rhs = a.trace().unwrap() * b.trace().unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn trace_cyclic() {
        let a = hadamard();
        let b = CMatrix::new(2, 2, vec![c(0.3, 0.1), c(0.0, 0.2), c(1.0, -0.4), c(0.5, 0.0)])
            .unwrap();
        let ab = a.matmul(&b).unwrap().trace().unwrap();
        let ba = b.matmul(&a).unwrap().trace().unwrap();
        assert!((ab - ba).norm() < 1e-12);
    }

    #[test]
    fn pauli_string_validation() {
        assert_eq!(pauli_string(&[0]).unwrap(), CMatrix::identity(2));
        assert!((pauli_string(&[1, 2]).unwrap().trace().unwrap()).norm() < 1e-15);
        assert!(matches!(
            pauli_string(&[4]),
            Err(MatrixError::BadPauliIndex { index: 4 })
        ));
        assert!(matches!(pauli_string(&[]), Err(MatrixError::EmptyPauli)));
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        assert!(matches!(
            Unitary::new(m),
            Err(MatrixError::NotUnitary { .. })
        ));
        assert!(matches!(
            Unitary::new(CMatrix::identity(3)),
            Err(MatrixError::BadDim { dim: 3 })
        ));
    }

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        for seed in 0..100u64 {
            let u = random_unitary(2, seed).unwrap();
            let gram = u.as_matrix().dagger().matmul(u.as_matrix()).unwrap();
            assert!(gram.max_abs_diff(&CMatrix::identity(4)).unwrap() <= UNITARITY_TOL);
        }
        let a = random_unitary(3, 42).unwrap();
        let b = random_unitary(3, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_unitary_seed_collision_check() {
        for seed in 0..100u64 {
            let a = random_unitary(1, seed).unwrap();
            let b = random_unitary(1, seed + 1).unwrap();
            let diff = a.as_matrix().sub(b.as_matrix()).unwrap().frobenius_norm();
            assert!(diff > 1e-6, "seeds {seed} and {} collide", seed + 1);
        }
    }

    #[test]
    fn random_unitary_range_check() {
        assert!(matches!(
            random_unitary(0, 1),
            Err(MatrixError::QubitCount { n: 0 })
        ));
        assert!(matches!(
            random_unitary(6, 1),
            Err(MatrixError::QubitCount { n: 6 })
        ));
    }

    #[test]
    fn perturb_identity_cases() {
        let v = random_unitary(2, 7).unwrap();
        let u = perturb_unitary(&v, 0.0, 99).unwrap();
        assert_eq!(u, v);
        assert!(matches!(
            perturb_unitary(&v, 1.0, 0),
            Err(MatrixError::EpsRange { .. })
        ));
    }

    #[test]
    fn perturb_output_is_unitary() {
        let v = random_unitary(2, 11).unwrap();
        let u = perturb_unitary(&v, 0.3, 5).unwrap();
        let gram = u.as_matrix().dagger().matmul(u.as_matrix()).unwrap();
        assert!(gram.max_abs_diff(&CMatrix::identity(4)).unwrap() <= UNITARITY_TOL);
    }
}
