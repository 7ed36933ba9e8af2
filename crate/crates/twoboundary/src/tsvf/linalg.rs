//! Finite-dimensional complex vectors, operators and density matrices.
//!
//! These are thin wrappers over dense [`nalgebra`] storage that carry the
//! validation rules the rest of the crate relies on: unit norm after
//! [`StateVector::normalize`], Hermiticity and unitarity checked against
//! explicit tolerances, orthonormal eigenbases, and positive unit-trace
//! density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::TsvfError;

/// Deviation allowed when an operator claims to be Hermitian or unitary.
pub const OPERATOR_TOL: f64 = 1e-12;

/// Deviation allowed on eigenbasis orthonormality and reconstruction.
pub const EIGEN_TOL: f64 = 1e-10;

/// A finite-dimensional pure state with complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes. The dimension must be at least 1.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, TsvfError> {
        if amplitudes.is_empty() {
            return Err(TsvfError::EmptyState);
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, TsvfError> {
        Self::new(
            amplitudes
                .iter()
                .map(|&re| Complex64::new(re, 0.0))
                .collect(),
        )
    }

    /// The computational basis state `|index>` in `dimension` dimensions.
    pub fn basis_state(dimension: usize, index: usize) -> Result<Self, TsvfError> {
        if dimension == 0 {
            return Err(TsvfError::EmptyState);
        }
        if index >= dimension {
            return Err(TsvfError::DimensionMismatch {
                left: index,
                right: dimension,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dimension];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    /// Draws a Haar-distributed random state: independent standard complex
    /// Gaussian amplitudes, normalized.
    pub fn haar_random<R: Rng + ?Sized>(dimension: usize, rng: &mut R) -> Result<Self, TsvfError> {
        if dimension == 0 {
            return Err(TsvfError::EmptyState);
        }
        let amplitudes: Vec<Complex64> = (0..dimension)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        Self::new(amplitudes)?.normalize()
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Returns the unit-norm rescaling of this state.
    pub fn normalize(&self) -> Result<Self, TsvfError> {
        let norm = self.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(TsvfError::ZeroNorm);
        }
        Ok(Self {
            amplitudes: self.amplitudes.map(|a| a / norm),
        })
    }

    /// The inner product `<self|other>`; `self` is conjugated.
    pub fn inner(&self, other: &Self) -> Result<Complex64, TsvfError> {
        check_dims(self.dimension(), other.dimension())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub(crate) fn vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub(crate) fn from_vector(amplitudes: DVector<Complex64>) -> Self {
        Self { amplitudes }
    }
}

/// A square complex matrix acting on [`StateVector`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<Complex64>,
}

impl Operator {
    /// Builds an operator from a square nested row list.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, TsvfError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|row| row.len() != n) {
            let cols = rows.first().map_or(0, Vec::len);
            return Err(TsvfError::NotSquare { rows: n, cols });
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Ok(Self { matrix })
    }

    /// Builds an operator with the given real diagonal.
    pub fn diagonal(entries: &[f64]) -> Result<Self, TsvfError> {
        if entries.is_empty() {
            return Err(TsvfError::NotSquare { rows: 0, cols: 0 });
        }
        let n = entries.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { matrix })
    }

    pub fn identity(dimension: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dimension, dimension),
        }
    }

    /// Draws a Haar-distributed random unitary: QR decomposition of a complex
    /// Ginibre matrix, with the R diagonal phases absorbed into Q.
    pub fn random_unitary<R: Rng + ?Sized>(
        dimension: usize,
        rng: &mut R,
    ) -> Result<Self, TsvfError> {
        if dimension == 0 {
            return Err(TsvfError::NotSquare { rows: 0, cols: 0 });
        }
        let ginibre = DMatrix::from_fn(dimension, dimension, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        });
        let qr = ginibre.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..dimension {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..dimension {
                q[(i, j)] *= phase;
            }
        }
        Ok(Self { matrix: q })
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `max |M - M†|` over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M†M - I|` over entries.
    pub fn unitary_deviation(&self) -> f64 {
        let n = self.dimension();
        let diff = self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(n, n);
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn require_hermitian(&self) -> Result<(), TsvfError> {
        let max_deviation = self.hermitian_deviation();
        if max_deviation < OPERATOR_TOL {
            Ok(())
        } else {
            Err(TsvfError::NotHermitian { max_deviation })
        }
    }

    pub fn require_unitary(&self) -> Result<(), TsvfError> {
        let max_deviation = self.unitary_deviation();
        if max_deviation < OPERATOR_TOL {
            Ok(())
        } else {
            Err(TsvfError::NotUnitary { max_deviation })
        }
    }

    /// Applies the operator to a state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector, TsvfError> {
        check_dims(self.dimension(), state.dimension())?;
        Ok(StateVector::from_vector(&self.matrix * state.vector()))
    }

    /// The product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self, TsvfError> {
        check_dims(self.dimension(), other.dimension())?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Eigendecomposition of a Hermitian operator, eigenvalues sorted
    /// ascending. The returned basis is checked for orthonormality and for
    /// reconstructing the operator within [`EIGEN_TOL`].
    pub fn eigendecompose(&self) -> Result<EigenDecomposition, TsvfError> {
        self.require_hermitian()?;
        let eigen = nalgebra::linalg::SymmetricEigen::new(self.matrix.clone());
        let n = self.dimension();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
        let eigenvectors: Vec<StateVector> = order
            .iter()
            .map(|&k| StateVector::from_vector(eigen.eigenvectors.column(k).into_owned()))
            .collect();
        let decomposition = EigenDecomposition::new(eigenvalues, eigenvectors)?;
        decomposition.check_reconstructs(self)?;
        Ok(decomposition)
    }

    pub(crate) fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// An orthonormal eigenbasis with its real eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl EigenDecomposition {
    /// Builds a decomposition after verifying orthonormality within
    /// [`EIGEN_TOL`].
    pub fn new(eigenvalues: Vec<f64>, eigenvectors: Vec<StateVector>) -> Result<Self, TsvfError> {
        let n = eigenvectors.len();
        if n == 0 || eigenvalues.len() != n {
            return Err(TsvfError::DimensionMismatch {
                left: eigenvalues.len(),
                right: n,
            });
        }
        for vector in &eigenvectors {
            check_dims(vector.dimension(), n)?;
        }
        let mut max_deviation: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let overlap = eigenvectors[i].inner(&eigenvectors[j])?;
                let expected = if i == j { 1.0 } else { 0.0 };
                max_deviation = max_deviation.max((overlap - expected).norm());
            }
        }
        if max_deviation >= EIGEN_TOL {
            return Err(TsvfError::EigenCheckFailed { max_deviation });
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    /// The computational pointer basis in `dimension` dimensions, labelled by
    /// basis index.
    pub fn computational(dimension: usize) -> Result<Self, TsvfError> {
        let eigenvalues = (0..dimension).map(|k| k as f64).collect();
        let eigenvectors = (0..dimension)
            .map(|k| StateVector::basis_state(dimension, k))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(eigenvalues, eigenvectors)
    }

    pub fn dimension(&self) -> usize {
        self.eigenvectors.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    /// The smallest gap between consecutive sorted eigenvalues.
    pub fn min_eigenvalue_gap(&self) -> f64 {
        let mut sorted = self.eigenvalues.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
            .windows(2)
            .map(|pair| pair[1] - pair[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// The basis matrix with eigenvectors as columns.
    pub(crate) fn basis_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dimension();
        DMatrix::from_fn(n, n, |i, j| self.eigenvectors[j].amplitudes()[i])
    }

    fn check_reconstructs(&self, operator: &Operator) -> Result<(), TsvfError> {
        let n = self.dimension();
        let mut rebuilt = DMatrix::<Complex64>::zeros(n, n);
        for (value, vector) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let column = vector.vector();
            rebuilt += (column * column.adjoint()).scale(*value);
        }
        let max_deviation = (rebuilt - operator.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if max_deviation >= EIGEN_TOL {
            return Err(TsvfError::EigenCheckFailed { max_deviation });
        }
        Ok(())
    }
}

/// A Hermitian, positive, unit-trace matrix describing a mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues above -1e-10).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, TsvfError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(TsvfError::InvalidDensityMatrix {
                reason: format!("matrix is {}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        let hermitian_deviation = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if hermitian_deviation >= 1e-12 {
            return Err(TsvfError::InvalidDensityMatrix {
                reason: format!("not hermitian (deviation {hermitian_deviation:.3e})"),
            });
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() >= 1e-12 {
            return Err(TsvfError::InvalidDensityMatrix {
                reason: format!("trace is {trace} instead of 1"),
            });
        }
        let eigenvalues = nalgebra::linalg::SymmetricEigen::new(matrix.clone()).eigenvalues;
        if let Some(lowest) = eigenvalues.iter().copied().reduce(f64::min) {
            if lowest < -1e-10 {
                return Err(TsvfError::InvalidDensityMatrix {
                    reason: format!("negative eigenvalue {lowest:.3e}"),
                });
            }
        }
        Ok(Self { matrix })
    }

    /// The pure-state projector `|state><state|` (state is normalized first).
    pub fn pure(state: &StateVector) -> Result<Self, TsvfError> {
        let normalized = state.normalize()?;
        let column = normalized.vector();
        Self::new(column * column.adjoint())
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Populations `<b_k| rho |b_k>` in the given basis.
    pub fn populations(&self, basis: &EigenDecomposition) -> Result<Vec<f64>, TsvfError> {
        check_dims(self.dimension(), basis.dimension())?;
        basis
            .eigenvectors()
            .iter()
            .map(|vector| {
                let column = vector.vector();
                Ok((column.adjoint() * &self.matrix * column)[(0, 0)].re)
            })
            .collect()
    }

    pub(crate) fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<(), TsvfError> {
    if left == right {
        Ok(())
    } else {
        Err(TsvfError::DimensionMismatch { left, right })
    }
}
