//! Pre- and post-selected quantum systems on finite-dimensional Hilbert
//! spaces.
//!
//! A [`TwoStateScenario`] fixes an initial state, a final state, a chain of
//! unitary evolution steps and a Hermitian observable sitting between two of
//! the steps. The module answers the conditioned questions that make sense in
//! that setting: the probability of each intermediate outcome given both
//! boundaries ([`abl_probability`]), the conditioned expectation that governs
//! weak coupling ([`weak_value`]), and the fact that the answer does not
//! depend on where the forward and backward evolutions are made to meet
//! ([`match_time_invariance`]). Environment-induced loss of coherence is
//! modelled as suppression of off-diagonal density-matrix entries in a
//! pointer basis ([`dephase`]), and [`born_recovery`] checks statistically
//! that averaging the conditioned probabilities over random final states
//! reproduces the unconditioned ones.

pub mod linalg;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use linalg::{DensityMatrix, EigenDecomposition, Operator, StateVector};

use linalg::check_dims;

/// Eigenvalue gaps below this make an observable degenerate for conditioning.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Conditioned denominators below this mark an impossible boundary pair.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Boundary overlaps below this leave the weak value undefined.
pub const OVERLAP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TsvfError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state vector must have dimension at least 1")]
    EmptyState,
    #[error("cannot normalize a zero state vector")]
    ZeroNorm,
    #[error("operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not hermitian (max deviation {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },
    #[error("operator is not unitary (max deviation {max_deviation:.3e})")]
    NotUnitary { max_deviation: f64 },
    #[error("eigenbasis check failed (max deviation {max_deviation:.3e})")]
    EigenCheckFailed { max_deviation: f64 },
    #[error("observable has a degenerate eigenvalue pair (gap {gap:.3e})")]
    DegenerateObservable { gap: f64 },
    #[error("impossible boundary pair: conditioned denominator {denominator:.3e} is below {DENOMINATOR_FLOOR:.0e}")]
    ImpossibleBoundaryPair { denominator: f64 },
    #[error(
        "undefined weak value: boundary states are orthogonal (overlap magnitude {overlap:.3e})"
    )]
    UndefinedWeakValue { overlap: f64 },
    #[error("measurement index {index} out of range 0..={max}")]
    MeasurementIndexOutOfRange { index: usize, max: usize },
    #[error("split index {index} out of range 0..={max}")]
    SplitIndexOutOfRange { index: usize, max: usize },
    #[error("dephasing strength {strength} outside [0, 1]")]
    StrengthOutOfRange { strength: f64 },
    #[error("sample count {count} too small, need at least {minimum}")]
    SampleCountTooSmall { count: usize, minimum: usize },
    #[error("invalid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },
}

/// A pre-selected state, a post-selected state, the unitaries between them,
/// and the observable whose intermediate outcomes are conditioned on both
/// boundaries.
///
/// `evolution_steps[j]` carries the system from time `t_j` to `t_{j+1}`; the
/// observable sits at time `t_m` where `m = measurement_index`, so `m` may
/// range from 0 (before any step) to the number of steps (after all of them).
/// Boundary states are normalized on construction.
#[derive(Debug, Clone)]
pub struct TwoStateScenario {
    pre: StateVector,
    post: StateVector,
    evolution_steps: Vec<Operator>,
    observable: Operator,
    measurement_index: usize,
}

impl TwoStateScenario {
    pub fn new(
        pre: StateVector,
        post: StateVector,
        evolution_steps: Vec<Operator>,
        observable: Operator,
        measurement_index: usize,
    ) -> Result<Self, TsvfError> {
        let dimension = pre.dimension();
        check_dims(dimension, post.dimension())?;
        check_dims(dimension, observable.dimension())?;
        observable.require_hermitian()?;
        for step in &evolution_steps {
            check_dims(dimension, step.dimension())?;
            step.require_unitary()?;
        }
        if measurement_index > evolution_steps.len() {
            return Err(TsvfError::MeasurementIndexOutOfRange {
                index: measurement_index,
                max: evolution_steps.len(),
            });
        }
        Ok(Self {
            pre: pre.normalize()?,
            post: post.normalize()?,
            evolution_steps,
            observable,
            measurement_index,
        })
    }

    /// A scenario with no evolution: the observable sits directly between the
    /// two boundary states.
    pub fn without_evolution(
        pre: StateVector,
        post: StateVector,
        observable: Operator,
    ) -> Result<Self, TsvfError> {
        Self::new(pre, post, Vec::new(), observable, 0)
    }

    pub fn dimension(&self) -> usize {
        self.pre.dimension()
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    pub fn evolution_steps(&self) -> &[Operator] {
        &self.evolution_steps
    }

    pub fn observable(&self) -> &Operator {
        &self.observable
    }

    pub fn measurement_index(&self) -> usize {
        self.measurement_index
    }

    /// The pre-selected state carried forward to time index `index`.
    fn pre_at(&self, index: usize) -> Result<StateVector, TsvfError> {
        let mut state = self.pre.clone();
        for step in &self.evolution_steps[..index] {
            state = step.apply(&state)?;
        }
        Ok(state)
    }

    /// The post-selected state carried backward to time index `index`.
    fn post_at(&self, index: usize) -> Result<StateVector, TsvfError> {
        let mut state = self.post.clone();
        for step in self.evolution_steps[index..].iter().rev() {
            state = step.adjoint().apply(&state)?;
        }
        Ok(state)
    }

    /// Transports a state at the measurement index to time index `index`.
    fn transport_from_measurement(
        &self,
        state: &StateVector,
        index: usize,
    ) -> Result<StateVector, TsvfError> {
        let m = self.measurement_index;
        let mut state = state.clone();
        if index >= m {
            for step in &self.evolution_steps[m..index] {
                state = step.apply(&state)?;
            }
        } else {
            for step in self.evolution_steps[index..m].iter().rev() {
                state = step.adjoint().apply(&state)?;
            }
        }
        Ok(state)
    }
}

/// Applies a unitary to a state. Norm is preserved.
pub fn evolve(state: &StateVector, u: &Operator) -> Result<StateVector, TsvfError> {
    check_dims(state.dimension(), u.dimension())?;
    u.require_unitary()?;
    u.apply(state)
}

/// The probability of each outcome of the scenario's observable, conditioned
/// on both boundary states:
///
/// `P(a_k) = |<pre'|a_k><a_k|post'>|^2 / sum_i |<pre'|a_i><a_i|post'>|^2`
///
/// where `pre'` and `post'` are the boundaries carried to the measurement
/// index. Probabilities are returned in ascending eigenvalue order.
pub fn abl_probability(scenario: &TwoStateScenario) -> Result<Vec<f64>, TsvfError> {
    abl_probability_at(scenario, scenario.measurement_index)
}

/// Re-evaluates the conditioned probabilities with the forward and backward
/// evolutions meeting at `split_index` instead of at the measurement index,
/// transporting the observable's eigenbasis accordingly. Where the two
/// evolutions are matched is a bookkeeping choice, so the result equals
/// [`abl_probability`] for every valid split.
pub fn match_time_invariance(
    scenario: &TwoStateScenario,
    split_index: usize,
) -> Result<Vec<f64>, TsvfError> {
    if split_index > scenario.evolution_steps.len() {
        return Err(TsvfError::SplitIndexOutOfRange {
            index: split_index,
            max: scenario.evolution_steps.len(),
        });
    }
    abl_probability_at(scenario, split_index)
}

fn abl_probability_at(
    scenario: &TwoStateScenario,
    split_index: usize,
) -> Result<Vec<f64>, TsvfError> {
    let decomposition = scenario.observable.eigendecompose()?;
    let gap = decomposition.min_eigenvalue_gap();
    if gap <= DEGENERACY_TOL {
        return Err(TsvfError::DegenerateObservable { gap });
    }
    let pre = scenario.pre_at(split_index)?;
    let post = scenario.post_at(split_index)?;
    let numerators = decomposition
        .eigenvectors()
        .iter()
        .map(|eigenvector| {
            let transported = scenario.transport_from_measurement(eigenvector, split_index)?;
            let from_pre = pre.inner(&transported)?;
            let to_post = transported.inner(&post)?;
            Ok((from_pre * to_post).norm_sqr())
        })
        .collect::<Result<Vec<f64>, TsvfError>>()?;
    normalize_numerators(&numerators)
}

fn normalize_numerators(numerators: &[f64]) -> Result<Vec<f64>, TsvfError> {
    let denominator: f64 = numerators.iter().sum();
    if denominator <= DENOMINATOR_FLOOR {
        return Err(TsvfError::ImpossibleBoundaryPair { denominator });
    }
    Ok(numerators.iter().map(|n| n / denominator).collect())
}

/// The conditioned expectation `<pre'|A|post'> / <pre'|post'>` at the
/// measurement index. Values outside the eigenvalue range are legal outputs;
/// orthogonal boundaries are an error.
pub fn weak_value(scenario: &TwoStateScenario) -> Result<Complex64, TsvfError> {
    let pre = scenario.pre_at(scenario.measurement_index)?;
    let post = scenario.post_at(scenario.measurement_index)?;
    let overlap = pre.inner(&post)?;
    if overlap.norm() <= OVERLAP_FLOOR {
        return Err(TsvfError::UndefinedWeakValue {
            overlap: overlap.norm(),
        });
    }
    let coupled = scenario.observable.apply(&post)?;
    Ok(pre.inner(&coupled)? / overlap)
}

/// Suppresses coherences in the pointer basis: diagonal entries are kept,
/// off-diagonal entries are multiplied by `1 - strength`. Strength 1 leaves
/// the classical mixture over pointer states.
pub fn dephase(
    rho: &DensityMatrix,
    pointer_basis: &EigenDecomposition,
    strength: f64,
) -> Result<DensityMatrix, TsvfError> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(TsvfError::StrengthOutOfRange { strength });
    }
    check_dims(rho.dimension(), pointer_basis.dimension())?;
    let basis = pointer_basis.basis_matrix();
    let mut in_pointer = basis.adjoint() * rho.matrix() * &basis;
    let n = in_pointer.nrows();
    let keep = 1.0 - strength;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                in_pointer[(i, j)] *= keep;
            }
        }
    }
    let back = &basis * in_pointer * basis.adjoint();
    DensityMatrix::new(back)
}

/// Result of averaging conditioned probabilities over random final states.
#[derive(Debug, Clone)]
pub struct BornRecovery {
    /// Observable eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Mean conditioned probability per eigenvalue.
    pub means: Vec<f64>,
    /// Standard error of each mean.
    pub std_errors: Vec<f64>,
    /// Samples that entered the averages.
    pub samples_used: usize,
    /// Draws discarded because the conditioned denominator vanished.
    pub discarded: usize,
}

/// Minimum sample count accepted by [`born_recovery`].
pub const MIN_BORN_SAMPLES: usize = 100;

/// Averages the conditioned outcome probabilities for `pre` over
/// `sample_count` Haar-random post-selection states (normalized vectors of
/// independent standard complex Gaussians, drawn from a ChaCha stream seeded
/// with `seed`). As the dimension grows the means approach the unconditioned
/// probabilities `|<pre|a_k>|^2`.
pub fn born_recovery(
    pre: &StateVector,
    observable: &Operator,
    sample_count: usize,
    seed: u64,
) -> Result<BornRecovery, TsvfError> {
    if sample_count < MIN_BORN_SAMPLES {
        return Err(TsvfError::SampleCountTooSmall {
            count: sample_count,
            minimum: MIN_BORN_SAMPLES,
        });
    }
    let decomposition = observable.eigendecompose()?;
    let gap = decomposition.min_eigenvalue_gap();
    if gap <= DEGENERACY_TOL {
        return Err(TsvfError::DegenerateObservable { gap });
    }
    let pre = pre.normalize()?;
    check_dims(pre.dimension(), decomposition.dimension())?;
    let dimension = pre.dimension();
    let pre_weights: Vec<f64> = decomposition
        .eigenvectors()
        .iter()
        .map(|eigenvector| Ok(pre.inner(eigenvector)?.norm_sqr()))
        .collect::<Result<_, TsvfError>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![0.0_f64; dimension];
    let mut sums_sq = vec![0.0_f64; dimension];
    let mut used = 0_usize;
    let mut discarded = 0_usize;
    let mut numerators = vec![0.0_f64; dimension];
    for _ in 0..sample_count {
        let post = StateVector::haar_random(dimension, &mut rng)?;
        let mut denominator = 0.0;
        for (k, eigenvector) in decomposition.eigenvectors().iter().enumerate() {
            let overlap = eigenvector.inner(&post)?;
            numerators[k] = pre_weights[k] * overlap.norm_sqr();
            denominator += numerators[k];
        }
        if denominator <= DENOMINATOR_FLOOR {
            discarded += 1;
            continue;
        }
        used += 1;
        for k in 0..dimension {
            let p = numerators[k] / denominator;
            sums[k] += p;
            sums_sq[k] += p * p;
        }
    }

    let n = used.max(1) as f64;
    let means: Vec<f64> = sums.iter().map(|s| s / n).collect();
    let std_errors: Vec<f64> = sums_sq
        .iter()
        .zip(&means)
        .map(|(&sq, &mean)| {
            if used < 2 {
                return 0.0;
            }
            let variance = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (variance / n).sqrt()
        })
        .collect();
    Ok(BornRecovery {
        eigenvalues: decomposition.eigenvalues().to_vec(),
        means,
        std_errors,
        samples_used: used,
        discarded,
    })
}
