//! A lattice random walk conditioned on both a fixed start and a fixed end.
//!
//! The walker lives on a periodic one-dimensional lattice and carries a
//! velocity of at most two sites per step. At each step it usually keeps its
//! velocity (probability `1 - 2*epsilon`) and otherwise shifts it by one unit
//! (probability `epsilon` per direction, folded back into persistence at the
//! `|v| = 2` rim so every row stays stochastic and the transition table keeps
//! its time-reversal symmetry `K(v, v') = K(-v', -v)`).
//!
//! Both boundaries are sharp: the first velocity of a trajectory *is*
//! `initial_v`, and a trajectory is kept only when it arrives at `final_x`
//! with last velocity `final_v`. [`run_ensemble`] post-selects by plain
//! rejection, exactly as the forward simulation would do it;
//! [`exact_conditioned_density`] computes the same conditioned density with a
//! forward-backward pass over the `(position, velocity)` state space and
//! serves as the exact oracle for the sampled histograms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Velocities are confined to `[-2, 2]`.
pub const VELOCITY_RANGE: std::ops::RangeInclusive<i32> = -2..=2;

const VELOCITY_SLOTS: usize = 5;

/// Largest `width * 5 * horizon` state space the exact pass will enumerate.
pub const MAX_STATE_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WalkError {
    #[error("lattice width must be at least 5, got {0}")]
    WidthTooSmall(usize),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("epsilon {0} outside [0, 0.5)")]
    EpsilonOutOfRange(f64),
    #[error("velocity {0} outside [-2, 2]")]
    VelocityOutOfRange(i32),
    #[error("tries must be at least 1")]
    ZeroTries,
    #[error("workers must be at least 1")]
    ZeroWorkers,
    #[error("state space too large: {0} state-steps exceeds {MAX_STATE_STEPS}")]
    StateSpaceTooLarge(u64),
    #[error("path inconsistent with config: {reason}")]
    InconsistentPath { reason: String },
}

/// Lattice geometry, noise level and the two boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    /// Number of periodic lattice sites.
    pub width: usize,
    /// Number of time steps.
    pub horizon: usize,
    /// Probability of each one-unit velocity perturbation.
    pub epsilon: f64,
    /// Start position (stored modulo `width`).
    pub initial_x: usize,
    /// First velocity of every trajectory.
    pub initial_v: i32,
    /// Required arrival position (stored modulo `width`).
    pub final_x: usize,
    /// Required last velocity.
    pub final_v: i32,
}

impl WalkConfig {
    pub fn new(
        width: usize,
        horizon: usize,
        epsilon: f64,
        initial_x: i64,
        initial_v: i32,
        final_x: i64,
        final_v: i32,
    ) -> Result<Self, WalkError> {
        if width < 5 {
            return Err(WalkError::WidthTooSmall(width));
        }
        if horizon == 0 {
            return Err(WalkError::ZeroHorizon);
        }
        check_epsilon(epsilon)?;
        check_velocity(initial_v)?;
        check_velocity(final_v)?;
        Ok(Self {
            width,
            horizon,
            epsilon,
            initial_x: wrap(initial_x, width),
            initial_v,
            final_x: wrap(final_x, width),
            final_v,
        })
    }

    /// The time-reversed conditioning: boundaries swapped, velocities negated.
    pub fn reversed(&self) -> Self {
        Self {
            width: self.width,
            horizon: self.horizon,
            epsilon: self.epsilon,
            initial_x: self.final_x,
            initial_v: -self.final_v,
            final_x: self.initial_x,
            final_v: -self.initial_v,
        }
    }
}

/// A realized trajectory: `positions[t]` for `t = 0..=horizon` and the move
/// `velocities[t-1]` taken between `t-1` and `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    positions: Vec<usize>,
    velocities: Vec<i32>,
}

impl Path {
    /// Validates the accumulation invariant
    /// `positions[t] = positions[t-1] + velocities[t-1] (mod width)`.
    pub fn new(
        positions: Vec<usize>,
        velocities: Vec<i32>,
        width: usize,
    ) -> Result<Self, WalkError> {
        if positions.len() != velocities.len() + 1 || velocities.is_empty() {
            return Err(WalkError::InconsistentPath {
                reason: format!(
                    "{} positions with {} velocities",
                    positions.len(),
                    velocities.len()
                ),
            });
        }
        for &v in &velocities {
            check_velocity(v)?;
        }
        for (t, &x) in positions.iter().enumerate() {
            if x >= width {
                return Err(WalkError::InconsistentPath {
                    reason: format!("position {x} at step {t} outside lattice of width {width}"),
                });
            }
            if t > 0 && x != add_velocity(positions[t - 1], velocities[t - 1], width) {
                return Err(WalkError::InconsistentPath {
                    reason: format!("position at step {t} does not accumulate its velocity"),
                });
            }
        }
        Ok(Self {
            positions,
            velocities,
        })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn velocities(&self) -> &[i32] {
        &self.velocities
    }

    pub fn horizon(&self) -> usize {
        self.velocities.len()
    }
}

/// Sampled two-dimensional histogram over `(time step, position)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    width: usize,
    horizon: usize,
    counts: Vec<u64>,
    accepted: u64,
    tries: u64,
}

impl DensityProfile {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Accepted-path visits of site `x` at time `t`.
    pub fn count(&self, t: usize, x: usize) -> u64 {
        self.counts[t * self.width + x]
    }

    /// Relative frequency `count / accepted` (0 when nothing was accepted).
    pub fn frequency(&self, t: usize, x: usize) -> f64 {
        if self.accepted == 0 {
            0.0
        } else {
            self.count(t, x) as f64 / self.accepted as f64
        }
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn tries(&self) -> u64 {
        self.tries
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.tries as f64
    }
}

/// Exact conditioned density from the forward-backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDensity {
    width: usize,
    horizon: usize,
    frequencies: Vec<f64>,
    total_weight: f64,
}

impl ExactDensity {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Conditioned probability of site `x` at time `t`; each time row sums
    /// to 1 when the boundary pair is feasible.
    pub fn frequency(&self, t: usize, x: usize) -> f64 {
        self.frequencies[t * self.width + x]
    }

    /// Probability that an unconditioned trajectory satisfies the final
    /// boundary, i.e. the acceptance rate of rejection sampling.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }
}

/// Transition probability from velocity `v` to `v_next`.
///
/// Interior rows put `1 - 2*epsilon` on persistence and `epsilon` on each
/// one-unit shift; at the rim the outward shift folds back into persistence,
/// which keeps every row stochastic and preserves `K(v, v') = K(-v', -v)`.
pub fn transition_probability(v: i32, v_next: i32, epsilon: f64) -> Result<f64, WalkError> {
    check_velocity(v)?;
    check_epsilon(epsilon)?;
    if !VELOCITY_RANGE.contains(&v_next) {
        return Ok(0.0);
    }
    Ok(match v {
        2 => match v_next {
            2 => 1.0 - epsilon,
            1 => epsilon,
            _ => 0.0,
        },
        -2 => match v_next {
            -2 => 1.0 - epsilon,
            -1 => epsilon,
            _ => 0.0,
        },
        _ => match v_next - v {
            0 => 1.0 - 2.0 * epsilon,
            -1 | 1 => epsilon,
            _ => 0.0,
        },
    })
}

/// The full kernel row for velocity `v`, indexed by `v_next + 2`.
pub fn kernel(v: i32, epsilon: f64) -> Result<[f64; VELOCITY_SLOTS], WalkError> {
    check_velocity(v)?;
    check_epsilon(epsilon)?;
    let mut row = [0.0; VELOCITY_SLOTS];
    for (slot, entry) in row.iter_mut().enumerate() {
        *entry = transition_probability(v, slot as i32 - 2, epsilon)?;
    }
    Ok(row)
}

/// Draws one trajectory and keeps it only if it meets the final boundary.
/// Rejection is a normal outcome, reported as `None`.
pub fn sample_path<R: Rng + ?Sized>(config: &WalkConfig, rng: &mut R) -> Option<Path> {
    let mut positions = Vec::with_capacity(config.horizon + 1);
    let mut velocities = Vec::with_capacity(config.horizon);
    if walk_once(config, rng, &mut positions, &mut velocities) {
        Some(Path {
            positions,
            velocities,
        })
    } else {
        None
    }
}

/// Generates one trajectory into the supplied buffers; returns acceptance.
fn walk_once<R: Rng + ?Sized>(
    config: &WalkConfig,
    rng: &mut R,
    positions: &mut Vec<usize>,
    velocities: &mut Vec<i32>,
) -> bool {
    positions.clear();
    velocities.clear();
    let mut x = config.initial_x;
    let mut v = config.initial_v;
    positions.push(x);
    x = add_velocity(x, v, config.width);
    positions.push(x);
    velocities.push(v);
    for _ in 1..config.horizon {
        v = step_velocity(v, config.epsilon, rng);
        x = add_velocity(x, v, config.width);
        positions.push(x);
        velocities.push(v);
    }
    x == config.final_x && v == config.final_v
}

fn step_velocity<R: Rng + ?Sized>(v: i32, epsilon: f64, rng: &mut R) -> i32 {
    let u: f64 = rng.gen();
    match v {
        2 => {
            if u < epsilon {
                1
            } else {
                2
            }
        }
        -2 => {
            if u < epsilon {
                -1
            } else {
                -2
            }
        }
        _ => {
            if u < epsilon {
                v - 1
            } else if u < 2.0 * epsilon {
                v + 1
            } else {
                v
            }
        }
    }
}

/// Rejection-samples `tries` trajectories split across `workers` threads and
/// accumulates the accepted ones into a [`DensityProfile`].
///
/// Worker `i` consumes its own ChaCha stream, derived as
/// `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(i)`, and simulates a
/// fixed share of the tries, so the merged histogram is bit-identical for a
/// fixed `(seed, workers)` pair regardless of scheduling.
pub fn run_ensemble(
    config: &WalkConfig,
    tries: u64,
    seed: u64,
    workers: usize,
) -> Result<DensityProfile, WalkError> {
    if tries == 0 {
        return Err(WalkError::ZeroTries);
    }
    if workers == 0 {
        return Err(WalkError::ZeroWorkers);
    }
    let bins = (config.horizon + 1) * config.width;
    let base = tries / workers as u64;
    let remainder = tries % workers as u64;
    let shares: Vec<u64> = (0..workers as u64)
        .map(|i| base + u64::from(i < remainder))
        .collect();

    let results: Vec<(Vec<u64>, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = shares
            .iter()
            .enumerate()
            .map(|(worker, &share)| {
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(worker as u64);
                    run_worker(config, share, &mut rng, bins)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("walk worker panicked"))
            .collect()
    });

    let mut counts = vec![0_u64; bins];
    let mut accepted = 0_u64;
    for (worker_counts, worker_accepted) in results {
        for (total, part) in counts.iter_mut().zip(&worker_counts) {
            *total += part;
        }
        accepted += worker_accepted;
    }
    Ok(DensityProfile {
        width: config.width,
        horizon: config.horizon,
        counts,
        accepted,
        tries,
    })
}

fn run_worker<R: Rng + ?Sized>(
    config: &WalkConfig,
    tries: u64,
    rng: &mut R,
    bins: usize,
) -> (Vec<u64>, u64) {
    let mut counts = vec![0_u64; bins];
    let mut accepted = 0_u64;
    let mut positions = Vec::with_capacity(config.horizon + 1);
    let mut velocities = Vec::with_capacity(config.horizon);
    for _ in 0..tries {
        if walk_once(config, rng, &mut positions, &mut velocities) {
            accepted += 1;
            for (t, &x) in positions.iter().enumerate() {
                counts[t * config.width + x] += 1;
            }
        }
    }
    (counts, accepted)
}

struct ForwardBackward {
    /// `alphas[t-1][x*5 + v+2]` for `t` in `1..=horizon`.
    alphas: Vec<Vec<f64>>,
    /// `betas[t-1][x*5 + v+2]` for `t` in `1..=horizon`.
    betas: Vec<Vec<f64>>,
}

fn forward_backward(config: &WalkConfig) -> Result<ForwardBackward, WalkError> {
    let state_steps = config.width as u64 * VELOCITY_SLOTS as u64 * config.horizon as u64;
    if state_steps > MAX_STATE_STEPS {
        return Err(WalkError::StateSpaceTooLarge(state_steps));
    }
    let width = config.width;
    let states = width * VELOCITY_SLOTS;
    let horizon = config.horizon;
    let rows: Vec<[f64; VELOCITY_SLOTS]> = (-2..=2)
        .map(|v| kernel(v, config.epsilon))
        .collect::<Result<_, _>>()?;

    let mut alphas = vec![vec![0.0_f64; states]; horizon];
    let first_x = add_velocity(config.initial_x, config.initial_v, width);
    alphas[0][state_index(first_x, config.initial_v, width)] = 1.0;
    for t in 1..horizon {
        let (done, rest) = alphas.split_at_mut(t);
        let previous = &done[t - 1];
        let next = &mut rest[0];
        for x in 0..width {
            for slot in 0..VELOCITY_SLOTS {
                let weight = previous[x * VELOCITY_SLOTS + slot];
                if weight == 0.0 {
                    continue;
                }
                for (next_slot, &p) in rows[slot].iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let v_next = next_slot as i32 - 2;
                    let x_next = add_velocity(x, v_next, width);
                    next[x_next * VELOCITY_SLOTS + next_slot] += weight * p;
                }
            }
        }
    }

    let mut betas = vec![vec![0.0_f64; states]; horizon];
    betas[horizon - 1][state_index(config.final_x, config.final_v, width)] = 1.0;
    for t in (1..horizon).rev() {
        let (head, tail) = betas.split_at_mut(t);
        let current = &mut head[t - 1];
        let later = &tail[0];
        for x in 0..width {
            for slot in 0..VELOCITY_SLOTS {
                let mut weight = 0.0;
                for (next_slot, &p) in rows[slot].iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let v_next = next_slot as i32 - 2;
                    let x_next = add_velocity(x, v_next, width);
                    weight += p * later[x_next * VELOCITY_SLOTS + next_slot];
                }
                current[x * VELOCITY_SLOTS + slot] = weight;
            }
        }
    }

    Ok(ForwardBackward { alphas, betas })
}

/// Exact conditioned site density per time step, plus the total path weight.
///
/// The forward pass propagates the initial boundary, the backward pass the
/// final one; the conditioned marginal at `(t, x)` is proportional to the
/// velocity-summed product of the two. The total weight equals the
/// acceptance probability of [`sample_path`]. Returns an all-zero grid when
/// the boundary pair is infeasible (total weight 0).
pub fn exact_conditioned_density(config: &WalkConfig) -> Result<ExactDensity, WalkError> {
    let fb = forward_backward(config)?;
    let width = config.width;
    let horizon = config.horizon;
    let total_weight = fb.alphas[horizon - 1][state_index(config.final_x, config.final_v, width)];
    let mut frequencies = vec![0.0_f64; (horizon + 1) * width];
    if total_weight > 0.0 {
        frequencies[config.initial_x] = 1.0;
        for t in 1..=horizon {
            let alpha = &fb.alphas[t - 1];
            let beta = &fb.betas[t - 1];
            let row = &mut frequencies[t * width..(t + 1) * width];
            let mut row_sum = 0.0;
            for (x, entry) in row.iter_mut().enumerate() {
                let mut weight = 0.0;
                for slot in 0..VELOCITY_SLOTS {
                    weight += alpha[x * VELOCITY_SLOTS + slot] * beta[x * VELOCITY_SLOTS + slot];
                }
                *entry = weight;
                row_sum += weight;
            }
            for entry in row.iter_mut() {
                *entry /= row_sum;
            }
        }
    }
    Ok(ExactDensity {
        width,
        horizon,
        frequencies,
        total_weight,
    })
}

/// Mean conditioned velocity at each time step `t = 1..=horizon`, from the
/// exact forward-backward pass.
pub fn conditioned_mean_velocities(config: &WalkConfig) -> Result<Vec<f64>, WalkError> {
    let fb = forward_backward(config)?;
    let width = config.width;
    let mut means = Vec::with_capacity(config.horizon);
    for t in 1..=config.horizon {
        let alpha = &fb.alphas[t - 1];
        let beta = &fb.betas[t - 1];
        let mut weight = 0.0;
        let mut weighted_v = 0.0;
        for x in 0..width {
            for slot in 0..VELOCITY_SLOTS {
                let product = alpha[x * VELOCITY_SLOTS + slot] * beta[x * VELOCITY_SLOTS + slot];
                weight += product;
                weighted_v += product * (slot as f64 - 2.0);
            }
        }
        means.push(if weight > 0.0 {
            weighted_v / weight
        } else {
            0.0
        });
    }
    Ok(means)
}

/// Log-probability of generating `path` under `config`: the sum of log
/// kernel probabilities over consecutive velocity pairs. A forbidden
/// transition yields negative infinity.
pub fn path_log_probability(config: &WalkConfig, path: &Path) -> Result<f64, WalkError> {
    if path.horizon() != config.horizon {
        return Err(WalkError::InconsistentPath {
            reason: format!(
                "path has horizon {}, config wants {}",
                path.horizon(),
                config.horizon
            ),
        });
    }
    if path.positions[0] != config.initial_x {
        return Err(WalkError::InconsistentPath {
            reason: format!(
                "path starts at {}, config wants {}",
                path.positions[0], config.initial_x
            ),
        });
    }
    if path.velocities[0] != config.initial_v {
        return Err(WalkError::InconsistentPath {
            reason: format!(
                "path starts with velocity {}, config wants {}",
                path.velocities[0], config.initial_v
            ),
        });
    }
    let mut total = 0.0;
    for pair in path.velocities.windows(2) {
        let p = transition_probability(pair[0], pair[1], config.epsilon)?;
        if p == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        total += p.ln();
    }
    Ok(total)
}

/// The time-reversed trajectory: positions reversed, velocities reversed in
/// order and negated. An involution that pairs with [`WalkConfig::reversed`].
pub fn reverse_path(path: &Path) -> Path {
    let positions: Vec<usize> = path.positions.iter().rev().copied().collect();
    let velocities: Vec<i32> = path.velocities.iter().rev().map(|&v| -v).collect();
    Path {
        positions,
        velocities,
    }
}

fn state_index(x: usize, v: i32, width: usize) -> usize {
    debug_assert!(x < width);
    x * VELOCITY_SLOTS + (v + 2) as usize
}

fn wrap(x: i64, width: usize) -> usize {
    x.rem_euclid(width as i64) as usize
}

fn add_velocity(x: usize, v: i32, width: usize) -> usize {
    wrap(x as i64 + v as i64, width)
}

fn check_velocity(v: i32) -> Result<(), WalkError> {
    if VELOCITY_RANGE.contains(&v) {
        Ok(())
    } else {
        Err(WalkError::VelocityOutOfRange(v))
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), WalkError> {
    if (0.0..0.5).contains(&epsilon) {
        Ok(())
    } else {
        Err(WalkError::EpsilonOutOfRange(epsilon))
    }
}
