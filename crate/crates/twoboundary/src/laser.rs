//! The photon rate equation behind the lasing threshold argument.
//!
//! `dn/dt = (N2 - N1) * W * n + W * N2 - 2 * kappa * n`
//!
//! with fixed occupations `N2` (excited) and `N1` (ground), transition
//! probability `W` and absorption coefficient `kappa`. The three terms are
//! stimulated emission or absorption, spontaneous emission, and spontaneous
//! absorption; exponential growth of the photon number requires a positive
//! right-hand side.
//!
//! This is a purely macroscopic photon count. The coherent forward emission
//! that actually builds the beam is a quantum-statistical enhancement the
//! equation never sees; the matching suppression in the opposite-phase
//! channel cancels it in any phase-blind count, which is why the threshold
//! argument works anyway. With constant occupations the equation is linear,
//! `dn/dt = a*n + b` with `a = (N2 - N1)*W - 2*kappa` and `b = W*N2`, and the
//! closed-form solution anchors the integrator tests.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LaserError {
    #[error("occupations and rates must be non-negative: {reason}")]
    NegativeParameter { reason: String },
    #[error("photon count must be non-negative, got {0}")]
    NegativePhotonCount(f64),
    #[error("invalid step parameters: {reason}")]
    InvalidStep { reason: String },
}

/// Fixed occupations and rates of the two-level medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserParams {
    /// Excited-state occupation `N2`.
    pub n2: f64,
    /// Ground-state occupation `N1`.
    pub n1: f64,
    /// Transition probability `W` per unit time.
    pub w: f64,
    /// Absorption coefficient `kappa` per unit time.
    pub kappa: f64,
}

impl LaserParams {
    pub fn new(n2: f64, n1: f64, w: f64, kappa: f64) -> Result<Self, LaserError> {
        for (name, value) in [("n2", n2), ("n1", n1), ("w", w), ("kappa", kappa)] {
            if !value.is_finite() || value < 0.0 {
                return Err(LaserError::NegativeParameter {
                    reason: format!("{name} = {value}"),
                });
            }
        }
        Ok(Self { n2, n1, w, kappa })
    }

    /// The linear coefficient `a = (N2 - N1) * W - 2 * kappa`.
    pub fn growth_rate(&self) -> f64 {
        (self.n2 - self.n1) * self.w - 2.0 * self.kappa
    }

    /// The constant source term `b = W * N2`.
    pub fn source_rate(&self) -> f64 {
        self.w * self.n2
    }

    fn rhs_at(&self, n: f64) -> f64 {
        (self.n2 - self.n1) * self.w * n + self.w * self.n2 - 2.0 * self.kappa * n
    }
}

/// The right-hand side of the rate equation at photon number `n`.
pub fn rhs(params: &LaserParams, n: f64) -> Result<f64, LaserError> {
    if n.is_nan() || n < 0.0 {
        return Err(LaserError::NegativePhotonCount(n));
    }
    Ok(params.rhs_at(n))
}

/// True when the photon number grows at `n`, i.e. the right-hand side is
/// positive.
pub fn lasing_condition(params: &LaserParams, n: f64) -> Result<bool, LaserError> {
    Ok(rhs(params, n)? > 0.0)
}

/// Photon number sampled along the integration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSeries {
    pub times: Vec<f64>,
    pub photon_counts: Vec<f64>,
}

impl PhotonSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("series never empty")
    }

    pub fn final_count(&self) -> f64 {
        *self.photon_counts.last().expect("series never empty")
    }
}

/// Integrates the rate equation from `n0` to `t_end` with classical
/// fixed-step fourth-order Runge-Kutta steps of size `dt` (the last step is
/// shortened to land exactly on `t_end`).
pub fn simulate(
    params: &LaserParams,
    n0: f64,
    t_end: f64,
    dt: f64,
) -> Result<PhotonSeries, LaserError> {
    if n0.is_nan() || n0 < 0.0 {
        return Err(LaserError::NegativePhotonCount(n0));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(LaserError::InvalidStep {
            reason: format!("dt = {dt}"),
        });
    }
    if !t_end.is_finite() || t_end < dt {
        return Err(LaserError::InvalidStep {
            reason: format!("t_end = {t_end} must be at least dt = {dt}"),
        });
    }
    let whole_steps = (t_end / dt + 1e-9).floor() as usize;
    let remainder = t_end - whole_steps as f64 * dt;
    let mut times = Vec::with_capacity(whole_steps + 2);
    let mut counts = Vec::with_capacity(whole_steps + 2);
    let mut n = n0;
    times.push(0.0);
    counts.push(n);
    for step in 1..=whole_steps {
        n = rk4_step(params, n, dt);
        times.push(step as f64 * dt);
        counts.push(n);
    }
    if remainder > 1e-12 * t_end {
        n = rk4_step(params, n, remainder);
        times.push(t_end);
        counts.push(n);
    }
    Ok(PhotonSeries {
        times,
        photon_counts: counts,
    })
}

fn rk4_step(params: &LaserParams, n: f64, dt: f64) -> f64 {
    let k1 = params.rhs_at(n);
    let k2 = params.rhs_at(n + 0.5 * dt * k1);
    let k3 = params.rhs_at(n + 0.5 * dt * k2);
    let k4 = params.rhs_at(n + dt * k3);
    n + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}
