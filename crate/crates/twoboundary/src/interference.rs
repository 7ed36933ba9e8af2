//! Two-photon interference bookkeeping and the coarse double-slit analysis.
//!
//! Three small calculations share this module. [`hbt_coincidence`] scores the
//! joint detection of two equal photons against their relative phase: in
//! phase they are twice as likely as distinguishable ones, opposite phase
//! suppresses them completely, and the phase average is unity, which is why
//! macroscopic counting never sees the effect. [`splitter_outputs`] gives the
//! complementary `sin^2`/`cos^2` intensities behind a two-port junction.
//! The slit functions locate the stationary-phase point of a source-to-
//! detector path through a slit plane, integrate the linearized oscillatory
//! exponent across each slit opening, and report how strongly the
//! off-stationary slit is suppressed relative to the stationary one.

use num_complex::Complex64;
use thiserror::Error;

/// Residual tolerance for the stationary-point bisection.
pub const STATIONARY_TOL: f64 = 1e-12;

/// Geometries must satisfy `wave_number * min plane distance > 10`.
pub const SHORT_WAVE_FLOOR: f64 = 10.0;

/// Quadrature starts at this many Simpson intervals per slit.
const SIMPSON_START_INTERVALS: usize = 1000;

/// Successive doublings must agree to this fraction of the slit width.
const SIMPSON_REFINE_TOL: f64 = 1e-12;

const SIMPSON_MAX_INTERVALS: usize = 256_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum InterferenceError {
    #[error("invalid slit geometry: {reason}")]
    InvalidGeometry { reason: String },
    #[error("no sign change in bracketing interval [{low}, {high}]")]
    NoSignChange { low: f64, high: f64 },
    #[error("bisection stalled at residual {residual:.3e}")]
    BisectionStalled { residual: f64 },
    #[error("stationary point {stationary} lies outside slit A ({center} +- {half_width})")]
    StationaryPointOutsideSlitA {
        stationary: f64,
        center: f64,
        half_width: f64,
    },
    #[error("quadrature did not converge within {max_intervals} intervals")]
    QuadratureNotConverged { max_intervals: usize },
}

/// How the two emitted photons are related in phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbtMode {
    /// Equal photons with a definite relative phase.
    Coherent,
    /// Analytic average over a uniform relative phase.
    PhaseAveraged,
    /// Distinguishable photons; no interference term.
    Distinguishable,
}

/// A two-emitter coincidence configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbtSetup {
    /// Relative phase between the two emitters, in radians.
    pub phase_difference: f64,
    pub mode: HbtMode,
}

/// Coincidence rate relative to distinguishable emitters.
///
/// Coherent mode evaluates `|1 + e^{i phi}|^2 / 2 = 1 + cos(phi)`, ranging
/// from 2 (bunching) to 0 (full suppression). The analytic phase average and
/// the distinguishable case are both exactly 1. Only the bosonic sign is
/// implemented; a fermionic pair would flip the interference term to
/// `1 - cos(phi)` (a dip instead of a peak).
pub fn hbt_coincidence(setup: &HbtSetup) -> f64 {
    match setup.mode {
        HbtMode::Coherent => 1.0 + setup.phase_difference.cos(),
        HbtMode::PhaseAveraged | HbtMode::Distinguishable => 1.0,
    }
}

/// The coincidence rate averaged over the opposite-phase pair
/// `{phi, phi + pi}`.
///
/// The two interference terms are algebraic negatives of one another, so the
/// pair is evaluated from a single cosine and the cancellation is exact: the
/// result is 1.0 for every phase.
pub fn correspondence_pair_average(phase: f64) -> f64 {
    let interference = phase.cos();
    ((1.0 + interference) + (1.0 - interference)) / 2.0
}

/// Output intensities of a lossless two-port junction for incoming phases
/// `phi1` and `phi2`: suppression `sin^2(phi1 - phi2)` in one direction,
/// enhancement `cos^2(phi1 - phi2)` in the other.
///
/// The suppressed port is computed as the complement `1 - cos^2`, so the two
/// outputs always sum to exactly 1.
pub fn splitter_outputs(phi1: f64, phi2: f64) -> (f64, f64) {
    let c = (phi1 - phi2).cos();
    let enhanced = c * c;
    (1.0 - enhanced, enhanced)
}

/// Source, detector, the two slit openings in the plane `y = 0`, and the
/// wave number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    source: (f64, f64),
    detector: (f64, f64),
    slit_a_center: f64,
    slit_a_width: f64,
    slit_b_center: f64,
    slit_b_width: f64,
    wave_number: f64,
}

impl SlitGeometry {
    /// Validates that source and detector sit on opposite sides of the slit
    /// plane, widths are positive, and all plane distances are many
    /// wavelengths (`wave_number * min(|y_o|, |y_d|) > 10`).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        source: (f64, f64),
        detector: (f64, f64),
        slit_a_center: f64,
        slit_a_width: f64,
        slit_b_center: f64,
        slit_b_width: f64,
        wave_number: f64,
    ) -> Result<Self, InterferenceError> {
        let invalid = |reason: String| Err(InterferenceError::InvalidGeometry { reason });
        if source.1.is_nan() || source.1 <= 0.0 {
            return invalid(format!(
                "source must sit above the slit plane, y_o = {}",
                source.1
            ));
        }
        if detector.1.is_nan() || detector.1 >= 0.0 {
            return invalid(format!(
                "detector must sit below the slit plane, y_d = {}",
                detector.1
            ));
        }
        if !(slit_a_width.is_finite() && slit_a_width > 0.0)
            || !(slit_b_width.is_finite() && slit_b_width > 0.0)
        {
            return invalid(format!(
                "slit widths must be positive, got {slit_a_width} and {slit_b_width}"
            ));
        }
        if wave_number.is_nan() || wave_number <= 0.0 {
            return invalid(format!("wave number must be positive, got {wave_number}"));
        }
        let min_distance = source.1.min(-detector.1);
        if wave_number * min_distance <= SHORT_WAVE_FLOOR {
            return invalid(format!(
                "short-wave regime requires k * min distance > {SHORT_WAVE_FLOOR}, got {}",
                wave_number * min_distance
            ));
        }
        Ok(Self {
            source,
            detector,
            slit_a_center,
            slit_a_width,
            slit_b_center,
            slit_b_width,
            wave_number,
        })
    }

    pub fn source(&self) -> (f64, f64) {
        self.source
    }

    pub fn detector(&self) -> (f64, f64) {
        self.detector
    }

    pub fn slit_a_center(&self) -> f64 {
        self.slit_a_center
    }

    pub fn slit_a_width(&self) -> f64 {
        self.slit_a_width
    }

    pub fn slit_b_center(&self) -> f64 {
        self.slit_b_center
    }

    pub fn slit_b_width(&self) -> f64 {
        self.slit_b_width
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }

    /// Slit separation `h = slit_b_center - slit_a_center`.
    pub fn separation(&self) -> f64 {
        self.slit_b_center - self.slit_a_center
    }

    fn width_of(&self, slit: Slit) -> f64 {
        match slit {
            Slit::A => self.slit_a_width,
            Slit::B => self.slit_b_width,
        }
    }

    /// Derivative of the total path length with respect to the crossing
    /// point in the slit plane.
    fn path_length_gradient(&self, x: f64) -> f64 {
        let (x_o, y_o) = self.source;
        let (x_d, y_d) = self.detector;
        (x - x_o) / (x - x_o).hypot(y_o) + (x - x_d) / (x - x_d).hypot(y_d)
    }
}

/// The two slit openings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slit {
    A,
    B,
}

/// The crossing point in the slit plane where the total source-to-detector
/// path length is stationary, i.e. where the phase stops oscillating to
/// first order. Solved by bisection between the source and detector
/// x-coordinates to a residual below [`STATIONARY_TOL`].
pub fn stationary_point(geometry: &SlitGeometry) -> Result<f64, InterferenceError> {
    let (x_o, _) = geometry.source;
    let (x_d, _) = geometry.detector;
    if x_o == x_d {
        // Both gradient terms vanish on the vertical line.
        return Ok(x_o);
    }
    let (mut low, mut high) = (x_o.min(x_d), x_o.max(x_d));
    let mut f_low = geometry.path_length_gradient(low);
    if f_low == 0.0 {
        return Ok(low);
    }
    let f_high = geometry.path_length_gradient(high);
    if f_high == 0.0 {
        return Ok(high);
    }
    if f_low.signum() == f_high.signum() {
        return Err(InterferenceError::NoSignChange { low, high });
    }
    let mut residual = f64::INFINITY;
    for _ in 0..200 {
        let mid = 0.5 * (low + high);
        let f_mid = geometry.path_length_gradient(mid);
        residual = f_mid.abs();
        if residual < STATIONARY_TOL {
            return Ok(mid);
        }
        if f_mid.signum() == f_low.signum() {
            low = mid;
            f_low = f_mid;
        } else {
            high = mid;
        }
    }
    Err(InterferenceError::BisectionStalled { residual })
}

/// The first-order phase gradient across the given slit.
///
/// Slit A is stationary by construction, so its gradient is 0. For slit B,
/// displaced by the separation `h`, the gradient is
/// `h * (1 / r_source + 1 / r_detector)` evaluated at the displaced crossing
/// point.
pub fn slit_phase_gradient(geometry: &SlitGeometry, slit: Slit) -> Result<f64, InterferenceError> {
    match slit {
        Slit::A => Ok(0.0),
        Slit::B => {
            let h = geometry.separation();
            let x_b = stationary_point(geometry)? + h;
            let (x_o, y_o) = geometry.source;
            let (x_d, y_d) = geometry.detector;
            let r_source = (x_o - x_b).hypot(y_o);
            let r_detector = (x_b - x_d).hypot(y_d);
            Ok(h / r_source + h / r_detector)
        }
    }
}

/// Amplitude contributed by one slit: the integral of
/// `exp(i * k * c * delta)` across the opening, with `c` the slit's phase
/// gradient. Evaluated by composite Simpson quadrature, doubling the node
/// count until two refinements agree to within 1e-12 of the slit width.
pub fn slit_amplitude(geometry: &SlitGeometry, slit: Slit) -> Result<Complex64, InterferenceError> {
    let gradient = slit_phase_gradient(geometry, slit)?;
    let width = geometry.width_of(slit);
    oscillatory_integral(geometry.wave_number * gradient, width)
}

fn oscillatory_integral(rate: f64, width: f64) -> Result<Complex64, InterferenceError> {
    let half = 0.5 * width;
    let mut intervals = SIMPSON_START_INTERVALS;
    let mut previous = simpson(rate, half, intervals);
    loop {
        intervals *= 2;
        if intervals > SIMPSON_MAX_INTERVALS {
            return Err(InterferenceError::QuadratureNotConverged {
                max_intervals: SIMPSON_MAX_INTERVALS,
            });
        }
        let refined = simpson(rate, half, intervals);
        if (refined - previous).norm() <= SIMPSON_REFINE_TOL * width {
            return Ok(refined);
        }
        previous = refined;
    }
}

fn simpson(rate: f64, half: f64, intervals: usize) -> Complex64 {
    let h = 2.0 * half / intervals as f64;
    let eval = |j: usize| {
        let delta = -half + j as f64 * h;
        Complex64::from_polar(1.0, rate * delta)
    };
    let mut sum = eval(0) + eval(intervals);
    for j in 1..intervals {
        let weight = if j % 2 == 1 { 4.0 } else { 2.0 };
        sum += eval(j) * weight;
    }
    sum * (h / 3.0)
}

/// Separate intensities of the stationary (dominant) and displaced (detour)
/// slit contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityReport {
    pub amp_a: Complex64,
    pub amp_b: Complex64,
    pub intensity_a: f64,
    pub intensity_b: f64,
    /// `intensity_b / intensity_a`.
    pub detour_ratio: f64,
}

/// Computes both slit amplitudes with the cross term dropped, as the
/// decohered coarse-grained paths require, and reports the intensity of the
/// detour slit relative to the dominant one. Requires the stationary point
/// to fall inside slit A.
pub fn slit_intensities(geometry: &SlitGeometry) -> Result<IntensityReport, InterferenceError> {
    let stationary = stationary_point(geometry)?;
    let half_width = 0.5 * geometry.slit_a_width;
    if (stationary - geometry.slit_a_center).abs() > half_width {
        return Err(InterferenceError::StationaryPointOutsideSlitA {
            stationary,
            center: geometry.slit_a_center,
            half_width,
        });
    }
    let amp_a = slit_amplitude(geometry, Slit::A)?;
    let amp_b = slit_amplitude(geometry, Slit::B)?;
    let intensity_a = amp_a.norm_sqr();
    let intensity_b = amp_b.norm_sqr();
    Ok(IntensityReport {
        amp_a,
        amp_b,
        intensity_a,
        intensity_b,
        detour_ratio: intensity_b / intensity_a,
    })
}
