//! Quantum mechanics between two boundary conditions, at desk scale.
//!
//! The crate collects the calculations that make sense when a system is
//! pinned both by its preparation and by a final condition:
//!
//! * [`tsvf`] — pre- and post-selected finite-dimensional systems:
//!   conditioned outcome probabilities, weak values, invariance of the
//!   forward/backward matching point, pointer-basis dephasing, and the
//!   statistical recovery of unconditioned probabilities from random final
//!   states.
//! * [`walk`] — a lattice random walk conditioned on both endpoints by
//!   rejection sampling, with an exact forward-backward oracle for its
//!   density profile. Near either boundary the walk keeps the boundary's
//!   direction for a few steps; in between, the conditioning fades.
//! * [`interference`] — two-photon coincidence enhancement and suppression,
//!   the complementary beam-splitter outputs, and the stationary-phase
//!   analysis of a coarse double slit with its dominant and detour paths.
//! * [`laser`] — the photon rate equation and its threshold condition.
//! * [`config`], [`report`], [`cli`] — the shared `key = value` experiment
//!   format, deterministic rendering, and the dispatcher behind the
//!   `twoboundary` binary.
//!
//! ## Runnable examples
//!
//! Each capability has a self-contained example:
//!
//! ```bash
//! cargo run --example abl_probabilities    # conditioned outcome statistics
//! cargo run --example weak_values          # anomalous conditioned means
//! cargo run --example match_time           # forward/backward meeting point
//! cargo run --example dephasing            # pointer-basis coherence decay
//! cargo run --example born_recovery        # averaging over final states
//! cargo run --example walk_density         # sampled two-boundary walk
//! cargo run --example walk_exact           # exact conditioned density
//! cargo run --example hbt                  # coincidence enhancement
//! cargo run --example beam_splitter        # sin^2 / cos^2 outputs
//! cargo run --example double_slit          # dominant vs detour path
//! cargo run --example laser_threshold    # rate equation integration
//! ```
//!
//! ## Command line
//!
//! The same experiments are reachable through one binary driven by config
//! files:
//!
//! ```bash
//! cargo run -- walk --config configs/walk.cfg --format ascii
//! cargo run -- hbt --config configs/hbt.cfg
//! ```

pub mod cli;
pub mod config;
pub mod interference;
pub mod laser;
pub mod report;
pub mod tsvf;
pub mod walk;

pub use tsvf::{DensityMatrix, EigenDecomposition, Operator, StateVector, TwoStateScenario};
pub use walk::{Path as WalkPath, WalkConfig};
