//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `--nocapture`).

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twoboundary::cli::{dispatch, RunSpec, Subcommand};
use twoboundary::interference::{
    correspondence_pair_average, hbt_coincidence, slit_amplitude, slit_intensities,
    slit_phase_gradient, splitter_outputs, HbtMode, HbtSetup, Slit, SlitGeometry,
};
use twoboundary::laser::{simulate, LaserParams};
use twoboundary::report::Format;
use twoboundary::tsvf::{
    abl_probability, born_recovery, match_time_invariance, Operator, StateVector, TwoStateScenario,
};
use twoboundary::walk::{
    conditioned_mean_velocities, exact_conditioned_density, kernel, path_log_probability,
    reverse_path, run_ensemble, transition_probability, Path, WalkConfig,
};

fn workspace_path(relative: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(relative)
}

#[test]
fn criterion_01_walk_ensemble_matches_exact_oracle() {
    let started = Instant::now();
    let config = WalkConfig::new(16, 10, 0.1, 0, 1, 0, 0).unwrap();
    let oracle = exact_conditioned_density(&config).unwrap();
    let tries = 100_000_u64;
    let profile = run_ensemble(&config, tries, 7, 2).unwrap();

    let weight = oracle.total_weight();
    let acceptance_sigma = (tries as f64 * weight * (1.0 - weight)).sqrt();
    let acceptance_deviation = (profile.accepted() as f64 - tries as f64 * weight).abs();
    assert!(
        acceptance_deviation <= 3.0 * acceptance_sigma,
        "acceptance rate off by {:.2} sigma",
        acceptance_deviation / acceptance_sigma
    );

    let mut tested_bins = 0;
    let mut worst: f64 = 0.0;
    for t in 0..=config.horizon {
        for x in 0..config.width {
            let expected = tries as f64 * weight * oracle.frequency(t, x);
            if expected < 10.0 {
                continue;
            }
            tested_bins += 1;
            let z = (profile.count(t, x) as f64 - expected).abs() / expected.sqrt();
            assert!(z <= 4.0, "bin (t={t}, x={x}) off by {z:.2} sigma");
            worst = worst.max(z);
        }
    }
    assert!(tested_bins > 0);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:.2?}");
    println!(
        "criterion 01 PASS: ensemble matches oracle over {tested_bins} bins \
         (worst {worst:.2} sigma, acceptance within {:.2} sigma, {elapsed:.2?})",
        acceptance_deviation / acceptance_sigma
    );
}

#[test]
fn criterion_02_emergent_causality_at_profile_defaults() {
    let started = Instant::now();
    let config = WalkConfig::new(64, 40, 0.05, 0, 1, 0, 0).unwrap();
    let means = conditioned_mean_velocities(&config).unwrap();
    let elapsed = started.elapsed();
    let at_start = means[0];
    let at_mid = means[19];
    let at_end = means[39];
    // The most charitable central-time value: the smallest magnitude over
    // the middle third of the horizon.
    let central_best = means[13..27]
        .iter()
        .map(|m| m.abs())
        .fold(f64::INFINITY, f64::min);
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:.2?}");
    assert!(at_start > 0.5, "mean velocity at t=1 is {at_start}");
    assert!(
        at_end.abs() < 0.05,
        "mean velocity at t=T is {at_end}, not near the final value"
    );
    if at_mid.abs() < 0.05 {
        println!(
            "criterion 02 PASS: mean velocity {at_start:.3} at t=1, {at_mid:.3} at \
             mid-horizon, {at_end:.3} at t=T ({elapsed:.2?})"
        );
    } else {
        println!(
            "criterion 02 FAIL: mid-horizon mean velocity is {at_mid:.3}, required \
             below 0.05 in magnitude; no central time does better than {central_best:.3} \
             (t=1 gives {at_start:.3} and t=T gives {at_end:.3})"
        );
    }
    // At these lattice parameters the mid-horizon mean cannot be small: the
    // return constraint alone pins it near -0.26 (the conditional mean of a
    // velocity bridge with these endpoint values), and the periodic lattice
    // admits a wrap-around channel (net displacement +64) that pulls it up
    // to +0.41. Asserted as stated regardless.
    assert!(
        at_mid.abs() < 0.05,
        "mid-horizon mean conditioned velocity is {at_mid:.4}"
    );
}

#[test]
fn criterion_03_time_symmetry() {
    for epsilon in [0.0, 0.05, 0.1, 0.25, 0.49] {
        for v in -2..=2 {
            for v_next in -2..=2 {
                let forward = transition_probability(v, v_next, epsilon).unwrap();
                let backward = transition_probability(-v_next, -v, epsilon).unwrap();
                assert_eq!(
                    forward, backward,
                    "kernel pair ({v}, {v_next}) at {epsilon}"
                );
            }
        }
    }

    let width = 16_usize;
    let horizon = 12_usize;
    let epsilon = 0.15;
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (config, path) = random_kernel_path(width, horizon, epsilon, &mut rng);
        let reversed_config = WalkConfig::new(
            width,
            horizon,
            epsilon,
            path.positions()[horizon] as i64,
            -path.velocities()[horizon - 1],
            path.positions()[0] as i64,
            -path.velocities()[0],
        )
        .unwrap();
        let forward = path_log_probability(&config, &path).unwrap();
        let backward = path_log_probability(&reversed_config, &reverse_path(&path)).unwrap();
        let deviation = (forward - backward).abs();
        assert!(
            deviation < 1e-12,
            "log probabilities differ by {deviation:e}"
        );
        worst = worst.max(deviation);
    }
    println!(
        "criterion 03 PASS: kernel identity exact on all 25 pairs, path reversal \
         preserves log probability on 1000 paths (worst gap {worst:.2e})"
    );
}

/// A kernel-driven but unconditioned trajectory, sampled through the public
/// kernel rows by inverse transform.
fn random_kernel_path(
    width: usize,
    horizon: usize,
    epsilon: f64,
    rng: &mut ChaCha8Rng,
) -> (WalkConfig, Path) {
    let initial_x = rng.gen_range(0..width);
    let initial_v = rng.gen_range(-2..=2);
    let mut velocities = vec![initial_v];
    let mut positions = vec![initial_x];
    let mut x = initial_x;
    let mut v = initial_v;
    x = (x + (v + width as i32 * 4) as usize) % width;
    positions.push(x);
    for _ in 1..horizon {
        let row = kernel(v, epsilon).unwrap();
        let mut draw: f64 = rng.gen();
        let mut next = 2_i32;
        for (slot, &p) in row.iter().enumerate() {
            if draw < p {
                next = slot as i32 - 2;
                break;
            }
            draw -= p;
        }
        v = next;
        x = (x + (v + width as i32 * 4) as usize) % width;
        positions.push(x);
        velocities.push(v);
    }
    let config = WalkConfig::new(
        width,
        horizon,
        epsilon,
        initial_x as i64,
        initial_v,
        positions[horizon] as i64,
        velocities[horizon - 1],
    )
    .unwrap();
    (config, Path::new(positions, velocities, width).unwrap())
}

fn random_scenario(dimension: usize, steps: usize, rng: &mut ChaCha8Rng) -> TwoStateScenario {
    let pre = StateVector::haar_random(dimension, rng).unwrap();
    let post = StateVector::haar_random(dimension, rng).unwrap();
    let evolution: Vec<Operator> = (0..steps)
        .map(|_| Operator::random_unitary(dimension, rng).unwrap())
        .collect();
    let spectrum: Vec<f64> = (0..dimension).map(|k| k as f64).collect();
    let basis = Operator::random_unitary(dimension, rng).unwrap();
    let rotated = basis
        .compose(&Operator::diagonal(&spectrum).unwrap())
        .unwrap()
        .compose(&basis.adjoint())
        .unwrap();
    let observable = Operator::from_rows(
        (0..dimension)
            .map(|i| {
                (0..dimension)
                    .map(|j| 0.5 * (rotated.entry(i, j) + rotated.entry(j, i).conj()))
                    .collect()
            })
            .collect(),
    )
    .unwrap();
    let index = rng.gen_range(0..=steps);
    TwoStateScenario::new(pre, post, evolution, observable, index).unwrap()
}

#[test]
fn criterion_04_abl_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut worst_normalization: f64 = 0.0;
    let mut worst_split: f64 = 0.0;
    for trial in 0..1000 {
        let dimension = 2 + trial % 7;
        let steps = trial % 4;
        let scenario = random_scenario(dimension, steps, &mut rng);
        let probabilities = abl_probability(&scenario).unwrap();
        let total: f64 = probabilities.iter().sum();
        let normalization_gap = (total - 1.0).abs();
        assert!(
            normalization_gap < 1e-12,
            "normalization off by {normalization_gap:e}"
        );
        worst_normalization = worst_normalization.max(normalization_gap);
        for split in 0..=steps {
            let redone = match_time_invariance(&scenario, split).unwrap();
            for (p, q) in probabilities.iter().zip(&redone) {
                let gap = (p - q).abs();
                assert!(gap < 1e-12, "split {split} moved a probability by {gap:e}");
                worst_split = worst_split.max(gap);
            }
        }
    }

    // The pinned qubit example: pre = |0>, post = (|0> + |1>)/sqrt(2),
    // observable diag(+1, -1) gives P(+1) = 1, P(-1) = 0 exactly.
    let scenario = TwoStateScenario::without_evolution(
        StateVector::basis_state(2, 0).unwrap(),
        StateVector::from_real(&[1.0, 1.0]).unwrap(),
        Operator::diagonal(&[1.0, -1.0]).unwrap(),
    )
    .unwrap();
    // Ascending eigenvalue order: [-1, +1].
    assert_eq!(abl_probability(&scenario).unwrap(), vec![0.0, 1.0]);
    println!(
        "criterion 04 PASS: 1000 scenarios normalized (worst {worst_normalization:.2e}), \
         match-time invariant at every split (worst {worst_split:.2e}), qubit example exact"
    );
}

/// The dimension-16 reference scenario: preparation amplitudes
/// `exp(0.2 i k) / sqrt(k + 1)` and the observable `diag(1..=16)`.
const BORN_DIMENSION: usize = 16;

fn born_reference_pre() -> StateVector {
    let amplitudes: Vec<Complex64> = (0..BORN_DIMENSION)
        .map(|k| Complex64::from_polar(1.0 / ((k + 1) as f64).sqrt(), 0.2 * k as f64))
        .collect();
    StateVector::new(amplitudes).unwrap()
}

fn born_reference_observable() -> Operator {
    let spectrum: Vec<f64> = (1..=BORN_DIMENSION).map(|k| k as f64).collect();
    Operator::diagonal(&spectrum).unwrap()
}

/// Mean conditioned probabilities for the reference scenario, computed by an
/// independent route: for a diagonal observable only the squared magnitudes
/// `|<a_k|post>|^2` enter, and for a Haar-random post state those are iid
/// exponential variates, drawn here directly by inverse transform (the
/// library path instead samples complex Gaussian amplitudes and runs its
/// streaming conditioned-probability accumulator).
fn born_reference_oracle(samples: u64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..BORN_DIMENSION).map(|k| 1.0 / (k + 1) as f64).collect();
    let norm: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / norm).collect();
    let mut sums = [0.0_f64; BORN_DIMENSION];
    let mut numerators = [0.0_f64; BORN_DIMENSION];
    for _ in 0..samples {
        let mut denominator = 0.0;
        for (k, weight) in weights.iter().enumerate() {
            let u: f64 = rng.gen();
            let magnitude_sq = -2.0 * (1.0 - u).ln();
            numerators[k] = weight * magnitude_sq;
            denominator += numerators[k];
        }
        for (sum, numerator) in sums.iter_mut().zip(&numerators) {
            *sum += numerator / denominator;
        }
    }
    sums.iter().map(|s| s / samples as f64).collect()
}

/// Frozen output of `born_reference_oracle(1_000_000, 271_828)`; regenerate
/// with `cargo test -p twoboundary --test acceptance -- --ignored --nocapture`.
const BORN_REFERENCE_MEANS: [f64; BORN_DIMENSION] = [
    0.2595253883287231,
    0.14471978008847988,
    0.10066753082762325,
    0.07740748991819664,
    0.06285820940547948,
    0.05282898005460915,
    0.045631950015478755,
    0.04022403055761799,
    0.035883317454442766,
    0.03249390584425696,
    0.029600329082841405,
    0.027194080323572557,
    0.025105461597319866,
    0.023394581150947825,
    0.021890710336797563,
    0.020574255013616708,
];

#[test]
#[ignore = "regenerates the frozen oracle reference"]
fn print_born_reference() {
    let means = born_reference_oracle(1_000_000, 271_828);
    println!("const BORN_REFERENCE_MEANS: [f64; BORN_DIMENSION] = [");
    for mean in means {
        println!("    {mean:?},");
    }
    println!("];");
}

#[test]
fn criterion_05_born_recovery_against_frozen_oracle() {
    let started = Instant::now();
    let report = born_recovery(
        &born_reference_pre(),
        &born_reference_observable(),
        10_000,
        1606,
    )
    .unwrap();
    assert_eq!(report.discarded, 0);
    let mut worst: f64 = 0.0;
    for (k, reference) in BORN_REFERENCE_MEANS.iter().enumerate() {
        let deviation = (report.means[k] - reference).abs();
        let in_errors = deviation / report.std_errors[k];
        assert!(
            in_errors <= 4.0,
            "eigenvalue {} off by {in_errors:.2} standard errors",
            report.eigenvalues[k]
        );
        worst = worst.max(in_errors);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:.2?}");
    println!(
        "criterion 05 PASS: dimension-16 means within {worst:.2} standard errors of \
         the million-sample reference ({elapsed:.2?})"
    );
}

#[test]
fn criterion_06_hbt_enhancement_suppression_and_averages() {
    let coherent = |phase: f64| {
        hbt_coincidence(&HbtSetup {
            phase_difference: phase,
            mode: HbtMode::Coherent,
        })
    };
    assert_eq!(coherent(0.0), 2.0);
    assert_eq!(coherent(PI), 0.0);
    let averaged = hbt_coincidence(&HbtSetup {
        phase_difference: 0.37,
        mode: HbtMode::PhaseAveraged,
    });
    assert!((averaged - 1.0).abs() < 1e-12);
    // Pairwise correspondence average: exact unity for every phase.
    assert_eq!((coherent(0.0) + coherent(PI)) / 2.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for _ in 0..10_000 {
        let phase = rng.gen_range(-20.0..20.0);
        assert_eq!(correspondence_pair_average(phase), 1.0);
    }
    println!(
        "criterion 06 PASS: factor 2.0 and 0.0 exact, analytic average 1.0, \
         pairwise average exactly 1.0 over 10000 phases"
    );
}

#[test]
fn criterion_07_splitter_outputs_complementary() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let phi1 = rng.gen_range(-30.0..30.0);
        let phi2 = rng.gen_range(-30.0..30.0);
        let (suppressed, enhanced) = splitter_outputs(phi1, phi2);
        let gap = (suppressed + enhanced - 1.0).abs();
        assert!(gap < 1e-12, "outputs sum off by {gap:e}");
        worst = worst.max(gap);
    }
    println!("criterion 07 PASS: 10000 random phase pairs sum to 1 (worst gap {worst:.2e})");
}

#[test]
fn criterion_08_double_slit_quadrature_and_detour() {
    // Quadrature versus the analytic sinc on 100 random geometries, with
    // the displaced slit width tuned to a target phase sweep and deep
    // sinc nulls skipped (relative error is ill-posed at a zero).
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut checked = 0;
    let mut worst_relative: f64 = 0.0;
    while checked < 100 {
        let geometry = SlitGeometry::new(
            (rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0)),
            (rng.gen_range(-0.5..0.5), rng.gen_range(-2.0..-0.5)),
            0.0,
            rng.gen_range(1.0e-5..1.0e-3),
            rng.gen_range(1.0e-3..2.0e-2),
            1.0e-4,
            rng.gen_range(1.0e6..1.0e8),
        )
        .unwrap();
        let gradient = slit_phase_gradient(&geometry, Slit::B).unwrap();
        let target = rng.gen_range(0.05..9.0);
        let width = 2.0 * target / (geometry.wave_number() * gradient);
        let sinc = target.sin() / target;
        if sinc.abs() < 1e-3 {
            continue;
        }
        let tuned = SlitGeometry::new(
            geometry.source(),
            geometry.detector(),
            geometry.slit_a_center(),
            geometry.slit_a_width(),
            geometry.slit_b_center(),
            width,
            geometry.wave_number(),
        )
        .unwrap();
        let amplitude = slit_amplitude(&tuned, Slit::B).unwrap();
        let expected = width * sinc;
        let relative = ((amplitude.re - expected) / expected).abs();
        assert!(
            relative <= 1e-9,
            "quadrature off by {relative:e} at phase sweep {target}"
        );
        assert!(amplitude.im.abs() <= 1e-9 * width);
        worst_relative = worst_relative.max(relative);
        checked += 1;
    }

    // Stationary-slit amplitude proportional to the width: two widths.
    let proportionality: Vec<f64> = [1.0e-4, 3.7e-4]
        .iter()
        .map(|&width| {
            let geometry =
                SlitGeometry::new((0.0, 1.0), (0.0, -1.0), 0.0, width, 5.0e-3, 1.0e-4, 1.0e7)
                    .unwrap();
            slit_amplitude(&geometry, Slit::A).unwrap().re / width
        })
        .collect();
    assert!(
        (proportionality[0] - proportionality[1]).abs() <= 1e-9,
        "stationary amplitude not proportional to width: {proportionality:?}"
    );

    // The documented short-wave geometry keeps the detour path below 1%.
    let documented =
        SlitGeometry::new((0.0, 1.0), (0.0, -1.0), 0.0, 1.2e-4, 1.0e-2, 1.2e-4, 1.0e7).unwrap();
    let report = slit_intensities(&documented).unwrap();
    assert!(
        report.detour_ratio < 1e-2,
        "detour ratio {} at the documented geometry",
        report.detour_ratio
    );
    println!(
        "criterion 08 PASS: quadrature within {worst_relative:.2e} relative of sinc on 100 \
         geometries, stationary amplitude proportional to width, detour ratio {:.4}",
        report.detour_ratio
    );
}

#[test]
fn criterion_09_laser_closed_form_and_convergence() {
    let closed_form = |params: &LaserParams, n0: f64, t: f64| {
        let a = params.growth_rate();
        let b = params.source_rate();
        if a == 0.0 {
            n0 + b * t
        } else {
            (n0 + b / a) * (a * t).exp() - b / a
        }
    };
    let cases = [
        (
            "growth",
            LaserParams::new(2.0, 1.0, 1.0, 0.25).unwrap(),
            1.0,
            10.0,
        ),
        (
            "decay",
            LaserParams::new(1.0, 3.0, 1.0, 0.5).unwrap(),
            5.0,
            10.0,
        ),
        (
            "linear",
            LaserParams::new(2.0, 1.0, 1.0, 0.5).unwrap(),
            1.0,
            4.0,
        ),
    ];
    let signs: Vec<f64> = cases.iter().map(|(_, p, _, _)| p.growth_rate()).collect();
    assert!(signs[0] > 0.0 && signs[1] < 0.0 && signs[2] == 0.0);
    for (label, params, n0, t_end) in &cases {
        let series = simulate(params, *n0, *t_end, 1e-3).unwrap();
        let expected = closed_form(params, *n0, *t_end);
        let relative = ((series.final_count() - expected) / expected).abs();
        assert!(relative < 1e-6, "{label} endpoint off by {relative:e}");
    }

    // Step halving: the endpoint error shrinks by about 2^4.
    let (_, params, n0, _) = &cases[0];
    let exact = closed_form(params, *n0, 2.0);
    let coarse = (simulate(params, *n0, 2.0, 0.2).unwrap().final_count() - exact).abs();
    let fine = (simulate(params, *n0, 2.0, 0.1).unwrap().final_count() - exact).abs();
    let ratio = coarse / fine;
    assert!(
        (10.0..30.0).contains(&ratio),
        "halving the step changed the error by {ratio:.1}x, expected about 16x"
    );
    println!(
        "criterion 09 PASS: endpoints match the closed form for growth, decay and \
         linear cases; step-halving error ratio {ratio:.1}x"
    );
}

#[test]
fn criterion_10_reproducibility_and_golden_output() {
    let config = workspace_path("configs/walk.cfg");
    let run = |seed: Option<u64>| {
        let spec = RunSpec {
            subcommand: Subcommand::Walk,
            config_path: config.clone(),
            output_path: None,
            seed,
            workers: None,
            format: Format::Csv,
        };
        let mut out = Vec::new();
        let mut diag = Vec::new();
        let code = dispatch(&spec, &mut out, &mut diag);
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&diag));
        out
    };
    let first = run(None);
    let second = run(None);
    assert_eq!(first, second, "identical runs must be byte-identical");

    let golden = std::fs::read(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/walk_seed42.csv"),
    )
    .unwrap();
    assert_eq!(
        first, golden,
        "default walk config at seed 42 must reproduce the committed golden CSV"
    );
    println!(
        "criterion 10 PASS: byte-identical repeat runs, golden CSV reproduced \
         ({} bytes)",
        golden.len()
    );
}
