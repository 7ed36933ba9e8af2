//! Coincidence statistics of two equal photons: in phase they bunch to
//! twice the distinguishable rate, in opposite phase they cancel, and any
//! phase-blind average sees exactly the distinguishable rate.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoboundary::interference::{correspondence_pair_average, hbt_coincidence, HbtMode, HbtSetup};

fn main() {
    println!("coincidence enhancement vs relative phase:");
    println!();
    println!("  phase        coherent   pair average {{phase, phase + pi}}");
    for multiple in [0.0_f64, 0.25, 0.5, 0.75, 1.0] {
        let phase = multiple * PI;
        let coherent = hbt_coincidence(&HbtSetup {
            phase_difference: phase,
            mode: HbtMode::Coherent,
        });
        let pair = correspondence_pair_average(phase);
        println!("  {multiple:.2} pi      {coherent:.6}   {pair}");
    }

    let distinguishable = hbt_coincidence(&HbtSetup {
        phase_difference: 0.0,
        mode: HbtMode::Distinguishable,
    });
    let analytic = hbt_coincidence(&HbtSetup {
        phase_difference: 0.0,
        mode: HbtMode::PhaseAveraged,
    });
    println!();
    println!("distinguishable photons: {distinguishable}");
    println!("analytic phase average:  {analytic}");

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = 1_000_000;
    let mean = (0..samples)
        .map(|_| {
            hbt_coincidence(&HbtSetup {
                phase_difference: rng.gen_range(0.0..2.0 * PI),
                mode: HbtMode::Coherent,
            })
        })
        .sum::<f64>()
        / samples as f64;
    println!("Monte Carlo phase average over {samples} draws: {mean:.6}");
    println!();
    println!("the choice made at the detectors moves probability between the");
    println!("in-phase and opposite-phase components without changing their sum.");
}
