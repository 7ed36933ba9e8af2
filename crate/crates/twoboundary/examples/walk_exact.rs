//! The exact conditioned density of the two-boundary walk, from the
//! forward-backward pass over the (position, velocity) state space, together
//! with the mean conditioned velocity at every step.

use twoboundary::report::{render, Format, ProfileReport, Report};
use twoboundary::walk::{conditioned_mean_velocities, exact_conditioned_density, WalkConfig};

fn main() {
    let config = WalkConfig::new(64, 40, 0.05, 0, 1, 0, 0).unwrap();
    let density = exact_conditioned_density(&config).unwrap();
    println!(
        "total path weight {:.6e} (the acceptance rate rejection sampling would see)",
        density.total_weight()
    );
    println!();

    let mut frequencies = Vec::new();
    for t in 0..=config.horizon {
        for x in 0..config.width {
            frequencies.push(density.frequency(t, x));
        }
    }
    let report = Report::Profile(ProfileReport {
        width: config.width,
        horizon: config.horizon,
        counts: None,
        frequencies,
        accepted: None,
        tries: None,
        total_weight: Some(density.total_weight()),
    });
    let rendered = render(&report, Format::Ascii).unwrap();
    print!("{}", rendered.text);
    println!();

    let means = conditioned_mean_velocities(&config).unwrap();
    println!("mean conditioned velocity (boundary directions fade within a few steps):");
    for t in [1_usize, 2, 3, 5, 10, 20, 30, 38, 39, 40] {
        println!("  t = {t:>2}: {:+.4}", means[t - 1]);
    }
}
