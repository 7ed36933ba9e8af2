//! Rejection-sample the two-boundary walk and draw its density profile.
//!
//! The walker starts at x = 0 moving right and must return to x = 0 at rest
//! after 40 steps. Accepted trajectories ride the initial direction for a
//! few steps, wander in the middle, and re-collimate onto the final
//! condition.

use twoboundary::report::{render, Format, ProfileReport, Report};
use twoboundary::walk::{run_ensemble, WalkConfig};

fn main() {
    let config = WalkConfig::new(64, 40, 0.05, 0, 1, 0, 0).unwrap();
    let tries = 2_000_000;
    let profile = run_ensemble(&config, tries, 42, 4).unwrap();
    println!(
        "accepted {} of {} tries (rate {:.3e})",
        profile.accepted(),
        profile.tries(),
        profile.acceptance_rate()
    );
    println!();

    let mut counts = Vec::new();
    let mut frequencies = Vec::new();
    for t in 0..=config.horizon {
        for x in 0..config.width {
            counts.push(profile.count(t, x));
            frequencies.push(profile.frequency(t, x));
        }
    }
    let report = Report::Profile(ProfileReport {
        width: config.width,
        horizon: config.horizon,
        counts: Some(counts),
        frequencies,
        accepted: Some(profile.accepted()),
        tries: Some(profile.tries()),
        total_weight: None,
    });
    let rendered = render(&report, Format::Ascii).unwrap();
    print!("{}", rendered.text);
}
