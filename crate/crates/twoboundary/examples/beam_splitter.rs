//! The two outputs of a lossless junction split the intensity as sin^2 and
//! cos^2 of the incoming phase difference; whatever one port suppresses the
//! other enhances, so a count over both ports never sees the interference.

use std::f64::consts::PI;

use twoboundary::interference::splitter_outputs;

fn main() {
    println!("  phi1 - phi2    suppressed    enhanced     sum");
    for step in 0..=8 {
        let difference = step as f64 * PI / 8.0;
        let (suppressed, enhanced) = splitter_outputs(difference, 0.0);
        println!(
            "  {:>5.2} pi      {suppressed:.8}    {enhanced:.8}   {}",
            step as f64 / 8.0,
            suppressed + enhanced
        );
    }
}
