//! Photon number above and below the lasing threshold. The threshold is a
//! pure counting statement: with occupations fixed, the photon number grows
//! exactly when (N2 - N1) * W * n + W * N2 - 2 * kappa * n is positive.

use twoboundary::laser::{lasing_condition, rhs, simulate, LaserParams};

fn main() {
    let above = LaserParams::new(2.0, 1.0, 1.0, 0.25).unwrap();
    let below = LaserParams::new(1.0, 2.0, 1.0, 0.5).unwrap();
    let closed_form = |params: &LaserParams, n0: f64, t: f64| {
        let a = params.growth_rate();
        let b = params.source_rate();
        (n0 + b / a) * (a * t).exp() - b / a
    };

    for (label, params) in [("above threshold", &above), ("below threshold", &below)] {
        println!(
            "{label}: growth rate a = {:+.2}, source b = {:.2}, \
             rhs(n0 = 1) = {:+.2}, lasing = {}",
            params.growth_rate(),
            params.source_rate(),
            rhs(params, 1.0).unwrap(),
            lasing_condition(params, 1.0).unwrap()
        );
        let series = simulate(params, 1.0, 8.0, 1e-3).unwrap();
        println!("      t      n(t)          closed form");
        for target in [0.0_f64, 2.0, 4.0, 8.0] {
            let index = series
                .times
                .iter()
                .position(|&t| (t - target).abs() < 1e-9)
                .unwrap();
            println!(
                "  {target:>5.1}   {:<12.5}  {:<12.5}",
                series.photon_counts[index],
                closed_form(params, 1.0, target)
            );
        }
        println!();
    }
    println!(
        "below threshold the count settles at the fixed point -b/a = {:.4};",
        {
            let a = below.growth_rate();
            -below.source_rate() / a
        }
    );
    println!("above threshold it grows exponentially.");
}
