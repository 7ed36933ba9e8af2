//! Where the forward evolution from the preparation meets the backward
//! evolution from the final state is pure bookkeeping: every split point
//! yields the same conditioned distribution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twoboundary::tsvf::{
    abl_probability, match_time_invariance, Operator, StateVector, TwoStateScenario,
};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dimension = 4;
    let pre = StateVector::haar_random(dimension, &mut rng).unwrap();
    let post = StateVector::haar_random(dimension, &mut rng).unwrap();
    let steps: Vec<Operator> = (0..3)
        .map(|_| Operator::random_unitary(dimension, &mut rng).unwrap())
        .collect();
    let observable = Operator::diagonal(&[0.0, 1.0, 2.0, 3.0]).unwrap();
    let scenario = TwoStateScenario::new(pre, post, steps, observable, 1).unwrap();

    let canonical = abl_probability(&scenario).unwrap();
    println!("4-level system, 3 unitary steps, observable sitting after step 1");
    println!();
    println!("  split   conditioned distribution");
    for split in 0..=3 {
        let probabilities = match_time_invariance(&scenario, split).unwrap();
        let row: Vec<String> = probabilities.iter().map(|p| format!("{p:.12}")).collect();
        println!("  {split:>5}   [{}]", row.join(", "));
    }
    let worst = (0..=3)
        .map(|split| {
            match_time_invariance(&scenario, split)
                .unwrap()
                .iter()
                .zip(&canonical)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0_f64, f64::max)
        })
        .fold(0.0_f64, f64::max);
    println!();
    println!("largest deviation between split points: {worst:.2e}");
}
