//! Conditioned outcome probabilities between two boundary states.
//!
//! A qubit prepared in |0> and later found in (|0> + |1>)/sqrt(2) answers an
//! intermediate computational-basis measurement with certainty, even though
//! the preparation alone would make both outcomes possible. The second
//! scenario threads a random unitary chain between the boundaries.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twoboundary::tsvf::{abl_probability, Operator, StateVector, TwoStateScenario};

fn main() {
    let pre = StateVector::basis_state(2, 0).unwrap();
    let post = StateVector::from_real(&[1.0, 1.0]).unwrap();
    let observable = Operator::diagonal(&[1.0, -1.0]).unwrap();
    let scenario = TwoStateScenario::without_evolution(pre, post, observable).unwrap();
    let probabilities = abl_probability(&scenario).unwrap();
    println!("qubit pinned by |0> and |+>, measured in the computational basis:");
    let decomposition = scenario.observable().eigendecompose().unwrap();
    for (value, probability) in decomposition.eigenvalues().iter().zip(&probabilities) {
        println!("  outcome {value:+.0}: conditioned probability {probability}");
    }

    println!();
    println!("8-level system with a 3-step unitary chain between the boundaries:");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dimension = 8;
    let pre = StateVector::haar_random(dimension, &mut rng).unwrap();
    let post = StateVector::haar_random(dimension, &mut rng).unwrap();
    let steps: Vec<Operator> = (0..3)
        .map(|_| Operator::random_unitary(dimension, &mut rng).unwrap())
        .collect();
    let spectrum: Vec<f64> = (0..dimension).map(|k| k as f64).collect();
    let observable = Operator::diagonal(&spectrum).unwrap();
    let scenario = TwoStateScenario::new(pre.clone(), post, steps, observable, 2).unwrap();
    let conditioned = abl_probability(&scenario).unwrap();
    println!("  outcome   conditioned   unconditioned (preparation only)");
    for (k, probability) in conditioned.iter().enumerate() {
        let basis = StateVector::basis_state(dimension, k).unwrap();
        // Unconditioned = squared overlap of the forward-evolved preparation.
        let mut evolved = pre.clone();
        for step in scenario.evolution_steps().iter().take(2) {
            evolved = step.apply(&evolved).unwrap();
        }
        let born = evolved.inner(&basis).unwrap().norm_sqr();
        println!("  {k:>7}   {probability:.6}      {born:.6}");
    }
    let total: f64 = conditioned.iter().sum();
    println!("  (conditioned column sums to {total})");
}
