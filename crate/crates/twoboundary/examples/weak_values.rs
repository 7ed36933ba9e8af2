//! Weak values grow without bound as the boundary states approach
//! orthogonality, escaping the [-1, +1] eigenvalue range of the observable.

use twoboundary::tsvf::{weak_value, Operator, StateVector, TsvfError, TwoStateScenario};

fn main() {
    let observable = Operator::diagonal(&[1.0, -1.0]).unwrap();
    println!("pre = (|0> + |1>)/sqrt(2), post = cos(t)|0> - sin(t)|1>, A = diag(+1, -1)");
    println!();
    println!("  theta      <A>_weak      closed form (cos+sin)/(cos-sin)");
    for degrees in [0.0_f64, 20.0, 40.0, 44.0, 44.9] {
        let theta = degrees.to_radians();
        let pre = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let post = StateVector::from_real(&[theta.cos(), -theta.sin()]).unwrap();
        let scenario = TwoStateScenario::without_evolution(pre, post, observable.clone()).unwrap();
        let value = weak_value(&scenario).unwrap();
        let expected = (theta.cos() + theta.sin()) / (theta.cos() - theta.sin());
        println!(
            "  {degrees:>5.1}   {:>12.4}      {expected:>12.4}",
            value.re
        );
    }

    println!();
    println!("at theta = 45 degrees the boundaries are orthogonal:");
    let theta = 45.0_f64.to_radians();
    let pre = StateVector::from_real(&[1.0, 1.0]).unwrap();
    let post = StateVector::from_real(&[theta.cos(), -theta.sin()]).unwrap();
    let scenario = TwoStateScenario::without_evolution(pre, post, observable).unwrap();
    match weak_value(&scenario) {
        Err(TsvfError::UndefinedWeakValue { overlap }) => {
            println!("  undefined weak value (overlap magnitude {overlap:.2e})");
        }
        other => println!("  unexpected result {other:?}"),
    }
}
