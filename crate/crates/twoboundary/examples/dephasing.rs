//! Coupling to an unobserved environment shows up locally as the decay of
//! off-diagonal density-matrix entries in the pointer basis; populations are
//! untouched, and full dephasing leaves a classical mixture.

use twoboundary::tsvf::{dephase, DensityMatrix, EigenDecomposition, StateVector};

fn main() {
    let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
    let mut rho = DensityMatrix::pure(&plus).unwrap();
    let basis = EigenDecomposition::computational(2).unwrap();
    let strength = 0.3;

    println!("|+><+| under repeated dephasing of strength {strength}:");
    println!();
    println!("  round   |rho_01|     diag(rho)");
    for round in 0..=6 {
        let coherence = rho.entry(0, 1).norm();
        let populations = rho.populations(&basis).unwrap();
        println!(
            "  {round:>5}   {coherence:.6}    [{:.3}, {:.3}]",
            populations[0], populations[1]
        );
        rho = dephase(&rho, &basis, strength).unwrap();
    }
    println!();
    println!("off-diagonals shrink by (1 - {strength}) per round; populations never move.");

    let fully = dephase(&DensityMatrix::pure(&plus).unwrap(), &basis, 1.0).unwrap();
    println!(
        "full dephasing in one shot: rho_01 = {:.1e}, diag = [{}, {}]",
        fully.entry(0, 1).norm(),
        fully.entry(0, 0).re,
        fully.entry(1, 1).re
    );
}
