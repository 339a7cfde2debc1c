//! Born-rule readout of the NOT fixed point psi+ is a fair coin:
//! each measurement yields 0 or 1 with probability 1/2.  The generator is
//! seeded, so the run reproduces exactly.

use lamplab::diagonal::classical_readout;
use lamplab::qubit::QubitState;

fn main() {
    let psi = QubitState::psi_plus();
    for seed in [0u64, 1, 2] {
        let r = classical_readout(&psi, seed, 100_000);
        println!(
            "seed {seed}: {} zeros / {} ones   freq0 = {:.5} +- {:.5}",
            r.count0, r.count1, r.freq0, r.std_error
        );
    }

    // an unbalanced state shows the probabilities tracking |amp|^2
    let tilted = QubitState::new((0.9f64).sqrt().into(), (0.1f64).sqrt().into()).unwrap();
    let r = classical_readout(&tilted, 7, 100_000);
    println!("|amp0|^2 = 0.9 state: freq0 = {:.5}", r.freq0);
}
