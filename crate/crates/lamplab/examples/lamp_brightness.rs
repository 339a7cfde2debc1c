//! The Thomson lamp on the squeezed clock: the switch toggles at
//! tau_t = 2(1 - 2^-t), so infinitely many toggles fit before tau = 2.
//! A detector with finite resolution sees the fractions 2/3 / 1/3 of the
//! remaining window in the cutoff state, giving average brightness 1/2.

use lamplab::summability::{average_brightness, geometric_exposure_fractions};
use lamplab::supertask::{detector_exposure, extrinsic_time, simulate_trace, LampState};

fn main() {
    let trace = simulate_trace(10, LampState::On);
    println!("first toggles on the extrinsic clock:");
    for iv in trace.intervals.iter().take(6) {
        println!("  [{:.6}, {:.6})  {:?}", iv.start, iv.end, iv.state);
    }
    println!("  ... accumulating at tau = 2");
    println!();

    // open the shutter after the detector's last resolvable step
    let open = extrinsic_time(10);
    let e = detector_exposure(&trace, open, 2.0).unwrap();
    let window = 2.0 - open;
    println!("shutter [{open:.8}, 2): on for {:.8} of {:.8}  ({:.6} of the window)",
        e.on_time, window, e.on_time / window);

    for state in [LampState::On, LampState::Off] {
        let f = geometric_exposure_fractions(state);
        println!("cutoff state {state:?}: on fraction {:.6}, off fraction {:.6}",
            f.on_fraction, f.off_fraction);
    }
    println!("average brightness over both cutoff states: {}", average_brightness());
}
