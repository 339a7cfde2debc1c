//! Four-port interferometer: two phase shifters, a variable beam splitter,
//! and an output shifter compose to the closed-form device unitary.  The
//! synthesis routines run the map backwards: given a target diagonal (or any
//! reachable unitary), recover the four angles.

use lamplab::optics::{
    device_network, network_unitary, synthesize_equal_phase_diag, synthesize_general,
    synthesize_opposite_phase_diag, ubs,
};
use lamplab::qubit::{fixed_points, stream_rng, FIXED_POINT_TOL};
use num_complex::Complex64 as C64;
use rand::Rng;
use std::f64::consts::PI;

fn main() {
    let (omega, alpha, beta, phi) = (0.9, -0.4, 1.7, 0.3);
    let net = network_unitary(&device_network(omega, alpha, beta, phi)).unwrap();
    let closed = ubs(omega, alpha, beta, phi);
    println!("network vs closed form: max entry deviation {:.2e}", net.max_abs_diff(&closed));

    let lambda = 0.7;
    let eq = synthesize_equal_phase_diag(lambda).unwrap();
    println!(
        "diag(e^{{i {lambda}}}, e^{{i {lambda}}})   <- omega {:.4}, alpha {:.4}, beta {:.4}, phi {:.4}  (residual {:.1e})",
        eq.params.omega, eq.params.alpha, eq.params.beta, eq.params.phi, eq.residual
    );
    let op = synthesize_opposite_phase_diag(lambda).unwrap();
    println!(
        "diag(e^{{i {lambda}}}, e^{{-i {lambda}}})  <- omega {:.4}, alpha {:.4}, beta {:.4}, phi {:.4}  (residual {:.1e})",
        op.params.omega, op.params.alpha, op.params.beta, op.params.phi, op.residual
    );

    // the equal-phase device realizes a fixed-point-free diagonalization
    let m = ubs(eq.params.omega, eq.params.alpha, eq.params.beta, eq.params.phi);
    println!("equal-phase device at lambda = {lambda}: {} fixed points", fixed_points(&m, FIXED_POINT_TOL).len());

    // round-trip a few random devices through general synthesis
    let mut rng = stream_rng(99, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let target = ubs(
            rng.random_range(-PI..PI),
            rng.random_range(-PI / 2.0..PI / 2.0),
            rng.random_range(-PI..PI),
            rng.random_range(-PI / 2.0..PI / 2.0),
        );
        let r = synthesize_general(&target).unwrap();
        let back = ubs(r.params.omega, r.params.alpha, r.params.beta, r.params.phi)
            .scale(C64::from_polar(1.0, r.global_phase));
        worst = worst.max(back.max_abs_diff(&target));
    }
    println!("200 random round trips, worst deviation {worst:.2e}");
}
