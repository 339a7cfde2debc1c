//! The quantum NOT gate has a fixed point: X psi+ = psi+ with
//! psi+ = (|0> + |1>)/sqrt(2).  Classically the lamp switch has none.
//! sqrt(X) shows the same algebra supports operations with no classical
//! counterpart, and conjugated diagonal families classify when fixed
//! points survive.

use lamplab::qubit::{
    conjugated_diagonal, eigensystem, fixed_points, not_gate, sqrt_not, switch_product,
    DiagPhases, QubitState, U2Params, FIXED_POINT_TOL,
};
use std::f64::consts::PI;

fn main() {
    let x = not_gate();
    let psi = QubitState::psi_plus();
    let out = x.apply(&psi);
    println!("X psi+      = [{:.6}, {:.6}]", out.amp0, out.amp1);

    let es = eigensystem(&x);
    for (l, v) in &es.pairs {
        println!("eigenvalue {:+.3}  eigenvector [{:.4}, {:.4}]", l.re, v.amp0, v.amp1);
    }
    for st in fixed_points(&x, FIXED_POINT_TOL) {
        println!("fixed point: [{:.6}, {:.6}]", st.amp0, st.amp1);
    }

    // switch products: even counts restore, odd counts flip
    println!();
    for t in 0..4 {
        let m = switch_product(t);
        println!("X^{t} -> [[{:.0}, {:.0}], [{:.0}, {:.0}]]",
            m.entry(0, 0).re, m.entry(0, 1).re, m.entry(1, 0).re, m.entry(1, 1).re);
    }
    let s = sqrt_not();
    println!("sqrt(X)^2 deviates from X by {:.2e}", s.mul(&s).max_abs_diff(&x));

    // diag(1, e^{i lambda}) conjugated by any unitary keeps a fixed point;
    // two non-trivial phases destroy it
    println!();
    let params = U2Params::new(PI / 4.0, 0.3, -1.0, 0.2).unwrap();
    for (mu, lambda) in [(0.0, 1.3), (0.7, 1.3)] {
        let m = conjugated_diagonal(&params, &DiagPhases::new(mu, lambda));
        let n = fixed_points(&m, FIXED_POINT_TOL).len();
        println!("conjugated diag(e^{{i {mu}}}, e^{{i {lambda}}}): {n} fixed point(s)");
    }
}
