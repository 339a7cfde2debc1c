//! The halting-problem diagonal argument replayed on a finite toy universe.
//!
//! Programs are declared-behavior tables.  Given any claimed halting oracle,
//! the diagonal program A does the opposite of the oracle's self-applied
//! answer, so the claim is refuted at (A, A) -- no matter what the oracle
//! says about A(A).  The quantum resolution replaces the flip with the NOT
//! gate, whose fixed point psi+ survives the diagonalization.

use lamplab::diagonal::{
    build_diagonal_program, check_consistency, check_diagonal_consistency,
    quantum_diagonal_response, Behavior, OracleClaim, ProgramTable,
};
use lamplab::qubit::QubitState;

fn main() {
    let names: Vec<String> = vec!["p".into(), "q".into(), "r".into()];
    let mut table = ProgramTable::new(names.clone()).unwrap();
    let mut oracle = OracleClaim::new();
    // arbitrary declared behavior, with a truthful oracle
    let bits = [[1u8, 0, 1], [0, 0, 1], [1, 1, 0]];
    for (i, p) in names.iter().enumerate() {
        for (j, x) in names.iter().enumerate() {
            table.set_behavior(p, x, Behavior::from_bit(bits[i][j]));
            oracle.set(p, x, bits[i][j]);
        }
    }
    let truthful = check_consistency(&table, &oracle, None).unwrap();
    println!("truthful oracle before extension: consistent = {}", truthful.consistent);

    let (extended, a) = build_diagonal_program(&table, &oracle).unwrap();
    println!("added diagonal program {a:?}; universe now {:?}", extended.programs);
    for self_bit in [0u8, 1] {
        let mut o = oracle.clone();
        o.set(&a, &a, self_bit);
        let rep = check_diagonal_consistency(&extended, &o, &a).unwrap();
        println!(
            "oracle says {a}({a}) {}: consistent = {}, witness = {:?}",
            if self_bit == 1 { "halts" } else { "diverges" },
            rep.consistent,
            rep.witness
        );
    }

    // the quantum oracle answers with psi+; the diagonal flip leaves it alone
    let psi = QubitState::psi_plus();
    let flipped = quantum_diagonal_response(&psi);
    println!(
        "quantum diagonal on psi+: [{:.4}, {:.4}] -> [{:.4}, {:.4}]  (unchanged)",
        psi.amp0, psi.amp1, flipped.amp0, flipped.amp1
    );
}
