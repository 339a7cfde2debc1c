//! Superasymptotics of the Euler series sum (-1)^n n! z^{n+1}.
//!
//! The series diverges for every z > 0, yet truncating at the smallest term
//! (k ~ 1/z) approximates the exact solution e^{1/z} E_1(1/z) of
//! z^2 y' + y = z with an error below sqrt(2 pi z) e^{-1/z}.

use lamplab::summability::{
    euler_error_bound, euler_exact, euler_series_partial, superasymptotic_truncation,
};

fn main() {
    println!("  z      k     truncated        exact            |error|      bound");
    for z in [0.05, 0.08, 0.1, 0.15, 0.2, 0.3] {
        let k = superasymptotic_truncation(z);
        let truncated = euler_series_partial(z, k).unwrap();
        let exact = euler_exact(z).unwrap();
        let err = (exact - truncated).abs();
        let bound = euler_error_bound(z);
        println!(
            "  {z:<5}  {k:<4}  {truncated:.12}   {exact:.12}   {err:.3e}   {bound:.3e}{}",
            if err <= bound { "" } else { "  VIOLATED" }
        );
    }

    // pushing past the optimal truncation makes things worse again
    let z = 0.1;
    let exact = euler_exact(z).unwrap();
    println!();
    println!("truncation error vs k at z = {z}:");
    for k in [2, 5, 8, 10, 12, 15, 20, 30] {
        let err = (euler_series_partial(z, k).unwrap() - exact).abs();
        println!("  k = {k:<3} |error| = {err:.3e}");
    }
}
