//! Abel summation of the divergent series 1 - 1 + 1 - 1 + ...
//!
//! The partial sums oscillate between 1 and 0 forever, but the power series
//! sum (-1)^n x^n converges for |x| < 1 and its x -> 1 limit is 1/2.

use lamplab::summability::{abel_sum, SeriesCoefficients};

fn main() {
    let eval = abel_sum(&SeriesCoefficients::leibniz(), 1e-8).unwrap();
    println!("abel sum of 1 - 1 + 1 - ... = {:.10}  (converged: {})", eval.value, eval.converged);
    println!();
    println!("  x                     inner sum");
    for (x, s) in &eval.samples {
        println!("  {x:<20}  {s:.12}");
    }

    // sanity: for a convergent geometric series the Abel value is the plain sum
    let geo = abel_sum(&SeriesCoefficients::geometric(0.5), 1e-8).unwrap();
    println!();
    println!("geometric ratio 1/2: abel value {:.10} vs closed form {}", geo.value, 2.0);
}
