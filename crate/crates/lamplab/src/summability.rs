//! Divergent and convergent series evaluation: partial sums, Abel limits,
//! and the Euler series compared against its exact ODE solution.

use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SummabilityError {
    /// Inner power series fails to decay at some sample point x < 1.
    #[error("series terms do not decay at x = {x}; not Abel summable by this evaluator")]
    NonConvergentAtSample { x: f64 },
    /// Factorial term exceeded the representable range.
    #[error("term overflow at index {index}; truncation is far beyond the superasymptotic point")]
    Overflow { index: usize },
    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failed to reach relative accuracy {requested:e}")]
    QuadratureFailure { requested: f64 },
    #[error("argument {value} outside the valid domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
}

/// A deterministic coefficient sequence n -> a_n for a power series.
#[derive(Clone)]
pub struct SeriesCoefficients {
    gen: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl SeriesCoefficients {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self { gen: Arc::new(f) }
    }

    /// Leibniz pattern a_n = (-1)^n.
    pub fn leibniz() -> Self {
        Self::from_fn(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_| 0.0)
    }

    /// Geometric coefficients a_n = ratio^n.
    pub fn geometric(ratio: f64) -> Self {
        Self::from_fn(move |n| ratio.powi(n as i32))
    }

    pub fn coeff(&self, n: u64) -> f64 {
        (self.gen)(n)
    }
}

impl std::fmt::Debug for SeriesCoefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SeriesCoefficients {{ a0 = {}, a1 = {}, .. }}", self.coeff(0), self.coeff(1))
    }
}

/// Result of Abel evaluation: the extrapolated x -> 1^- limit of sum a_n x^n.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AbelEvaluation {
    pub value: f64,
    /// (x, inner partial sum) pairs, strictly increasing in x, every x < 1.
    pub samples: Vec<(f64, f64)>,
    pub converged: bool,
    pub tolerance: f64,
}

const ABEL_MAX_LEVELS: u32 = 30;
const ABEL_MAX_TERMS: u64 = 50_000_000;
/// Consecutive below-threshold terms required before truncating the inner sum;
/// guards against coefficient patterns with interleaved zeros.
const ABEL_QUIET_TERMS: u32 = 8;

fn abel_inner_sum(coeffs: &SeriesCoefficients, x: f64, threshold: f64) -> Result<f64, SummabilityError> {
    let mut sum = 0.0;
    let mut xn = 1.0;
    let mut quiet = 0u32;
    for n in 0..ABEL_MAX_TERMS {
        let term = coeffs.coeff(n) * xn;
        if !term.is_finite() || term.abs() > 1e60 {
            return Err(SummabilityError::NonConvergentAtSample { x });
        }
        sum += term;
        if term.abs() < threshold {
            quiet += 1;
            if quiet >= ABEL_QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        xn *= x;
    }
    Err(SummabilityError::NonConvergentAtSample { x })
}

/// Abel sum of the series with the given coefficients: samples x_k = 1 - 2^{-k},
/// inner sums truncated on term decay, final value by Richardson extrapolation
/// linear in (1 - x).
pub fn abel_sum(coeffs: &SeriesCoefficients, tolerance: f64) -> Result<AbelEvaluation, SummabilityError> {
    assert!(tolerance > 0.0, "tolerance must be positive");
    let threshold = tolerance * 2f64.powi(-10);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut prev_sum = 0.0;
    let mut prev_extrap: Option<f64> = None;
    let mut value = 0.0;
    for k in 1..=ABEL_MAX_LEVELS {
        let x = 1.0 - 2f64.powi(-(k as i32));
        let s = abel_inner_sum(coeffs, x, threshold)?;
        samples.push((x, s));
        if k >= 2 {
            // x halves its distance to 1 each level, so the linear-in-(1-x)
            // extrapolant is 2*s_k - s_{k-1}.
            let extrap = 2.0 * s - prev_sum;
            if let Some(pe) = prev_extrap {
                if (extrap - pe).abs() < tolerance {
                    return Ok(AbelEvaluation { value: extrap, samples, converged: true, tolerance });
                }
            }
            prev_extrap = Some(extrap);
            value = extrap;
        }
        prev_sum = s;
    }
    Ok(AbelEvaluation { value, samples, converged: false, tolerance })
}

/// Partial sum of the Leibniz series 1 - 1 + 1 - ...: 1 for even t, 0 for odd t.
pub fn leibniz_partial_sum(t: u64) -> u64 {
    if t % 2 == 0 {
        1
    } else {
        0
    }
}

use crate::supertask::LampState;

/// Post-cutoff exposure fractions per lamp state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ExposureFractions {
    pub on_fraction: f64,
    pub off_fraction: f64,
    pub state_at_cutoff: LampState,
}

/// Exposure fractions of the geometric tail beyond the cutoff.  The state at
/// the cutoff occupies the intervals 1/2 + 1/8 + 1/32 + ... = 2/3 of the tail,
/// the opposite state the remaining 1/3.
pub fn geometric_exposure_fractions(state_at_cutoff: LampState) -> ExposureFractions {
    let (on_fraction, off_fraction) = match state_at_cutoff {
        LampState::On => (2.0 / 3.0, 1.0 / 3.0),
        LampState::Off => (1.0 / 3.0, 2.0 / 3.0),
    };
    ExposureFractions { on_fraction, off_fraction, state_at_cutoff }
}

/// Average brightness over the two equiprobable cutoff states: exactly 1/2.
pub fn average_brightness() -> f64 {
    let on = geometric_exposure_fractions(LampState::On).on_fraction;
    let off = geometric_exposure_fractions(LampState::Off).on_fraction;
    (on + off) / 2.0
}

/// Truncated Euler series sum_{n=0}^{k} (-1)^n n! z^{n+1}.
pub fn euler_series_partial(z: f64, k: u64) -> Result<f64, SummabilityError> {
    assert!(z > 0.0, "z must be positive");
    let mut sum = 0.0;
    let mut term = z; // n = 0
    for n in 0..=k {
        if !term.is_finite() {
            return Err(SummabilityError::Overflow { index: n as usize });
        }
        sum += term;
        term *= -((n + 1) as f64) * z;
    }
    Ok(sum)
}

/// Exact solution of z^2 y' + y = z: e^{1/z} E_1(1/z), with
/// E_1(x) = int_x^inf e^{-t}/t dt by adaptive quadrature.
///
/// Substituting t = x + u gives e^x E_1(x) = int_0^inf e^{-u}/(x+u) du,
/// which avoids under/overflow of the separate factors.
pub fn euler_exact(z: f64) -> Result<f64, SummabilityError> {
    assert!(z > 0.0, "z must be positive");
    let x = 1.0 / z;
    let f = |u: f64| (-u).exp() / (x + u);
    // Tail beyond U contributes < e^{-U}/(x+U), negligible at rel. 1e-12
    // against the integral's scale ~ 1/(x+1).
    let upper = 45.0;
    let rel_tol = 1e-12;
    let budget = &mut 2_000_000u64;
    let coarse = simpson(&f, 0.0, upper);
    let value = adaptive_simpson(&f, 0.0, upper, coarse, rel_tol * coarse.abs(), 0, budget)
        .ok_or(SummabilityError::QuadratureFailure { requested: rel_tol })?;
    Ok(value)
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    eps: f64,
    depth: u32,
    budget: &mut u64,
) -> Option<f64> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if depth > 60 {
        return None;
    }
    if delta.abs() <= 15.0 * eps || (b - a) < 1e-14 {
        return Some(left + right + delta / 15.0);
    }
    let l = adaptive_simpson(f, a, m, left, 0.5 * eps, depth + 1, budget)?;
    let r = adaptive_simpson(f, m, b, right, 0.5 * eps, depth + 1, budget)?;
    Some(l + r)
}

/// The error bound sqrt(2 pi z) e^{-1/z} on the superasymptotic
/// truncation error of the Euler series.
pub fn euler_error_bound(z: f64) -> f64 {
    assert!(z > 0.0, "z must be positive");
    (2.0 * std::f64::consts::PI * z).sqrt() * (-1.0 / z).exp()
}

/// Index of the smallest-magnitude Euler-series term n! z^{n+1}; ties broken
/// toward the smaller index.
pub fn superasymptotic_truncation(z: f64) -> u64 {
    assert!(z > 0.0, "z must be positive");
    let mut n = 0u64;
    let mut term = z;
    loop {
        let next = term * ((n + 1) as f64) * z;
        if !(next < term) || !next.is_finite() {
            return n;
        }
        term = next;
        n += 1;
    }
}

/// Term-by-term derivative of the alternating log series
/// sum_{n>=1} (-1)^{n+1} z^n / n, i.e. sum_{n>=0} (-1)^n z^n = 1/(1+z),
/// together with the derivative coefficient sequence (the Leibniz pattern).
pub fn log_series_derivative(z: f64) -> Result<(f64, SeriesCoefficients), SummabilityError> {
    if z.abs() >= 1.0 {
        return Err(SummabilityError::OutOfDomain { value: z, domain: "(-1, 1)" });
    }
    let mut sum = 0.0;
    let mut term = 1.0f64;
    while term.abs() > 1e-17 {
        sum += term;
        term *= -z;
    }
    Ok((sum, SeriesCoefficients::leibniz()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_partial_sums() {
        assert_eq!(leibniz_partial_sum(0), 1);
        assert_eq!(leibniz_partial_sum(7), 0);
        assert_eq!(leibniz_partial_sum(1_000_000), 1);
        for t in 0..200 {
            assert_eq!(leibniz_partial_sum(t) + leibniz_partial_sum(t + 1), 1);
        }
    }

    #[test]
    fn abel_sum_of_leibniz_is_one_half() {
        let eval = abel_sum(&SeriesCoefficients::leibniz(), 1e-8).unwrap();
        assert!(eval.converged);
        assert!((eval.value - 0.5).abs() < 1e-8, "value = {}", eval.value);
        // sample bookkeeping invariants
        for w in eval.samples.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
        assert!(eval.samples.iter().all(|&(x, _)| x < 1.0));
    }

    #[test]
    fn abel_sum_of_zero_series() {
        let eval = abel_sum(&SeriesCoefficients::zero(), 1e-10).unwrap();
        assert!(eval.converged);
        assert_eq!(eval.value, 0.0);
    }

    #[test]
    fn abel_sum_geometric_half() {
        // a_n = 2^{-n}: sum 2^{-n} x^n = 1/(1 - x/2) -> 2 at x = 1.
        let eval = abel_sum(&SeriesCoefficients::geometric(0.5), 1e-8).unwrap();
        assert!(eval.converged);
        assert!((eval.value - 2.0).abs() < 1e-7, "value = {}", eval.value);
    }

    #[test]
    fn abel_consistency_on_convergent_series() {
        let tol = 1e-8;
        for (ratio, exact) in [(0.5, 2.0), (-0.5, 2.0 / 3.0), (0.9, 10.0)] {
            let eval = abel_sum(&SeriesCoefficients::geometric(ratio), tol).unwrap();
            assert!(eval.converged, "ratio {ratio} did not converge");
            assert!(
                (eval.value - exact).abs() < 10.0 * tol,
                "ratio {ratio}: value {} vs exact {exact}",
                eval.value
            );
        }
    }

    #[test]
    fn abel_sum_prefix_sensitivity() {
        // Modifying a0 from 1 to 1 + c shifts the Abel value by exactly c.
        let c = 0.25;
        let coeffs = SeriesCoefficients::from_fn(move |n| {
            let base = if n % 2 == 0 { 1.0 } else { -1.0 };
            if n == 0 {
                base + c
            } else {
                base
            }
        });
        let eval = abel_sum(&coeffs, 1e-8).unwrap();
        assert!((eval.value - (0.5 + c)).abs() < 1e-7);
    }

    #[test]
    fn abel_sum_rejects_factorial_growth() {
        let coeffs = SeriesCoefficients::from_fn(|n| (1..=n).map(|k| k as f64).product::<f64>());
        let err = abel_sum(&coeffs, 1e-6).unwrap_err();
        assert!(matches!(err, SummabilityError::NonConvergentAtSample { .. }));
    }

    #[test]
    fn exposure_fractions_match_closed_forms() {
        let off = geometric_exposure_fractions(LampState::Off);
        assert!((off.on_fraction - 1.0 / 3.0).abs() < 1e-15);
        assert!((off.off_fraction - 2.0 / 3.0).abs() < 1e-15);
        let on = geometric_exposure_fractions(LampState::On);
        assert!((on.on_fraction - 2.0 / 3.0).abs() < 1e-15);
        // swap symmetry, exact
        assert_eq!(on.on_fraction, off.off_fraction);
        assert_eq!(on.off_fraction, off.on_fraction);
        for f in [on, off] {
            assert!((f.on_fraction + f.off_fraction - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn average_brightness_is_one_half() {
        assert_eq!(average_brightness(), 0.5);
    }

    #[test]
    fn euler_series_small_truncations() {
        assert!((euler_series_partial(0.1, 0).unwrap() - 0.1).abs() < 1e-15);
        // 0.1 - 0.01 + 0.002 - 0.0006
        assert!((euler_series_partial(0.1, 3).unwrap() - 0.0914).abs() < 1e-15);
    }

    #[test]
    fn euler_series_recurrence_residual() {
        // Inserting the truncation y_k into z^2 y' + y - z, term by term:
        // all coefficients cancel through order z^{k+1}, leaving only the
        // order-(k+2) remainder (-1)^k (k+1)! z^{k+2}.
        let z = 0.3;
        for k in 0..8u64 {
            let h = 1e-6;
            let y = |zz: f64| euler_series_partial(zz, k).unwrap();
            let dy = (y(z + h) - y(z - h)) / (2.0 * h);
            let residual = z * z * dy + y(z) - z;
            let kf: f64 = (1..=(k + 1)).map(|m| m as f64).product();
            let expected = if k % 2 == 0 { -1.0 } else { 1.0 } * -kf * z.powi(k as i32 + 2);
            // finite differences limit the comparison accuracy
            assert!(
                (residual - expected).abs() < 1e-7 + 1e-4 * expected.abs(),
                "k={k}: residual {residual} vs expected {expected}"
            );
        }
    }

    #[test]
    fn euler_series_overflow_reported() {
        let err = euler_series_partial(1.0, 400).unwrap_err();
        assert!(matches!(err, SummabilityError::Overflow { .. }));
    }

    #[test]
    fn euler_exact_frozen_values() {
        // e^{10} E1(10) and e^{20} E1(20), high-precision reference values.
        assert!((euler_exact(0.1).unwrap() - 0.09156333393978808).abs() < 1e-12);
        assert!((euler_exact(0.05).unwrap() - 0.04771854549596084).abs() < 1e-12);
    }

    #[test]
    fn euler_exact_vanishes_as_z_to_zero() {
        let mut prev = f64::INFINITY;
        for z in [0.05, 0.02, 0.01, 0.005] {
            let v = euler_exact(z).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
        assert!(euler_exact(0.005).unwrap() < 0.005);
    }

    #[test]
    fn euler_exact_cross_checked_against_asymptotic_expansion() {
        // Independent oracle: e^x E1(x) ~ (1/x)(1 - 1/x + 2/x^2 - ...) truncated
        // at its smallest term, accurate to roughly that term's size.
        for z in [0.05, 0.1] {
            let x = 1.0 / z;
            let mut term: f64 = 1.0 / x;
            let mut sum = 0.0;
            let mut n = 0.0;
            let mut smallest = f64::INFINITY;
            loop {
                let next = term * -(n + 1.0) / x;
                if next.abs() >= term.abs() {
                    smallest = term.abs();
                    sum += term;
                    break;
                }
                sum += term;
                term = next;
                n += 1.0;
            }
            let v = euler_exact(z).unwrap();
            assert!((v - sum).abs() < 2.0 * smallest, "z={z}: {v} vs asymptotic {sum}");
        }
    }

    #[test]
    fn error_bound_values_and_monotonicity() {
        assert!((euler_error_bound(0.1) - 3.5986956e-5).abs() < 1e-11);
        assert!((euler_error_bound(0.05) - 1.1552748e-9).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 1..=20 {
            let z = i as f64 * 0.05;
            let b = euler_error_bound(z);
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn superasymptotic_truncation_by_term_scan() {
        // independent oracle: explicit scan of term magnitudes
        let scan = |z: f64| {
            let mut best = (0u64, z);
            let mut term = z;
            for n in 1..300u64 {
                term *= n as f64 * z;
                if term < best.1 {
                    best = (n, term);
                }
            }
            best.0
        };
        for z in [0.1, 0.5, 1.0, 0.07, 0.3] {
            let k = superasymptotic_truncation(z);
            assert_eq!(k, scan(z), "z = {z}");
        }
        assert_eq!(superasymptotic_truncation(0.1), 9);
        assert_eq!(superasymptotic_truncation(0.5), 1);
        assert_eq!(superasymptotic_truncation(1.0), 0);
    }

    #[test]
    fn truncation_error_within_bound() {
        for z in [0.05, 0.08, 0.1, 0.15, 0.2] {
            let k = superasymptotic_truncation(z);
            let approx = euler_series_partial(z, k).unwrap();
            let exact = euler_exact(z).unwrap();
            assert!(
                (exact - approx).abs() <= euler_error_bound(z),
                "z = {z}: err {} > bound {}",
                (exact - approx).abs(),
                euler_error_bound(z)
            );
        }
    }

    #[test]
    fn log_series_derivative_values() {
        let (v0, _) = log_series_derivative(0.0).unwrap();
        assert_eq!(v0, 1.0);
        let (v, coeffs) = log_series_derivative(0.5).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        // derivative coefficients are the Leibniz pattern; Abel value 1/2
        for n in 0..10 {
            assert_eq!(coeffs.coeff(n), if n % 2 == 0 { 1.0 } else { -1.0 });
        }
        let eval = abel_sum(&coeffs, 1e-8).unwrap();
        assert!((eval.value - 0.5).abs() < 1e-7);
    }

    #[test]
    fn log_series_derivative_checked_against_partial_sums() {
        let z = 0.3;
        let (v, _) = log_series_derivative(z).unwrap();
        let direct: f64 = (0..200).map(|n| (-z).powi(n)).sum();
        assert!((v - direct).abs() < 1e-13);
        assert!((v - 1.0 / (1.0 + z)).abs() < 1e-13);
    }

    #[test]
    fn log_series_derivative_domain() {
        assert!(matches!(
            log_series_derivative(1.0),
            Err(SummabilityError::OutOfDomain { .. })
        ));
        assert!(matches!(
            log_series_derivative(-1.5),
            Err(SummabilityError::OutOfDomain { .. })
        ));
    }
}
